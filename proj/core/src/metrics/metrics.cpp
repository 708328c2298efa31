// SPDX-License-Identifier: Apache-2.0

#include "flowsite/metrics/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "flowsite/mol/elements.hpp"

namespace flowsite::metrics {

double rmsd(const mol::Coords& pred, const mol::Coords& truth) {
  if (pred.rows() != truth.rows() || pred.rows() == 0) {
    throw std::invalid_argument("rmsd needs matching non-empty coordinates, got " + std::to_string(pred.rows()) +
                                " and " + std::to_string(truth.rows()) + " rows");
  }
  return std::sqrt((pred - truth).rowwise().squaredNorm().mean());
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty list");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

namespace {

RmsdStats stats_of(const std::vector<double>& all) {
  RmsdStats s;
  s.samples = all.size();
  if (all.empty()) return s;
  for (double r : all) {
    s.below2 += r < 2.0 ? 1.0 : 0.0;
    s.below5 += r < 5.0 ? 1.0 : 0.0;
  }
  s.below2 *= 100.0 / static_cast<double>(all.size());
  s.below5 *= 100.0 / static_cast<double>(all.size());
  s.median = median(all);
  return s;
}

}  // namespace

RmsdStats rmsd_stats(const std::vector<EvalRecord>& records) {
  std::vector<double> all;
  for (const auto& r : records) all.insert(all.end(), r.rmsds.begin(), r.rmsds.end());
  return stats_of(all);
}

RmsdStats best_of_k(const std::vector<EvalRecord>& records, std::size_t k) {
  std::vector<double> best;
  for (const auto& r : records) {
    if (r.rmsds.empty() || k == 0) continue;
    const auto end = r.rmsds.begin() + static_cast<std::ptrdiff_t>(std::min(k, r.rmsds.size()));
    best.push_back(*std::min_element(r.rmsds.begin(), end));
  }
  return stats_of(best);
}

double sequence_recovery(const std::vector<int>& pred, const std::vector<int>& truth, const std::vector<bool>& mask) {
  if (pred.size() != truth.size() || mask.size() != truth.size()) {
    throw std::invalid_argument("recovery inputs differ in length");
  }
  std::size_t total = 0, hit = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    ++total;
    hit += pred[i] == truth[i] ? 1 : 0;
  }
  if (total == 0) throw std::invalid_argument("recovery over an empty contact mask");
  return static_cast<double>(hit) / static_cast<double>(total);
}

namespace {

// Rows and columns in ARNDCQEGHILKMFPSTWYV order.
constexpr std::array<std::array<int, 20>, 20> kBlosum62 = {{
    {4, -1, -2, -2, 0, -1, -1, 0, -2, -1, -1, -1, -1, -2, -1, 1, 0, -3, -2, 0},
    {-1, 5, 0, -2, -3, 1, 0, -2, 0, -3, -2, 2, -1, -3, -2, -1, -1, -3, -2, -3},
    {-2, 0, 6, 1, -3, 0, 0, 0, 1, -3, -3, 0, -2, -3, -2, 1, 0, -4, -2, -3},
    {-2, -2, 1, 6, -3, 0, 2, -1, -1, -3, -4, -1, -3, -3, -1, 0, -1, -4, -3, -3},
    {0, -3, -3, -3, 9, -3, -4, -3, -3, -1, -1, -3, -1, -2, -3, -1, -1, -2, -2, -1},
    {-1, 1, 0, 0, -3, 5, 2, -2, 0, -3, -2, 1, 0, -3, -1, 0, -1, -2, -1, -2},
    {-1, 0, 0, 2, -4, 2, 5, -2, 0, -3, -3, 1, -2, -3, -1, 0, -1, -3, -2, -2},
    {0, -2, 0, -1, -3, -2, -2, 6, -2, -4, -4, -2, -3, -3, -2, 0, -2, -2, -3, -3},
    {-2, 0, 1, -1, -3, 0, 0, -2, 8, -3, -3, -1, -2, -1, -2, -1, -2, -2, 2, -3},
    {-1, -3, -3, -3, -1, -3, -3, -4, -3, 4, 2, -3, 1, 0, -3, -2, -1, -3, -1, 3},
    {-1, -2, -3, -4, -1, -2, -3, -4, -3, 2, 4, -2, 2, 0, -3, -2, -1, -2, -1, 1},
    {-1, 2, 0, -1, -3, 1, 1, -2, -1, -3, -2, 5, -1, -3, -1, 0, -1, -3, -2, -2},
    {-1, -1, -2, -3, -1, 0, -2, -3, -2, 1, 2, -1, 5, 0, -2, -1, -1, -1, -1, 1},
    {-2, -3, -3, -3, -2, -3, -3, -3, -1, 0, 0, -3, 0, 6, -4, -2, -2, 1, 3, -1},
    {-1, -2, -2, -1, -3, -1, -1, -2, -2, -3, -3, -1, -2, -4, 7, -1, -1, -4, -3, -2},
    {1, -1, 1, 0, -1, 0, 0, 0, -1, -2, -2, 0, -1, -2, -1, 4, 1, -3, -2, -2},
    {0, -1, 0, -1, -1, -1, -1, -2, -2, -1, -1, -1, -1, -2, -1, 1, 5, -2, -2, 0},
    {-3, -3, -4, -4, -2, -2, -3, -2, -2, -3, -2, -3, -1, 1, -4, -3, -2, 11, 2, -3},
    {-2, -2, -2, -3, -2, -1, -2, -3, 2, -1, -1, -2, -1, 3, -3, -2, -2, 2, 7, -1},
    {0, -3, -3, -3, -1, -2, -2, -3, -3, 3, 1, -2, 1, -1, -2, -2, 0, -3, -1, 4},
}};

}  // namespace

int blosum62(int a, int b) {
  if (a < 0 || a >= 20 || b < 0 || b >= 20) {
    throw std::invalid_argument("BLOSUM62 lookup outside the 20 standard residues");
  }
  return kBlosum62[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

double blosum_score(const std::vector<int>& truth, const std::vector<int>& pred, const std::vector<bool>& mask) {
  if (pred.size() != truth.size() || mask.size() != truth.size()) {
    throw std::invalid_argument("blosum inputs differ in length");
  }
  double num = 0.0, den = 0.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    ++total;
    num += blosum62(truth[i], pred[i]);
    den += blosum62(truth[i], truth[i]);
  }
  if (total == 0) throw std::invalid_argument("blosum score over an empty contact mask");
  return num / den;
}

void write_table(std::ostream& out, const std::vector<EvalRecord>& records, bool design,
                 const std::vector<std::size_t>& best_of) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  out << "id\tstatus\tsamples\tpct_below_2A\tpct_below_5A\tmedian_rmsd";
  if (design) out << "\trecovery\tblosum";
  out << '\n';
  std::size_t failed = 0;
  double rec_sum = 0.0, blo_sum = 0.0;
  std::size_t rec_n = 0, blo_n = 0;
  for (const auto& r : records) {
    out << r.id << '\t' << (r.failed ? "failed" : "ok") << '\t' << r.rmsds.size();
    if (r.failed || r.rmsds.empty()) {
      out << "\t-\t-\t-";
    } else {
      const RmsdStats s = rmsd_stats({r});
      out << '\t' << fmt(s.below2) << '\t' << fmt(s.below5) << '\t' << fmt(s.median);
    }
    if (design) {
      out << '\t' << (r.recovery ? fmt(*r.recovery) : "-") << '\t' << (r.blosum ? fmt(*r.blosum) : "-");
    }
    out << '\n';
    failed += r.failed ? 1 : 0;
    // Failed rows count in the denominators with zero credit.
    if (design) {
      rec_sum += r.recovery.value_or(0.0);
      blo_sum += r.blosum.value_or(0.0);
      rec_n += (r.recovery || r.failed) ? 1 : 0;
      blo_n += (r.blosum || r.failed) ? 1 : 0;
    }
  }
  const RmsdStats all = rmsd_stats(records);
  out << "summary\t" << (failed ? "failed=" + std::to_string(failed) : "ok") << '\t' << all.samples;
  if (all.samples == 0) {
    out << "\t-\t-\t-";
  } else {
    // Failed complexes count as samples that miss both thresholds.
    std::size_t denom = all.samples;
    for (const auto& r : records) denom += (r.failed && r.rmsds.empty()) ? 1 : 0;
    const double scale = static_cast<double>(all.samples) / static_cast<double>(denom);
    out << '\t' << fmt(all.below2 * scale) << '\t' << fmt(all.below5 * scale) << '\t' << fmt(all.median);
  }
  if (design) {
    out << '\t' << (rec_n ? fmt(rec_sum / static_cast<double>(rec_n)) : "-") << '\t'
        << (blo_n ? fmt(blo_sum / static_cast<double>(blo_n)) : "-");
  }
  out << '\n';
  for (std::size_t k : best_of) {
    if (k <= 1) continue;
    const RmsdStats b = best_of_k(records, k);
    out << "best_of_" << k << "\t-\t" << b.samples << '\t' << fmt(b.below2) << '\t' << fmt(b.below5) << '\t'
        << (b.samples ? fmt(b.median) : "-");
    if (design) out << "\t-\t-";
    out << '\n';
  }
}

}  // namespace flowsite::metrics
