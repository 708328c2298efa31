// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "flowsite/metrics/metrics.hpp"
#include "flowsite/mol/elements.hpp"

using namespace flowsite;
using namespace flowsite::metrics;

namespace {

mol::Coords random_coords(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d(0.0, 2.0);
  mol::Coords x(n, 3);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) x(i, c) = d(rng);
  return x;
}

EvalRecord record(std::vector<double> rmsds) {
  EvalRecord r;
  r.id = "c";
  r.rmsds = std::move(rmsds);
  return r;
}

}  // namespace

TEST_CASE("rmsd examples") {
  std::mt19937_64 rng(1);
  const auto x = random_coords(rng, 6);
  CHECK(rmsd(x, x) == 0.0);
  mol::Coords y = x;
  y.rowwise() += Eigen::RowVector3d(3, 4, 0);
  CHECK(rmsd(x, y) == doctest::Approx(5.0));
  mol::Coords a = mol::Coords::Zero(2, 3), b = mol::Coords::Zero(2, 3);
  b(0, 0) = 1.0;
  CHECK(rmsd(a, b) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS(rmsd(a, mol::Coords::Zero(3, 3)));
}

TEST_CASE("rmsd is a metric on fixed correspondences") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_coords(rng, 5), b = random_coords(rng, 5), c = random_coords(rng, 5);
    CHECK(rmsd(a, b) == rmsd(b, a));
    CHECK(rmsd(a, c) <= rmsd(a, b) + rmsd(b, c) + 1e-12);
  }
}

TEST_CASE("rmsd statistics") {
  auto s = rmsd_stats({record({1.0, 1.0})});
  CHECK(s.below2 == 100.0);
  CHECK(s.median == 1.0);
  s = rmsd_stats({record({1.0, 3.0})});
  CHECK(s.below2 == 50.0);
  CHECK(s.median == 2.0);
  CHECK(best_of_k({record({3.0, 1.5})}, 2).below2 == 100.0);
  CHECK(best_of_k({record({3.0, 1.5})}, 1).below2 == 0.0);
  CHECK_THROWS(median({}));
}

TEST_CASE("best of k never gets worse as k grows") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  std::vector<EvalRecord> records;
  for (int c = 0; c < 30; ++c) {
    std::vector<double> r(10);
    for (double& v : r) v = u(rng);
    records.push_back(record(r));
  }
  for (std::size_t k = 1; k < 10; ++k) {
    const auto a = best_of_k(records, k), b = best_of_k(records, k + 1);
    CHECK(b.below2 >= a.below2);
    CHECK(b.below5 >= a.below5);
    CHECK(b.median <= a.median);
  }
}

TEST_CASE("sequence recovery examples") {
  CHECK(sequence_recovery({1, 2, 3, 4}, {1, 2, 3, 4}, {true, true, true, true}) == 1.0);
  CHECK(sequence_recovery({0, 0, 0, 0}, {1, 2, 3, 4}, {true, true, true, true}) == 0.0);
  CHECK(sequence_recovery({1, 2, 0, 0}, {1, 2, 3, 4}, {true, true, true, true}) == 0.5);
  CHECK(sequence_recovery({1, 0}, {1, 2}, {true, false}) == 1.0);
  CHECK_THROWS(sequence_recovery({1}, {1}, {false}));
}

TEST_CASE("blosum score examples") {
  const int A = mol::residue_index_from_letter('A'), R = mol::residue_index_from_letter('R');
  CHECK(blosum62(A, A) == 4);
  CHECK(blosum62(A, R) == -1);
  CHECK(blosum_score({A}, {R}, {true}) == doctest::Approx(-0.25));
  CHECK(blosum_score({A, A}, {A, R}, {true, true}) == doctest::Approx(0.375));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> x(12);
    for (int& v : x) v = static_cast<int>(rng() % 20);
    CHECK(blosum_score(x, x, std::vector<bool>(12, true)) == 1.0);
  }
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 20; ++b) CHECK(blosum62(a, b) == blosum62(b, a));
}

TEST_CASE("metrics table counts failed rows") {
  std::vector<EvalRecord> records = {record({1.0, 4.0}), record({})};
  records[1].id = "broken";
  records[1].failed = true;
  records[1].note = "unreadable";
  std::ostringstream out;
  write_table(out, records, false);
  const std::string text = out.str();
  CHECK(text.find("broken") != std::string::npos);
  CHECK(text.find("summary") != std::string::npos);
}
