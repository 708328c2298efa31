// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/clustering.hpp"

#include <algorithm>
#include <numeric>

namespace flowsite::mol {

GlobalAlignment align_global(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> dp((n + 1) * (m + 1));
  auto at = [m, &dp](std::size_t i, std::size_t j) -> int& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = -static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = -static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int diag = at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 1 : 0);
      at(i, j) = std::max({diag, at(i - 1, j) - 1, at(i, j - 1) - 1});
    }
  }
  GlobalAlignment out;
  out.score = at(n, m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    ++out.length;
    if (i > 0 && j > 0) {
      const bool match = a[i - 1] == b[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (match ? 1 : 0)) {
        out.matches += match ? 1 : 0;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) - 1) {
      --i;
    } else {
      --j;
    }
  }
  return out;
}

SequenceClusters cluster_sequences(const std::vector<std::string>& sequences, double threshold) {
  SequenceClusters out;
  out.cluster.assign(sequences.size(), -1);
  std::vector<std::size_t> order(sequences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sequences[x].size() > sequences[y].size();
  });
  for (std::size_t idx : order) {
    for (std::size_t c = 0; c < out.representative.size(); ++c) {
      if (align_global(sequences[out.representative[c]], sequences[idx]).identity() >= threshold) {
        out.cluster[idx] = static_cast<int>(c);
        break;
      }
    }
    if (out.cluster[idx] < 0) {
      out.cluster[idx] = static_cast<int>(out.representative.size());
      out.representative.push_back(idx);
    }
  }
  return out;
}

}  // namespace flowsite::mol
