// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace flowsite::mol {

struct GlobalAlignment {
  int score = 0;
  std::size_t matches = 0;
  std::size_t length = 0;  // alignment columns including gaps

  double identity() const { return length == 0 ? 0.0 : static_cast<double>(matches) / length; }
};

/// Needleman-Wunsch with match +1, mismatch 0, linear gap -1. Ties in the
/// traceback prefer the diagonal, then a gap in `b`, then a gap in `a`.
GlobalAlignment align_global(std::string_view a, std::string_view b);

struct SequenceClusters {
  std::vector<int> cluster;              // per input sequence
  std::vector<std::size_t> representative;  // per cluster, index into the input
};

/// Greedy clustering: longest sequences first (ties by input order); each
/// joins the first cluster whose representative reaches `threshold`
/// identity, otherwise it founds a new cluster.
SequenceClusters cluster_sequences(const std::vector<std::string>& sequences, double threshold = 0.30);

}  // namespace flowsite::mol
