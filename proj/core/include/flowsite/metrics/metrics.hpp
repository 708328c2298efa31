// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "flowsite/mol/types.hpp"

namespace flowsite::metrics {

/// Root-mean-square deviation under a fixed atom correspondence, no alignment.
double rmsd(const mol::Coords& pred, const mol::Coords& truth);

/// Midpoint median; throws on empty input.
double median(std::vector<double> values);

struct EvalRecord {
  std::string id;
  std::vector<double> rmsds;
  std::optional<double> recovery;
  std::optional<double> blosum;
  bool failed = false;  // ill-formed or missing predictions
  std::string note;
};

struct RmsdStats {
  double below2 = 0.0;  // percent of samples
  double below5 = 0.0;
  double median = 0.0;
  std::size_t samples = 0;
};

/// Pooled over every sample of every record.
RmsdStats rmsd_stats(const std::vector<EvalRecord>& records);
/// Statistics over per-record minima of the first k samples.
RmsdStats best_of_k(const std::vector<EvalRecord>& records, std::size_t k);

/// Fraction of contact residues whose predicted type is the true type.
double sequence_recovery(const std::vector<int>& pred, const std::vector<int>& truth, const std::vector<bool>& mask);

/// BLOSUM62 entry for residue indices in ARNDCQEGHILKMFPSTWYV order.
int blosum62(int a, int b);

/// 1'diag(X A Xhat') / 1'diag(X A X') over contact residues, for one-hot
/// type indices.
double blosum_score(const std::vector<int>& truth, const std::vector<int>& pred, const std::vector<bool>& mask);

/// Tab-separated table: one row per record, then a summary row.
void write_table(std::ostream& out, const std::vector<EvalRecord>& records, bool design,
                 const std::vector<std::size_t>& best_of = {1, 5});

}  // namespace flowsite::metrics
