// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "flowsite/mol/dataset.hpp"

namespace flowsite::mol {

struct SyntheticOptions {
  std::size_t ligand_atoms = 10;  // tree of a main chain plus one branch atom
  std::size_t residues = 16;
  double shell_radius = 7.5;      // Calpha distance from the ligand centroid
  double shell_jitter = 1.0;
};

/// Small random protein-ligand complex. The ligand is a branched chain with
/// no graph automorphism; residues sit on a shell around it with side chains
/// (CB plus the chi1 atom) pointing inward, so several are contacts.
RawComplex synthetic_complex(std::uint64_t seed, const SyntheticOptions& options = {},
                             const std::string& id = "synthetic");

}  // namespace flowsite::mol
