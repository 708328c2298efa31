// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "flowsite/mol/types.hpp"

namespace flowsite::mol {

struct RadiusCutoffs {
  double ligand_ligand = 50.0;
  double protein_protein = 50.0;
  double cross = 30.0;  // ligand atom to residue Calpha
};

/// Directed edges in both directions for every pair within its kind's cutoff.
RadiusGraph build_radius_graph(const Coords& ligand, const Coords& residues_ca,
                               const RadiusCutoffs& cutoffs = {});

}  // namespace flowsite::mol
