// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "flowsite/mol/types.hpp"

namespace flowsite::mol {

/// Empty-bond graph over the given atoms, optionally with coordinates.
LigandGraph make_ligand(std::vector<LigandAtom> atoms, std::optional<Coords> coords = std::nullopt);

/// Union-find over bonds; ids numbered by first appearance.
void compute_components(LigandGraph& graph);

/// Adds a bond for every pair closer than factor * (r_i + r_j) covalent
/// radii. Returns the number of bonds added. Needs coordinates.
std::size_t infer_bonds(LigandGraph& graph, double factor = 1.3);

/// Fills the atomic-number and degree feature slots from the graph.
void fill_graph_features(LigandGraph& graph);

/// One graph per source molecule, preserving atom order.
std::vector<LigandGraph> split_molecules(const LigandGraph& graph);

/// Block-diagonal union. Molecule tags and component ids are renumbered so
/// each input keeps its own.
LigandGraph merge_ligands(const std::vector<LigandGraph>& parts);

/// Single-linkage grouping: molecules join when any cross pair of heavy atoms
/// lies within `cutoff`. Returns the merged group holding `primary`.
LigandGraph group_multiligand(const std::vector<LigandGraph>& molecules, std::size_t primary = 0,
                              double cutoff = 4.0);

/// Maximum pairwise heavy-atom distance.
double ligand_diameter(const Coords& coords);

}  // namespace flowsite::mol
