// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "flowsite/diff/array.hpp"
#include "flowsite/mol/types.hpp"
#include "flowsite/net/layers.hpp"

namespace flowsite::net {

/// Element one-hot (C N O S P F Cl Br I other), degree one-hot (0..4, 5+),
/// and the remaining 13 raw chemistry slots.
inline constexpr std::size_t kLigandChemistryWidth = 29;

/// (n, 29) invariant per-atom chemistry.
Array ligand_chemistry(const mol::LigandGraph& graph);

/// (rows, spec.count), the same time embedding on every row.
Array time_embedding(double t, const RbfSpec& spec, std::size_t rows);

/// Point `distance` A from Calpha along the negated unit bisector of
/// (Calpha->N, Calpha->C), roughly where Cbeta sits.
mol::Vec3 virtual_atom(const mol::Residue& r, double distance = 1.5);

/// Backbone atoms in the order N, Calpha, C, O, virtual.
std::array<mol::Vec3, 5> frame_atoms(const mol::Residue& r, double virtual_distance = 1.5);

/// Width of residue_geometry rows for a given intra-residue basis.
std::size_t residue_geometry_width(const RbfSpec& intra);

/// Per residue: RBFs of the 10 distances among {N, Calpha, C, O, virtual},
/// then cos(phi), cos(psi), cos(omega) and three availability flags (a
/// dihedral needs the chain neighbor at seq +-1 inside the pocket).
Array residue_geometry(const mol::PocketBackbone& pocket, const RbfSpec& intra, double virtual_distance = 1.5);

/// (L, 3, channels): Calpha->N, Calpha->C, Calpha->O, then zero channels.
Array backbone_vectors(const mol::PocketBackbone& pocket, std::size_t channels);

/// Appends the columns of `b` to `a` row by row.
Array concat_columns(const Array& a, const Array& b);

}  // namespace flowsite::net
