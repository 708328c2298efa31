// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowsite/mol/types.hpp"

namespace flowsite::mol {

enum class PocketMode { kDistance, kRadius };

struct PocketOptions {
  double sigma_distance = 0.5;  // noise on residue distances
  double sigma_center = 0.2;    // noise on the pocket center, per coordinate
  double include_cutoff = 14.0; // distance pockets
  double center_cutoff = 8.0;
};

/// Residues whose noisy Calpha-to-ligand minimum distance is below 14 A. The
/// center is the Calpha mean of residues under 8 A (noisy) plus center noise.
PocketBackbone extract_distance_pocket(const PocketBackbone& protein, const Coords& ligand,
                                       const PocketOptions& options, std::uint64_t seed,
                                       const std::string& complex_id = "");

/// Residues within 7 + min(5, diameter / 2) A (noisy) of the Calpha mean of
/// residues within 8 A of the ligand. Center as for distance pockets.
PocketBackbone extract_radius_pocket(const PocketBackbone& protein, const Coords& ligand,
                                     const PocketOptions& options, std::uint64_t seed,
                                     const std::string& complex_id = "");

PocketBackbone extract_pocket(PocketMode mode, const PocketBackbone& protein, const Coords& ligand,
                              const PocketOptions& options, std::uint64_t seed,
                              const std::string& complex_id = "");

double radius_pocket_radius(double ligand_diameter);

/// Minimum distance from a point to any ligand atom.
double min_distance(const Vec3& p, const Coords& ligand);

/// True for residues with a heavy atom within `cutoff` of a ligand atom.
/// Uses side-chain atoms when present, backbone atoms otherwise.
std::vector<bool> contact_mask(const PocketBackbone& pocket, const Coords& ligand, double cutoff = 4.0);

/// Side-chain chi angles (radians) from parsed side-chain atoms.
Torsions side_chain_torsions(const PocketBackbone& pocket);

/// Signed dihedral angle in radians for four points.
double dihedral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace flowsite::mol
