// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flowsite/mol/pocket.hpp"
#include "flowsite/mol/types.hpp"

namespace flowsite::mol {

struct FakeLigandOptions {
  std::size_t min_contacts = 4;  // other residues within contact_cutoff
  double contact_cutoff = 4.0;
  int window = 7;  // chain positions removed on each side
  PocketMode pocket_mode = PocketMode::kDistance;
  PocketOptions pocket{};
};

/// Residue indices that qualify as fake-ligand sources: at least
/// `min_contacts` other residues (outside the +-window in the same chain) with
/// a heavy atom within the contact cutoff.
std::vector<std::size_t> fake_ligand_candidates(const PocketBackbone& protein,
                                                const FakeLigandOptions& options = {});

/// Picks one candidate uniformly, turns its C, CA and side-chain atoms into a
/// ligand, removes it and its +-window from the protein, and extracts a pocket
/// around it. Returns nullopt when no candidate exists or the pocket has no
/// contact.
std::optional<ComplexSample> make_fake_ligand(const PocketBackbone& protein, std::uint64_t seed,
                                              const FakeLigandOptions& options = {},
                                              const std::string& id = "fake");

}  // namespace flowsite::mol
