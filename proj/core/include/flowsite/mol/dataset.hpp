// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowsite/mol/pocket.hpp"
#include "flowsite/mol/types.hpp"

namespace flowsite::mol {

struct ManifestEntry {
  std::string id;
  std::string protein;   // absolute or manifest-relative path
  std::string ligand;
  std::string features;  // empty when absent
};

/// Whitespace-separated columns `id protein ligand [features]`; blank lines
/// and lines starting with '#' are skipped. Relative paths resolve against
/// `base_dir`.
std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::string& base_dir);
std::vector<ManifestEntry> load_manifest(const std::string& path);

/// A parsed complex before pocket extraction.
struct RawComplex {
  std::string id;
  PocketBackbone protein;  // whole protein, side chains kept
  LigandGraph ligand;      // grouped multi-ligand with the crystal pose
  std::size_t dropped_residues = 0;
};

RawComplex load_complex(const ManifestEntry& entry);

struct SampleOptions {
  PocketMode pocket_mode = PocketMode::kDistance;
  PocketOptions pocket{};
  double contact_cutoff = 4.0;
};

/// Extracts the pocket (noise drawn from `seed`) and fills contacts and
/// side-chain torsions. Throws DataError when the pocket has no contact.
ComplexSample make_sample(const RawComplex& raw, const SampleOptions& options, std::uint64_t seed);

}  // namespace flowsite::mol
