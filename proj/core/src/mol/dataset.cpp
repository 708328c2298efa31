// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/dataset.hpp"

#include <filesystem>
#include <sstream>

#include "flowsite/mol/ligand.hpp"
#include "flowsite/mol/pdb.hpp"

namespace flowsite::mol {

namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.lexically_normal().string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::string& base_dir) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string tok; fields >> tok;) cols.push_back(tok);
    if (cols.empty() || cols[0][0] == '#') continue;
    if (cols.size() < 3 || cols.size() > 4) {
      throw ParseError("manifest line " + std::to_string(lineno) + ": expected 3 or 4 columns, got " +
                       std::to_string(cols.size()));
    }
    ManifestEntry e;
    e.id = cols[0];
    e.protein = resolve(cols[1], base_dir);
    e.ligand = resolve(cols[2], base_dir);
    if (cols.size() == 4) e.features = resolve(cols[3], base_dir);
    for (const auto& prev : out) {
      if (prev.id == e.id) throw ParseError("manifest: duplicate id " + e.id);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  return parse_manifest(read_text_file(path), fs::path(path).parent_path().string());
}

RawComplex load_complex(const ManifestEntry& entry) {
  RawComplex raw;
  raw.id = entry.id;
  auto bb = parse_backbone(read_text_file(entry.protein), {.keep_side_chains = true});
  raw.protein = std::move(bb.backbone);
  raw.dropped_residues = bb.dropped_residues;

  auto lig = parse_ligand(read_text_file(entry.ligand));
  if (!entry.features.empty()) apply_features(lig.graph, parse_feature_file(read_text_file(entry.features)));
  raw.ligand = group_multiligand(split_molecules(lig.graph));
  raw.ligand.validate();
  return raw;
}

ComplexSample make_sample(const RawComplex& raw, const SampleOptions& options, std::uint64_t seed) {
  ComplexSample s;
  s.id = raw.id;
  s.ligand = raw.ligand;
  s.pocket = extract_pocket(options.pocket_mode, raw.protein, raw.ligand.coords.value(), options.pocket,
                            seed, raw.id);
  s.contact = contact_mask(s.pocket, s.truth(), options.contact_cutoff);
  if (s.num_contacts() == 0) throw DataError(raw.id + ": pocket has no contact residue");
  s.torsions = side_chain_torsions(s.pocket);
  return s;
}

}  // namespace flowsite::mol
