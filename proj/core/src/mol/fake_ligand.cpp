// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/fake_ligand.hpp"

#include <cstdlib>
#include <random>

#include "flowsite/mol/ligand.hpp"

namespace flowsite::mol {

namespace {

bool in_window(const Residue& a, const Residue& b, int window) {
  return a.chain == b.chain && std::abs(a.seq - b.seq) <= window;
}

bool residues_touch(const Residue& a, const Residue& b, double cutoff) {
  for (const auto& p : a.heavy_atoms())
    for (const auto& q : b.heavy_atoms())
      if ((p - q).norm() <= cutoff) return true;
  return false;
}

}  // namespace

std::vector<std::size_t> fake_ligand_candidates(const PocketBackbone& protein,
                                                const FakeLigandOptions& options) {
  std::vector<std::size_t> out;
  const auto& res = protein.residues;
  for (std::size_t i = 0; i < res.size(); ++i) {
    std::size_t contacts = 0;
    for (std::size_t j = 0; j < res.size(); ++j) {
      if (j == i || in_window(res[i], res[j], options.window)) continue;
      // Cheap reject before the all-atom scan.
      if ((res[i].ca - res[j].ca).norm() > 25.0) continue;
      if (residues_touch(res[i], res[j], options.contact_cutoff)) ++contacts;
    }
    if (contacts >= options.min_contacts) out.push_back(i);
  }
  return out;
}

std::optional<ComplexSample> make_fake_ligand(const PocketBackbone& protein, std::uint64_t seed,
                                              const FakeLigandOptions& options, const std::string& id) {
  const auto candidates = fake_ligand_candidates(protein, options);
  if (candidates.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  const Residue& chosen = protein.residues[candidates[pick(rng)]];

  std::vector<LigandAtom> atoms;
  std::vector<Vec3> pos;
  atoms.push_back({6, "C", {}});
  pos.push_back(chosen.c);
  atoms.push_back({6, "CA", {}});
  pos.push_back(chosen.ca);
  for (const auto& a : chosen.side_chain) {
    atoms.push_back({a.element, a.name, {}});
    pos.push_back(a.pos);
  }
  Coords coords(static_cast<Eigen::Index>(pos.size()), 3);
  for (std::size_t i = 0; i < pos.size(); ++i) coords.row(static_cast<Eigen::Index>(i)) = pos[i];
  LigandGraph ligand = make_ligand(std::move(atoms), coords);
  infer_bonds(ligand);
  fill_graph_features(ligand);

  PocketBackbone rest;
  for (const auto& r : protein.residues)
    if (!in_window(r, chosen, options.window)) rest.residues.push_back(r);
  if (rest.residues.empty()) return std::nullopt;

  ComplexSample sample;
  sample.id = id;
  sample.fake_ligand = true;
  try {
    sample.pocket = extract_pocket(options.pocket_mode, rest, coords, options.pocket, seed ^ 0x9e3779b97f4a7c15ULL, id);
  } catch (const DataError&) {
    return std::nullopt;
  }
  sample.ligand = std::move(ligand);
  sample.contact = contact_mask(sample.pocket, coords);
  if (sample.num_contacts() == 0) return std::nullopt;
  sample.torsions = side_chain_torsions(sample.pocket);
  return sample;
}

}  // namespace flowsite::mol
