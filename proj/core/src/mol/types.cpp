// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/types.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace flowsite::mol {

void LigandGraph::set_bond(std::size_t i, std::size_t j, bool on) {
  if (i == j) return;
  adjacency[i * size() + j] = on ? 1 : 0;
  adjacency[j * size() + i] = on ? 1 : 0;
}

std::size_t LigandGraph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < size(); ++j) d += bonded(i, j) ? 1 : 0;
  return d;
}

std::size_t LigandGraph::num_components() const {
  int mx = -1;
  for (int c : component) mx = std::max(mx, c);
  return static_cast<std::size_t>(mx + 1);
}

std::size_t LigandGraph::num_bonds() const { return bonds().size(); }

std::vector<std::pair<std::size_t, std::size_t>> LigandGraph::bonds() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (bonded(i, j)) out.emplace_back(i, j);
  return out;
}

void LigandGraph::validate() const {
  const std::size_t n = size();
  if (n == 0) throw DataError("ligand has no heavy atoms");
  if (adjacency.size() != n * n) throw DataError("ligand adjacency is not n x n");
  if (component.size() != n) throw DataError("ligand component ids do not cover every atom");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i * n + i] != 0) throw DataError("ligand adjacency has a self bond");
    if (atoms[i].element == 1) throw DataError("ligand graph holds a hydrogen");
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency[i * n + j] != adjacency[j * n + i]) throw DataError("ligand adjacency is not symmetric");
      if (bonded(i, j) && component[i] != component[j]) {
        throw DataError("bonded atoms " + std::to_string(i) + " and " + std::to_string(j) +
                        " carry different component ids");
      }
    }
  }
  if (coords && static_cast<std::size_t>(coords->rows()) != n) {
    throw DataError("ligand coordinates do not match atom count");
  }
}

std::vector<Vec3> Residue::heavy_atoms() const {
  std::vector<Vec3> out{n, ca, c, o};
  for (const auto& a : side_chain) out.push_back(a.pos);
  return out;
}

Coords PocketBackbone::ca_coords() const {
  Coords out(static_cast<Eigen::Index>(residues.size()), 3);
  for (std::size_t i = 0; i < residues.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = residues[i].ca;
  return out;
}

void PocketBackbone::validate() const {
  for (std::size_t i = 1; i < residues.size(); ++i) {
    const auto& a = residues[i - 1];
    const auto& b = residues[i];
    if (a.chain == b.chain && b.seq <= a.seq) {
      throw DataError("sequence indices not increasing in chain " + std::string(1, b.chain) +
                      " at residue " + std::to_string(b.seq));
    }
  }
}

bool Torsions::any() const {
  for (const auto& m : mask)
    for (bool b : m)
      if (b) return true;
  return false;
}

std::size_t ComplexSample::num_contacts() const {
  return static_cast<std::size_t>(std::count(contact.begin(), contact.end(), true));
}

std::size_t RadiusGraph::total_edges() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

}  // namespace flowsite::mol
