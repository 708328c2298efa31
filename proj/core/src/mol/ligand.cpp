// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/ligand.hpp"

#include <algorithm>
#include <numeric>

#include "flowsite/mol/elements.hpp"

namespace flowsite::mol {

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

LigandGraph make_ligand(std::vector<LigandAtom> atoms, std::optional<Coords> coords) {
  LigandGraph g;
  const std::size_t n = atoms.size();
  g.atoms = std::move(atoms);
  g.adjacency.assign(n * n, 0);
  g.molecule.assign(n, 0);
  g.coords = std::move(coords);
  compute_components(g);
  return g;
}

void compute_components(LigandGraph& graph) {
  const std::size_t n = graph.size();
  DisjointSet ds(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (graph.bonded(i, j)) ds.unite(i, j);
  graph.component.assign(n, -1);
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = ds.find(i);
    if (label[root] < 0) label[root] = next++;
    graph.component[i] = label[root];
  }
}

std::size_t infer_bonds(LigandGraph& graph, double factor) {
  if (!graph.coords) throw DataError("bond inference needs coordinates");
  const Coords& x = *graph.coords;
  std::size_t added = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      const double limit =
          factor * (covalent_radius(graph.atoms[i].element) + covalent_radius(graph.atoms[j].element));
      const double d = (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).norm();
      if (d < limit && !graph.bonded(i, j)) {
        graph.set_bond(i, j);
        ++added;
      }
    }
  }
  compute_components(graph);
  return added;
}

void fill_graph_features(LigandGraph& graph) {
  for (std::size_t i = 0; i < graph.size(); ++i) {
    graph.atoms[i].features[kSlotAtomicNumber] = graph.atoms[i].element;
    graph.atoms[i].features[kSlotDegree] = static_cast<double>(graph.degree(i));
  }
}

std::vector<LigandGraph> split_molecules(const LigandGraph& graph) {
  int count = 0;
  for (int m : graph.molecule) count = std::max(count, m + 1);
  std::vector<LigandGraph> out;
  for (int m = 0; m < count; ++m) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < graph.size(); ++i)
      if (graph.molecule[i] == m) idx.push_back(i);
    if (idx.empty()) continue;
    std::vector<LigandAtom> atoms;
    std::optional<Coords> coords;
    if (graph.coords) coords = Coords(static_cast<Eigen::Index>(idx.size()), 3);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      atoms.push_back(graph.atoms[idx[k]]);
      if (coords) coords->row(static_cast<Eigen::Index>(k)) = graph.coords->row(static_cast<Eigen::Index>(idx[k]));
    }
    LigandGraph part = make_ligand(std::move(atoms), std::move(coords));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (graph.bonded(idx[a], idx[b])) part.set_bond(a, b);
    compute_components(part);
    out.push_back(std::move(part));
  }
  return out;
}

LigandGraph merge_ligands(const std::vector<LigandGraph>& parts) {
  std::vector<LigandAtom> atoms;
  bool all_coords = !parts.empty();
  std::size_t n = 0;
  for (const auto& p : parts) {
    atoms.insert(atoms.end(), p.atoms.begin(), p.atoms.end());
    all_coords = all_coords && p.coords.has_value();
    n += p.size();
  }
  std::optional<Coords> coords;
  if (all_coords) {
    coords = Coords(static_cast<Eigen::Index>(n), 3);
    Eigen::Index row = 0;
    for (const auto& p : parts) {
      coords->middleRows(row, static_cast<Eigen::Index>(p.size())) = *p.coords;
      row += static_cast<Eigen::Index>(p.size());
    }
  }
  LigandGraph g = make_ligand(std::move(atoms), std::move(coords));
  std::size_t offset = 0;
  int molecule_offset = 0;
  for (const auto& p : parts) {
    int local_max = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      g.molecule[offset + i] = molecule_offset + p.molecule[i];
      local_max = std::max(local_max, p.molecule[i] + 1);
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p.bonded(i, j)) g.set_bond(offset + i, offset + j);
    }
    offset += p.size();
    molecule_offset += local_max;
  }
  compute_components(g);
  return g;
}

LigandGraph group_multiligand(const std::vector<LigandGraph>& molecules, std::size_t primary,
                              double cutoff) {
  if (primary >= molecules.size()) throw DataError("primary molecule index out of range");
  const std::size_t m = molecules.size();
  DisjointSet ds(m);
  for (std::size_t a = 0; a < m; ++a) {
    if (!molecules[a].coords) throw DataError("multi-ligand grouping needs coordinates");
    for (std::size_t b = a + 1; b < m; ++b) {
      if (!molecules[b].coords) throw DataError("multi-ligand grouping needs coordinates");
      const Coords& xa = *molecules[a].coords;
      const Coords& xb = *molecules[b].coords;
      bool close = false;
      for (Eigen::Index i = 0; i < xa.rows() && !close; ++i)
        for (Eigen::Index j = 0; j < xb.rows() && !close; ++j)
          close = (xa.row(i) - xb.row(j)).norm() <= cutoff;
      if (close) ds.unite(a, b);
    }
  }
  std::vector<LigandGraph> group;
  const std::size_t root = ds.find(primary);
  // The primary molecule leads so its atoms keep the lowest indices.
  group.push_back(molecules[primary]);
  for (std::size_t a = 0; a < m; ++a)
    if (a != primary && ds.find(a) == root) group.push_back(molecules[a]);
  return merge_ligands(group);
}

double ligand_diameter(const Coords& coords) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < coords.rows(); ++i)
    for (Eigen::Index j = i + 1; j < coords.rows(); ++j)
      best = std::max(best, (coords.row(i) - coords.row(j)).norm());
  return best;
}

}  // namespace flowsite::mol
