// SPDX-License-Identifier: Apache-2.0

#include "flowsite/net/features.hpp"

#include <algorithm>
#include <stdexcept>

#include "flowsite/mol/pocket.hpp"

namespace flowsite::net {

namespace {

int element_slot(int z) {
  switch (z) {
    case 6: return 0;
    case 7: return 1;
    case 8: return 2;
    case 16: return 3;
    case 15: return 4;
    case 9: return 5;
    case 17: return 6;
    case 35: return 7;
    case 53: return 8;
    default: return 9;
  }
}

}  // namespace

Array ligand_chemistry(const mol::LigandGraph& graph) {
  Array out(Shape{graph.size(), kLigandChemistryWidth});
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto& f = graph.atoms[i].features;
    out.at(i, static_cast<std::size_t>(element_slot(graph.atoms[i].element))) = 1.0;
    const auto degree = std::min<std::size_t>(graph.degree(i), 5);
    out.at(i, 10 + degree) = 1.0;
    std::size_t col = 16;
    for (std::size_t s = 0; s < mol::kAtomFeatureWidth; ++s) {
      if (s == mol::kSlotAtomicNumber || s == mol::kSlotDegree) continue;
      out.at(i, col++) = f[s];
    }
  }
  return out;
}

Array time_embedding(double t, const RbfSpec& spec, std::size_t rows) {
  Array out(Shape{rows, spec.count});
  const auto g = rbf_embed(t, spec);
  for (std::size_t r = 0; r < rows; ++r) std::copy(g.begin(), g.end(), out.data.begin() + static_cast<std::ptrdiff_t>(r * spec.count));
  return out;
}

mol::Vec3 virtual_atom(const mol::Residue& r, double distance) {
  const mol::Vec3 a = (r.n - r.ca).normalized();
  const mol::Vec3 b = (r.c - r.ca).normalized();
  const mol::Vec3 bisector = a + b;
  const double len = bisector.norm();
  if (len < 1e-12) return r.ca;
  return r.ca - distance * bisector / len;
}

std::array<mol::Vec3, 5> frame_atoms(const mol::Residue& r, double virtual_distance) {
  return {r.n, r.ca, r.c, r.o, virtual_atom(r, virtual_distance)};
}

std::size_t residue_geometry_width(const RbfSpec& intra) { return 10 * intra.count + 6; }

Array residue_geometry(const mol::PocketBackbone& pocket, const RbfSpec& intra, double virtual_distance) {
  const std::size_t L = pocket.size();
  Array out(Shape{L, residue_geometry_width(intra)});
  const auto& res = pocket.residues;
  auto adjacent = [&](std::size_t i, std::size_t j) {
    return res[i].chain == res[j].chain && res[j].seq == res[i].seq + 1;
  };
  for (std::size_t i = 0; i < L; ++i) {
    const auto atoms = frame_atoms(res[i], virtual_distance);
    double* row = out.data.data() + i * out.shape[1];
    std::size_t col = 0;
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = a + 1; b < 5; ++b) {
        rbf_embed((atoms[a] - atoms[b]).norm(), intra, row + col);
        col += intra.count;
      }
    }
    const bool prev = i > 0 && adjacent(i - 1, i);
    const bool next = i + 1 < L && adjacent(i, i + 1);
    if (prev) row[col] = std::cos(mol::dihedral(res[i - 1].c, res[i].n, res[i].ca, res[i].c));
    if (next) {
      row[col + 1] = std::cos(mol::dihedral(res[i].n, res[i].ca, res[i].c, res[i + 1].n));
      row[col + 2] = std::cos(mol::dihedral(res[i].ca, res[i].c, res[i + 1].n, res[i + 1].ca));
    }
    row[col + 3] = prev ? 1.0 : 0.0;
    row[col + 4] = next ? 1.0 : 0.0;
    row[col + 5] = next ? 1.0 : 0.0;
  }
  return out;
}

Array backbone_vectors(const mol::PocketBackbone& pocket, std::size_t channels) {
  if (channels < 3) throw std::invalid_argument("backbone vectors need at least 3 channels");
  Array out(Shape{pocket.size(), 3, channels});
  for (std::size_t i = 0; i < pocket.size(); ++i) {
    const auto& r = pocket.residues[i];
    const mol::Vec3 v[3] = {r.n - r.ca, r.c - r.ca, r.o - r.ca};
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t k = 0; k < 3; ++k) out.at(i, k, c) = v[c][static_cast<Eigen::Index>(k)];
  }
  return out;
}

Array concat_columns(const Array& a, const Array& b) {
  if (a.shape.rank() != 2 || b.shape.rank() != 2 || a.shape[0] != b.shape[0]) {
    throw std::invalid_argument("shape mismatch in concat_columns: " + a.shape.str() + " vs " + b.shape.str());
  }
  Array out(Shape{a.shape[0], a.shape[1] + b.shape[1]});
  for (std::size_t i = 0; i < a.shape[0]; ++i) {
    std::copy_n(a.data.begin() + static_cast<std::ptrdiff_t>(i * a.shape[1]), a.shape[1],
                out.data.begin() + static_cast<std::ptrdiff_t>(i * out.shape[1]));
    std::copy_n(b.data.begin() + static_cast<std::ptrdiff_t>(i * b.shape[1]), b.shape[1],
                out.data.begin() + static_cast<std::ptrdiff_t>(i * out.shape[1] + a.shape[1]));
  }
  return out;
}

}  // namespace flowsite::net
