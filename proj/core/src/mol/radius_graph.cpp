// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/radius_graph.hpp"

namespace flowsite::mol {

namespace {

void within(const Coords& a, const Coords& b, double cutoff, bool same_set, EdgeList& out) {
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      if (same_set && i == j) continue;
      const double d = (a.row(j) - b.row(i)).norm();
      if (d <= cutoff) {
        out.src.push_back(static_cast<std::size_t>(j));
        out.dst.push_back(static_cast<std::size_t>(i));
        out.dist.push_back(d);
      }
    }
  }
}

}  // namespace

RadiusGraph build_radius_graph(const Coords& ligand, const Coords& residues_ca,
                               const RadiusCutoffs& cutoffs) {
  RadiusGraph g;
  within(ligand, ligand, cutoffs.ligand_ligand, true, g[EdgeKind::kLigLig]);
  within(residues_ca, residues_ca, cutoffs.protein_protein, true, g[EdgeKind::kProtProt]);
  within(ligand, residues_ca, cutoffs.cross, false, g[EdgeKind::kLigProt]);
  within(residues_ca, ligand, cutoffs.cross, false, g[EdgeKind::kProtLig]);
  return g;
}

}  // namespace flowsite::mol
