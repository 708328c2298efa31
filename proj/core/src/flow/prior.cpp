// SPDX-License-Identifier: Apache-2.0

#include "flowsite/flow/prior.hpp"

#include <stdexcept>

namespace flowsite::flow {

Eigen::MatrixXd graph_laplacian(const mol::LigandGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : graph.bonds()) {
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    L(a, b) -= 1.0;
    L(b, a) -= 1.0;
    L(a, a) += 1.0;
    L(b, b) += 1.0;
  }
  return L;
}

namespace {

std::vector<std::vector<std::size_t>> component_atoms(const mol::LigandGraph& graph) {
  std::vector<std::vector<std::size_t>> groups(graph.num_components());
  for (std::size_t i = 0; i < graph.size(); ++i) groups.at(static_cast<std::size_t>(graph.component[i])).push_back(i);
  return groups;
}

Eigen::MatrixXd block(const Eigen::MatrixXd& L, const std::vector<std::size_t>& atoms) {
  const auto m = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXd B(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      B(a, b) = L(static_cast<Eigen::Index>(atoms[static_cast<std::size_t>(a)]),
                  static_cast<Eigen::Index>(atoms[static_cast<std::size_t>(b)]));
  return B;
}

}  // namespace

HarmonicPrior HarmonicPrior::build(const mol::LigandGraph& graph) {
  HarmonicPrior p;
  p.laplacian = graph_laplacian(graph);
  for (auto& atoms : component_atoms(graph)) {
    Component c;
    c.atoms = std::move(atoms);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block(p.laplacian, c.atoms));
    if (solver.info() != Eigen::Success) throw std::runtime_error("Laplacian eigendecomposition failed");
    c.eigenvalues = solver.eigenvalues();
    c.eigenvectors = solver.eigenvectors();
    p.components.push_back(std::move(c));
  }
  return p;
}

std::size_t HarmonicPrior::zero_modes() const {
  std::size_t z = 0;
  for (const auto& c : components)
    for (Eigen::Index i = 0; i < c.eigenvalues.size(); ++i) z += c.eigenvalues[i] < kZeroEigenvalue ? 1 : 0;
  return z;
}

mol::Coords HarmonicPrior::sample(const mol::Vec3& center, std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  mol::Coords x(static_cast<Eigen::Index>(size()), 3);
  for (const auto& c : components) {
    const auto m = static_cast<Eigen::Index>(c.atoms.size());
    Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(m, 3);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (c.eigenvalues[i] < kZeroEigenvalue) continue;  // centroid mode, pinned to the center
      const double sd = 1.0 / std::sqrt(std::max(c.eigenvalues[i], kZeroEigenvalue));
      for (int d = 0; d < 3; ++d) offsets.col(d) += normal(rng) * sd * c.eigenvectors.col(i);
    }
    for (Eigen::Index a = 0; a < m; ++a)
      x.row(static_cast<Eigen::Index>(c.atoms[static_cast<std::size_t>(a)])) = center.transpose() + offsets.row(a);
  }
  return x;
}

mol::Coords harmonic_prior_sample(const mol::LigandGraph& graph, const mol::Vec3& center, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return HarmonicPrior::build(graph).sample(center, rng);
}

Eigen::MatrixXd laplacian_pseudoinverse(const mol::LigandGraph& graph) {
  const Eigen::MatrixXd L = graph_laplacian(graph);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(L.rows(), L.cols());
  for (const auto& atoms : component_atoms(graph)) {
    const auto m = static_cast<Eigen::Index>(atoms.size());
    const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
    const Eigen::MatrixXd inv = (block(L, atoms) + J).inverse() - J;
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b)
        P(static_cast<Eigen::Index>(atoms[static_cast<std::size_t>(a)]),
          static_cast<Eigen::Index>(atoms[static_cast<std::size_t>(b)])) = inv(a, b);
  }
  return P;
}

}  // namespace flowsite::flow
