// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "flowsite/mol/types.hpp"

namespace flowsite::flow {

inline constexpr double kZeroEigenvalue = 1e-8;

/// L = D - A of the ligand bond graph.
Eigen::MatrixXd graph_laplacian(const mol::LigandGraph& graph);

/// Gaussian with precision L in each spatial dimension, one block per
/// connected component, each component's centroid pinned to the center.
struct HarmonicPrior {
  struct Component {
    std::vector<std::size_t> atoms;
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns
  };

  Eigen::MatrixXd laplacian;
  std::vector<Component> components;

  static HarmonicPrior build(const mol::LigandGraph& graph);

  std::size_t size() const { return static_cast<std::size_t>(laplacian.rows()); }
  /// Eigenvalues below kZeroEigenvalue over all components.
  std::size_t zero_modes() const;
  /// x0 = center + sum_i c_i v_i over nonzero modes, c_i ~ N(0, 1/lambda_i) per dimension.
  mol::Coords sample(const mol::Vec3& center, std::mt19937_64& rng) const;
};

mol::Coords harmonic_prior_sample(const mol::LigandGraph& graph, const mol::Vec3& center, std::uint64_t seed);

/// Moore-Penrose pseudoinverse of a Laplacian via (L + J/n)^-1 - J/n per
/// connected component (J the all-ones block).
Eigen::MatrixXd laplacian_pseudoinverse(const mol::LigandGraph& graph);

}  // namespace flowsite::flow
