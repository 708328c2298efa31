// SPDX-License-Identifier: Apache-2.0

#include "flowsite/flow/model.hpp"

#include <stdexcept>

#include "flowsite/mol/elements.hpp"

namespace flowsite::flow {

using diff::Array;
using diff::Shape;

std::vector<FlowOutput> FlowModel::forward_batch(const std::vector<FlowInput>& inputs) {
  std::vector<FlowOutput> out;
  for (const auto& in : inputs) out.push_back(forward(in));
  return out;
}

Array mask_estimate(std::size_t residues) {
  Array a(Shape{residues, kTypeEstimateWidth});
  for (std::size_t i = 0; i < residues; ++i) a.at(i, mol::kMask) = 1.0;
  return a;
}

Array one_hot_estimate(const mol::PocketBackbone& pocket) {
  Array a(Shape{pocket.size(), kTypeEstimateWidth});
  for (std::size_t i = 0; i < pocket.size(); ++i) {
    const int t = pocket.residues[i].type;
    a.at(i, static_cast<std::size_t>(t >= 0 && t < mol::kNumResidueTypes ? t : mol::kMask)) = 1.0;
  }
  return a;
}

Array probability_estimate(const Array& p) {
  if (p.shape.rank() != 2 || p.shape[1] != static_cast<std::size_t>(mol::kNumResidueTypes)) {
    throw std::invalid_argument("residue probabilities must be (L, 20), got " + p.shape.str());
  }
  Array a(Shape{p.shape[0], kTypeEstimateWidth});
  for (std::size_t i = 0; i < p.shape[0]; ++i)
    for (std::size_t k = 0; k < p.shape[1]; ++k) a.at(i, k) = p.at(i, k);
  return a;
}

Array to_array(const mol::Coords& x) {
  Array a(Shape{static_cast<std::size_t>(x.rows()), 3});
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (int k = 0; k < 3; ++k) a.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = x(i, k);
  return a;
}

mol::Coords to_coords(const Array& a) {
  if (a.shape.rank() != 2 || a.shape[1] != 3) {
    throw std::invalid_argument("coordinates must be (n, 3), got " + a.shape.str());
  }
  mol::Coords x(static_cast<Eigen::Index>(a.shape[0]), 3);
  for (std::size_t i = 0; i < a.shape[0]; ++i)
    for (std::size_t k = 0; k < 3; ++k) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = a.at(i, k);
  return x;
}

}  // namespace flowsite::flow
