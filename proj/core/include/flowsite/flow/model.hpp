// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "flowsite/diff/adam.hpp"
#include "flowsite/mol/types.hpp"

namespace flowsite::flow {

/// Width of a residue-type estimate: 20 probabilities plus the MASK flag.
inline constexpr std::size_t kTypeEstimateWidth = 21;

/// Non-trainable named arrays saved with a model (running statistics).
using BufferStore = std::map<std::string, diff::Array>;

/// Inputs of one vector-field evaluation.
struct FlowInput {
  const mol::ComplexSample* sample = nullptr;
  mol::Coords x_t;
  mol::Coords x_self;    // self-conditioning structure estimate
  diff::Array a_self;    // (L, 21) self-conditioning residue estimate
  double t = 0.0;
  bool training = false;
  bool update_statistics = false;
};

struct FlowOutput {
  std::vector<diff::Var> positions;  // per refinement layer, each (n, 3); the last is the prediction
  diff::Var residue_logits;          // (L, 20); undefined for structure-only models
  diff::Var torsions;                // (L, 8) unnormalized (sin, cos) pairs; may be undefined
};

class FlowModel {
 public:
  virtual ~FlowModel() = default;
  virtual FlowOutput forward(const FlowInput& input) = 0;
  /// Several complexes in one pass. Models with batch statistics compute them
  /// over the whole batch; the default runs them one at a time.
  virtual std::vector<FlowOutput> forward_batch(const std::vector<FlowInput>& inputs);
  virtual bool designs_residues() const = 0;
  virtual diff::ParameterStore& parameters() = 0;
  virtual BufferStore& buffers() = 0;
};

/// (L, 21) with every row set to MASK.
diff::Array mask_estimate(std::size_t residues);
/// (L, 21) one-hot of the given residue types (MASK allowed).
diff::Array one_hot_estimate(const mol::PocketBackbone& pocket);
/// (L, 21) from (L, 20) probabilities with a zero MASK column.
diff::Array probability_estimate(const diff::Array& probabilities);

diff::Array to_array(const mol::Coords& x);
mol::Coords to_coords(const diff::Array& a);

}  // namespace flowsite::flow
