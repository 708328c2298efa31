// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "flowsite/flow/model.hpp"
#include "flowsite/net/equivariant.hpp"
#include "flowsite/net/invariant.hpp"

namespace flowsite::net {

struct ModelConfig {
  bool design = false;  // also predict pocket residue types (and torsions)
  EquivariantConfig equivariant{};
  InvariantConfig invariant{};
};

/// Equivariant refinement stack for the ligand pose, followed in design mode
/// by the invariant attention stack with residue-type and torsion heads.
class FlowSiteModel : public flow::FlowModel {
 public:
  FlowSiteModel(const ModelConfig& config, std::uint64_t seed);

  flow::FlowOutput forward(const flow::FlowInput& input) override;
  /// The equivariant stack sees the disjoint union of the complexes' graphs.
  std::vector<flow::FlowOutput> forward_batch(const std::vector<flow::FlowInput>& inputs) override;
  bool designs_residues() const override { return config_.design; }
  diff::ParameterStore& parameters() override { return store_; }
  flow::BufferStore& buffers() override { return buffers_; }

  const ModelConfig& config() const { return config_; }
  EquivariantStack& stack() { return stack_; }

  /// While pinned, every forward pass reuses the graph positions recorded by
  /// the first pinned pass.
  void pin_geometry(bool on) {
    pinned_ = on;
    pinned_positions_.clear();
  }

 private:
  ModelConfig config_;
  diff::ParameterStore store_;
  flow::BufferStore buffers_;
  EquivariantStack stack_;
  std::optional<InvariantNet> invariant_;
  bool pinned_ = false;
  std::vector<mol::Coords> pinned_positions_;
};

}  // namespace flowsite::net
