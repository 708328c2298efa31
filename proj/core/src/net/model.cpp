// SPDX-License-Identifier: Apache-2.0

#include "flowsite/net/model.hpp"

#include <random>
#include <stdexcept>

#include "flowsite/net/features.hpp"

namespace flowsite::net {

using namespace diff;

FlowSiteModel::FlowSiteModel(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  std::mt19937_64 rng(seed);
  const std::size_t time_width = config.equivariant.time.count;
  stack_ = EquivariantStack(store_, buffers_, rng, config.equivariant, kLigandChemistryWidth + time_width,
                            flow::kTypeEstimateWidth + time_width);
  if (config.design) {
    invariant_.emplace(store_, rng, config.invariant,
                       kLigandChemistryWidth + time_width + config.equivariant.scalars,
                       residue_geometry_width(config.invariant.intra) + flow::kTypeEstimateWidth +
                           config.equivariant.scalars);
  }
}

flow::FlowOutput FlowSiteModel::forward(const flow::FlowInput& in) { return forward_batch({in}).front(); }

std::vector<flow::FlowOutput> FlowSiteModel::forward_batch(const std::vector<flow::FlowInput>& inputs) {
  if (pinned_ && inputs.size() != 1) throw std::invalid_argument("pinned geometry needs single-complex passes");
  std::vector<StackInput> stack_in;
  for (const auto& in : inputs) {
    if (in.sample == nullptr) throw std::invalid_argument("flow input without a sample");
    const mol::ComplexSample& s = *in.sample;
    const std::size_t n = s.ligand.size();
    const std::size_t L = s.pocket.size();
    if (static_cast<std::size_t>(in.x_t.rows()) != n || static_cast<std::size_t>(in.x_self.rows()) != n) {
      throw std::invalid_argument(s.id + ": coordinate rows do not match the ligand");
    }
    if (in.a_self.shape != Shape{L, flow::kTypeEstimateWidth}) {
      throw std::invalid_argument(s.id + ": residue estimate has shape " + in.a_self.shape.str());
    }
    const Array types = config_.design ? in.a_self : flow::one_hot_estimate(s.pocket);
    StackInput si;
    si.ligand = &s.ligand;
    si.ligand_scalars = concat_columns(ligand_chemistry(s.ligand), time_embedding(in.t, config_.equivariant.time, n));
    si.residue_scalars = concat_columns(types, time_embedding(in.t, config_.equivariant.time, L));
    si.residue_vectors = backbone_vectors(s.pocket, config_.equivariant.vectors);
    si.x_t = in.x_t;
    si.ca = s.pocket.ca_coords();
    si.x_self = in.x_self;
    si.training = in.training;
    si.update_statistics = in.update_statistics;
    si.pinned_geometry = pinned_ ? &pinned_positions_ : nullptr;
    stack_in.push_back(std::move(si));
  }
  const std::vector<StackOutput> stack_out = stack_.run_batch(stack_in);

  std::vector<flow::FlowOutput> outs;
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    const flow::FlowInput& in = inputs[b];
    const mol::ComplexSample& s = *in.sample;
    const std::size_t n = s.ligand.size();
    const std::size_t L = s.pocket.size();
    const StackOutput& so = stack_out[b];
    flow::FlowOutput out;
    out.positions = so.positions;
    if (invariant_) {
      mol::Coords pose = flow::to_coords(so.positions.back().value());
      if (pinned_) {
        if (pinned_positions_.size() <= so.positions.size()) pinned_positions_.push_back(pose);
        pose = pinned_positions_[so.positions.size()];
      }
      const GatGraph graph = invariant_graph(pose, s.pocket, s.ligand, config_.invariant);
      const Var lig_in = concat({constant(stack_in[b].ligand_scalars), slice(so.features.scalars, 0, 0, n)}, 1);
      const Array geometry = residue_geometry(s.pocket, config_.invariant.intra, config_.invariant.virtual_distance);
      const Var res_in =
          concat({constant(concat_columns(geometry, in.a_self)), slice(so.features.scalars, 0, n, n + L)}, 1);
      const auto io = invariant_->forward(lig_in, res_in, graph);
      out.residue_logits = io.residue_logits;
      out.torsions = io.torsions;
    }
    outs.push_back(std::move(out));
  }
  return outs;
}

}  // namespace flowsite::net
