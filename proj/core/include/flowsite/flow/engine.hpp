// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "flowsite/diff/adam.hpp"
#include "flowsite/flow/model.hpp"
#include "flowsite/mol/types.hpp"

namespace flowsite::flow {

/// x ~ N(t x1 + (1 - t) x0, sigma^2 I).
mol::Coords interpolate(const mol::Coords& x0, const mol::Coords& x1, double t, double sigma, std::mt19937_64& rng);
mol::Coords interpolate(const mol::Coords& x0, const mol::Coords& x1, double t, double sigma, std::uint64_t seed);

struct LossWeights {
  double cfm = 1.0;
  double refine = 1.0;
  double type = 0.2;
  double torsion = 0.5;
};

struct LossReport {
  double l_cfm = 0.0;
  double l_refine = 0.0;
  double l_type = 0.0;
  double l_torsion = 0.0;
  double total = 0.0;
  LossWeights weights{};
  std::size_t samples = 0;
  std::size_t self_conditioned = 0;  // samples whose input came from a first model pass
  std::size_t skipped_parameters = 0;

  double weighted_total() const;
};

/// Differentiable per-sample losses. Squared errors are summed over x, y, z
/// and averaged over atoms; cross-entropy is averaged over pocket residues
/// (or contact residues only with `contacts_only`).
struct SampleLoss {
  diff::Var cfm, refine, type, torsion, total;
};
SampleLoss sample_losses(const FlowOutput& out, const mol::ComplexSample& sample, const LossWeights& weights,
                         bool contacts_only = false);

struct TrainOptions {
  double sigma = 0.5;
  double self_condition_probability = 0.5;
  LossWeights weights{};
  diff::AdamOptions adam{};
  bool type_loss_contacts_only = false;
};

/// Optional view into a training step, for tests and diagnostics.
struct TrainProbe {
  std::vector<diff::Var> first_pass_positions;  // undetached first-pass predictions
  std::vector<diff::Var> first_pass_logits;
  std::vector<std::string> ids;
};

/// One optimizer step on the batch mean of the weighted loss.
LossReport train_step(const std::vector<const mol::ComplexSample*>& batch, FlowModel& model,
                      const TrainOptions& options, std::uint64_t seed, TrainProbe* probe = nullptr);

struct FlowState {
  double t = 0.0;
  mol::Coords x_t;          // input to the model at this step
  mol::Coords x1_estimate;  // model output at this step
  diff::Array probabilities;  // (L, 20) residue estimate, empty for structure-only models
};

struct Trajectory {
  std::string id;
  std::vector<FlowState> states;
  mol::Coords final_x;
  diff::Array final_probabilities;  // (L, 20) or empty
  std::vector<int> designed;        // argmax residue types, empty for structure-only models
};

/// x <- x + dt (x1_hat - x) / (1 - t).
mol::Coords euler_step(const mol::Coords& x, const mol::Coords& x1_hat, double t, double dt);

/// T model evaluations and T - 1 updates; the last estimate is the sample.
Trajectory euler_integrate(FlowModel& model, const mol::ComplexSample& sample, std::size_t steps, std::uint64_t seed);

struct TraceRow {
  std::size_t step = 0;
  double t = 0.0;
  double rmsd_to_final = 0.0;
  double mean_entropy = 0.0;  // natural log; NaN without residue estimates
};

std::vector<TraceRow> entropy_trace(const Trajectory& trajectory);

/// Mean Shannon entropy of the rows of an (L, C) probability array.
double mean_entropy(const diff::Array& probabilities);

/// One JSON object per line: a header, then one line per step.
void write_trajectory(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory(std::istream& in);

}  // namespace flowsite::flow
