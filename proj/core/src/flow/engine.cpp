// SPDX-License-Identifier: Apache-2.0

#include "flowsite/flow/engine.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "flowsite/flow/prior.hpp"
#include "flowsite/metrics/metrics.hpp"
#include "flowsite/mol/elements.hpp"
#include "flowsite/net/invariant.hpp"
#include "flowsite/util/seed.hpp"

namespace flowsite::flow {

using diff::Array;
using diff::Shape;
using diff::Var;

mol::Coords interpolate(const mol::Coords& x0, const mol::Coords& x1, double t, double sigma, std::mt19937_64& rng) {
  if (x0.rows() != x1.rows()) {
    throw std::invalid_argument("interpolate: " + std::to_string(x0.rows()) + " vs " + std::to_string(x1.rows()) +
                                " rows");
  }
  if (sigma < 0.0) throw std::invalid_argument("interpolate: sigma must be nonnegative");
  mol::Coords x = t * x1 + (1.0 - t) * x0;
  if (sigma > 0.0) {
    std::normal_distribution<double> normal(0.0, sigma);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (int d = 0; d < 3; ++d) x(i, d) += normal(rng);
  }
  return x;
}

mol::Coords interpolate(const mol::Coords& x0, const mol::Coords& x1, double t, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return interpolate(x0, x1, t, sigma, rng);
}

double LossReport::weighted_total() const {
  return weights.cfm * l_cfm + weights.refine * l_refine + weights.type * l_type + weights.torsion * l_torsion;
}

namespace {

Var squared_error(const Var& pred, const mol::Coords& truth) {
  const double n = static_cast<double>(truth.rows());
  return diff::scale(diff::sum_all(diff::square(diff::sub(pred, diff::constant(to_array(truth))))), 1.0 / n);
}

Var zero() { return diff::constant(Array::scalar(0.0)); }

}  // namespace

SampleLoss sample_losses(const FlowOutput& out, const mol::ComplexSample& sample, const LossWeights& w,
                         bool contacts_only) {
  if (out.positions.empty()) throw std::invalid_argument("model returned no positions");
  SampleLoss l;
  const mol::Coords& x1 = sample.truth();
  l.cfm = squared_error(out.positions.back(), x1);
  l.refine = zero();
  for (std::size_t k = 0; k + 1 < out.positions.size(); ++k) l.refine = diff::add(l.refine, squared_error(out.positions[k], x1));

  l.type = zero();
  if (out.residue_logits.defined()) {
    const std::size_t L = sample.pocket.size();
    Array pick(Shape{L, static_cast<std::size_t>(mol::kNumResidueTypes)});
    double count = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      const int t = sample.pocket.residues[i].type;
      if (t < 0 || t >= mol::kNumResidueTypes) continue;
      if (contacts_only && !sample.contact[i]) continue;
      pick.at(i, static_cast<std::size_t>(t)) = 1.0;
      count += 1.0;
    }
    if (count > 0.0) {
      l.type = diff::scale(diff::sum_all(diff::mul(diff::log_softmax(out.residue_logits, 1), diff::constant(pick))),
                           -1.0 / count);
    }
  }
  l.torsion = zero();
  if (out.torsions.defined() && sample.torsions.any()) l.torsion = net::torsion_loss(out.torsions, sample.torsions).loss;

  l.total = diff::add(diff::add(diff::scale(l.cfm, w.cfm), diff::scale(l.refine, w.refine)),
                      diff::add(diff::scale(l.type, w.type), diff::scale(l.torsion, w.torsion)));
  return l;
}

LossReport train_step(const std::vector<const mol::ComplexSample*>& batch, FlowModel& model,
                      const TrainOptions& options, std::uint64_t seed, TrainProbe* probe) {
  if (batch.empty()) throw std::invalid_argument("train_step on an empty batch");
  LossReport report;
  report.weights = options.weights;
  report.samples = batch.size();
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  Var objective = zero();
  double cfm = 0.0, refine = 0.0, type = 0.0, torsion = 0.0;

  // Batch norm statistics span the batch, so both passes see every complex at once.
  std::vector<FlowInput> inputs(batch.size());
  std::vector<std::size_t> self_cond;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const mol::ComplexSample& s = *batch[b];
    std::mt19937_64 rng(derive_seed(seed, {b}));
    const HarmonicPrior prior = HarmonicPrior::build(s.ligand);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double t = uniform(rng);
    const mol::Coords x0 = prior.sample(s.pocket.center, rng);
    FlowInput& in = inputs[b];
    in.sample = &s;
    in.t = t;
    in.training = true;
    in.x_t = interpolate(x0, s.truth(), t, options.sigma, rng);
    in.x_self = prior.sample(s.pocket.center, rng);
    in.a_self = mask_estimate(s.pocket.size());
    if (uniform(rng) < options.self_condition_probability) self_cond.push_back(b);
  }

  if (!self_cond.empty()) {
    // Self-conditioning round: the first pass is cut from the gradient record.
    std::vector<FlowInput> first_in;
    for (std::size_t b : self_cond) first_in.push_back(inputs[b]);
    const std::vector<FlowOutput> first = model.forward_batch(first_in);
    for (std::size_t j = 0; j < self_cond.size(); ++j) {
      FlowInput& in = inputs[self_cond[j]];
      in.x_self = to_coords(diff::detach(first[j].positions.back()).value());
      if (first[j].residue_logits.defined()) {
        in.a_self = probability_estimate(diff::detach(diff::softmax(first[j].residue_logits, 1)).value());
      }
      if (probe) {
        probe->first_pass_positions.push_back(first[j].positions.back());
        probe->first_pass_logits.push_back(first[j].residue_logits);
        probe->ids.push_back(in.sample->id);
      }
    }
    report.self_conditioned = self_cond.size();
  }

  for (auto& in : inputs) in.update_statistics = true;
  const std::vector<FlowOutput> outs = model.forward_batch(inputs);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const mol::ComplexSample& s = *batch[b];
    const SampleLoss l = sample_losses(outs[b], s, options.weights, options.type_loss_contacts_only);
    if (!std::isfinite(l.total.item())) {
      throw std::runtime_error("non-finite loss for sample '" + s.id + "'");
    }
    cfm += l.cfm.item() * inv_b;
    refine += l.refine.item() * inv_b;
    type += l.type.item() * inv_b;
    torsion += l.torsion.item() * inv_b;
    objective = diff::add(objective, diff::scale(l.total, inv_b));
  }
  report.l_cfm = cfm;
  report.l_refine = refine;
  report.l_type = type;
  report.l_torsion = torsion;
  report.total = report.weighted_total();

  diff::backward(objective);
  report.skipped_parameters = diff::adam_update(model.parameters().all(), options.adam);
  return report;
}

mol::Coords euler_step(const mol::Coords& x, const mol::Coords& x1_hat, double t, double dt) {
  if (t >= 1.0) throw std::invalid_argument("euler_step at t >= 1");
  return x + dt * (x1_hat - x) / (1.0 - t);
}

Trajectory euler_integrate(FlowModel& model, const mol::ComplexSample& sample, std::size_t steps, std::uint64_t seed) {
  if (steps == 0) throw std::invalid_argument("euler_integrate needs at least one step");
  diff::NoGradGuard no_grad;
  std::mt19937_64 rng(seed);
  const HarmonicPrior prior = HarmonicPrior::build(sample.ligand);
  const double dt = 1.0 / static_cast<double>(steps);

  Trajectory traj;
  traj.id = sample.id;
  FlowInput in;
  in.sample = &sample;
  in.x_t = prior.sample(sample.pocket.center, rng);
  in.x_self = prior.sample(sample.pocket.center, rng);
  in.a_self = mask_estimate(sample.pocket.size());
  for (std::size_t k = 0; k < steps; ++k) {
    in.t = static_cast<double>(k) * dt;
    const FlowOutput out = model.forward(in);
    FlowState state;
    state.t = in.t;
    state.x_t = in.x_t;
    state.x1_estimate = to_coords(out.positions.back().value());
    if (!state.x1_estimate.allFinite()) {
      throw std::runtime_error("non-finite coordinates at integration step " + std::to_string(k) + " for '" +
                               sample.id + "'");
    }
    if (out.residue_logits.defined()) {
      state.probabilities = diff::softmax(out.residue_logits, 1).value();
      in.a_self = probability_estimate(state.probabilities);
    }
    in.x_self = state.x1_estimate;
    if (k + 1 < steps) in.x_t = euler_step(in.x_t, state.x1_estimate, in.t, dt);
    traj.states.push_back(std::move(state));
  }
  traj.final_x = traj.states.back().x1_estimate;
  traj.final_probabilities = traj.states.back().probabilities;
  if (model.designs_residues()) {
    const Array& p = traj.final_probabilities;
    for (std::size_t i = 0; i < p.shape[0]; ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < p.shape[1]; ++c)
        if (p.at(i, c) > p.at(i, best)) best = c;
      traj.designed.push_back(static_cast<int>(best));
    }
  }
  return traj;
}

double mean_entropy(const Array& p) {
  if (p.shape.rank() != 2 || p.shape[0] == 0) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (std::size_t i = 0; i < p.shape[0]; ++i)
    for (std::size_t c = 0; c < p.shape[1]; ++c) {
      const double q = p.at(i, c);
      if (q > 0.0) total -= q * std::log(q);
    }
  return total / static_cast<double>(p.shape[0]);
}

std::vector<TraceRow> entropy_trace(const Trajectory& traj) {
  std::vector<TraceRow> rows;
  if (traj.states.empty()) return rows;
  const mol::Coords& final_x = traj.states.back().x1_estimate;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const FlowState& s = traj.states[k];
    rows.push_back({k, s.t, metrics::rmsd(s.x1_estimate, final_x), mean_entropy(s.probabilities)});
  }
  return rows;
}

namespace {

nlohmann::json flat(const mol::Coords& x) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) j.push_back({x(i, 0), x(i, 1), x(i, 2)});
  return j;
}

mol::Coords unflat(const nlohmann::json& j) {
  mol::Coords x(static_cast<Eigen::Index>(j.size()), 3);
  for (std::size_t i = 0; i < j.size(); ++i)
    for (std::size_t d = 0; d < 3; ++d) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = j[i][d].get<double>();
  return x;
}

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const auto L = traj.final_probabilities.shape.rank() == 2 ? traj.final_probabilities.shape[0] : 0;
  nlohmann::json header = {{"id", traj.id}, {"steps", traj.states.size()}, {"atoms", traj.final_x.rows()},
                           {"residues", L}, {"designed", traj.designed}};
  out << header.dump() << '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const FlowState& s = traj.states[k];
    nlohmann::json row = {{"step", k}, {"t", s.t}, {"x_t", flat(s.x_t)}, {"x1", flat(s.x1_estimate)}};
    if (s.probabilities.shape.rank() == 2) {
      nlohmann::json probs = nlohmann::json::array();
      for (std::size_t i = 0; i < s.probabilities.shape[0]; ++i) {
        std::vector<double> r(s.probabilities.data.begin() + static_cast<std::ptrdiff_t>(i * s.probabilities.shape[1]),
                              s.probabilities.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * s.probabilities.shape[1]));
        probs.push_back(r);
      }
      row["probabilities"] = probs;
    }
    out << row.dump() << '\n';
  }
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory traj;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trajectory");
  const auto header = nlohmann::json::parse(line);
  traj.id = header.at("id").get<std::string>();
  traj.designed = header.at("designed").get<std::vector<int>>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = nlohmann::json::parse(line);
    FlowState s;
    s.t = row.at("t").get<double>();
    s.x_t = unflat(row.at("x_t"));
    s.x1_estimate = unflat(row.at("x1"));
    if (row.contains("probabilities")) {
      const auto& p = row["probabilities"];
      const std::size_t rows = p.size(), cols = rows ? p[0].size() : 0;
      s.probabilities = Array(Shape{rows, cols});
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) s.probabilities.at(i, c) = p[i][c].get<double>();
    }
    traj.states.push_back(std::move(s));
  }
  if (traj.states.size() != header.at("steps").get<std::size_t>()) {
    throw std::runtime_error("trajectory '" + traj.id + "' is truncated");
  }
  if (!traj.states.empty()) {
    traj.final_x = traj.states.back().x1_estimate;
    traj.final_probabilities = traj.states.back().probabilities;
  }
  return traj;
}

}  // namespace flowsite::flow
