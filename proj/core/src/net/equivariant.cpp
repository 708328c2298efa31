// SPDX-License-Identifier: Apache-2.0

#include "flowsite/net/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flowsite/flow/model.hpp"

namespace flowsite::net {

using namespace diff;

namespace {

Var times(const Var& x, const Var& y) { return y.defined() ? mul(x, y) : x; }

}  // namespace

IrrepFeatures tp_l1(const IrrepFeatures& a, const Var& y0, const Var& y1, const Var& weights,
                    const TensorProductWiring& w) {
  const std::size_t cs = w.scalars, cv = w.vectors;
  const Shape& ws = weights.shape();
  if (ws.rank() != 2 || ws[1] != w.weight_count()) {
    throw std::invalid_argument("shape mismatch in tp_l1 weights: " + ws.str() + " vs " +
                                std::to_string(w.weight_count()) + " columns");
  }
  const Shape& ss = a.scalars.shape();
  const Shape& vs = a.vectors.shape();
  if (ss.rank() != 2 || ss[1] != cs || vs.rank() != 3 || vs[0] != ss[0] || vs[1] != 3 || vs[2] != cv ||
      ws[0] != ss[0]) {
    throw std::invalid_argument("shape mismatch in tp_l1 inputs: " + ss.str() + " vs " + vs.str());
  }
  std::size_t col = 0;
  auto block = [&](std::size_t width) {
    Var b = slice(weights, 1, col, col + width);
    col += width;
    return b;
  };
  const Var w_ss = block(cs), w_vv = block(cv), w_sv = block(cs), w_vs = block(cv);

  const Var y1_v = expand(y1, 2, cv);
  const Var s_y0 = times(a.scalars, y0.defined() ? expand(y0, 1, cs) : Var{});
  const Var scalars = concat({mul(s_y0, w_ss), mul(dot(a.vectors, y1_v, 1), w_vv)}, 1);

  const Var v_y0 = times(a.vectors, y0.defined() ? expand(expand(y0, 1, 3), 2, cv) : Var{});
  std::vector<Var> vectors = {mul(v_y0, expand(w_vs, 1, 3)),
                              mul(mul(expand(a.scalars, 1, 3), expand(y1, 2, cs)), expand(w_sv, 1, 3))};
  if (w.cross) vectors.push_back(mul(cross(a.vectors, y1_v, 1), expand(block(cv), 1, 3)));
  return {scalars, concat(vectors, 2)};
}

std::size_t edge_feature_width(mol::EdgeKind kind, const EquivariantConfig& config) {
  return kind == mol::EdgeKind::kLigLig ? 2 * config.distance.count + 1 : config.distance.count;
}

StackGeometry stack_geometry(const mol::Coords& x, const mol::Coords& ca, const mol::Coords& x_self,
                             const mol::LigandGraph& ligand, const EquivariantConfig& config) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  const std::size_t L = static_cast<std::size_t>(ca.rows());
  const mol::RadiusGraph rg = mol::build_radius_graph(x, ca, config.cutoffs);
  StackGeometry g;
  g.nodes = n + L;
  std::vector<std::size_t> degree(g.nodes, 0);
  auto position = [&](std::size_t global) -> mol::Vec3 {
    return global < n ? mol::Vec3(x.row(static_cast<Eigen::Index>(global)).transpose())
                      : mol::Vec3(ca.row(static_cast<Eigen::Index>(global - n)).transpose());
  };
  for (std::size_t k = 0; k < mol::kNumEdgeKinds; ++k) {
    const auto kind = static_cast<mol::EdgeKind>(k);
    const mol::EdgeList& el = rg[kind];
    const bool src_lig = kind == mol::EdgeKind::kLigLig || kind == mol::EdgeKind::kLigProt;
    const bool dst_lig = kind == mol::EdgeKind::kLigLig || kind == mol::EdgeKind::kProtLig;
    EdgeSet& es = g.kinds[k];
    const std::size_t E = el.size();
    const std::size_t F = edge_feature_width(kind, config);
    es.features = Array(Shape{E, F});
    es.direction = Array(Shape{E, 3});
    for (std::size_t e = 0; e < E; ++e) {
      const std::size_t s = el.src[e] + (src_lig ? 0 : n);
      const std::size_t d = el.dst[e] + (dst_lig ? 0 : n);
      es.src.push_back(s);
      es.dst.push_back(d);
      ++degree[d];
      const mol::Vec3 r = position(s) - position(d);
      const double len = r.norm();
      if (len > 0.0)
        for (std::size_t c = 0; c < 3; ++c) es.direction.at(e, c) = r[static_cast<Eigen::Index>(c)] / len;
      double* row = es.features.data.data() + e * F;
      rbf_embed(el.dist[e], config.distance, row);
      if (kind == mol::EdgeKind::kLigLig) {
        const double ds = (x_self.row(static_cast<Eigen::Index>(el.src[e])) -
                           x_self.row(static_cast<Eigen::Index>(el.dst[e])))
                              .norm();
        rbf_embed(ds, config.distance, row + config.distance.count);
        row[F - 1] = ligand.bonded(el.src[e], el.dst[e]) ? 1.0 : 0.0;
      }
    }
  }
  g.inv_degree.resize(g.nodes);
  for (std::size_t i = 0; i < g.nodes; ++i) g.inv_degree[i] = 1.0 / static_cast<double>(std::max<std::size_t>(1, degree[i]));
  return g;
}

StackGeometry merge_geometry(const std::vector<StackGeometry>& parts) {
  if (parts.size() == 1) return parts.front();
  StackGeometry g;
  for (std::size_t e = 0; e < mol::kNumEdgeKinds; ++e) {
    EdgeSet& out = g.kinds[e];
    std::size_t edges = 0, width = 0, offset = 0;
    for (const auto& p : parts) {
      edges += p.kinds[e].size();
      if (p.kinds[e].size() > 0) width = p.kinds[e].features.shape[1];
    }
    out.features = Array(Shape{edges, width});
    out.direction = Array(Shape{edges, 3});
    std::size_t row = 0;
    for (const auto& p : parts) {
      const EdgeSet& es = p.kinds[e];
      for (std::size_t j = 0; j < es.size(); ++j) {
        out.src.push_back(es.src[j] + offset);
        out.dst.push_back(es.dst[j] + offset);
      }
      if (es.size() > 0) {
        std::copy(es.features.data.begin(), es.features.data.end(), out.features.data.begin() + static_cast<std::ptrdiff_t>(row * width));
        std::copy(es.direction.data.begin(), es.direction.data.end(), out.direction.data.begin() + static_cast<std::ptrdiff_t>(row * 3));
      }
      row += es.size();
      offset += p.nodes;
    }
  }
  for (const auto& p : parts) {
    g.inv_degree.insert(g.inv_degree.end(), p.inv_degree.begin(), p.inv_degree.end());
    g.nodes += p.nodes;
  }
  return g;
}

EquivariantBatchNorm::EquivariantBatchNorm(ParameterStore& store, flow::BufferStore& buffers,
                                           const std::string& name, std::size_t scalars,
                                           std::size_t vectors, double momentum, double eps)
    : momentum_(momentum), eps_(eps) {
  gamma_ = &store.add(name + ".gamma", Array(Shape{scalars}, 1.0));
  beta_ = &store.add(name + ".beta", Array(Shape{scalars}));
  log_scale_ = &store.add(name + ".log_scale", Array(Shape{vectors}));
  running_mean_ = &(buffers[name + ".running_mean"] = Array(Shape{scalars}));
  running_var_ = &(buffers[name + ".running_var"] = Array(Shape{scalars}, 1.0));
  running_sq_norm_ = &(buffers[name + ".running_sq_norm"] = Array(Shape{vectors}, 1.0));
}

IrrepFeatures EquivariantBatchNorm::operator()(const IrrepFeatures& h, bool training, bool update) {
  const std::size_t N = h.scalars.shape()[0];
  Var mu, var, sq;
  if (training) {
    mu = mean(h.scalars, 0);
    var = mean(square(sub(h.scalars, expand(mu, 0, N))), 0);
    sq = mean(sum(square(h.vectors), 1), 0);
    if (update) {
      const double m = momentum_;
      for (std::size_t c = 0; c < running_mean_->numel(); ++c) {
        (*running_mean_)[c] = (1 - m) * (*running_mean_)[c] + m * mu.value()[c];
        (*running_var_)[c] = (1 - m) * (*running_var_)[c] + m * var.value()[c];
      }
      for (std::size_t c = 0; c < running_sq_norm_->numel(); ++c)
        (*running_sq_norm_)[c] = (1 - m) * (*running_sq_norm_)[c] + m * sq.value()[c];
    }
  } else {
    mu = constant(*running_mean_);
    var = constant(*running_var_);
    sq = constant(*running_sq_norm_);
  }
  const Var inv_sd = div(gamma_->node, sqrt(add_scalar(var, eps_)));
  const Var s = add(mul(sub(h.scalars, expand(mu, 0, N)), expand(inv_sd, 0, N)), expand(beta_->node, 0, N));
  const Var v_scale = div(exp(log_scale_->node), sqrt(add_scalar(sq, eps_)));
  const Var v = mul(h.vectors, expand(expand(v_scale, 0, 3), 0, N));
  return {s, v};
}

EquivariantStack::EquivariantStack(ParameterStore& store, flow::BufferStore& buffers, std::mt19937_64& rng,
                                   const EquivariantConfig& config, std::size_t ligand_in,
                                   std::size_t residue_in, const std::string& prefix)
    : config_(config), wiring_{config.scalars, config.vectors, false} {
  if (config.layers == 0) throw std::invalid_argument("equivariant stack needs at least one layer");
  ligand_embed_ = Linear::create(store, prefix + ".ligand_embed", ligand_in, config.scalars, rng);
  residue_embed_ = Linear::create(store, prefix + ".residue_embed", residue_in, config.scalars, rng);
  const char* kind_names[] = {"lig_lig", "prot_prot", "lig_prot", "prot_lig"};
  for (std::size_t k = 0; k < config.layers; ++k) {
    const std::string p = prefix + ".layer" + std::to_string(k);
    Layer layer;
    for (std::size_t e = 0; e < mol::kNumEdgeKinds; ++e) {
      const std::string q = p + ".psi_" + kind_names[e];
      Psi& psi = layer.psi[e];
      psi.edge = Linear::create(store, q + ".edge", edge_feature_width(static_cast<mol::EdgeKind>(e), config),
                                config.psi_hidden, rng);
      psi.receiver = Linear::create(store, q + ".receiver", config.scalars, config.psi_hidden, rng, false);
      psi.sender = Linear::create(store, q + ".sender", config.scalars, config.psi_hidden, rng, false);
      psi.out = Linear::create(store, q + ".out", config.psi_hidden, wiring_.weight_count(), rng);
    }
    layer.mix_scalars = Linear::create(store, p + ".mix_scalars", wiring_.out_scalars(), config.scalars, rng);
    layer.mix_vectors = Linear::create(store, p + ".mix_vectors", wiring_.out_vectors(), config.vectors, rng, false);
    layer.norm = EquivariantBatchNorm(store, buffers, p + ".norm", config.scalars, config.vectors,
                                      config.bn_momentum, config.bn_eps);
    layer.phi = Linear::create(store, p + ".phi", config.vectors, 1, rng, false, config.position_gain);
    layers_.push_back(std::move(layer));
  }
}

std::pair<IrrepFeatures, std::vector<Var>> EquivariantStack::refinement_layer(
    std::size_t k, const IrrepFeatures& h, const std::vector<Var>& x, const StackGeometry& geometry,
    const std::vector<std::size_t>& offsets, bool training, bool update_statistics) {
  Layer& layer = layers_.at(k);
  const std::size_t N = geometry.nodes;
  std::vector<Var> msg_s, msg_v;
  std::vector<std::size_t> dst;
  for (std::size_t e = 0; e < mol::kNumEdgeKinds; ++e) {
    const EdgeSet& es = geometry.kinds[e];
    if (es.size() == 0) continue;
    const Psi& psi = layer.psi[e];
    const Var hidden = silu(add(add(psi.edge(constant(es.features)), gather_rows(psi.receiver(h.scalars), es.dst)),
                                gather_rows(psi.sender(h.scalars), es.src)));
    const Var weights = psi.out(hidden);
    const IrrepFeatures src{gather_rows(h.scalars, es.src), gather_rows(h.vectors, es.src)};
    const IrrepFeatures m = tp_l1(src, Var{}, constant(es.direction), weights, wiring_);
    msg_s.push_back(m.scalars);
    msg_v.push_back(m.vectors);
    dst.insert(dst.end(), es.dst.begin(), es.dst.end());
  }

  IrrepFeatures update;
  if (dst.empty()) {
    update.scalars = constant(Array(Shape{N, wiring_.out_scalars()}));
    update.vectors = constant(Array(Shape{N, 3, wiring_.out_vectors()}));
  } else {
    update.scalars = scale_rows(scatter_add_rows(concat(msg_s, 0), dst, N), geometry.inv_degree);
    update.vectors = scale_rows(scatter_add_rows(concat(msg_v, 0), dst, N), geometry.inv_degree);
  }
  update.scalars = layer.mix_scalars(update.scalars);
  update.vectors = reshape(layer.mix_vectors(reshape(update.vectors, Shape{3 * N, wiring_.out_vectors()})),
                           Shape{N, 3, config_.vectors});
  const IrrepFeatures normed = layer.norm(update, training, update_statistics);
  IrrepFeatures next{add(h.scalars, normed.scalars), add(h.vectors, normed.vectors)};

  std::vector<Var> moved;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t n = x[i].shape()[0];
    const Var lig_v = reshape(slice(next.vectors, 0, offsets[i], offsets[i] + n), Shape{3 * n, config_.vectors});
    const Var step = reshape(layer.phi(lig_v), Shape{n, 3});
    moved.push_back(add(detach(x[i]), step));
  }
  return {next, moved};
}

StackOutput EquivariantStack::run(const StackInput& in) { return run_batch({in}).front(); }

std::vector<StackOutput> EquivariantStack::run_batch(const std::vector<StackInput>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("equivariant stack needs at least one input");
  const std::size_t B = inputs.size();
  std::vector<std::size_t> offsets, ligand_nodes, residue_nodes;
  std::vector<Var> s_parts, v_parts, x;
  std::size_t nodes = 0;
  for (const auto& in : inputs) {
    const std::size_t n = static_cast<std::size_t>(in.x_t.rows());
    const std::size_t L = static_cast<std::size_t>(in.ca.rows());
    if (n == 0) throw std::invalid_argument("equivariant stack needs at least one ligand atom");
    if (in.training != inputs.front().training) throw std::invalid_argument("mixed training flags in one batch");
    offsets.push_back(nodes);
    ligand_nodes.push_back(n);
    residue_nodes.push_back(L);
    nodes += n + L;
    s_parts.push_back(ligand_embed_(constant(in.ligand_scalars)));
    v_parts.push_back(constant(Array(Shape{n, 3, config_.vectors})));
    if (L > 0) {
      s_parts.push_back(residue_embed_(constant(in.residue_scalars)));
      v_parts.push_back(constant(in.residue_vectors));
    }
    x.push_back(constant(flow::to_array(in.x_t)));
  }
  IrrepFeatures h{concat(s_parts, 0), concat(v_parts, 0)};
  bool update = false;
  for (const auto& in : inputs) update = update || in.update_statistics;

  std::vector<StackOutput> out(B);
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    // Graph and geometry come from the current positions, outside the gradient record.
    std::vector<StackGeometry> parts;
    for (std::size_t i = 0; i < B; ++i) {
      const StackInput& in = inputs[i];
      mol::Coords at = flow::to_coords(x[i].value());
      if (in.pinned_geometry) {
        if (in.pinned_geometry->size() <= k) in.pinned_geometry->push_back(at);
        at = (*in.pinned_geometry)[k];
        x[i] = constant(flow::to_array(at));
      }
      parts.push_back(stack_geometry(at, in.ca, in.x_self, *in.ligand, config_));
    }
    auto [next_h, next_x] =
        refinement_layer(k, h, x, merge_geometry(parts), offsets, inputs.front().training, update);
    h = std::move(next_h);
    x = std::move(next_x);
    for (std::size_t i = 0; i < B; ++i) out[i].positions.push_back(x[i]);
  }
  for (std::size_t i = 0; i < B; ++i) {
    const std::size_t end = offsets[i] + ligand_nodes[i] + residue_nodes[i];
    out[i].features = B == 1 ? h : IrrepFeatures{slice(h.scalars, 0, offsets[i], end), slice(h.vectors, 0, offsets[i], end)};
  }
  return out;
}

}  // namespace flowsite::net
