// SPDX-License-Identifier: Apache-2.0

#include "flowsite/net/invariant.hpp"

#include <stdexcept>

#include "flowsite/mol/elements.hpp"
#include "flowsite/net/features.hpp"

namespace flowsite::net {

using namespace diff;

std::size_t invariant_edge_width(mol::EdgeKind kind, const InvariantConfig& config) {
  switch (kind) {
    case mol::EdgeKind::kLigLig: return config.edge.count + 1;
    case mol::EdgeKind::kProtProt: return 25 * config.edge.count;
    default: return 4 * config.edge.count;
  }
}

GatGraph invariant_graph(const mol::Coords& x, const mol::PocketBackbone& pocket, const mol::LigandGraph& ligand,
                         const InvariantConfig& config) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  const mol::RadiusGraph rg = mol::build_radius_graph(x, pocket.ca_coords(), config.cutoffs);
  std::vector<std::array<mol::Vec3, 5>> frames;
  for (const auto& r : pocket.residues) frames.push_back(frame_atoms(r, config.virtual_distance));
  auto atom = [&](std::size_t i) { return mol::Vec3(x.row(static_cast<Eigen::Index>(i)).transpose()); };

  GatGraph g;
  g.nodes = n + pocket.size();
  g.no_incoming.assign(g.nodes, 1.0);
  const std::size_t G = config.edge.count;
  for (std::size_t k = 0; k < mol::kNumEdgeKinds; ++k) {
    const auto kind = static_cast<mol::EdgeKind>(k);
    const mol::EdgeList& el = rg[kind];
    GatEdges& ge = g.kinds[k];
    const std::size_t F = invariant_edge_width(kind, config);
    ge.features = Array(Shape{el.size(), F});
    for (std::size_t e = 0; e < el.size(); ++e) {
      const std::size_t s = el.src[e], d = el.dst[e];
      double* row = ge.features.data.data() + e * F;
      switch (kind) {
        case mol::EdgeKind::kLigLig:
          ge.src.push_back(s);
          ge.dst.push_back(d);
          rbf_embed(el.dist[e], config.edge, row);
          row[G] = ligand.bonded(s, d) ? 1.0 : 0.0;
          break;
        case mol::EdgeKind::kProtProt:
          ge.src.push_back(n + s);
          ge.dst.push_back(n + d);
          for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = 0; b < 5; ++b)
              rbf_embed((frames[s][a] - frames[d][b]).norm(), config.edge, row + (a * 5 + b) * G);
          break;
        case mol::EdgeKind::kLigProt:
          ge.src.push_back(s);
          ge.dst.push_back(n + d);
          for (std::size_t a = 0; a < 4; ++a) rbf_embed((atom(s) - frames[d][a]).norm(), config.edge, row + a * G);
          break;
        case mol::EdgeKind::kProtLig:
          ge.src.push_back(n + s);
          ge.dst.push_back(d);
          for (std::size_t a = 0; a < 4; ++a) rbf_embed((atom(d) - frames[s][a]).norm(), config.edge, row + a * G);
          break;
      }
      g.no_incoming[ge.dst.back()] = 0.0;
    }
  }
  return g;
}

GatLayerWeights GatLayerWeights::create(ParameterStore& store, const std::string& name, std::size_t H,
                                        std::mt19937_64& rng) {
  GatLayerWeights w;
  const char* kind_names[] = {"lig_lig", "prot_prot", "lig_prot", "prot_lig"};
  for (std::size_t k = 0; k < mol::kNumEdgeKinds; ++k) {
    const std::string p = name + "." + kind_names[k];
    Kind& kw = w.kinds[k];
    kw.pi_src = Linear::create(store, p + ".pi_src", H, H, rng, false);
    kw.pi_edge = Linear::create(store, p + ".pi_edge", H, H, rng);
    kw.pi_dst = Linear::create(store, p + ".pi_dst", H, H, rng, false);
    kw.pi_out = Linear::create(store, p + ".pi_out", H, 1, rng);
    kw.xi_edge = Linear::create(store, p + ".xi_edge", H, H, rng);
    kw.xi_src = Linear::create(store, p + ".xi_src", H, H, rng, false);
    kw.xi_out = Linear::create(store, p + ".xi_out", H, H, rng);
    // Three summed parts: scale so the sum keeps unit variance.
    kw.omega_src = Linear::create(store, p + ".omega_src", H, H, rng, false, 0.577);
    kw.omega_edge = Linear::create(store, p + ".omega_edge", H, H, rng, true, 0.577);
    kw.omega_dst = Linear::create(store, p + ".omega_dst", H, H, rng, false, 0.577);
  }
  return w;
}

Var gat_layer(const GatLayerWeights& w, const Var& h, const std::array<Var, mol::kNumEdgeKinds>& edges,
              const GatGraph& graph, Var* attention) {
  std::vector<Var> scores, values;
  std::vector<std::size_t> dst;
  for (std::size_t k = 0; k < mol::kNumEdgeKinds; ++k) {
    const GatEdges& ge = graph.kinds[k];
    if (ge.size() == 0) continue;
    const auto& kw = w.kinds[k];
    const Var score_hidden =
        silu(add(add(gather_rows(kw.pi_src(h), ge.src), kw.pi_edge(edges[k])), gather_rows(kw.pi_dst(h), ge.dst)));
    scores.push_back(reshape(kw.pi_out(score_hidden), Shape{ge.size()}));
    values.push_back(kw.xi_out(silu(add(kw.xi_edge(edges[k]), gather_rows(kw.xi_src(h), ge.src)))));
    dst.insert(dst.end(), ge.dst.begin(), ge.dst.end());
  }
  if (dst.empty()) return h;
  const Var a = segment_softmax(concat(scores, 0), dst, graph.nodes);
  if (attention) *attention = a;
  const Var v = concat(values, 0);
  const Var agg = scatter_add_rows(mul(v, expand(a, 1, v.shape()[1])), dst, graph.nodes);
  return add(agg, scale_rows(h, graph.no_incoming));
}

std::array<Var, mol::kNumEdgeKinds> edge_update(const GatLayerWeights& w, const Var& h,
                                                const std::array<Var, mol::kNumEdgeKinds>& edges,
                                                const GatGraph& graph) {
  std::array<Var, mol::kNumEdgeKinds> out;
  for (std::size_t k = 0; k < mol::kNumEdgeKinds; ++k) {
    const GatEdges& ge = graph.kinds[k];
    if (ge.size() == 0) continue;
    const auto& kw = w.kinds[k];
    out[k] = add(add(gather_rows(kw.omega_src(h), ge.src), kw.omega_edge(edges[k])),
                 gather_rows(kw.omega_dst(h), ge.dst));
  }
  return out;
}

TorsionLoss torsion_loss(const Var& pred, const mol::Torsions& truth, double norm_weight) {
  const std::size_t L = truth.angles.size();
  const std::size_t T = 4;
  if (pred.shape() != Shape{L, 2 * T}) {
    throw std::invalid_argument("shape mismatch in torsion_loss: " + pred.shape().str() + " vs " +
                                Shape{L, 2 * T}.str());
  }
  Array target(Shape{L * T, 2});
  std::vector<double> mask(L * T, 0.0);
  double count = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      if (!truth.mask[i][t]) continue;
      target.at(i * T + t, 0) = std::sin(truth.angles[i][t]);
      target.at(i * T + t, 1) = std::cos(truth.angles[i][t]);
      mask[i * T + t] = 1.0;
      count += 1.0;
    }
  }
  TorsionLoss out;
  if (count == 0.0) {
    out.loss = out.angular = out.norm_penalty = constant(Array::scalar(0.0));
    return out;
  }
  const Var s = reshape(pred, Shape{L * T, 2});
  const Var len = norm(s, 1);
  const Var unit = div(s, expand(add_scalar(len, 1e-12), 1, 2));
  const Var angular = sum(square(sub(unit, constant(target))), 1);
  const Var penalty = abs(add_scalar(len, -1.0));
  const Var m = constant(Array(Shape{L * T}, mask));
  out.angular = scale(sum_all(mul(angular, m)), 1.0 / count);
  out.norm_penalty = scale(sum_all(mul(penalty, m)), 1.0 / count);
  out.loss = add(out.angular, scale(out.norm_penalty, norm_weight));
  return out;
}

InvariantNet::InvariantNet(ParameterStore& store, std::mt19937_64& rng, const InvariantConfig& config,
                           std::size_t ligand_in, std::size_t residue_in, const std::string& prefix)
    : config_(config) {
  const std::size_t H = config.hidden;
  ligand_embed_ = Linear::create(store, prefix + ".ligand_embed", ligand_in, H, rng);
  residue_embed_ = Linear::create(store, prefix + ".residue_embed", residue_in, H, rng);
  const char* kind_names[] = {"lig_lig", "prot_prot", "lig_prot", "prot_lig"};
  for (std::size_t k = 0; k < mol::kNumEdgeKinds; ++k) {
    edge_embed_[k] = Linear::create(store, prefix + ".edge_embed_" + kind_names[k],
                                    invariant_edge_width(static_cast<mol::EdgeKind>(k), config), H, rng);
  }
  for (std::size_t l = 0; l < config.layers; ++l)
    layers_.push_back(GatLayerWeights::create(store, prefix + ".layer" + std::to_string(l), H, rng));
  residue_head_ = Linear::create(store, prefix + ".residue_head", H, mol::kNumResidueTypes, rng);
  torsion_head_ = Linear::create(store, prefix + ".torsion_head", H, 2 * config.torsions, rng);
}

InvariantNet::Output InvariantNet::forward(const Var& ligand_in, const Var& residue_in, const GatGraph& graph) const {
  const std::size_t n = ligand_in.shape()[0];
  const std::size_t L = residue_in.shape()[0];
  Var h = concat({ligand_embed_(ligand_in), residue_embed_(residue_in)}, 0);
  std::array<Var, mol::kNumEdgeKinds> edges;
  for (std::size_t k = 0; k < mol::kNumEdgeKinds; ++k)
    if (graph.kinds[k].size() > 0) edges[k] = edge_embed_[k](constant(graph.kinds[k].features));
  for (const auto& layer : layers_) {
    h = gat_layer(layer, h, edges, graph);
    edges = edge_update(layer, h, edges, graph);
  }
  Output out;
  out.nodes = h;
  const Var residues = slice(h, 0, n, n + L);
  out.residue_logits = residue_head_(residues);
  out.torsions = torsion_head_(residues);
  return out;
}

}  // namespace flowsite::net
