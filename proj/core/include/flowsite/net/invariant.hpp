// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "flowsite/mol/radius_graph.hpp"
#include "flowsite/mol/types.hpp"
#include "flowsite/net/layers.hpp"

namespace flowsite::net {

struct InvariantConfig {
  std::size_t layers = 4;
  std::size_t hidden = 64;
  std::size_t torsions = 4;
  RbfSpec edge{0.0, 20.0, 16};
  RbfSpec intra{0.0, 6.0, 8};
  double virtual_distance = 1.5;
  mol::RadiusCutoffs cutoffs{};
};

struct GatEdges {
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  Array features;  // (E, F)

  std::size_t size() const { return src.size(); }
};

struct GatGraph {
  std::array<GatEdges, mol::kNumEdgeKinds> kinds;
  std::size_t nodes = 0;
  std::vector<double> no_incoming;  // 1 for nodes without incoming edges
};

std::size_t invariant_edge_width(mol::EdgeKind kind, const InvariantConfig& config);

/// Edge features from the ligand pose `x` and the pocket backbone: ligand
/// pairs get a distance RBF and a bonded flag, residue pairs RBFs of all 25
/// distances among their {N, Calpha, C, O, virtual} atoms, and ligand-residue
/// pairs RBFs of the atom's distances to N, Calpha, C, O.
GatGraph invariant_graph(const mol::Coords& x, const mol::PocketBackbone& pocket, const mol::LigandGraph& ligand,
                         const InvariantConfig& config);

/// Per edge kind: attention Pi(h_j | e_ji | h_i), value Xi(e_ji | h_j), and
/// edge update Omega(h_j | e_ji | h_i). Concatenated inputs are applied as
/// sums of per-part linear maps.
struct GatLayerWeights {
  struct Kind {
    Linear pi_src, pi_edge, pi_dst, pi_out;
    Linear xi_edge, xi_src, xi_out;
    Linear omega_src, omega_edge, omega_dst;
  };
  std::array<Kind, mol::kNumEdgeKinds> kinds;

  static GatLayerWeights create(ParameterStore& store, const std::string& name, std::size_t hidden,
                                std::mt19937_64& rng);
};

/// h_i <- sum_j a_ji v_j with a_ji the softmax of w_ji over all edges into i;
/// nodes without incoming edges keep their features. `attention`, when given,
/// receives the per-edge weights in kind order.
Var gat_layer(const GatLayerWeights& w, const Var& h, const std::array<Var, mol::kNumEdgeKinds>& edges,
              const GatGraph& graph, Var* attention = nullptr);

/// e_ji <- Omega(h_j | e_ji | h_i).
std::array<Var, mol::kNumEdgeKinds> edge_update(const GatLayerWeights& w, const Var& h,
                                                const std::array<Var, mol::kNumEdgeKinds>& edges,
                                                const GatGraph& graph);

struct TorsionLoss {
  Var loss;
  Var angular;       // masked mean of |s/|s| - (sin, cos)|^2
  Var norm_penalty;  // masked mean of ||s| - 1|
};

/// `pred` is (L, 2*T) with (sin, cos) pairs; masked torsions are ignored and
/// an all-masked input gives zero.
TorsionLoss torsion_loss(const Var& pred, const mol::Torsions& truth, double norm_weight = 0.02);

class InvariantNet {
 public:
  struct Output {
    Var nodes;           // (n + L, hidden)
    Var residue_logits;  // (L, 20)
    Var torsions;        // (L, 2 * torsions)
  };

  InvariantNet() = default;
  InvariantNet(ParameterStore& store, std::mt19937_64& rng, const InvariantConfig& config, std::size_t ligand_in,
               std::size_t residue_in, const std::string& prefix = "gat");

  Output forward(const Var& ligand_in, const Var& residue_in, const GatGraph& graph) const;

  const InvariantConfig& config() const { return config_; }
  const Linear& residue_head() const { return residue_head_; }

 private:
  InvariantConfig config_;
  Linear ligand_embed_;
  Linear residue_embed_;
  std::array<Linear, mol::kNumEdgeKinds> edge_embed_;
  std::vector<GatLayerWeights> layers_;
  Linear residue_head_;
  Linear torsion_head_;
};

}  // namespace flowsite::net
