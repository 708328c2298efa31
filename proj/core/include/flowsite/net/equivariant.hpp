// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "flowsite/flow/model.hpp"
#include "flowsite/mol/radius_graph.hpp"
#include "flowsite/mol/types.hpp"
#include "flowsite/net/layers.hpp"

namespace flowsite::net {

struct EquivariantConfig {
  std::size_t layers = 6;
  std::size_t scalars = 32;
  std::size_t vectors = 8;
  std::size_t psi_hidden = 64;
  RbfSpec distance{0.0, 50.0, 32};
  RbfSpec time{0.0, 1.0, 16};
  mol::RadiusCutoffs cutoffs{};
  double bn_momentum = 0.1;
  double bn_eps = 1e-5;
  double position_gain = 0.1;  // init scale of the position heads
};

/// Node state: scalars (N, ns) and vectors (N, 3, nv).
struct IrrepFeatures {
  Var scalars;
  Var vectors;
};

/// Channel wiring of the order<=1 tensor product of node features (cs
/// scalars, cv vectors) with an edge's harmonics (y0 scalar, y1 vector).
/// Weight columns, in order:
///   [0, cs)                 scalar * y0 -> scalar
///   [cs, cs+cv)             vector . y1 -> scalar
///   [cs+cv, 2cs+cv)         scalar * y1 -> vector
///   [2cs+cv, 2cs+2cv)       vector * y0 -> vector
///   [2cs+2cv, 2cs+3cv)      vector x y1 -> vector (only with `cross`)
/// Output scalars are [scalar*y0 | vector.y1]; output vectors are
/// [vector*y0 | scalar*y1 | vector x y1].
struct TensorProductWiring {
  std::size_t scalars = 0;
  std::size_t vectors = 0;
  bool cross = false;

  std::size_t weight_count() const { return 2 * scalars + (cross ? 3 : 2) * vectors; }
  std::size_t out_scalars() const { return scalars + vectors; }
  std::size_t out_vectors() const { return scalars + (cross ? 2 : 1) * vectors; }
};

/// Edge-wise tensor product. `y0` is (E) or undefined (meaning 1), `y1` is
/// (E, 3), `weights` is (E, wiring.weight_count()).
IrrepFeatures tp_l1(const IrrepFeatures& a, const Var& y0, const Var& y1, const Var& weights,
                    const TensorProductWiring& wiring);

/// One edge kind in global node numbering (ligand atoms first, then residues).
struct EdgeSet {
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  Array features;   // (E, F)
  Array direction;  // (E, 3) unit vector from receiver to sender; zero when coincident

  std::size_t size() const { return src.size(); }
};

struct StackGeometry {
  std::array<EdgeSet, mol::kNumEdgeKinds> kinds;
  std::vector<double> inv_degree;  // 1 / max(1, incoming edges) per node
  std::size_t nodes = 0;
};

std::size_t edge_feature_width(mol::EdgeKind kind, const EquivariantConfig& config);

/// Radius graph over ligand positions `x` and residue Calphas with edge
/// features: distance RBF on every edge; ligand pairs also carry the RBF of
/// their distance in `x_self` and a bonded flag.
StackGeometry stack_geometry(const mol::Coords& x, const mol::Coords& ca, const mol::Coords& x_self,
                             const mol::LigandGraph& ligand, const EquivariantConfig& config);

/// Disjoint union; node indices of each part are shifted past the previous parts.
StackGeometry merge_geometry(const std::vector<StackGeometry>& parts);

/// Scalars: per-channel batch norm with affine. Vectors: divided by the
/// root-mean-square norm per channel, times a learned positive scale.
class EquivariantBatchNorm {
 public:
  EquivariantBatchNorm() = default;
  EquivariantBatchNorm(ParameterStore& store, flow::BufferStore& buffers, const std::string& name,
                       std::size_t scalars, std::size_t vectors, double momentum, double eps);

  IrrepFeatures operator()(const IrrepFeatures& h, bool training, bool update_statistics);

 private:
  Parameter* gamma_ = nullptr;
  Parameter* beta_ = nullptr;
  Parameter* log_scale_ = nullptr;
  Array* running_mean_ = nullptr;
  Array* running_var_ = nullptr;
  Array* running_sq_norm_ = nullptr;
  double momentum_ = 0.1;
  double eps_ = 1e-5;
};

struct StackInput {
  const mol::LigandGraph* ligand = nullptr;
  Array ligand_scalars;   // (n, F_l)
  Array residue_scalars;  // (L, F_r)
  Array residue_vectors;  // (L, 3, nv)
  mol::Coords x_t;
  mol::Coords ca;
  mol::Coords x_self;
  bool training = false;
  bool update_statistics = false;
  /// Detached positions entering each layer. Filled when empty and reused
  /// otherwise, which freezes everything the gradient does not see (for
  /// finite-difference checks).
  std::vector<mol::Coords>* pinned_geometry = nullptr;
};

struct StackOutput {
  std::vector<Var> positions;  // x^1 .. x^K, each (n, 3)
  IrrepFeatures features;      // after the last layer, all nodes
};

class EquivariantStack {
 public:
  EquivariantStack() = default;
  EquivariantStack(ParameterStore& store, flow::BufferStore& buffers, std::mt19937_64& rng,
                   const EquivariantConfig& config, std::size_t ligand_in, std::size_t residue_in,
                   const std::string& prefix = "tfn");

  StackOutput run(const StackInput& input);
  /// One graph holding every input; batch norm statistics span all of them.
  std::vector<StackOutput> run_batch(const std::vector<StackInput>& inputs);

  /// h^{k+1} = h^k + BN(mix(mean of incoming messages)); x^{k+1} = detach(x^k) + Phi(h^{k+1}).
  /// `offsets[i]` is the first node of complex i, whose ligand atoms come first.
  std::pair<IrrepFeatures, std::vector<Var>> refinement_layer(std::size_t k, const IrrepFeatures& h,
                                                              const std::vector<Var>& x,
                                                              const StackGeometry& geometry,
                                                              const std::vector<std::size_t>& offsets,
                                                              bool training, bool update_statistics);

  const EquivariantConfig& config() const { return config_; }
  const TensorProductWiring& wiring() const { return wiring_; }
  Linear& position_head(std::size_t k) { return layers_[k].phi; }

 private:
  struct Psi {
    Linear edge;
    Linear receiver;
    Linear sender;
    Linear out;
  };
  struct Layer {
    std::array<Psi, mol::kNumEdgeKinds> psi;
    Linear mix_scalars;
    Linear mix_vectors;
    EquivariantBatchNorm norm;
    Linear phi;
  };

  EquivariantConfig config_;
  TensorProductWiring wiring_;
  Linear ligand_embed_;
  Linear residue_embed_;
  std::vector<Layer> layers_;
};

}  // namespace flowsite::net
