// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace flowsite::mol {

using Vec3 = Eigen::Vector3d;
/// n x 3 coordinates in Angstrom, one row per atom or node.
using Coords = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-width per-atom chemistry vector. Slot order: atomic number,
/// chirality, degree, formal charge, implicit valence, hydrogen count,
/// hybridization, aromatic, ring count, then six ring-membership flags
/// (size 5 / size 6 rings).
inline constexpr std::size_t kAtomFeatureWidth = 15;
using AtomFeatures = std::array<double, kAtomFeatureWidth>;

enum AtomFeatureSlot : std::size_t {
  kSlotAtomicNumber = 0,
  kSlotChirality = 1,
  kSlotDegree = 2,
  kSlotFormalCharge = 3,
  kSlotImplicitValence = 4,
  kSlotHydrogens = 5,
  kSlotHybridization = 6,
  kSlotAromatic = 7,
  kSlotRingCount = 8,
  kSlotRingFlags = 9,
};

struct LigandAtom {
  int element = 6;
  std::string name;
  AtomFeatures features{};
};

/// Heavy-atom chemical graph of a (multi-)ligand.
struct LigandGraph {
  std::vector<LigandAtom> atoms;
  /// Row-major n x n symmetric bond matrix with zero diagonal.
  std::vector<std::uint8_t> adjacency;
  /// Connected-component id per atom (0..k-1 in order of first appearance).
  std::vector<int> component;
  /// Source molecule per atom (distinct chain/resname/resseq in the file).
  std::vector<int> molecule;
  std::optional<Coords> coords;

  std::size_t size() const { return atoms.size(); }
  bool bonded(std::size_t i, std::size_t j) const { return adjacency[i * size() + j] != 0; }
  void set_bond(std::size_t i, std::size_t j, bool on = true);
  std::size_t degree(std::size_t i) const;
  std::size_t num_components() const;
  std::size_t num_bonds() const;
  std::vector<std::pair<std::size_t, std::size_t>> bonds() const;

  /// Throws DataError when an invariant does not hold.
  void validate() const;
};

struct NamedAtom {
  std::string name;
  int element = 6;
  Vec3 pos = Vec3::Zero();
};

struct Residue {
  int type = 20;  // kMask
  char chain = 'A';
  int seq = 0;
  Vec3 n = Vec3::Zero();
  Vec3 ca = Vec3::Zero();
  Vec3 c = Vec3::Zero();
  Vec3 o = Vec3::Zero();
  /// Side-chain heavy atoms, empty unless parsed with side chains.
  std::vector<NamedAtom> side_chain;

  /// Backbone plus side-chain heavy atom positions.
  std::vector<Vec3> heavy_atoms() const;
};

struct PocketBackbone {
  std::vector<Residue> residues;
  Vec3 center = Vec3::Zero();

  std::size_t size() const { return residues.size(); }
  Coords ca_coords() const;
  void validate() const;
};

/// Up to four side-chain torsions per residue.
struct Torsions {
  std::vector<std::array<double, 4>> angles;
  std::vector<std::array<bool, 4>> mask;

  bool any() const;
};

/// One training or inference unit.
struct ComplexSample {
  std::string id;
  LigandGraph ligand;  // coords hold the ground-truth pose
  PocketBackbone pocket;
  std::vector<bool> contact;
  Torsions torsions;
  bool fake_ligand = false;

  const Coords& truth() const { return *ligand.coords; }
  std::size_t num_contacts() const;
};

enum class EdgeKind : std::size_t { kLigLig = 0, kProtProt = 1, kLigProt = 2, kProtLig = 3 };
inline constexpr std::size_t kNumEdgeKinds = 4;

struct EdgeList {
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  std::vector<double> dist;

  std::size_t size() const { return src.size(); }
};

/// Directed edges by kind. Ligand and residue nodes are indexed separately;
/// for kLigProt src is a ligand atom and dst a residue, kProtLig the reverse.
struct RadiusGraph {
  std::array<EdgeList, kNumEdgeKinds> edges;

  const EdgeList& operator[](EdgeKind k) const { return edges[static_cast<std::size_t>(k)]; }
  EdgeList& operator[](EdgeKind k) { return edges[static_cast<std::size_t>(k)]; }
  std::size_t total_edges() const;
};

}  // namespace flowsite::mol
