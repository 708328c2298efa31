// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/pocket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "flowsite/mol/ligand.hpp"

namespace flowsite::mol {

namespace {

struct NoisyDistances {
  std::vector<double> to_ligand;
  std::mt19937_64 rng;
};

NoisyDistances noisy_ligand_distances(const PocketBackbone& protein, const Coords& ligand,
                                      double sigma, std::uint64_t seed) {
  NoisyDistances out{{}, std::mt19937_64(seed)};
  std::normal_distribution<double> noise(0.0, 1.0);
  for (const auto& r : protein.residues) {
    const double eps = noise(out.rng);
    out.to_ligand.push_back(min_distance(r.ca, ligand) + sigma * eps);
  }
  return out;
}

Vec3 mean_ca(const PocketBackbone& protein, const std::vector<bool>& keep) {
  Vec3 sum = Vec3::Zero();
  int n = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) {
      sum += protein.residues[i].ca;
      ++n;
    }
  }
  return n > 0 ? Vec3(sum / n) : Vec3(Vec3::Constant(std::numeric_limits<double>::quiet_NaN()));
}

// Calpha mean of residues under the center cutoff (by `dist`), falling back to
// the single nearest residue when none qualifies, plus center noise.
Vec3 noisy_center(const PocketBackbone& protein, const std::vector<double>& dist,
                  const PocketOptions& options, std::mt19937_64& rng) {
  std::vector<bool> keep(dist.size());
  bool any = false;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    keep[i] = dist[i] < options.center_cutoff;
    any = any || keep[i];
  }
  if (!any) {
    const auto nearest = std::min_element(dist.begin(), dist.end()) - dist.begin();
    keep[static_cast<std::size_t>(nearest)] = true;
  }
  Vec3 center = mean_ca(protein, keep);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 0; k < 3; ++k) center[k] += options.sigma_center * noise(rng);
  return center;
}

PocketBackbone subset(const PocketBackbone& protein, const std::vector<bool>& keep, const Vec3& center,
                      const std::string& id) {
  PocketBackbone out;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) out.residues.push_back(protein.residues[i]);
  if (out.residues.empty()) {
    throw DataError("empty pocket for complex '" + id + "'");
  }
  out.center = center;
  return out;
}

}  // namespace

double min_distance(const Vec3& p, const Coords& ligand) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ligand.rows(); ++i)
    best = std::min(best, (ligand.row(i).transpose() - p).norm());
  return best;
}

double radius_pocket_radius(double diameter) { return 7.0 + std::min(5.0, diameter / 2.0); }

PocketBackbone extract_distance_pocket(const PocketBackbone& protein, const Coords& ligand,
                                       const PocketOptions& options, std::uint64_t seed,
                                       const std::string& complex_id) {
  if (ligand.rows() == 0) throw DataError("pocket extraction needs ligand coordinates");
  auto nd = noisy_ligand_distances(protein, ligand, options.sigma_distance, seed);
  std::vector<bool> keep(protein.size());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = nd.to_ligand[i] < options.include_cutoff;
  const Vec3 center = noisy_center(protein, nd.to_ligand, options, nd.rng);
  return subset(protein, keep, center, complex_id);
}

PocketBackbone extract_radius_pocket(const PocketBackbone& protein, const Coords& ligand,
                                     const PocketOptions& options, std::uint64_t seed,
                                     const std::string& complex_id) {
  if (ligand.rows() == 0) throw DataError("pocket extraction needs ligand coordinates");
  std::vector<bool> near(protein.size());
  bool any = false;
  for (std::size_t i = 0; i < near.size(); ++i) {
    near[i] = min_distance(protein.residues[i].ca, ligand) < options.center_cutoff;
    any = any || near[i];
  }
  if (!any) throw DataError("no residue within 8 A of the ligand for complex '" + complex_id + "'");
  const Vec3 com = mean_ca(protein, near);
  const double radius = radius_pocket_radius(ligand_diameter(ligand));

  auto nd = noisy_ligand_distances(protein, ligand, options.sigma_distance, seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<bool> keep(protein.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const double d = (protein.residues[i].ca - com).norm() + options.sigma_distance * noise(nd.rng);
    keep[i] = d < radius;
  }
  const Vec3 center = noisy_center(protein, nd.to_ligand, options, nd.rng);
  return subset(protein, keep, center, complex_id);
}

PocketBackbone extract_pocket(PocketMode mode, const PocketBackbone& protein, const Coords& ligand,
                              const PocketOptions& options, std::uint64_t seed,
                              const std::string& complex_id) {
  return mode == PocketMode::kDistance
             ? extract_distance_pocket(protein, ligand, options, seed, complex_id)
             : extract_radius_pocket(protein, ligand, options, seed, complex_id);
}

std::vector<bool> contact_mask(const PocketBackbone& pocket, const Coords& ligand, double cutoff) {
  std::vector<bool> out;
  for (const auto& r : pocket.residues) {
    bool hit = false;
    for (const auto& p : r.heavy_atoms()) {
      if (min_distance(p, ligand) <= cutoff) {
        hit = true;
        break;
      }
    }
    out.push_back(hit);
  }
  return out;
}

double dihedral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 b0 = a - b;
  const Vec3 b1 = (c - b).normalized();
  const Vec3 b2 = d - c;
  const Vec3 v = b0 - b0.dot(b1) * b1;
  const Vec3 w = b2 - b2.dot(b1) * b1;
  const double x = v.dot(w);
  const double y = b1.cross(v).dot(w);
  return std::atan2(y, x);
}

Torsions side_chain_torsions(const PocketBackbone& pocket) {
  // Chi-angle atom quadruples per residue type (ARNDCQEGHILKMFPSTWYV order).
  using Quad = std::array<const char*, 4>;
  static const std::map<int, std::vector<Quad>> kChi = {
      {1, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD"}, {"CB", "CG", "CD", "NE"}, {"CG", "CD", "NE", "CZ"}}},
      {2, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "OD1"}}},
      {3, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "OD1"}}},
      {4, {{"N", "CA", "CB", "SG"}}},
      {5, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD"}, {"CB", "CG", "CD", "OE1"}}},
      {6, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD"}, {"CB", "CG", "CD", "OE1"}}},
      {8, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "ND1"}}},
      {9, {{"N", "CA", "CB", "CG1"}, {"CA", "CB", "CG1", "CD1"}}},
      {10, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD1"}}},
      {11, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD"}, {"CB", "CG", "CD", "CE"}, {"CG", "CD", "CE", "NZ"}}},
      {12, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "SD"}, {"CB", "CG", "SD", "CE"}}},
      {13, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD1"}}},
      {14, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD"}}},
      {15, {{"N", "CA", "CB", "OG"}}},
      {16, {{"N", "CA", "CB", "OG1"}}},
      {17, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD1"}}},
      {18, {{"N", "CA", "CB", "CG"}, {"CA", "CB", "CG", "CD1"}}},
      {19, {{"N", "CA", "CB", "CG1"}}},
  };
  Torsions out;
  for (const auto& r : pocket.residues) {
    std::array<double, 4> ang{};
    std::array<bool, 4> mask{};
    const auto it = kChi.find(r.type);
    if (it != kChi.end() && !r.side_chain.empty()) {
      auto lookup = [&r](const char* name, Vec3& p) {
        const std::string n(name);
        if (n == "N") { p = r.n; return true; }
        if (n == "CA") { p = r.ca; return true; }
        for (const auto& a : r.side_chain)
          if (a.name == n) { p = a.pos; return true; }
        return false;
      };
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        Vec3 p[4];
        bool ok = true;
        for (std::size_t q = 0; q < 4 && ok; ++q) ok = lookup(it->second[k][q], p[q]);
        if (ok) {
          ang[k] = dihedral(p[0], p[1], p[2], p[3]);
          mask[k] = true;
        }
      }
    }
    out.angles.push_back(ang);
    out.mask.push_back(mask);
  }
  return out;
}

}  // namespace flowsite::mol
