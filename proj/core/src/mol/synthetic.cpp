// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flowsite/mol/elements.hpp"
#include "flowsite/mol/ligand.hpp"

namespace flowsite::mol {

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

// Unit vector at `angle` from `axis`, random azimuth.
Vec3 cone(const Vec3& axis, double angle, std::mt19937_64& rng) {
  Vec3 p = random_unit(rng);
  p = (p - p.dot(axis) * axis);
  if (p.norm() < 1e-6) p = axis.unitOrthogonal();
  p.normalize();
  return std::cos(angle) * axis + std::sin(angle) * p;
}

const char* chi1_atom(int type) {
  switch (type) {
    case 0: case 7: return nullptr;  // ALA, GLY
    case 4: return "SG";
    case 9: case 19: return "CG1";
    case 15: return "OG";
    case 16: return "OG1";
    default: return "CG";
  }
}

int chi1_element(int type) {
  switch (type) {
    case 4: return 16;
    case 15: case 16: return 8;
    default: return 6;
  }
}

}  // namespace

RawComplex synthetic_complex(std::uint64_t seed, const SyntheticOptions& opt, const std::string& id) {
  if (opt.ligand_atoms < 4) throw std::invalid_argument("synthetic ligand needs at least 4 atoms");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tet = 111.0 * std::numbers::pi / 180.0;

  // Main chain 0..n-2, branch atom n-1 on atom 2 (arms of length 2, n-4, 1).
  const std::size_t n = opt.ligand_atoms;
  Coords x(static_cast<Eigen::Index>(n), 3);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 1000) throw std::runtime_error("synthetic ligand placement failed");
    x.row(0) = Vec3::Zero().transpose();
    Vec3 dir = random_unit(rng);
    x.row(1) = (1.5 * dir).transpose();
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const Vec3 back = (x.row(i - 2) - x.row(i - 1)).transpose().normalized();
      x.row(i) = x.row(i - 1) + 1.5 * cone(back, tet, rng).transpose();
    }
    const Vec3 back = (x.row(1) - x.row(2)).transpose().normalized();
    x.row(n - 1) = x.row(2) + 1.5 * cone(back, tet, rng).transpose();
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        const bool bond = (j == i + 1 && j + 1 < n) || (j == n - 1 && i == 2);
        if (!bond && (x.row(i) - x.row(j)).norm() < 2.4) ok = false;
      }
    if (ok) break;
  }
  const Vec3 centroid = x.colwise().mean().transpose();
  x.rowwise() -= centroid.transpose();

  std::vector<LigandAtom> atoms(n);
  const int palette[] = {6, 6, 7, 6, 8, 6, 6, 16, 6, 7, 6, 8};
  for (std::size_t i = 0; i < n; ++i) {
    atoms[i].element = palette[i % 12];
    atoms[i].name = element_symbol(atoms[i].element) + std::to_string(i + 1);
  }
  LigandGraph lig = make_ligand(std::move(atoms), x);
  for (std::size_t i = 0; i + 2 < n; ++i) lig.set_bond(i, i + 1);
  lig.set_bond(2, n - 1);
  compute_components(lig);
  fill_graph_features(lig);

  RawComplex raw;
  raw.id = id;
  raw.ligand = std::move(lig);

  // Calpha positions on a jittered shell, at least 3.8 A apart and clear of the ligand.
  std::vector<Vec3> cas;
  for (int attempt = 0; cas.size() < opt.residues; ++attempt) {
    if (attempt > 100000) throw std::runtime_error("synthetic residue placement failed");
    const double r = opt.shell_radius + opt.shell_jitter * (2.0 * u(rng) - 1.0);
    const Vec3 p = r * random_unit(rng);
    bool ok = true;
    for (const auto& q : cas) ok = ok && (p - q).norm() >= 3.8;
    for (Eigen::Index i = 0; i < x.rows() && ok; ++i) ok = (p - x.row(i).transpose()).norm() >= 4.5;
    if (ok) cas.push_back(p);
  }

  for (std::size_t k = 0; k < cas.size(); ++k) {
    Residue res;
    res.type = static_cast<int>(rng() % kNumResidueTypes);
    res.chain = 'A';
    res.seq = static_cast<int>(k + 1);
    res.ca = cas[k];
    Eigen::Index nearest = 0;
    for (Eigen::Index i = 1; i < x.rows(); ++i)
      if ((x.row(i).transpose() - res.ca).norm() < (x.row(nearest).transpose() - res.ca).norm()) nearest = i;
    const Vec3 inward = (x.row(nearest).transpose() - res.ca).normalized();
    const Vec3 cb_dir = cone(inward, 0.35, rng);
    // N and C at about 111 degrees, both away from the side chain.
    const Vec3 side = cb_dir.unitOrthogonal();
    const Vec3 other = cb_dir.cross(side);
    const Vec3 n_dir = (-0.33 * cb_dir + 0.94 * side).normalized();
    const Vec3 c_dir = (-0.33 * cb_dir - 0.47 * side + 0.82 * other).normalized();
    res.n = res.ca + 1.46 * n_dir;
    res.c = res.ca + 1.52 * c_dir;
    res.o = res.c + 1.23 * cone(c_dir, 2.1, rng);
    if (res.type != 7) {
      const Vec3 cb = res.ca + 1.53 * cb_dir;
      res.side_chain.push_back({"CB", 6, cb});
      if (const char* name = chi1_atom(res.type)) {
        res.side_chain.push_back({name, chi1_element(res.type), cb + 1.52 * cone(cb_dir, std::numbers::pi - tet, rng)});
      }
    }
    raw.protein.residues.push_back(std::move(res));
  }
  raw.protein.center = Vec3::Zero();
  raw.protein.validate();
  raw.ligand.validate();
  return raw;
}

}  // namespace flowsite::mol
