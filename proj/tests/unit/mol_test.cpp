// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "flowsite/mol/clustering.hpp"
#include "flowsite/mol/dataset.hpp"
#include "flowsite/mol/elements.hpp"
#include "flowsite/mol/fake_ligand.hpp"
#include "flowsite/mol/ligand.hpp"
#include "flowsite/mol/pdb.hpp"
#include "flowsite/mol/pocket.hpp"
#include "flowsite/mol/radius_graph.hpp"

using namespace flowsite::mol;

namespace {

// PDB v3.3 ATOM/HETATM layout written out column by column.
std::string record(const char* kind, int serial, const char* name, const char* resname, char chain,
                   int resseq, double x, double y, double z, const char* element) {
  char buf[100];
  std::snprintf(buf, sizeof(buf), "%-6s%5d %-4s %3s %c%4d    %8.3f%8.3f%8.3f  1.00  0.00          %2s\n",
                kind, serial, name, resname, chain, resseq, x, y, z, element);
  return buf;
}

// Backbone offsets lie on z only, so two residues whose Calphas share a z
// plane are never closer than their Calpha distance.
Residue residue_at(char chain, int seq, const Vec3& ca, int type = 0) {
  Residue r;
  r.type = type;
  r.chain = chain;
  r.seq = seq;
  r.ca = ca;
  r.n = ca + Vec3(0, 0, 1.46);
  r.c = ca + Vec3(0, 0, -1.52);
  r.o = ca + Vec3(0, 0, -2.7);
  return r;
}

Coords coords_of(const std::vector<Vec3>& pts) {
  Coords c(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) c.row(static_cast<Eigen::Index>(i)) = pts[i];
  return c;
}

LigandGraph molecule_at(const std::vector<Vec3>& pts) {
  std::vector<LigandAtom> atoms(pts.size());
  LigandGraph g = make_ligand(atoms, coords_of(pts));
  infer_bonds(g);
  return g;
}

}  // namespace

TEST_CASE("parse_backbone examples") {
  std::string one;
  one += record("ATOM", 1, " N", "ALA", 'A', 5, 1.0, 2.0, 3.0, "N");
  one += record("ATOM", 2, " CA", "ALA", 'A', 5, 2.458, 2.0, 3.0, "C");
  one += record("ATOM", 3, " C", "ALA", 'A', 5, 3.0, 3.4, 3.0, "C");
  one += record("ATOM", 4, " O", "ALA", 'A', 5, 2.5, 4.5, -3.25, "O");
  auto parsed = parse_backbone(one);
  REQUIRE(parsed.backbone.size() == 1);
  const Residue& r = parsed.backbone.residues[0];
  CHECK(r.type == residue_index("ALA"));
  CHECK(r.seq == 5);
  CHECK(r.chain == 'A');
  CHECK(r.ca.x() == doctest::Approx(2.458));
  CHECK(r.o.z() == doctest::Approx(-3.25));
  CHECK(parsed.dropped_residues == 0);

  SUBCASE("side-chain atom ignored") {
    auto p = parse_backbone(one + record("ATOM", 5, " CB", "ALA", 'A', 5, 9, 9, 9, "C"));
    REQUIRE(p.backbone.size() == 1);
    CHECK(p.backbone.residues[0].side_chain.empty());
    auto kept = parse_backbone(one + record("ATOM", 5, " CB", "ALA", 'A', 5, 9, 9, 9, "C"),
                               {.keep_side_chains = true});
    REQUIRE(kept.backbone.residues[0].side_chain.size() == 1);
    CHECK(kept.backbone.residues[0].side_chain[0].name == "CB");
  }
  SUBCASE("residue missing O dropped") {
    std::string two = one;
    two += record("ATOM", 5, " N", "GLY", 'A', 6, 4, 4, 4, "N");
    two += record("ATOM", 6, " CA", "GLY", 'A', 6, 5, 4, 4, "C");
    two += record("ATOM", 7, " C", "GLY", 'A', 6, 6, 4, 4, "C");
    auto p = parse_backbone(two);
    CHECK(p.backbone.size() == 1);
    CHECK(p.dropped_residues == 1);
  }
  SUBCASE("altloc B skipped") {
    std::string alt = one;
    std::string b = record("ATOM", 5, " CA", "ALA", 'A', 5, 50, 50, 50, "C");
    b[16] = 'B';
    auto p = parse_backbone(alt + b);
    CHECK(p.backbone.residues[0].ca.x() == doctest::Approx(2.458));
  }
  SUBCASE("unparsable coordinates") {
    std::string bad = record("ATOM", 1, " N", "ALA", 'A', 5, 1, 2, 3, "N");
    bad.replace(30, 8, "  abc.de");
    // One bad record of five is 20 percent: the file is rejected.
    CHECK_THROWS_AS(parse_backbone(one + bad), ParseError);
    std::string many;
    for (int k = 0; k < 3; ++k) {
      many += record("ATOM", 1, " N", "ALA", 'A', 10 + k, 1, 2, 3, "N");
      many += record("ATOM", 2, " CA", "ALA", 'A', 10 + k, 1, 2, 3, "C");
      many += record("ATOM", 3, " C", "ALA", 'A', 10 + k, 1, 2, 3, "C");
      many += record("ATOM", 4, " O", "ALA", 'A', 10 + k, 1, 2, 3, "O");
    }
    auto p = parse_backbone(many + bad);  // 1 of 13
    CHECK(p.rejected_records == 1);
    CHECK(p.backbone.size() == 3);
  }
  SUBCASE("empty") {
    CHECK_THROWS_AS(parse_backbone(""), ParseError);
    CHECK_THROWS_AS(parse_backbone(record("HETATM", 1, " C1", "LIG", 'A', 1, 0, 0, 0, "C")), ParseError);
  }
  SUBCASE("non-increasing sequence numbers") {
    std::string two = one;
    two += record("ATOM", 5, " N", "GLY", 'A', 4, 4, 4, 4, "N");
    two += record("ATOM", 6, " CA", "GLY", 'A', 4, 5, 4, 4, "C");
    two += record("ATOM", 7, " C", "GLY", 'A', 4, 6, 4, 4, "C");
    two += record("ATOM", 8, " O", "GLY", 'A', 4, 6, 5, 4, "O");
    auto p = parse_backbone(two);
    CHECK(p.backbone.size() == 1);
    CHECK(p.dropped_residues == 1);
  }
}

TEST_CASE("parse_ligand examples") {
  SUBCASE("CONECT") {
    std::string t = record("HETATM", 1, " C1", "LIG", 'A', 1, 0, 0, 0, "C") +
                    record("HETATM", 2, " O1", "LIG", 'A', 1, 3.0, 0, 0, "O") + "CONECT    1    2\n";
    auto p = parse_ligand(t);
    CHECK(p.graph.size() == 2);
    CHECK(p.graph.num_bonds() == 1);
    CHECK(p.graph.num_components() == 1);
    CHECK(p.inferred_bonds == 0);
    CHECK(p.graph.atoms[1].element == 8);
    CHECK(p.graph.atoms[0].features[kSlotDegree] == 1.0);
    CHECK(p.graph.atoms[0].features[kSlotAtomicNumber] == 6.0);
  }
  SUBCASE("distance rule") {
    auto far = parse_ligand(record("HETATM", 1, " C1", "LIG", 'A', 1, 0, 0, 0, "C") +
                            record("HETATM", 2, " C2", "LIG", 'A', 1, 10, 0, 0, "C"));
    CHECK(far.graph.num_bonds() == 0);
    CHECK(far.graph.num_components() == 2);
    auto near = parse_ligand(record("HETATM", 1, " C1", "LIG", 'A', 1, 0, 0, 0, "C") +
                             record("HETATM", 2, " C2", "LIG", 'A', 1, 1.5, 0, 0, "C"));
    const double limit = 1.3 * (covalent_radius(6) + covalent_radius(6));
    CHECK(1.5 < limit);
    CHECK(near.graph.num_bonds() == 1);
    CHECK(near.inferred_bonds == 1);
  }
  SUBCASE("waters and hydrogens excluded; ions allowed") {
    auto p = parse_ligand(record("HETATM", 1, " C1", "LIG", 'A', 1, 0, 0, 0, "C") +
                          record("HETATM", 2, " O", "HOH", 'A', 2, 1, 0, 0, "O") +
                          record("HETATM", 3, " H1", "LIG", 'A', 1, 0.5, 0, 0, "H") +
                          record("HETATM", 4, "ZN", "ZN", 'A', 3, 8, 0, 0, "ZN"));
    REQUIRE(p.graph.size() == 2);
    CHECK(p.graph.atoms[1].element == 30);
    CHECK(p.graph.num_bonds() == 0);
    CHECK(p.graph.molecule[0] != p.graph.molecule[1]);
  }
  SUBCASE("no heavy atoms") {
    CHECK_THROWS_AS(parse_ligand(record("HETATM", 1, " O", "HOH", 'A', 1, 0, 0, 0, "O")), ParseError);
  }
}

TEST_CASE("feature side channel") {
  auto p = parse_ligand(record("HETATM", 1, " C1", "LIG", 'A', 1, 0, 0, 0, "C") +
                        record("HETATM", 2, " C2", "LIG", 'A', 1, 1.5, 0, 0, "C"));
  const auto rows = parse_feature_file("# idx then 15 values\n1 6 1 1 0 3 3 4 0 0 0 0 0 0 0 0\n");
  apply_features(p.graph, rows);
  CHECK(p.graph.atoms[1].features[kSlotChirality] == 1.0);
  CHECK(p.graph.atoms[1].features[kSlotHybridization] == 4.0);
  CHECK(p.graph.atoms[0].features[kSlotChirality] == 0.0);
  CHECK_THROWS_AS(parse_feature_file("0 1 2\n"), ParseError);
  CHECK_THROWS_AS(apply_features(p.graph, parse_feature_file("7 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n")), DataError);
}

TEST_CASE("hetatm writer round trip") {
  LigandGraph g = molecule_at({Vec3(0, 0, 0), Vec3(1.5, 0, 0), Vec3(1.5, 1.4, 0)});
  g.atoms[2].element = 8;
  const std::string text = write_hetatm(g, *g.coords);
  auto back = parse_ligand(text);
  CHECK(back.graph.size() == 3);
  CHECK(back.graph.num_bonds() == g.num_bonds());
  CHECK(back.graph.atoms[2].element == 8);
  CHECK(((*back.graph.coords) - (*g.coords)).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("group_multiligand examples") {
  const auto a = molecule_at({Vec3(0, 0, 0), Vec3(1.5, 0, 0)});
  SUBCASE("3 A apart groups") {
    const auto b = molecule_at({Vec3(4.5, 0, 0)});
    const auto g = group_multiligand({a, b});
    CHECK(g.size() == 3);
    CHECK(g.num_components() == 2);
  }
  SUBCASE("6 A apart stays alone") {
    const auto b = molecule_at({Vec3(7.5, 0, 0)});
    const auto g = group_multiligand({a, b});
    CHECK(g.size() == 2);
    CHECK(g.num_components() == 1);
  }
  SUBCASE("chained single linkage") {
    const auto m0 = molecule_at({Vec3(0, 0, 0)});
    const auto m1 = molecule_at({Vec3(3, 0, 0)});
    const auto m2 = molecule_at({Vec3(6, 0, 0)});
    const auto g = group_multiligand({m0, m2, m1});
    CHECK(g.size() == 3);
    CHECK(g.num_components() == 3);
  }
}

TEST_CASE("group_multiligand equals brute-force transitive closure") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 14.0);
  std::uniform_int_distribution<int> count(1, 6), atoms(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = count(rng);
    std::vector<LigandGraph> mols;
    for (int k = 0; k < m; ++k) {
      std::vector<Vec3> pts;
      const Vec3 base(u(rng), u(rng), u(rng));
      const int n = atoms(rng);
      for (int i = 0; i < n; ++i) pts.push_back(base + Vec3(1.4 * i, 0, 0));
      mols.push_back(molecule_at(pts));
    }
    const std::size_t primary = static_cast<std::size_t>(trial % m);
    // Oracle: boolean reachability matrix closed under composition.
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (int x = 0; x < m; ++x) {
      for (int y = 0; y < m; ++y) {
        bool close = x == y;
        for (Eigen::Index i = 0; i < mols[x].coords->rows(); ++i)
          for (Eigen::Index j = 0; j < mols[y].coords->rows(); ++j)
            close = close || (mols[x].coords->row(i) - mols[y].coords->row(j)).norm() <= 4.0;
        reach[x][y] = close;
      }
    }
    for (int k = 0; k < m; ++k)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          if (reach[x][k] && reach[k][y]) reach[x][y] = true;
    std::size_t expected = 0;
    for (int y = 0; y < m; ++y)
      if (reach[primary][y]) expected += mols[y].size();
    const auto g = group_multiligand(mols, primary);
    CHECK(g.size() == expected);
    CHECK((g.coords->row(0) - mols[primary].coords->row(0)).norm() == 0.0);
    g.validate();
  }
}

TEST_CASE("distance pocket rules") {
  PocketOptions exact;
  exact.sigma_distance = 0.0;
  exact.sigma_center = 0.0;
  const Coords lig = coords_of({Vec3(0, 0, 0)});
  PocketBackbone protein;
  protein.residues = {residue_at('A', 1, Vec3(5, 0, 0)), residue_at('A', 2, Vec3(0, 13, 0)),
                      residue_at('A', 3, Vec3(0, 0, 15))};
  const auto pocket = extract_distance_pocket(protein, lig, exact, 1);
  REQUIRE(pocket.size() == 2);
  CHECK(pocket.residues[0].seq == 1);
  CHECK(pocket.residues[1].seq == 2);
  CHECK((pocket.center - Vec3(5, 0, 0)).norm() == 0.0);

  PocketOptions noisy;
  const auto a = extract_distance_pocket(protein, lig, noisy, 99);
  const auto b = extract_distance_pocket(protein, lig, noisy, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.residues[i].seq == b.residues[i].seq);
  CHECK(a.center == b.center);

  PocketBackbone far;
  far.residues = {residue_at('A', 1, Vec3(40, 0, 0))};
  CHECK_THROWS_WITH_AS(extract_distance_pocket(far, lig, exact, 1, "cplx7"), doctest::Contains("cplx7"),
                       DataError);
}

TEST_CASE("radius pocket rules") {
  CHECK(radius_pocket_radius(6.0) == 10.0);
  CHECK(radius_pocket_radius(20.0) == 12.0);
  CHECK(radius_pocket_radius(0.0) == 7.0);

  PocketOptions exact;
  exact.sigma_distance = 0.0;
  exact.sigma_center = 0.0;
  // Ligand of diameter 6 centered at the origin: radius 10 around the Calpha
  // mean of residues within 8 A.
  const Coords lig = coords_of({Vec3(-3, 0, 0), Vec3(3, 0, 0)});
  PocketBackbone protein;
  protein.residues = {residue_at('A', 1, Vec3(0, 5, 0)), residue_at('A', 2, Vec3(0, -5, 0)),
                      residue_at('A', 3, Vec3(0, 0, 9.5)), residue_at('A', 4, Vec3(0, 0, -10.5))};
  const auto pocket = extract_radius_pocket(protein, lig, exact, 3);
  REQUIRE(pocket.size() == 3);
  CHECK(pocket.residues[2].seq == 3);
  CHECK(pocket.center.norm() < 1e-12);
}

TEST_CASE("contact mask and torsions") {
  PocketBackbone p;
  p.residues = {residue_at('A', 1, Vec3(0, 0, 0)), residue_at('A', 2, Vec3(10, 0, 0))};
  p.residues[1].side_chain.push_back({"CB", 6, Vec3(4.5, 0, 0)});
  const Coords lig = coords_of({Vec3(0.5, 3.9, 0)});
  const auto mask = contact_mask(p, lig);
  CHECK(mask[0]);
  CHECK_FALSE(mask[1]);
  const Coords near_cb = coords_of({Vec3(1.0, 0, 0)});
  CHECK(contact_mask(p, near_cb)[1]);  // side-chain atom 3.5 A away

  CHECK(dihedral(Vec3(1, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 1), Vec3(0, 1, 1)) ==
        doctest::Approx(M_PI / 2).epsilon(1e-12));
  CHECK(std::abs(dihedral(Vec3(1, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 1), Vec3(1, 0, 1))) < 1e-12);
}

TEST_CASE("radius graph examples") {
  PocketBackbone two;
  Coords res = coords_of({Vec3(0, 0, 0), Vec3(49, 0, 0)});
  Coords none(0, 3);
  CHECK(build_radius_graph(none, res)[EdgeKind::kProtProt].size() == 2);
  res = coords_of({Vec3(0, 0, 0), Vec3(51, 0, 0)});
  CHECK(build_radius_graph(none, res)[EdgeKind::kProtProt].size() == 0);

  auto g = build_radius_graph(coords_of({Vec3(0, 0, 0)}), coords_of({Vec3(29, 0, 0)}));
  CHECK(g[EdgeKind::kLigProt].size() == 1);
  CHECK(g[EdgeKind::kProtLig].size() == 1);
  g = build_radius_graph(coords_of({Vec3(0, 0, 0)}), coords_of({Vec3(31, 0, 0)}));
  CHECK(g[EdgeKind::kLigProt].size() == 0);
  CHECK(build_radius_graph(coords_of({Vec3(1, 2, 3)}), none).total_edges() == 0);
}

TEST_CASE("radius graph equals brute-force scan") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 90.0);
  std::uniform_int_distribution<int> size(0, 250);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Vec3> l, r;
    const int nl = size(rng), nr = size(rng);
    for (int i = 0; i < nl; ++i) l.emplace_back(u(rng), u(rng), u(rng));
    for (int i = 0; i < nr; ++i) r.emplace_back(u(rng), u(rng), u(rng));
    const auto g = build_radius_graph(coords_of(l), coords_of(r));
    using Edge = std::tuple<std::size_t, std::size_t>;
    auto as_set = [](const EdgeList& e) {
      std::set<Edge> s;
      for (std::size_t k = 0; k < e.size(); ++k) {
        s.emplace(e.src[k], e.dst[k]);
      }
      return s;
    };
    auto scan = [](const std::vector<Vec3>& a, const std::vector<Vec3>& b, double cut, bool same) {
      std::set<Edge> s;
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
          if (!(same && i == j) && (a[i] - b[j]).norm() <= cut) s.emplace(i, j);
      return s;
    };
    CHECK(as_set(g[EdgeKind::kLigLig]) == scan(l, l, 50.0, true));
    CHECK(as_set(g[EdgeKind::kProtProt]) == scan(r, r, 50.0, true));
    CHECK(as_set(g[EdgeKind::kLigProt]) == scan(l, r, 30.0, false));
    CHECK(as_set(g[EdgeKind::kProtLig]) == scan(r, l, 30.0, false));
    const auto& ll = g[EdgeKind::kLigLig];
    for (std::size_t k = 0; k < ll.size(); ++k) {
      CHECK(ll.dist[k] == doctest::Approx((l[ll.src[k]] - l[ll.dst[k]]).norm()));
    }
  }
}

namespace {

// Chain A residues 1..20 six angstrom apart on x, plus `ring` residues
// (seq 40, 50, ...) placed around residue 10 in the z=0 plane.
PocketBackbone fake_ligand_protein(int ring, bool glycine) {
  PocketBackbone p;
  for (int s = 1; s <= 20; ++s) p.residues.push_back(residue_at('A', s, Vec3(6.0 * s, 0, 0)));
  Residue& target = p.residues[9];
  if (glycine) {
    target.type = residue_index("GLY");
  } else {
    target.type = residue_index("SER");
    target.side_chain = {{"CB", 6, target.ca + Vec3(0, 0, 0.8)}, {"OG", 8, target.ca + Vec3(0, 0, 1.9)}};
  }
  const Vec3 spots[4] = {Vec3(0, 3.5, 0), Vec3(0, -3.5, 0), Vec3(2.0, 2.8, 0), Vec3(-2.0, -2.8, 0)};
  for (int k = 0; k < ring; ++k) p.residues.push_back(residue_at('A', 40 + 10 * k, target.ca + spots[k]));
  return p;
}

}  // namespace

TEST_CASE("fake ligand candidates and construction") {
  CHECK(fake_ligand_candidates(fake_ligand_protein(3, true)).empty());
  const auto cands = fake_ligand_candidates(fake_ligand_protein(4, true));
  REQUIRE(cands.size() == 1);
  CHECK(cands[0] == 9);

  FakeLigandOptions opts;
  opts.pocket.sigma_distance = 0.0;
  opts.pocket.sigma_center = 0.0;
  opts.pocket.include_cutoff = 1000.0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto gly = make_fake_ligand(fake_ligand_protein(4, true), seed, opts);
    REQUIRE(gly.has_value());
    CHECK(gly->fake_ligand);
    REQUIRE(gly->ligand.size() == 2);
    CHECK(gly->ligand.atoms[0].name == "C");
    CHECK(gly->ligand.atoms[1].name == "CA");
    std::set<int> seqs;
    for (const auto& r : gly->pocket.residues) seqs.insert(r.seq);
    std::set<int> expected = {1, 2, 18, 19, 20, 40, 50, 60, 70};
    CHECK(seqs == expected);
    CHECK(gly->num_contacts() == 4);
  }
  auto ser = make_fake_ligand(fake_ligand_protein(4, false), 1, opts);
  REQUIRE(ser.has_value());
  CHECK(ser->ligand.size() == 4);
  CHECK(ser->ligand.num_components() == 1);

  CHECK_FALSE(make_fake_ligand(fake_ligand_protein(0, true), 1, opts).has_value());
}

TEST_CASE("fake ligand window invariant on random proteins") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 4.0);
  FakeLigandOptions opts;
  int produced = 0;
  for (int trial = 0; trial < 20; ++trial) {
    PocketBackbone p;
    for (int s = 1; s <= 40; ++s) {
      Residue r = residue_at(s <= 20 ? 'A' : 'B', s, Vec3(g(rng), g(rng), g(rng)));
      r.side_chain = {{"CB", 6, r.ca + Vec3(g(rng), g(rng), g(rng)) * 0.3}};
      p.residues.push_back(r);
    }
    auto sample = make_fake_ligand(p, static_cast<std::uint64_t>(trial), opts);
    if (!sample) continue;
    ++produced;
    // Recover the chosen residue from its Calpha (ligand atom 1).
    const Vec3 ca = sample->truth().row(1).transpose();
    const Residue* chosen = nullptr;
    for (const auto& r : p.residues)
      if ((r.ca - ca).norm() == 0.0) chosen = &r;
    REQUIRE(chosen != nullptr);
    for (const auto& r : sample->pocket.residues) {
      CHECK_FALSE((r.chain == chosen->chain && std::abs(r.seq - chosen->seq) <= 7));
    }
  }
  CHECK(produced > 0);
}

TEST_CASE("sequence clustering") {
  CHECK(align_global("AAAA", "AACC").identity() == 0.5);
  CHECK(align_global("AAAA", "CCCC").identity() == 0.0);
  CHECK(align_global("ACDE", "ACDE").identity() == 1.0);
  const auto gap = align_global("ACDEF", "ACEF");
  CHECK(gap.score == 3);
  CHECK(gap.length == 5);
  CHECK(gap.matches == 4);

  CHECK(cluster_sequences({}).cluster.empty());
  CHECK(cluster_sequences({"ACDE", "ACDE"}).representative.size() == 1);
  CHECK(cluster_sequences({"AAAA", "CCCC"}).representative.size() == 2);
  CHECK(cluster_sequences({"AAAA", "AACC"}).representative.size() == 1);

  std::mt19937_64 rng(8);
  const std::string alphabet = "ARNDCQEGHILKMFPSTWYV";
  std::uniform_int_distribution<int> letter(0, 19), len(5, 30), coin(0, 3);
  std::vector<std::string> seqs;
  for (int f = 0; f < 6; ++f) {
    std::string base;
    for (int i = len(rng); i > 0; --i) base += alphabet[letter(rng)];
    for (int v = 0; v < 5; ++v) {
      std::string s = base;
      for (char& ch : s)
        if (coin(rng) == 0) ch = alphabet[letter(rng)];
      seqs.push_back(s);
    }
  }
  const auto clusters = cluster_sequences(seqs);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const std::size_t rep = clusters.representative[static_cast<std::size_t>(clusters.cluster[i])];
    CHECK(align_global(seqs[rep], seqs[i]).identity() >= 0.30);
    CHECK(seqs[rep].size() >= seqs[i].size());
  }
}

TEST_CASE("manifest parsing") {
  const auto m = parse_manifest("# id protein ligand features\n\nc1 p1.pdb l1.pdb\nc2 /abs/p.pdb l2.pdb f2.txt\n",
                                "/data/toy");
  REQUIRE(m.size() == 2);
  CHECK(m[0].protein == "/data/toy/p1.pdb");
  CHECK(m[0].features.empty());
  CHECK(m[1].protein == "/abs/p.pdb");
  CHECK(m[1].features == "/data/toy/f2.txt");
  CHECK_THROWS_AS(parse_manifest("c1 p.pdb\n", ""), ParseError);
  CHECK_THROWS_AS(parse_manifest("c1 a b\nc1 a b\n", ""), ParseError);
}
