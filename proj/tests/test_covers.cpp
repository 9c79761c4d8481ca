#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "rcov/cohomology.hpp"
#include "rcov/covers.hpp"
#include "rcov/error.hpp"

using namespace rcov;

namespace {

GaloisLattice lattice(const std::vector<Mat>& act) {
  GaloisLattice L;
  L.rank = static_cast<int>(act[0].size());
  L.act = act;
  return L;
}

bool all_of_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

CoverBase aniso1() { return CoverBase::make_torus(FiniteGroup::cyclic(2), lattice({Mat{{1}}, Mat{{-1}}})); }

// |Z^1(M)| / |torsion coboundaries| by enumeration; M = S^[n] for a torus.
i64 brute_torus_h1_torsion(const FiniteGroup& G, const GaloisLattice& L, i64 n) {
  CoverBase b = CoverBase::make_torus(G, L);
  auto br = oracle::brute_force(G, b.T(n), 1);
  auto sets = oracle::coboundary_sets(G, L, n, n * G.order() * G.order() * G.order());
  return static_cast<i64>(br.z1.size() / sets.torsion.size());
}

// H^1(Z)[n] for a finite module Z by enumeration of cocycle classes.
i64 brute_h1_n_torsion(const FiniteGroup& G, const FiniteModule& Z, i64 n) {
  auto br = oracle::brute_force(G, Z, 1);
  std::set<Vec> bset(br.b1.begin(), br.b1.end());
  std::set<std::set<Vec>> classes;
  for (const auto& x : br.z1) {
    Vec nx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) nx[i] = mod(n * x[i], Z.moduli[i % Z.dim()]);
    if (!bset.count(nx)) continue;
    std::set<Vec> cls;
    for (const auto& b : br.b1) {
      Vec y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = mod(x[i] + b[i], Z.moduli[i % Z.dim()]);
      cls.insert(y);
    }
    classes.insert(cls);
  }
  return static_cast<i64>(classes.size());
}

// Random hypercoboundary (dy, y_ad - du) at level n.
CoverDescriptor shift_by_coboundary(const CoverBase& base, const CoverDescriptor& t, std::mt19937_64& rng) {
  TwoTermComplex K = base.complex(t.n);
  Vec y(total_dim(base.G, K, 1));
  std::uniform_int_distribution<i64> d(0, t.n - 1);
  for (auto& v : y) v = d(rng);
  Vec dy = total_differential(base.G, K, 1, y);
  Vec x = t.total();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i] + dy[i], t.n);
  std::size_t za = t.z.size();
  return CoverDescriptor{t.n, Vec(x.begin(), x.begin() + static_cast<long>(za)), Vec(x.begin() + static_cast<long>(za), x.end())};
}

std::vector<CoverBase> group_bases() {
  FiniteGroup Z2 = FiniteGroup::cyclic(2);
  std::vector<CoverBase> out;
  out.push_back(CoverBase::make_group(Z2, RootDatum::preset("A1.sc"), {Mat{{1}}, Mat{{1}}}));
  out.push_back(CoverBase::make_group(FiniteGroup::cyclic(4), RootDatum::preset("A1.sc"), std::vector<Mat>(4, Mat{{1}})));
  out.push_back(CoverBase::make_group(Z2, RootDatum::preset("A1.ad"), {Mat{{1}}, Mat{{1}}}));
  out.push_back(CoverBase::make_group(Z2, RootDatum::preset("A2.sc"), {identity(2), Mat{{0, 1}, {1, 0}}}));
  out.push_back(CoverBase::make_group(Z2, RootDatum::preset("C2.sc"), {identity(2), identity(2)}));
  out.push_back(CoverBase::make_group(Z2, RootDatum::preset("A1xA1 in C2"), {identity(2), Mat{{0, 1}, {1, 0}}}));
  out.push_back(CoverBase::make_group(Z2, RootDatum::preset("GL1"), {Mat{{1}}, Mat{{-1}}}));
  return out;
}

}  // namespace

TEST_CASE("anisotropic torus has two classes of double covers") {
  CoverBase b = aniso1();
  auto cl = classify_covers(b, 2);
  CHECK(cl.classes.order() == 2);
  CHECK(oracle::brute_h2_count(b.G, b.T(2)) == 2);
  REQUIRE(cl.representatives.size() == 2);
  CHECK(class_of(b, cl.classes, cl.representatives[0]) != class_of(b, cl.classes, cl.representatives[1]));
  CHECK_FALSE(cover_isomorphisms(b, cl.representatives[0], cl.representatives[1]).exists);
}

TEST_CASE("torus classification agrees with brute force") {
  FiniteGroup Z2 = FiniteGroup::cyclic(2), Z3 = FiniteGroup::cyclic(3);
  // split tori: gcd(|G|, n) classes for cyclic G
  for (i64 n = 1; n <= 4; ++n) {
    for (int r = 1; r <= 2; ++r) {
      for (const auto& G : {Z2, Z3}) {
        GaloisLattice L = GaloisLattice::trivial_action(G, r);
        CoverBase b = CoverBase::make_torus(G, L);
        CHECK(classify_covers(b, n).classes.order() == oracle::brute_h2_count(G, b.T(n)));
      }
    }
  }
  CHECK(classify_covers(CoverBase::make_torus(Z2, GaloisLattice::trivial_action(Z2, 1)), 2).classes.order() == 2);
  CHECK(classify_covers(CoverBase::make_torus(Z3, GaloisLattice::trivial_action(Z3, 1)), 2).classes.order() == 1);
  // Z[G] for G = Z/2
  CoverBase ind = CoverBase::make_torus(Z2, oracle::induced_lattice(Z2, {{0}}));
  CHECK(classify_covers(ind, 2).classes.order() == oracle::brute_h2_count(Z2, ind.T(2)));
  CHECK(classify_covers(ind, 2).classes.order() == 1);

  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    auto ac = oracle::random_admissible_set(rng, 2);
    CoverBase b = CoverBase::make_torus(ac.G, ac.R.lattice);
    i64 n = 2 + trial % 3;
    if (b.Y.rank == 2 && n == 4) n = 3;  // |M| <= 16
    CHECK(classify_covers(b, n).classes.order() == oracle::brute_h2_count(ac.G, b.T(n)));
  }
}

TEST_CASE("torus automorphism groups") {
  FiniteGroup Z2 = FiniteGroup::cyclic(2), Z3 = FiniteGroup::cyclic(3);
  // H^1 of the norm-one torus over a quadratic extension vanishes
  CHECK(automorphism_group(aniso1(), 2).order() == 1);
  CHECK(automorphism_group(aniso1(), 2).order() == brute_torus_h1_torsion(Z2, aniso1().Y, 2));
  // split: Hom(G, mu_n)
  CHECK(automorphism_group(CoverBase::make_torus(Z2, GaloisLattice::trivial_action(Z2, 1)), 2).order() == 2);
  CHECK(automorphism_group(CoverBase::make_torus(Z3, GaloisLattice::trivial_action(Z3, 1)), 2).order() == 1);
  CHECK(automorphism_group(CoverBase::make_torus(Z3, GaloisLattice::trivial_action(Z3, 2)), 3).order() == 9);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    auto ac = oracle::random_admissible_set(rng, 2);
    CoverBase b = CoverBase::make_torus(ac.G, ac.R.lattice);
    i64 n = 2 + trial % 2;
    CHECK(automorphism_group(b, n).order() == brute_torus_h1_torsion(ac.G, b.Y, n));
  }
}

TEST_CASE("group automorphisms are H^1 of the center") {
  for (const auto& b : group_bases()) {
    if (b.dual.size() == 0) continue;  // center not finite
    for (i64 n = 2; n <= 3; ++n) {
      // Z(G^) is finite, equal to its e-torsion
      FiniteModule Z = b.center(b.pi0_exponent()).Z;
      CAPTURE(b.dual.rank);
      CHECK(automorphism_group(b, n).order() == brute_h1_n_torsion(b.G, Z, n));
    }
  }
  CoverBase adj = group_bases()[2];
  CHECK(automorphism_group(adj, 2).order() == 1);
}

TEST_CASE("isomorphism witnesses form a torsor and compose") {
  std::mt19937_64 rng(7);
  std::vector<CoverBase> bases = group_bases();
  bases.push_back(aniso1());
  bases.push_back(CoverBase::make_torus(FiniteGroup::cyclic(2), oracle::induced_lattice(FiniteGroup::cyclic(2), {{0}})));
  for (const auto& b : bases) {
    for (i64 n : {2, 3}) {
      auto cl = classify_covers(b, n);
      auto aut = automorphism_group(b, n);
      for (std::size_t i = 0; i < cl.representatives.size(); ++i) {
        const auto& t1 = cl.representatives[i];
        for (std::size_t j = 0; j < cl.representatives.size(); ++j)
          CHECK(cover_isomorphisms(b, t1, cl.representatives[j]).exists == (i == j));
        CoverDescriptor t2 = shift_by_coboundary(b, t1, rng);
        CoverDescriptor t3 = shift_by_coboundary(b, t2, rng);
        auto i12 = cover_isomorphisms(b, t1, t2);
        auto i23 = cover_isomorphisms(b, t2, t3);
        REQUIRE(i12.exists);
        REQUIRE(i23.exists);
        CHECK(i12.count() == aut.order());
        Vec h13(i12.particular.size());
        for (std::size_t k = 0; k < h13.size(); ++k) h13[k] = mod(i12.particular[k] + i23.particular[k], n);
        CHECK(is_isomorphism_witness(b, t1, t3, h13));
        auto all = enumerate_witnesses(i12, 64);
        std::set<Vec> distinct(all.begin(), all.end());
        CHECK(distinct.size() == all.size());
        for (const auto& h : all) CHECK(is_isomorphism_witness(b, t1, t2, h));
      }
    }
  }
}

TEST_CASE("anisotropic witnesses counted by brute force") {
  CoverBase b = aniso1();
  auto cl = classify_covers(b, 2);
  const auto& t = cl.representatives[1];
  auto sets = oracle::coboundary_sets(b.G, b.Y, 2, 16);
  // all h in C^1(S^[2]) with dh = 0, modulo torsion coboundaries
  std::set<std::set<Vec>> classes;
  for (i64 a = 0; a < 2; ++a)
    for (i64 c = 0; c < 2; ++c) {
      Vec h{a, c};
      if (!is_isomorphism_witness(b, t, t, h)) continue;
      std::set<Vec> cls;
      for (const auto& y : sets.torsion) cls.insert(Vec{mod(h[0] + y[0], 2), mod(h[1] + y[1], 2)});
      classes.insert(cls);
    }
  CHECK(static_cast<i64>(classes.size()) == cover_isomorphisms(b, t, t).count());
}

TEST_CASE("Baer sum is the group law on classes") {
  CoverBase b = aniso1();
  auto cl = classify_covers(b, 2);
  const auto& nt = cl.representatives[1];
  CHECK(class_of(b, cl.classes, baer_sum(b, nt, nt)) == Vec{0});
  CHECK(baer_inverse(b, nt).z == nt.z);
  CHECK_THROWS_AS(baer_sum(b, nt, trivial_descriptor(b, 4)), ValidationError);

  std::mt19937_64 rng(11);
  for (const auto& base : group_bases()) {
    for (i64 n : {2, 4}) {
      auto c = classify_covers(base, n);
      const Vec& ord = c.classes.orders();
      for (const auto& x : c.representatives)
        for (const auto& y : c.representatives) {
          CoverDescriptor xs = shift_by_coboundary(base, x, rng), ys = shift_by_coboundary(base, y, rng);
          Vec s = class_of(base, c.classes, baer_sum(base, xs, ys));
          Vec a = class_of(base, c.classes, x), bb = class_of(base, c.classes, y);
          for (std::size_t k = 0; k < s.size(); ++k) CHECK(s[k] == mod(a[k] + bb[k], ord[k]));
          CHECK(all_of_zero(class_of(base, c.classes, baer_sum(base, xs, baer_inverse(base, xs)))));
        }
    }
  }
}

TEST_CASE("level raising can identify classes") {
  FiniteGroup Z2 = FiniteGroup::cyclic(2);
  // split rank one: the class at level 2 dies at level 4
  CoverBase split = CoverBase::make_torus(Z2, GaloisLattice::trivial_action(Z2, 1));
  auto c2 = classify_covers(split, 2), c4 = classify_covers(split, 4);
  CoverDescriptor up = level_raise(split, c2.representatives[1], 4);
  CHECK(class_of(split, c4.classes, up) == Vec(c4.classes.orders().size(), 0));
  auto br = oracle::brute_force(Z2, split.T(4), 2);
  std::set<Vec> b2(br.b2.begin(), br.b2.end());
  CHECK(b2.count(normalize_2cocycle(Z2, split.T(4), up.z)) == 1);
  // anisotropic: it survives
  CoverBase an = aniso1();
  auto a2 = classify_covers(an, 2), a4 = classify_covers(an, 4);
  CoverDescriptor aup = level_raise(an, a2.representatives[1], 4);
  CHECK(class_of(an, a4.classes, aup) != Vec(a4.classes.orders().size(), 0));
  CHECK_THROWS_AS(level_raise(an, a2.representatives[1], 3), ValidationError);
}

TEST_CASE("double covers from admissible sets") {
  FiniteGroup Z2 = FiniteGroup::cyclic(2);
  CoverBase an = aniso1();
  AdmissibleSet R;
  R.neg = {1, 0};
  R.act = {{0, 1}, {1, 0}};
  R.vectors = {{1}, {-1}};
  R.lattice = an.Y;
  Gauge p(R, {1});
  auto dc = double_cover_from_admissible(an, R, p, {});
  auto cl = classify_covers(an, 2);
  CHECK(class_of(an, cl.classes, dc.descriptor) == Vec{1});
  CHECK(dc.descriptor.z == tits_cocycle(Z2, R, p));

  // asymmetric orbits on a split torus with a gauge-stable action
  CoverBase split = CoverBase::make_torus(Z2, GaloisLattice::trivial_action(Z2, 1));
  AdmissibleSet S;
  S.neg = {1, 0};
  S.act = {{0, 1}, {0, 1}};
  S.vectors = {{1}, {-1}};
  S.lattice = split.Y;
  auto ds = double_cover_from_admissible(split, S, Gauge(S, {1}), {});
  CHECK(class_of(split, classify_covers(split, 2).classes, ds.descriptor) == Vec{0});

  // gauge changes on random admissible sets
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto ac = oracle::random_admissible_set(rng, 2);
    CoverBase b = CoverBase::make_torus(ac.G, ac.R.lattice);
    auto gauges = oracle::all_gauges(ac.R);
    auto tp = double_cover_from_admissible(b, ac.R, gauges[0], {});
    for (const auto& q : gauges) {
      auto ch = change_gauge(b, ac.R, tp, gauges[0], q);
      CHECK(is_isomorphism_witness(b, tp.descriptor, ch.cover.descriptor, ch.witness));
    }
  }
}

TEST_CASE("double covers of groups carry a splitting") {
  for (const auto& b : group_bases()) {
    if (b.dual.size() == 0) continue;
    AdmissibleSet R = AdmissibleSet::from_root_datum(b.G, b.dual, b.X.act);
    auto gauges = oracle::all_gauges(R);
    Gauge p = Gauge::positive_roots(R, b.dual);
    Vec zp = tits_cocycle(b.G, R, p);
    // splitting cochains by enumeration
    FiniteModule Tad = b.Tad(2);
    std::size_t dim = cochain_dim(b.G, Tad, 1);
    Vec zbar = push_cochain(b.G, b.T(2), Tad, b.simple_roots, 2, zp);
    std::vector<Vec> splittings;
    for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
      Vec c(dim);
      for (std::size_t i = 0; i < dim; ++i) c[i] = (mask >> i) & 1;
      if (oracle::d_direct(b.G, Tad, 1, c) == zbar) splittings.push_back(c);
    }
    REQUIRE_FALSE(splittings.empty());
    for (const auto& c : splittings) {
      auto tp = double_cover_from_admissible(b, R, p, c);
      CHECK(tp.splitting_consistent);
      for (const auto& q : gauges) {
        auto ch = change_gauge(b, R, tp, p, q);
        CHECK(ch.cover.splitting_consistent);
      }
    }
    Vec bad = splittings[0];
    bad[0] ^= 1;
    CHECK_THROWS_AS(double_cover_from_admissible(b, R, p, bad), ValidationError);
  }
}

TEST_CASE("descent obstruction") {
  auto bases = group_bases();
  for (const auto& b : bases) {
    if (b.dual.size() == 0) continue;
    for (i64 n : {2, 3, 4}) {
      CHECK(descent_obstruction(b, trivial_descriptor(b, n)).trivial);
      auto cl = classify_covers(b, n);
      // Z(G^) finite: brute force over Z-valued 1-cochains
      for (const auto& t : cl.representatives) {
        auto ob = descent_obstruction(b, t);
        i64 N = n * b.pi0_order();
        i64 e = b.pi0_exponent();
        FiniteModule TN = b.T(N);
        std::vector<Vec> center;
        for (const auto& v : b.T(e).elements()) {
          Vec img = mat_vec(b.simple_roots, v);
          bool central = std::all_of(img.begin(), img.end(), [&](i64 x) { return mod(x, e) == 0; });
          if (!central) continue;
          Vec w(v.size());
          for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] * (N / e);
          center.push_back(w);
        }
        bool cob = false;
        std::size_t g = static_cast<std::size_t>(b.G.order());
        std::vector<std::size_t> idx(g, 0);
        while (!cob) {
          Vec y;
          for (std::size_t k = 0; k < g; ++k) y.insert(y.end(), center[idx[k]].begin(), center[idx[k]].end());
          cob = oracle::d_direct(b.G, TN, 1, y) == ob.center_cocycle;
          std::size_t k = 0;
          for (; k < g; ++k) {
            if (++idx[k] < center.size()) break;
            idx[k] = 0;
          }
          if (k == g) break;
        }
        CHECK(ob.trivial == cob);
        if (b.pi0_order() == 1) CHECK(ob.trivial);
      }
    }
  }
  // SL2 dual: a nontrivial class is obstructed
  CoverBase tw = bases[0];
  auto cl = classify_covers(tw, 2);
  bool some_obstructed = false;
  for (const auto& t : cl.representatives) some_obstructed |= !descent_obstruction(tw, t).trivial;
  CHECK(some_obstructed);
  CHECK_THROWS_AS(CoverBase::make_group(FiniteGroup::cyclic(2), RootDatum::preset("A1.sc"), {Mat{{1}}, Mat{{-1}}}),
                  ValidationError);
  CHECK_THROWS_AS(descent_obstruction(aniso1(), trivial_descriptor(aniso1(), 2)), ValidationError);
}

TEST_CASE("tilde quotient of H^2 of the center") {
  for (const auto& b : group_bases()) {
    if (b.dual.size() == 0) continue;
    for (i64 n : {2, 3}) {
      auto cl = classify_covers(b, n);
      i64 h2 = 1, tilde = 1;
      for (i64 d : cl.center_h2_orders) h2 *= d;
      for (i64 d : cl.tilde_orders) tilde *= d;
      CHECK(h2 == oracle::brute_h2_count(b.G, b.center(n).Z));
      CHECK(h2 % tilde == 0);
    }
  }
}

TEST_CASE("descriptor validation") {
  CoverBase an = aniso1();
  CoverDescriptor bad{2, Vec(4, 0), {}};
  bad.z[1] = 1;  // z(1, s) != 0 breaks the cocycle condition
  CHECK_THROWS_AS(validate_descriptor(an, bad), ValidationError);
  CHECK_THROWS_AS(validate_descriptor(an, CoverDescriptor{2, Vec(3, 0), {}}), ValidationError);
  CHECK_THROWS_AS(cover_isomorphisms(an, trivial_descriptor(an, 2), trivial_descriptor(an, 4)), ValidationError);
}
