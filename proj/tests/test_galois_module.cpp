#include "doctest.h"
#include "rcov/galois_module.hpp"

using namespace rcov;

TEST_CASE("dual torsion modules") {
  FiniteGroup Z2 = FiniteGroup::cyclic(2);
  SUBCASE("sign action reduces to the trivial action mod 2") {
    FiniteModule M = dual_torsion_module(Z2, GaloisLattice{1, {{{1}}, {{-1}}}}, 2);
    CHECK(M.moduli == Vec{2});
    CHECK(M.act[1] == Mat{{1}});
  }
  SUBCASE("trivial lattice, n = 3") {
    FiniteModule M = dual_torsion_module(Z2, GaloisLattice::trivial_action(Z2, 1), 3);
    CHECK(M.moduli == Vec{3});
    CHECK(M.act[1] == Mat{{1}});
  }
  SUBCASE("swap action, checked against homomorphisms") {
    Mat swap = {{0, 1}, {1, 0}};
    FiniteModule M = dual_torsion_module(Z2, GaloisLattice{2, {identity(2), swap}}, 2);
    M.validate(Z2);
    // (s f)(x) = f(s^-1 x) for every f in Hom(Z^2, Z/2) and x in a basis
    for (const auto& f : M.elements())
      for (int j = 0; j < 2; ++j) {
        Vec x(2, 0);
        x[j] = 1;
        Vec sx = mat_vec(swap, x);  // s^-1 = s
        i64 lhs = M.apply(1, f)[j];
        i64 rhs = mod(f[0] * sx[0] + f[1] * sx[1], 2);
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("contravariance: dualizing a surjection gives an injection") {
  FiniteGroup G = FiniteGroup::trivial();
  // surjection Z^2 -> Z, (a, b) -> a + 2b; its dual f -> (f, 2f)
  for (i64 n = 1; n <= 4; ++n) {
    FiniteModule A = dual_torsion_module(G, GaloisLattice::trivial_action(G, 1), n);
    int injective = 0;
    for (const auto& f : A.elements()) {
      Vec img = {mod(f[0], n), mod(2 * f[0], n)};
      injective += (img == Vec{0, 0}) ? 1 : 0;
    }
    CHECK(injective == 1);
  }
}

TEST_CASE("action respects the table") {
  FiniteGroup G = FiniteGroup::klein();
  GaloisLattice L{2, {identity(2), {{1, 0}, {0, -1}}, {{-1, 0}, {0, 1}}, {{-1, 0}, {0, -1}}}};
  CHECK_NOTHROW(L.validate(G));
  GaloisLattice bad = L;
  bad.act[3] = identity(2);
  CHECK_THROWS(bad.validate(G));
}

TEST_CASE("torsion points are reduced") {
  auto p = TorsionPoint::make({{3, 4}, {-1, 2}, {4, 2}});
  CHECK(p.coords[0] == std::make_pair<i64, i64>(3, 4));
  CHECK(p.coords[1] == std::make_pair<i64, i64>(1, 2));
  CHECK(p.coords[2] == std::make_pair<i64, i64>(0, 1));
  CHECK(p.order() == 4);
  CHECK(p.at_level(8) == Vec{6, 4, 0});
}

TEST_CASE("center torsion sequence") {
  FiniteGroup G = FiniteGroup::trivial();
  SUBCASE("A1 simply connected, n = 2") {
    auto cs = center_torsion_sequence(G, GaloisLattice::trivial_action(G, 1), Mat{{2}}, 2);
    CHECK(cs.Z.order() == 2);
    CHECK(cs.pi0_order == 2);
    CHECK(cs.surjective_at_check_level);
  }
  SUBCASE("adjoint") {
    for (i64 n = 1; n <= 5; ++n) {
      auto cs = center_torsion_sequence(G, GaloisLattice::trivial_action(G, 1), Mat{{1}}, n);
      CHECK(cs.Z.order() == 1);
    }
  }
  SUBCASE("A1 x A1 inside C2 data") {
    auto cs = center_torsion_sequence(G, GaloisLattice::trivial_action(G, 2), Mat{{2, 0}, {0, 2}}, 2);
    // brute force kernel of (f1, f2) -> (2 f1, 2 f2) on (Z/2)^2 is everything
    int count = 0;
    for (const auto& f : cs.T.elements()) count += (mod(2 * f[0], 2) == 0 && mod(2 * f[1], 2) == 0);
    CHECK(cs.Z.order() == count);
  }
  SUBCASE("exactness elementwise for C2") {
    auto cs = center_torsion_sequence(G, GaloisLattice::trivial_action(G, 2), Mat{{1, -1}, {0, 2}}, 4);
    int ker = 0;
    for (const auto& f : cs.T.elements()) {
      Vec img = cs.Tad.reduce(mat_vec(cs.projection, f));
      ker += img == Vec{0, 0};
    }
    CHECK(ker == cs.Z.order());
    for (const auto& z : cs.Z.elements()) {
      Vec t = cs.T.reduce(mat_vec(cs.inclusion, z));
      CHECK(cs.Tad.reduce(mat_vec(cs.projection, t)) == Vec{0, 0});
    }
  }
  SUBCASE("dependent simple roots are rejected") {
    CHECK_THROWS(center_torsion_sequence(G, GaloisLattice::trivial_action(G, 1), Mat{{1}, {2}}, 2));
  }
}
