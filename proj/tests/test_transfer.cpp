#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rcov/endoscopy.hpp"
#include "rcov/error.hpp"
#include "rcov/localfield.hpp"
#include "rcov/transfer.hpp"
#include "transfer_oracle.hpp"

using namespace rcov;

using namespace transfer_oracle;


TEST_CASE("SL_2 oracle: diagonalization and splitting invariant") {
  std::mt19937_64 rng(11);
  for (const auto& E : test_fields()) {
    M2 g = standard_g(E);
    for (int trial = 0; trial < 10; ++trial) {
      QuadExtElement lambda = rand_lambda(rng, E, false);
      M2 D = mul(mul(inv(g), torus_matrix(lambda)), g);
      CHECK(D.e[0][0] == lambda);
      CHECK(D.e[1][1] == lambda.conj());
      CHECK(is_diag(D));
      QuadExtElement a = lambda - lambda.conj();
      // t = -2 sqrt(d) a_alpha for the standard g
      CHECK(oracle_split_invariant(g, a) == (el(E, Rational(0), Rational(-2)) * a).a);
    }
  }
}

TEST_CASE("LS cocycle for A1: torus part alpha^vee(delta_a - delta_-a)") {
  std::mt19937_64 rng(3);
  for (const std::string name : {"a1-elliptic", "a1ad-elliptic"}) {
    A1Case c = a1(name);
    for (const auto& E : test_fields()) {
      TransferGroup tg = TransferGroup::from_datum(c.d, E);
      TorusEmbedding emb{Mat{{-1}}};
      for (int trial = 0; trial < 8; ++trial) {
        QuadExtElement lambda = rand_lambda(rng, E, c.adjoint_dual);
        if (c.adjoint_dual && lambda * lambda == el(E, Rational(1))) continue;
        QuadExtElement u = lambda * el(E, rand_f(rng));
        CoverElement ce = a1_tuple(c, lambda, u);
        auto x = ls_cocycle(tg, emb, ce);
        int p = pos_root(tg);
        TorusPoint expect = TorusPoint::cocharacter(E, tg.G.coroots[p], u - u.conj());
        CHECK(x[1].t == expect);
        CHECK(x[1].w == emb.omega);
        CHECK(is_normalizer_cocycle(tg, x));
        auto y = x;
        y[1].t = y[1].t * TorusPoint::cocharacter(E, tg.G.coroots[p], el(E, Rational(1), Rational(1)));
        CHECK_FALSE(is_normalizer_cocycle(tg, y));
      }
    }
  }
}

TEST_CASE("LS cocycle condition on random C2 tori") {
  std::mt19937_64 rng(2027);
  int checked = 0;
  for (const auto& E : {QuadExt::make(Place::padic(5), Rational(2)), QuadExt::make(Place::padic(3), Rational(-1))}) {
    TransferGroup tg = c2_group(E);
    for (const auto& w : involutions(tg.G)) {
      TorusEmbedding emb{w};
      for (int trial = 0; trial < 20; ++trial) {
        CoverElement ce;
        if (!random_c2_tuple(rng, tg, emb, ce)) continue;
        CHECK_NOTHROW(validate_cover_element(tg, emb, ce));
        auto x = ls_cocycle(tg, emb, ce);
        CHECK(is_normalizer_cocycle(tg, x));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("trivial omega gives the trivial cocycle") {
  TransferGroup tg = c2_group(QuadExt::make(Place::real(), Rational(-1)));
  TorusEmbedding emb{identity(2)};
  std::mt19937_64 rng(5);
  CoverElement ce;
  while (!random_c2_tuple(rng, tg, emb, ce)) {
  }
  auto x = ls_cocycle(tg, emb, ce);
  CHECK(x[1].t == TorusPoint::one(tg.E, 2));
  CHECK(is_normalizer_cocycle(tg, x));
}

TEST_CASE("invalid tuples are rejected") {
  A1Case c = a1("a1-elliptic");
  QuadExt E = QuadExt::make(Place::padic(5), Rational(2));
  TransferGroup tg = TransferGroup::from_datum(c.d, E);
  TorusEmbedding emb{Mat{{-1}}};
  QuadExtElement lambda = el(E, Rational(1), Rational(1));
  CoverElement ok = a1_tuple(c, lambda, lambda);
  CHECK_NOTHROW(validate_cover_element(tg, emb, ok));
  CoverElement bad = ok;
  bad.root_values[0] = bad.root_values[0] * el(E, Rational(0), Rational(1));
  CHECK_THROWS_AS(validate_cover_element(tg, emb, bad), ValidationError);
  CHECK_THROWS_AS(validate_cover_element(tg, emb, a1_tuple(c, el(E, Rational(2)), el(E, Rational(2)))), ValidationError);
  CHECK_THROWS_AS(validate_embedding(tg, TorusEmbedding{Mat{{2}}}), ValidationError);
  CHECK_THROWS_AS(ls_cocycle(tg, emb, ok, {1, 1}), ValidationError);
}

TEST_CASE("eta shift law against the matrix oracle") {
  std::mt19937_64 rng(77);
  for (const std::string name : {"a1-elliptic", "a1ad-elliptic"}) {
    A1Case c = a1(name);
    for (const auto& E : test_fields()) {
      for (int trial = 0; trial < 10; ++trial) {
        QuadExtElement lambda = rand_lambda(rng, E, c.adjoint_dual);
        if (c.adjoint_dual && lambda * lambda == el(E, Rational(1))) continue;
        TransferInput in = a1_input(c, lambda, lambda, lambda);
        Rational eta = rand_f(rng);
        in.delta = a1_tuple(c, lambda, lambda * el(E, eta));
        QuadExtElement a = in.delta.root_values[pos_root(TransferGroup::from_datum(c.d, E))];
        CHECK(inv_pairing(in) == oracle_delta_I(standard_g(E), a - a.conj()));
        TransferGroup tg = TransferGroup::from_datum(c.d, E);
        EtaShift sh = eta_between(tg, in.embedding, *in.base, in.delta);
        CHECK(eta_shift_pairing(tg, in.embedding, sh, KappaCharacter{c.d.s}) == kappa(eta, E));
      }
    }
  }
}

TEST_CASE("eta pairing is trivial on asymmetric orbits") {
  QuadExt E = QuadExt::make(Place::padic(5), Rational(2));
  TransferGroup tg = c2_group(E);
  TorusEmbedding emb{identity(2)};
  EtaShift sh;
  sh.values.assign(tg.G.size(), el(E, Rational(2)));
  for (const auto& o : root_orbits(tg, emb)) CHECK_FALSE(o.symmetric);
  CHECK(eta_shift_pairing(tg, emb, sh, KappaCharacter{TorsionPoint::make({{1, 2}, {0, 1}})}) == 1);
}

TEST_CASE("Delta'_x: lift independence, genuineness, unrelated pairs") {
  std::mt19937_64 rng(99);
  for (const std::string name : {"a1-elliptic", "a1ad-elliptic"}) {
    A1Case c = a1(name);
    for (const auto& E : test_fields()) {
      for (int trial = 0; trial < 8; ++trial) {
        QuadExtElement lambda = rand_lambda(rng, E, c.adjoint_dual);
        if (c.adjoint_dual && lambda * lambda == el(E, Rational(1))) continue;
        QuadExtElement gu = lambda * el(E, rand_f(rng));
        TransferInput in = a1_input(c, lambda, gu, lambda);
        int v0 = sign_value(delta_prime(in));
        // another lift of delta
        Rational eta = rand_f(rng);
        TransferInput in2 = in;
        in2.delta = a1_tuple(c, lambda, lambda * el(E, eta));
        CHECK(sign_value(delta_prime(in2)) == v0);
        // gamma_x times a non-norm
        for (i64 t : {-1, 2, 3, 5, 7, 13}) {
          if (kappa(Rational(t), E) != -1) continue;
          TransferInput in3 = in;
          in3.gamma = a1_tuple(c, lambda, gu * el(E, Rational(t)));
          CHECK(sign_value(delta_prime(in3)) == -v0);
          break;
        }
        // unrelated gamma
        TransferInput in4 = in;
        QuadExtElement mu = lambda * lambda;
        if (!c.adjoint_dual && !(mu * mu.conj().inverse() == lambda * lambda.conj().inverse()) && !mu.in_base()) {
          in4.gamma = a1_tuple(c, mu, mu);
          CHECK(delta_prime(in4).value.zero);
        }
      }
    }
  }
}

TEST_CASE("stable conjugates in SL_2 change Delta'_x by <inv, s>") {
  A1Case c = a1("a1ad-elliptic");
  std::mt19937_64 rng(41);
  for (const auto& E : test_fields()) {
    M2 g1 = standard_g(E);
    for (int trial = 0; trial < 10; ++trial) {
      QuadExtElement lambda = rand_lambda(rng, E, true);
      if (lambda * lambda == el(E, Rational(1))) continue;
      Rational t = rand_f(rng);
      QuadExtElement one = el(E, Rational(1));
      M2 d1 = torus_matrix(lambda);
      M2 d2 = mul(mul(diag(el(E, t), one), d1), inv(diag(el(E, t), one)));
      M2 g2 = mul(mul(diag(el(E, t), one), g1), diag(one, el(E, Rational(1) / t)));
      M2 D1 = mul(mul(inv(g1), d1), g1), D2 = mul(mul(inv(g2), d2), g2);
      REQUIRE(is_diag(D2));
      CHECK(D1.e[0][0] == D2.e[0][0]);
      QuadExtElement a = lambda - lambda.conj();
      int oracle_ratio = oracle_delta_I(g1, a) * oracle_delta_I(g2, a);

      TransferInput in1 = a1_input(c, lambda, lambda, lambda);
      TransferInput in2 = in1;
      in2.stable_class = {t};
      int lib_ratio = sign_value(delta_prime(in1)) * sign_value(delta_prime(in2));
      CHECK(lib_ratio == oracle_ratio);
      CHECK(lib_ratio == kappa(t, E));
    }
  }
}

TEST_CASE("base point policy") {
  A1Case c = a1("a1-elliptic");
  QuadExt E = QuadExt::make(Place::padic(5), Rational(2));
  QuadExtElement lambda = el(E, Rational(1), Rational(1));
  TransferInput in = a1_input(c, lambda, lambda, lambda);
  in.base.reset();
  CHECK_THROWS_AS(inv_pairing(in), ValidationError);
  in.kostant_trivial = true;
  CHECK(inv_pairing(in) == 1);
  in.stable_class = {Rational(1), Rational(2)};
  CHECK_THROWS_AS(inv_pairing(in), ValidationError);
  TransferInput bad = a1_input(c, lambda, lambda, lambda);
  bad.base = a1_tuple(c, el(E, Rational(2), Rational(1)), el(E, Rational(2), Rational(1)));
  CHECK_THROWS_AS(inv_pairing(bad), ValidationError);
  TransferInput mismatch = a1_input(c, lambda, lambda, lambda);
  mismatch.datum = endoscopic_fixture("a1-split");
  CHECK_THROWS_AS(delta_prime(mismatch), ValidationError);
}

TEST_CASE("inv_H requires H to be a torus") {
  EndoscopicDatum d = endoscopic_fixture("c2-split");
  QuadExt E = QuadExt::make(Place::padic(5), Rational(2));
  TransferGroup tg = TransferGroup::from_datum(d, E);
  TransferInput in;
  in.datum = d;
  in.E = E;
  in.embedding = TorusEmbedding{identity(2)};
  std::mt19937_64 rng(4);
  while (!random_c2_tuple(rng, tg, in.embedding, in.delta)) {
  }
  in.gamma = in.delta;
  in.kostant_trivial = true;
  CHECK_THROWS_AS(inv_H(in), UnsupportedError);
}

TEST_CASE("chi-data oracle extends kappa_E") {
  std::mt19937_64 rng(31);
  for (const auto& E : criterion_fields()) {
    for (int trial = 0; trial < 40; ++trial) {
      Rational x = rand_f(rng) * Rational(trial % 3 == 0 ? E.v.p + (E.v.is_real() ? 1 : 0) : 1);
      CAPTURE(E.v.p);
      CAPTURE(E.d);
      CAPTURE(x);
      CHECK(to_sign(chi_data(el(E, x))) == kappa(x, E));
      QuadExtElement y = rand_el(rng, E), z = rand_el(rng, E);
      CHECK(std::abs(chi_data(y * z) - chi_data(y) * chi_data(z)) < 1e-9);
    }
  }
}

TEST_CASE("classical comparison for PGL_2: Delta' = Delta'_x mu_1") {
  A1Case c = a1("a1-elliptic");
  std::mt19937_64 rng(123);
  for (const auto& E : criterion_fields()) {
    auto x_factor = [&](const QuadExtElement& g1, const QuadExtElement& ga) {
      return sign_value(delta_prime(a1_input(c, g1, ga, g1)));
    };
    auto mu1 = [&](const QuadExtElement& g1, const QuadExtElement& ga) { return classical_factor(g1, Rational(1)) * x_factor(g1, ga); };
    for (int trial = 0; trial < 25; ++trial) {
      QuadExtElement g1 = rand_lambda(rng, E, false), h1 = rand_lambda(rng, E, false);
      QuadExtElement gh = g1 * h1;
      if (gh.in_base()) continue;
      // the classical factor does not depend on the a-datum
      CHECK(classical_factor(g1, rand_f(rng)) == classical_factor(g1, Rational(1)));
      QuadExtElement ga = g1 * el(E, rand_f(rng)), ha = h1 * el(E, rand_f(rng));
      CHECK(classical_factor(g1, Rational(1)) == x_factor(g1, ga) * mu1_model(g1, ga));
      CHECK(mu1(gh, ga * ha) == mu1(g1, ga) * mu1(h1, ha));
      // restriction to Z_1 = F^x is lambda_1^-1, lambda_1 read off the classical factor
      Rational z = rand_f(rng);
      int lambda1 = classical_factor(g1 * el(E, z), Rational(1)) * classical_factor(g1, Rational(1));
      CHECK(lambda1 == kappa(z, E));
      CHECK(mu1(g1 * el(E, z), ga) * mu1(g1, ga) == lambda1);
    }
  }
}

TEST_CASE("Delta_II bridge") {
  std::mt19937_64 rng(8);
  A1Case c = a1("a1-elliptic");
  for (const auto& E : {QuadExt::make(Place::padic(5), Rational(2)), QuadExt::make(Place::padic(5), Rational(5)),
                        QuadExt::make(Place::padic(13), Rational(26)), QuadExt::make(Place::padic(2), Rational(5))}) {
    auto chi = QuarticCharacter::make(E);
    REQUIRE(chi.has_value());
    // phi^2 = kappa_E
    for (int trial = 0; trial < 30; ++trial) {
      Rational x = rand_f(rng) * Rational(E.v.p);
      RootOfUnity p = (*chi)(x);
      CHECK((p * p).as_sign() == kappa(x, E));
    }
    TransferGroup tg = TransferGroup::from_datum(c.d, E);
    TorusEmbedding emb{Mat{{-1}}};
    for (int trial = 0; trial < 20; ++trial) {
      QuadExtElement lambda = rand_lambda(rng, E, false);
      CoverElement ce = a1_tuple(c, lambda, lambda * el(E, rand_f(rng)));
      CHECK(delta_ii_bridge(tg, emb, ce, *chi).agree());
    }
    TransferGroup c2 = c2_group(E);
    for (const auto& w : involutions(c2.G)) {
      TorusEmbedding e2{w};
      CoverElement ce;
      if (!random_c2_tuple(rng, c2, e2, ce)) continue;
      DeltaIIBridge b = delta_ii_bridge(c2, e2, ce, *chi);
      CHECK(b.agree());
      if (w == identity(2)) CHECK(b.tuple_formula == 1);
    }
  }
  CHECK_FALSE(QuarticCharacter::make(QuadExt::make(Place::padic(3), Rational(3))).has_value());
  CHECK_FALSE(QuarticCharacter::make(QuadExt::make(Place::real(), Rational(-1))).has_value());
}

TEST_CASE("epsilon factors") {
  // classical evaluation of the quadratic Gauss sum
  for (i64 p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 97}) {
    std::complex<double> g = gauss_sum(p), expect = p % 4 == 1 ? std::sqrt(double(p)) : std::complex<double>(0, std::sqrt(double(p)));
    CHECK(std::abs(g - expect) < 1e-9);
  }
  for (const auto& E : test_fields()) {
    if (E.v.p == 2 && E.ramified()) continue;
    RootOfUnity e = epsilon_quadratic(E, {});
    CHECK((e * e).as_sign() == kappa(Rational(-1), E));
    RootOfUnity m = epsilon_quadratic(E, AdditiveCharacter{-1, Rational(1)});
    CHECK(m == e * RootOfUnity::sign(kappa(Rational(-1), E)));
    RootOfUnity s = epsilon_quadratic(E, AdditiveCharacter{1, Rational(3)});
    CHECK(s == e * RootOfUnity::sign(kappa(Rational(3), E)));
  }
  CHECK(epsilon_quadratic(QuadExt::make(Place::real(), Rational(-1)), {}) == RootOfUnity{1, 4});
  CHECK(epsilon_quadratic(QuadExt::make(Place::padic(5), Rational(2)), {}) == RootOfUnity{});
  CHECK_THROWS_AS(epsilon_quadratic(QuadExt::make(Place::padic(2), Rational(3)), {}), UnsupportedError);
}

TEST_CASE("Whittaker normalization and conventions") {
  std::mt19937_64 rng(6);
  A1Case c = a1("a1-elliptic");
  for (const auto& E : test_fields()) {
    if (E.v.p == 2 && E.ramified()) continue;
    QuadExtElement lambda = rand_lambda(rng, E, false);
    TransferInput in = a1_input(c, lambda, lambda, lambda);
    TransferReport pin = delta_prime(in);
    in.normalization = Normalization::whittaker;
    TransferReport wh = delta_prime(in);
    CHECK(wh.value.phase == pin.value.phase * epsilon_quadratic(E, {}).inverse());
    in.cft = CftConvention::artin;
    CHECK(delta_prime(in).value.phase == wh.value.phase);
  }
}
