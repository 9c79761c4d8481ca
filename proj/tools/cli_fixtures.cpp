#include "cli_fixtures.hpp"

#include <algorithm>
#include <sstream>

#include "rcov/endoscopy.hpp"
#include "rcov/error.hpp"

namespace rcov::cli {

namespace {

GaloisLattice lattice(const std::vector<Mat>& act) { return GaloisLattice{static_cast<int>(act[0].size()), act}; }

std::string str(i64 x) { return std::to_string(x); }

std::string orders_string(const Vec& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

struct Checks {
  std::vector<CheckResult> out;
  void add(const std::string& name, bool passed, const std::string& detail = {}) { out.push_back({name, passed, detail}); }
  // Runs f, recording a thrown exception as a failure.
  template <class F>
  void guard(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, false, std::string("error: ") + e.what());
    }
  }
};

std::vector<std::vector<int>> all_signs(std::size_t k) {
  std::vector<std::vector<int>> out;
  for (int m = 0; m < (1 << k); ++m) {
    std::vector<int> s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = (m >> i) & 1 ? -1 : 1;
    out.push_back(s);
  }
  return out;
}

void torus_checks(Checks& ck, const CoverBase& b, const std::vector<std::pair<i64, i64>>& class_counts, i64 aut_n, i64 aut_order,
                  const std::vector<bool>& lifting_bijective) {
  for (auto [n, expect] : class_counts)
    ck.guard("classes at n = " + str(n), [&] {
      auto cl = classify_covers(b, n);
      ck.add("classes at n = " + str(n), cl.classes.order() == expect, str(cl.classes.order()) + " classes, expected " + str(expect));
    });
  ck.guard("representatives", [&] {
    auto cl = classify_covers(b, 2);
    bool ok = true;
    for (const auto& r : cl.representatives) validate_descriptor(b, r);
    for (std::size_t i = 0; i < cl.representatives.size(); ++i)
      for (std::size_t j = 0; j < cl.representatives.size(); ++j)
        ok = ok && cover_isomorphisms(b, cl.representatives[i], cl.representatives[j]).exists == (i == j);
    ck.add("representatives are hypercocycles in distinct classes", ok, str(cl.representatives.size()) + " representatives at n = 2");
  });
  ck.guard("Baer group law", [&] {
    auto cl = classify_covers(b, 2);
    CoverDescriptor triv = trivial_descriptor(b, 2);
    bool ok = true;
    for (const auto& r : cl.representatives) {
      ok = ok && cover_isomorphisms(b, baer_sum(b, r, baer_inverse(b, r)), triv).exists;
      ok = ok && cover_isomorphisms(b, baer_sum(b, r, triv), r).exists;
    }
    ck.add("Baer sum with the inverse is trivial", ok);
  });
  ck.guard("automorphisms", [&] {
    i64 o = automorphism_group(b, aut_n).order();
    ck.add("automorphisms at n = " + str(aut_n), o == aut_order, "order " + str(o) + ", expected " + str(aut_order));
  });
  ck.guard("torsion lifting", [&] {
    bool ok = true;
    std::string seen;
    for (i64 n = 2; n <= 4; ++n) {
      bool bij = torsion_lifting(b, n).bijective;
      ok = ok && bij == lifting_bijective[n - 2];
      seen += (n > 2 ? ", " : "") + std::string(bij ? "bijective" : "not injective");
    }
    ck.add("torsion lifting at n = 2, 3, 4 matches the expected pattern", ok, seen);
  });
}

void endoscopic_checks(Checks& ck, const std::string& id, bool expect_trivial) {
  EndoscopicDatum d = endoscopic_fixture(id);
  EndoscopicCoverResult r = endoscopic_cover(d);
  ck.guard("dc = zbar", [&] {
    validate_descriptor(r.base, r.x);
    ck.add("dc = zbar", true, "descriptor at level " + str(r.x.n));
  });
  ck.add(expect_trivial ? "class of x_{H,G} is trivial" : "class of x_{H,G} is nontrivial", r.trivial_class == expect_trivial,
         "hyper-H^2 orders " + orders_string(r.class_orders) + ", coordinates " + orders_string(r.class_coords));
  ck.guard("pinning invariance", [&] {
    bool ok = true;
    auto signs = all_signs(r.H.simple.size());
    for (const auto& s : signs) {
      EndoscopicCoverResult r2 = endoscopic_cover(d, s);
      ok = ok && r2.class_coords == r.class_coords && cover_isomorphisms(r.base, r.x, r2.x).exists;
    }
    ck.add("class invariant under adapted pinnings", ok, str(static_cast<i64>(signs.size())) + " sign choices");
  });
  ck.guard("Weyl conjugation", [&] {
    WeylGroup W = weyl_group(d.dual);
    int tested = 0;
    bool ok = true;
    for (const auto& w : W.elements) {
      bool keeps = true;
      for (int a : r.H.positive) keeps = keeps && d.dual.is_positive(d.dual.find_root(mat_vec(w, r.H.roots[a])));
      if (!keeps) continue;
      ++tested;
      EndoscopicCoverResult r2 = endoscopic_cover(conjugate_datum(d, w));
      ok = ok && r2.trivial_class == r.trivial_class && r2.class_orders == r.class_orders;
    }
    ck.add("class invariant under Weyl conjugation", ok && tested > 0, str(tested) + " conjugates");
  });
  ck.guard("L-embedding certificate", [&] {
    LEmbeddingCertificate cert = l_embedding_certificate(d, r);
    ck.add("L-embedding certificate", cert.verified(),
           "level " + str(cert.level) + ", " + str(static_cast<i64>(cert.products_checked)) + " products checked");
    bool all_fail = true;
    for (std::size_t i = 0; i < r.x.z.size(); ++i) {
      EndoscopicCoverResult bad = r;
      bad.x.z[i] = mod(bad.x.z[i] + 1, 2);
      all_fail = all_fail && !check_l_embedding(d, bad, cert.lift, cert.level).multiplicative;
    }
    ck.add("mutated z fails multiplicativity", all_fail, str(static_cast<i64>(r.x.z.size())) + " single-entry mutations");
  });
}

int sign_of(const TransferReport& r) { return r.value.phase.as_sign(); }

QuadExtElement el(const QuadExt& E, const Rational& a, const Rational& b = Rational(0)) { return QuadExtElement{E, a, b}; }

void transfer_checks(Checks& ck) {
  for (const auto& f : transfer_sample_fields()) {
    std::string tag = " (" + f + ")";
    ck.guard("transfer" + tag, [&] {
      TransferInput in = transfer_sample(f);
      const QuadExt& E = in.E;
      TransferGroup tg = TransferGroup::from_datum(in.datum, E);
      int v0 = sign_of(delta_prime(in));
      QuadExtElement lambda = el(E, Rational(1), Rational(1));
      QuadExtElement gu = in.gamma.root_values[tg.G.is_positive(0) ? 0 : 1];

      bool lift_ok = true;
      for (i64 eta : {2, 3, 5, -7}) {
        TransferInput in2 = in;
        in2.delta = a1_elliptic_tuple(tg, lambda, lambda * el(E, Rational(eta)));
        lift_ok = lift_ok && sign_of(delta_prime(in2)) == v0;
      }
      ck.add("independent of the delta lift" + tag, lift_ok);

      bool genuine = false;
      for (i64 t : {-1, 2, 3, 5, 7, 13}) {
        if (kappa(Rational(t), E) != -1) continue;
        TransferInput in3 = in;
        in3.gamma = a1_elliptic_tuple(tg, lambda, gu * el(E, Rational(t)));
        genuine = sign_of(delta_prime(in3)) == -v0;
        break;
      }
      ck.add("genuine in gamma" + tag, genuine);

      bool stable_ok = true;
      for (i64 t : {-1, 2, 3, 5}) {
        TransferInput in4 = in;
        in4.stable_class = {Rational(t)};
        stable_ok = stable_ok && sign_of(delta_prime(in4)) == v0 * kappa(Rational(t), E);
      }
      ck.add("stable conjugates multiply by kappa" + tag, stable_ok);

      TransferInput in5 = in;
      QuadExtElement mu = lambda * lambda;
      in5.gamma = a1_elliptic_tuple(tg, mu, mu);
      ck.add("unrelated pairs give zero" + tag, delta_prime(in5).value.zero);

      TransferInput in6 = in;
      in6.normalization = Normalization::whittaker;
      TransferReport w = delta_prime(in6);
      ck.add("Whittaker value is the pinned value times epsilon" + tag,
             w.value.phase == delta_prime(in).value.phase * w.epsilon);
    });
  }
}

}  // namespace

const std::vector<FixtureInfo>& fixture_catalog() {
  static const std::vector<FixtureInfo> cat = {
      {"aniso1", "torus", "norm-one torus of a quadratic extension: Z/2 acting by -1 on Z"},
      {"split1", "torus", "split rank-one torus with Z/2 acting trivially"},
      {"induced-Z/2", "torus", "induced torus Z[Z/2]"},
      {"a1-elliptic", "endoscopic", "PGL2 with the elliptic endoscopic torus (s of order 4 in SL2, w_sigma = -1)"},
      {"a1xa1-in-c2", "endoscopic", "Sp4 dual C2 with endoscopic A1 x A1 swapped by Galois"},
  };
  return cat;
}

bool is_fixture(const std::string& id) {
  const auto& cat = fixture_catalog();
  return std::any_of(cat.begin(), cat.end(), [&](const FixtureInfo& f) { return f.id == id; });
}

CoverBase fixture_base(const std::string& id) {
  FiniteGroup Z2 = FiniteGroup::cyclic(2);
  if (id == "aniso1") return CoverBase::make_torus(Z2, lattice({Mat{{1}}, Mat{{-1}}}));
  if (id == "split1") return CoverBase::make_torus(Z2, lattice({Mat{{1}}, Mat{{1}}}));
  if (id == "induced-Z/2") return CoverBase::make_torus(Z2, lattice({identity(2), Mat{{0, 1}, {1, 0}}}));
  if (id == "a1-elliptic" || id == "a1xa1-in-c2") {
    EndoscopicDatum d = endoscopic_fixture(id);
    return CoverBase::make_group(d.G, d.dual, d.sigma_G);
  }
  throw ValidationError("unknown fixture \"" + id + "\"; see fixtures list");
}

std::vector<std::string> transfer_sample_fields() { return {"q3", "q5", "real"}; }

CoverElement a1_elliptic_tuple(const TransferGroup& tg, const QuadExtElement& lambda, const QuadExtElement& u) {
  CoverElement ce;
  ce.delta.values = {lambda * lambda.conj().inverse()};
  int p = tg.G.is_positive(0) ? 0 : 1;
  ce.root_values.resize(2, u);
  ce.root_values[p] = u;
  ce.root_values[1 - p] = u.conj();
  return ce;
}

TransferInput transfer_sample(const std::string& field) {
  struct Sample {
    std::string name;
    Place v;
    i64 d;
    i64 eta;         // delta lift lambda * eta
    int base_value;  // frozen
  };
  static const std::vector<Sample> samples = {
      {"q3", Place::padic(3), 3, 2, -1},
      {"q5", Place::padic(5), 2, 5, -1},
      {"real", Place::real(), -1, -1, -1},
  };
  for (const auto& s : samples) {
    if (s.name != field) continue;
    TransferInput in;
    in.datum = endoscopic_fixture("a1-elliptic");
    in.E = QuadExt::make(s.v, Rational(s.d));
    in.embedding = TorusEmbedding{Mat{{-1}}};
    TransferGroup tg = TransferGroup::from_datum(in.datum, in.E);
    QuadExtElement lambda{in.E, Rational(1), Rational(1)};
    in.gamma = a1_elliptic_tuple(tg, lambda, lambda);
    in.delta = a1_elliptic_tuple(tg, lambda, lambda * QuadExtElement{in.E, Rational(s.eta), Rational(0)});
    in.base = in.delta;
    in.base_value = s.base_value;
    return in;
  }
  throw ValidationError("unknown transfer sample field \"" + field + "\" (q3, q5 or real)");
}

std::vector<CheckResult> run_fixture(const std::string& id) {
  if (!is_fixture(id)) throw ValidationError("unknown fixture \"" + id + "\"; see fixtures list");
  Checks ck;
  if (id == "aniso1") {
    torus_checks(ck, fixture_base(id), {{2, 2}, {3, 1}, {4, 2}}, 2, 1, {false, true, false});
  } else if (id == "split1") {
    torus_checks(ck, fixture_base(id), {{2, 2}, {3, 1}, {4, 2}}, 2, 2, {true, true, true});
  } else if (id == "induced-Z/2") {
    torus_checks(ck, fixture_base(id), {{2, 1}, {3, 1}, {4, 1}}, 2, 1, {true, true, true});
  } else {
    endoscopic_checks(ck, id, id == "a1xa1-in-c2");
    if (id == "a1-elliptic") transfer_checks(ck);
  }
  return ck.out;
}

}  // namespace rcov::cli
