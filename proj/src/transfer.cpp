#include "rcov/transfer.hpp"

#include <cmath>
#include <numbers>

#include "rcov/error.hpp"

namespace rcov {

namespace {

QuadExtElement one_of(const QuadExt& E) { return QuadExtElement{E, Rational(1), Rational(0)}; }

QuadExtElement power(const QuadExtElement& x, i64 e) {
  QuadExtElement base = e < 0 ? x.inverse() : x, r = one_of(x.E);
  for (i64 k = 0; k < (e < 0 ? -e : e); ++k) r = r * base;
  return r;
}

i64 dot(const Vec& a, const Vec& b) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec unit_vec(int n, int i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

// sigma_S on root indices.
std::vector<int> sigma_perm(const TransferGroup& tg, const TorusEmbedding& emb) {
  Mat ss = emb.sigma_S(tg);
  std::vector<int> p(tg.G.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = tg.G.find_root(mat_vec(ss, tg.G.roots[i]));
    if (p[i] < 0) throw ValidationError("sigma_S does not permute the roots");
  }
  return p;
}

TorusPoint sign_point(const QuadExt& E, const Vec& t) {
  TorusPoint r;
  for (i64 x : t) r.values.push_back(QuadExtElement{E, Rational(mod(x, 2) ? -1 : 1), Rational(0)});
  return r;
}

RootOfUnity snap_to_eighth(std::complex<double> z) {
  for (i64 k = 0; k < 8; ++k)
    if (std::abs(z - std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / 8)) < 1e-6)
      return RootOfUnity{k, 8}.reduced();
  throw CertificateError("epsilon factor is not an eighth root of unity");
}

int sign_of(const Rational& x) { return x < Rational(0) ? -1 : 1; }

i64 primitive_root(i64 p) {
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    i64 x = 1;
    for (i64 k = 1; k < p - 1; ++k) {
      x = x * g % p;
      if (x == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // p = 2
}

}  // namespace

RootOfUnity RootOfUnity::reduced() const {
  if (den <= 0) throw ValidationError("root of unity: denominator must be positive");
  i64 n = mod(num, den), g = gcd(n, den);
  if (g == 0) g = den;
  return RootOfUnity{n / g, den / g};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  i64 l = lcm(den, o.den);
  return RootOfUnity{num * (l / den) + o.num * (l / o.den), l}.reduced();
}

bool RootOfUnity::operator==(const RootOfUnity& o) const {
  RootOfUnity a = reduced(), b = o.reduced();
  return a.num == b.num && a.den == b.den;
}

std::complex<double> RootOfUnity::value() const {
  return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den));
}

int RootOfUnity::as_sign() const {
  RootOfUnity r = reduced();
  if (r.den == 1) return 1;
  if (r.den == 2) return -1;
  throw ValidationError("root of unity is not a sign");
}

TorusPoint TorusPoint::one(const QuadExt& E, int rank) { return TorusPoint{std::vector<QuadExtElement>(rank, one_of(E))}; }

TorusPoint TorusPoint::cocharacter(const QuadExt& E, const Vec& lambda, const QuadExtElement& a) {
  TorusPoint r;
  for (i64 e : lambda) r.values.push_back(e == 0 ? one_of(E) : power(a, e));
  return r;
}

QuadExtElement TorusPoint::eval(const Vec& chi) const {
  if (chi.size() != values.size()) throw ValidationError("torus point: character of wrong rank");
  if (values.empty()) throw ValidationError("torus point: empty");
  QuadExtElement r = one_of(values[0].E);
  for (std::size_t i = 0; i < chi.size(); ++i)
    if (chi[i] != 0) r = r * power(values[i], chi[i]);
  return r;
}

TorusPoint TorusPoint::operator*(const TorusPoint& o) const {
  TorusPoint r = *this;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = r.values[i] * o.values[i];
  return r;
}

TorusPoint TorusPoint::inverse() const {
  TorusPoint r = *this;
  for (auto& v : r.values) v = v.inverse();
  return r;
}

TorusPoint TorusPoint::act(const Mat& w) const {
  Mat wi = unimodular_inverse(w);
  int n = static_cast<int>(values.size());
  TorusPoint r;
  for (int i = 0; i < n; ++i) r.values.push_back(eval(mat_vec(wi, unit_vec(n, i))));
  return r;
}

bool TorusPoint::operator==(const TorusPoint& o) const { return values == o.values; }

RootDatum group_datum(const RootDatum& dual) {
  RootDatum g;
  g.rank = dual.rank;
  g.roots = dual.coroots;
  g.coroots = dual.roots;
  g.simple = dual.simple;
  g.finalize();
  return g;
}

TransferGroup TransferGroup::from_datum(const EndoscopicDatum& d, const QuadExt& E) {
  if (d.G.order() != 2) throw UnsupportedError("transfer: the Galois group must be Gal(E/F) of order 2");
  validate_datum(d);
  TransferGroup tg{group_datum(d.dual), cocharacter_action(d.sigma_G[1]), E};
  return tg;
}

NormalizerElement normalizer_multiply(const TransferGroup& tg, const NormalizerElement& a, const NormalizerElement& b) {
  Vec tau = weyl_tits_cocycle(tg.G, a.w, b.w);
  return NormalizerElement{a.t * b.t.act(a.w) * sign_point(tg.E, tau), mat_mul(a.w, b.w)};
}

NormalizerElement normalizer_galois(const TransferGroup& tg, const NormalizerElement& a) {
  TorusPoint t = a.t.act(tg.sigma_T);
  for (auto& v : t.values) v = v.conj();
  return NormalizerElement{t, mat_mul(mat_mul(tg.sigma_T, a.w), unimodular_inverse(tg.sigma_T))};
}

void validate_embedding(const TransferGroup& tg, const TorusEmbedding& emb) {
  int n = tg.G.rank;
  if (emb.omega.size() != static_cast<std::size_t>(n)) throw ValidationError("embedding: omega has the wrong size");
  if (!tg.G.preserves_base(tg.sigma_T)) throw ValidationError("embedding: sigma_T does not preserve the pinning");
  if (mat_mul(tg.sigma_T, tg.sigma_T) != identity(n)) throw ValidationError("embedding: sigma_T is not an involution");
  if (weyl_group(tg.G).find(emb.omega) < 0) throw ValidationError("embedding: omega is not in the Weyl group");
  Mat cyc = mat_mul(mat_mul(emb.omega, tg.sigma_T), mat_mul(emb.omega, unimodular_inverse(tg.sigma_T)));
  if (cyc != identity(n)) throw ValidationError("embedding: omega is not a 1-cocycle");
}

std::vector<RootOrbit2> root_orbits(const TransferGroup& tg, const TorusEmbedding& emb) {
  auto p = sigma_perm(tg, emb);
  std::vector<bool> seen(tg.G.size(), false);
  std::vector<RootOrbit2> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    RootOrbit2 o;
    for (int j : {static_cast<int>(i), p[i], tg.G.neg[i], tg.G.neg[p[i]]})
      if (!seen[j]) {
        seen[j] = true;
        o.roots.push_back(j);
      }
    o.symmetric = p[i] == tg.G.neg[i];
    out.push_back(o);
  }
  return out;
}

void validate_cover_element(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& d) {
  validate_embedding(tg, emb);
  if (d.delta.values.size() != static_cast<std::size_t>(tg.G.rank)) throw ValidationError("cover element: delta has the wrong rank");
  if (d.root_values.size() != tg.G.size()) throw ValidationError("cover element: one value per root is required");
  for (const auto& v : d.delta.values)
    if (v.is_zero() || !(v.E.d == tg.E.d)) throw ValidationError("cover element: delta must take values in E^x");
  TorusPoint s = d.delta.act(emb.sigma_S(tg));
  for (auto& v : s.values) v = v.conj();
  if (!(s == d.delta)) throw ValidationError("cover element: delta is not F-rational for sigma_S");
  auto p = sigma_perm(tg, emb);
  for (std::size_t a = 0; a < p.size(); ++a) {
    const auto& da = d.root_values[a];
    if (da.is_zero()) throw ValidationError("cover element: delta_a must be nonzero");
    if (!(da.conj() == d.root_values[p[a]])) throw ValidationError("cover element: delta_a is not Galois equivariant");
    QuadExtElement ad = d.delta.eval(tg.G.roots[a]);
    if (ad == one_of(tg.E)) throw ValidationError("cover element: delta is not strongly regular");
    if (!(da * d.root_values[tg.G.neg[a]].inverse() == ad)) throw ValidationError("cover element: delta_a / delta_-a != a(delta)");
  }
}

std::vector<NormalizerElement> ls_cocycle(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& d,
                                          const std::vector<int>& gauge) {
  validate_cover_element(tg, emb, d);
  std::size_t nr = tg.G.size();
  std::vector<int> p(nr);
  for (std::size_t a = 0; a < nr; ++a) p[a] = tg.G.is_positive(static_cast<int>(a)) ? 1 : -1;
  if (!gauge.empty()) {
    if (gauge.size() != nr) throw ValidationError("ls cocycle: gauge needs one sign per root");
    for (std::size_t a = 0; a < nr; ++a)
      if ((gauge[a] != 1 && gauge[a] != -1) || gauge[tg.G.neg[a]] != -gauge[a]) throw ValidationError("ls cocycle: invalid gauge");
    p = gauge;
  }
  Mat si = unimodular_inverse(emb.sigma_S(tg));
  TorusPoint t = TorusPoint::one(tg.E, tg.G.rank);
  for (std::size_t a = 0; a < nr; ++a) {
    if (p[a] < 0) continue;
    int b = tg.G.find_root(mat_vec(si, tg.G.roots[a]));
    if (p[b] > 0) continue;
    t = t * TorusPoint::cocharacter(tg.E, tg.G.coroots[a], d.root_values[a] - d.root_values[tg.G.neg[a]]);
  }
  return {NormalizerElement{TorusPoint::one(tg.E, tg.G.rank), identity(tg.G.rank)}, NormalizerElement{t, emb.omega}};
}

bool is_normalizer_cocycle(const TransferGroup& tg, const std::vector<NormalizerElement>& x) {
  if (x.size() != 2) return false;
  NormalizerElement e{TorusPoint::one(tg.E, tg.G.rank), identity(tg.G.rank)};
  if (!(x[0] == e)) return false;
  return normalizer_multiply(tg, x[1], normalizer_galois(tg, x[1])) == e;
}

RootOfUnity KappaCharacter::value(const Vec& coroot) const {
  i64 ord = s.order();
  return RootOfUnity{mod(dot(coroot, s.at_level(ord)), ord), ord}.reduced();
}

std::vector<int> KappaCharacter::R_kappa(const RootDatum& G) const {
  std::vector<int> out;
  for (std::size_t a = 0; a < G.size(); ++a)
    if (value(G.coroots[a]) == RootOfUnity{}) out.push_back(static_cast<int>(a));
  return out;
}

void validate_kappa(const TransferGroup& tg, const TorusEmbedding& emb, const KappaCharacter& k) {
  if (k.s.coords.size() != static_cast<std::size_t>(tg.G.rank)) throw ValidationError("kappa: wrong rank");
  auto p = sigma_perm(tg, emb);
  for (std::size_t a = 0; a < p.size(); ++a)
    if (!(k.value(tg.G.coroots[a]) == k.value(tg.G.coroots[p[a]]))) throw ValidationError("kappa: not Galois invariant on coroots");
}

void validate_eta(const TransferGroup& tg, const TorusEmbedding& emb, const EtaShift& eta) {
  if (eta.values.size() != tg.G.size()) throw ValidationError("eta: one value per root is required");
  auto p = sigma_perm(tg, emb);
  for (std::size_t a = 0; a < p.size(); ++a) {
    const auto& e = eta.values[a];
    if (e.is_zero()) throw ValidationError("eta: values must be nonzero");
    if (!(eta.values[tg.G.neg[a]] == e)) throw ValidationError("eta: eta_a != eta_-a");
    if (!(e.conj() == eta.values[p[a]])) throw ValidationError("eta: not Galois equivariant");
    bool pm_fixed = p[a] == static_cast<int>(a) || p[a] == tg.G.neg[a];
    if (pm_fixed && !e.in_base()) throw ValidationError("eta: eta_a must lie in F_{+-a}");
  }
}

int eta_shift_pairing(const TransferGroup& tg, const TorusEmbedding& emb, const EtaShift& eta, const KappaCharacter& k) {
  validate_eta(tg, emb, eta);
  validate_kappa(tg, emb, k);
  int r = 1;
  for (const auto& o : root_orbits(tg, emb)) {
    if (!o.symmetric) continue;
    int a = o.roots[0];
    if (k.value(tg.G.coroots[a]).as_sign() == -1) r *= kappa(eta.values[a].a, tg.E);
  }
  return r;
}

EtaShift eta_between(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& a, const CoverElement& b) {
  validate_cover_element(tg, emb, a);
  validate_cover_element(tg, emb, b);
  if (!(a.delta == b.delta)) throw ValidationError("eta: the tuples lie over different points");
  EtaShift e;
  for (std::size_t i = 0; i < a.root_values.size(); ++i) e.values.push_back(b.root_values[i] * a.root_values[i].inverse());
  validate_eta(tg, emb, e);
  return e;
}

std::complex<double> gauss_sum(i64 p) {
  if (p < 3 || !is_prime(p)) throw ValidationError("gauss sum: odd prime required");
  std::complex<double> g = 0;
  for (i64 u = 1; u < p; ++u)
    g += static_cast<double>(legendre(u, p)) * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(u) / static_cast<double>(p));
  return g;
}

RootOfUnity epsilon_quadratic(const QuadExt& E, const AdditiveCharacter& psi) {
  if (psi.sign != 1 && psi.sign != -1) throw ValidationError("additive character: sign must be +-1");
  if (psi.scale == Rational(0)) throw ValidationError("additive character: scale must be nonzero");
  Rational a = psi.scale * Rational(psi.sign);
  if (E.v.is_real()) {
    if (E.d > Rational(0)) throw ValidationError("epsilon: R(sqrt d) with d > 0 is not a field");
    return RootOfUnity{1, 4} * RootOfUnity::sign(sign_of(a));
  }
  RootOfUnity twist = RootOfUnity::sign(kappa(a, E));
  if (!E.ramified()) return twist;
  if (E.v.p == 2) throw UnsupportedError("epsilon: ramified quadratic characters at p = 2");
  i64 p = E.v.p;
  std::complex<double> z = gauss_sum(p) / std::sqrt(static_cast<double>(p)) * static_cast<double>(kappa(Rational(p), E));
  return snap_to_eighth(z) * twist;
}

RootOfUnity epsilon_whittaker(const EndoscopicDatum& d, const QuadExt& E, const AdditiveCharacter& psi) {
  auto minus_mult = [](const Mat& m) {
    i64 tr = 0;
    for (std::size_t i = 0; i < m.size(); ++i) tr += m[i][i];
    return (static_cast<i64>(m.size()) - tr) / 2;
  };
  i64 k = minus_mult(d.sigma_G[1]) - minus_mult(d.sigma_H()[1]);
  RootOfUnity e = epsilon_quadratic(E, psi);
  return RootOfUnity{e.num * k, e.den}.reduced();
}

namespace {

struct Setup {
  TransferGroup tg;
  KappaCharacter k;
  std::vector<RootOrbit2> orbits;
};

Setup setup(const TransferInput& in) {
  Setup s{TransferGroup::from_datum(in.datum, in.E), KappaCharacter{in.datum.s}, {}};
  validate_embedding(s.tg, in.embedding);
  if (in.embedding.sigma_S(s.tg) != cocharacter_action(in.datum.sigma_H()[1]))
    throw ValidationError("transfer: the torus embedding does not match sigma_H");
  validate_kappa(s.tg, in.embedding, s.k);
  s.orbits = root_orbits(s.tg, in.embedding);
  return s;
}

}  // namespace

int inv_pairing(const TransferInput& in) {
  Setup s = setup(in);
  validate_cover_element(s.tg, in.embedding, in.delta);
  if (in.base_value != 1 && in.base_value != -1) throw ValidationError("inv: base value must be +-1");
  CoverElement base;
  int value = 1;
  if (in.base) {
    base = *in.base;
    value = in.kostant_trivial ? 1 : in.base_value;
  } else if (in.kostant_trivial) {
    base = in.delta;
  } else {
    throw ValidationError("inv: a base point or the Kostant-trivial assertion is required");
  }
  value *= eta_shift_pairing(s.tg, in.embedding, eta_between(s.tg, in.embedding, base, in.delta), s.k);
  if (!in.stable_class.empty()) {
    std::size_t j = 0;
    for (const auto& o : s.orbits) {
      if (!o.symmetric) continue;
      if (j >= in.stable_class.size()) throw ValidationError("inv: one stable class entry per symmetric orbit");
      if (s.k.value(s.tg.G.coroots[o.roots[0]]).as_sign() == -1) value *= kappa(in.stable_class[j], in.E);
      ++j;
    }
    if (j != in.stable_class.size()) throw ValidationError("inv: one stable class entry per symmetric orbit");
  }
  return value;
}

int inv_H(const TransferInput& in) {
  Setup s = setup(in);
  if (!s.k.R_kappa(s.tg.G).empty()) throw UnsupportedError("inv_H: evaluated only when H is a torus");
  validate_cover_element(s.tg, in.embedding, in.gamma);
  validate_cover_element(s.tg, in.embedding, in.delta);
  if (!(in.gamma.delta == in.delta.delta)) throw ValidationError("inv_H: gamma and delta are not related");
  EndoscopicCoverResult r = endoscopic_cover(in.datum);
  LEmbeddingCertificate cert = check_l_embedding(in.datum, r);
  for (i64 v : cert.lift)
    if (v != 0) throw UnsupportedError("inv_H: nontrivial lift x");
  int value = 1;
  for (const auto& o : s.orbits) {
    if (!o.symmetric) continue;
    int a = o.roots[0];
    value *= kappa((in.delta.root_values[a] * in.gamma.root_values[a].inverse()).a, in.E);
  }
  return value;
}

TransferReport delta_prime(const TransferInput& in) {
  Setup s = setup(in);
  TransferReport rep;
  rep.cover = endoscopic_cover(in.datum);
  validate_cover_element(s.tg, in.embedding, in.gamma);
  validate_cover_element(s.tg, in.embedding, in.delta);
  rep.x_sigma_torus = ls_cocycle(s.tg, in.embedding, in.delta)[1].t.values;
  if (!(in.gamma.delta == in.delta.delta)) {
    rep.related = false;
    rep.value.zero = true;
    return rep;
  }
  rep.inv_pairing = inv_pairing(in);
  rep.inv_H = inv_H(in);
  // The Artin convention replaces each kappa value by its inverse.
  RootOfUnity v = RootOfUnity::sign(rep.inv_pairing * rep.inv_H);
  if (in.cft == CftConvention::artin) v = v.inverse();
  if (in.normalization == Normalization::whittaker) {
    rep.epsilon = epsilon_whittaker(in.datum, in.E, in.lambda);
    v = v * rep.epsilon;
  }
  rep.value.phase = v;
  return rep;
}

std::optional<QuarticCharacter> QuarticCharacter::make(const QuadExt& E) {
  if (E.v.is_real()) return std::nullopt;
  if (E.ramified() && (E.v.p == 2 || kappa(Rational(-1), E) != 1)) return std::nullopt;
  return QuarticCharacter{E};
}

RootOfUnity QuarticCharacter::operator()(const Rational& x) const {
  if (x == Rational(0)) throw ValidationError("quartic character of zero");
  i64 p = E.v.p;
  int v = valuation(x, p);
  if (!E.ramified()) return RootOfUnity{v, 4}.reduced();
  RootOfUnity at_p = kappa(Rational(p), E) == 1 ? RootOfUnity{} : RootOfUnity{1, 4};
  i64 u = unit_residue(x, p, 1), g = primitive_root(p), k = 0, y = 1;
  while (y != u) {
    y = y * g % p;
    ++k;
  }
  return RootOfUnity{at_p.num * v * (4 / at_p.den) + k, 4}.reduced();
}

int QuarticCharacter::chi(const QuadExtElement& x) const { return (*this)(x.norm()).as_sign(); }

DeltaIIBridge delta_ii_bridge(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& d, const QuarticCharacter& chi) {
  validate_cover_element(tg, emb, d);
  DeltaIIBridge out;
  for (const auto& o : root_orbits(tg, emb)) {
    if (!o.symmetric) continue;
    int a = o.roots[0];
    QuadExtElement aa = d.root_values[a] - d.root_values[tg.G.neg[a]];
    QuadExtElement q = (d.delta.eval(tg.G.roots[a]) - one_of(tg.E)) * aa.inverse();
    out.quotient_formula *= chi.chi(q);
    out.tuple_formula *= chi.chi(d.root_values[a]);
  }
  return out;
}

}  // namespace rcov
