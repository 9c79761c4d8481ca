#include "rcov/endoscopy.hpp"

#include <algorithm>

#include "rcov/error.hpp"

namespace rcov {

namespace {

Mat inverse_of(const Mat& A) { return unimodular_inverse(A); }

Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

i64 dot(const Vec& a, const Vec& b) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool integral_on(const Vec& root, const Vec& s_num, i64 ord) { return mod(dot(root, s_num), ord) == 0; }

// Block-diagonal map on 1-cochains induced by f : M -> N (f is dim N x dim M).
Mat blockwise(const FiniteGroup& G, const Mat& f, std::size_t in_dim, std::size_t out_dim) {
  std::size_t n = static_cast<std::size_t>(G.order());
  Mat A = zeros(n * out_dim, n * in_dim);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t i = 0; i < out_dim; ++i)
      for (std::size_t j = 0; j < in_dim; ++j) A[g * out_dim + i][g * in_dim + j] = f[i][j];
  return A;
}

Vec scaled(Vec v, i64 k, i64 m) {
  for (auto& x : v) x = mod(x * k, m);
  return v;
}

Vec minus_mod(const Vec& a, const Vec& b, i64 m) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] - b[i], m);
  return r;
}

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

// sigma w sigma^-1.
Mat twist(const Mat& sigma, const Mat& w) { return mat_mul(mat_mul(sigma, w), inverse_of(sigma)); }

}  // namespace

std::vector<Mat> EndoscopicDatum::sigma_H() const {
  std::vector<Mat> out;
  for (std::size_t g = 0; g < sigma_G.size() && g < w.size(); ++g) out.push_back(mat_mul(w[g], sigma_G[g]));
  return out;
}

RootDatum centralizer_root_system(const RootDatum& dual, const TorsionPoint& s, std::vector<int>* root_in_G) {
  if (static_cast<int>(s.coords.size()) != dual.rank) throw ValidationError("centralizer: s has the wrong rank");
  i64 ord = s.order();
  Vec sv = s.at_level(ord);
  std::vector<int> keep;
  for (std::size_t i = 0; i < dual.size(); ++i)
    if (integral_on(dual.roots[i], sv, ord)) keep.push_back(static_cast<int>(i));
  RootDatum H;
  H.rank = dual.rank;
  std::vector<int> local(dual.size(), -1);
  for (int i : keep) {
    local[i] = static_cast<int>(H.roots.size());
    H.roots.push_back(dual.roots[i]);
    H.coroots.push_back(dual.coroots[i]);
  }
  // simple: positive roots of H that are not sums of two positive roots of H
  for (int i : dual.positive) {
    if (local[i] < 0) continue;
    bool decomposable = false;
    for (int a : dual.positive)
      for (int b : dual.positive)
        if (local[a] >= 0 && local[b] >= 0 && add(dual.roots[a], dual.roots[b]) == dual.roots[i]) decomposable = true;
    if (!decomposable) H.simple.push_back(local[i]);
  }
  H.finalize();
  if (root_in_G) *root_in_G = keep;
  return H;
}

void validate_datum(const EndoscopicDatum& d) {
  d.G.validate();
  int n = d.G.order();
  if (static_cast<int>(d.sigma_G.size()) != n) throw ValidationError("datum: one sigma_G matrix per group element required");
  if (static_cast<int>(d.w.size()) != n) throw ValidationError("datum: one Weyl element per group element required");
  GaloisLattice X{d.dual.rank, d.sigma_G};
  X.validate(d.G);
  for (const auto& A : d.sigma_G)
    if (!d.dual.preserves_base(A)) throw ValidationError("datum: sigma_G does not preserve the pinning of G^");
  WeylGroup W = weyl_group(d.dual);
  for (const auto& w : d.w)
    if (W.find(w) < 0) throw ValidationError("datum: w_sigma is not in the Weyl group");
  std::vector<Mat> sH = d.sigma_H();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mat_mul(sH[a], sH[b]) != sH[d.G.mul(a, b)]) throw ValidationError("datum: sigma_H is not a homomorphism");
  std::vector<int> in_G;
  RootDatum H = centralizer_root_system(d.dual, d.s, &in_G);
  for (const auto& A : sH) {
    std::vector<int> perm;
    try {
      perm = H.root_permutation(A);
    } catch (const ValidationError&) {
      throw ValidationError("datum: sigma_H does not preserve the roots of H^");
    }
    for (int k : H.simple)
      if (H.height[perm[k]] != 1) throw ValidationError("datum: sigma_H does not preserve the base of H^");
  }
  i64 ord = d.s.order();
  Vec sv = d.s.at_level(ord);
  for (const auto& A : sH) {
    Vec diff = minus_mod(mat_vec(cocharacter_action(A), sv), sv, ord);
    if (d.strict_s) {
      if (!is_zero_vec(diff)) throw ValidationError("datum: sigma_H does not fix s");
    } else {
      for (const auto& r : d.dual.roots)
        if (!integral_on(r, diff, ord)) throw ValidationError("datum: sigma_H does not fix s modulo Z(G^)");
    }
  }
}

Vec weyl_tits_cocycle(const RootDatum& rd, const Mat& w, const Mat& v) {
  Mat wi = inverse_of(w), wvi = inverse_of(mat_mul(w, v));
  Vec t(rd.rank, 0);
  for (int a : rd.positive) {
    int b = rd.find_root(mat_vec(wi, rd.roots[a]));
    int c = rd.find_root(mat_vec(wvi, rd.roots[a]));
    if (!rd.is_positive(b) && rd.is_positive(c)) t = add(t, rd.coroots[a]);
  }
  for (auto& x : t) x = mod(x, 2);
  return t;
}

EndoscopicCoverResult endoscopic_cover(const EndoscopicDatum& d, std::vector<int> pinning_signs) {
  validate_datum(d);
  EndoscopicCoverResult r;
  r.H = centralizer_root_system(d.dual, d.s, &r.root_in_G);
  r.sigma_H = d.sigma_H();
  r.base = CoverBase::make_group(d.G, r.H, r.sigma_H);
  std::size_t ns = r.H.simple.size();
  if (pinning_signs.empty()) pinning_signs.assign(ns, 1);
  if (pinning_signs.size() != ns) throw ValidationError("pinning signs: one per simple root of H^ required");
  for (int s : pinning_signs)
    if (s != 1 && s != -1) throw ValidationError("pinning signs must be +1 or -1");
  r.pinning_signs = pinning_signs;
  r.pi1_H = pi1(r.H, r.sigma_H);

  // z: the 2-cocycle of sigma -> n(w_sigma) x sigma_G, via the positive-root gauge
  AdmissibleSet R = AdmissibleSet::from_root_datum(d.G, d.dual, r.sigma_H);
  r.x.n = 2;
  r.x.z = tits_cocycle(d.G, R, Gauge::positive_roots(R, d.dual));

  // c: signs by which n(w_sigma) x sigma_G moves the adapted pinning
  ChevalleySystem cs(d.dual);
  FiniteModule Tad = r.base.Tad(2);
  r.x.c.assign(cochain_dim(d.G, Tad, 1), 0);
  std::vector<int> simple_pos(r.H.size(), -1);
  for (std::size_t k = 0; k < ns; ++k) simple_pos[r.H.simple[k]] = static_cast<int>(k);
  for (int g = 0; g < d.G.order(); ++g) {
    RootAction P = pinned_automorphism(cs, d.sigma_G[g]);
    std::vector<int> word = reduced_word(d.dual, d.w[g]);
    Mat inv_sH = inverse_of(r.sigma_H[g]);
    std::vector<int> eps(ns, 1);
    Vec cg(ns, 0);
    for (std::size_t k = 0; k < ns; ++k) {
      int alpha = r.H.simple[k];
      int beta = r.H.find_root(mat_vec(inv_sH, r.H.roots[alpha]));
      int kb = simple_pos[beta];
      if (kb < 0) throw ValidationError("datum: sigma_H does not preserve the base of H^");
      int bG = r.root_in_G[beta];
      auto [sign2, image] = tits_lift_action(cs, word, P.perm[bG]);
      if (image != r.root_in_G[alpha]) throw CertificateError("Tits section does not map the root spaces as sigma_H");
      int sgn = P.sign(bG) * sign2;
      eps[k] = pinning_signs[k] * pinning_signs[kb] * sgn;
      cg[k] = eps[k] == -1 ? 1 : 0;
    }
    set_cochain_value(d.G, Tad, r.x.c, {g}, cg);
    r.eps.push_back(eps);
  }
  try {
    validate_descriptor(r.base, r.x);
  } catch (const ValidationError& e) {
    throw CertificateError(std::string("endoscopic cover: ") + e.what());
  }
  CohomologyGroup classes = hyper_h2(d.G, r.base.complex(2));
  r.class_orders = classes.orders();
  r.class_coords = class_of(r.base, classes, r.x);
  r.trivial_class = is_zero_vec(r.class_coords);
  return r;
}

EndoscopicDatum conjugate_datum(const EndoscopicDatum& d, const Mat& w) {
  if (weyl_group(d.dual).find(w) < 0) throw ValidationError("conjugate_datum: not a Weyl element");
  EndoscopicDatum e = d;
  i64 ord = d.s.order();
  Vec sv = mat_vec(cocharacter_action(w), d.s.at_level(ord));
  std::vector<std::pair<i64, i64>> raw;
  for (i64 x : sv) raw.emplace_back(x, ord);
  e.s = TorsionPoint::make(raw);
  Mat wi = inverse_of(w);
  for (std::size_t g = 0; g < d.w.size(); ++g) e.w[g] = mat_mul(mat_mul(w, d.w[g]), twist(d.sigma_G[g], wi));
  return e;
}

i64 certificate_level(const EndoscopicDatum& d, const EndoscopicCoverResult& r) {
  return lcm(2 * r.base.pi0_exponent(), d.s.order());
}

LEmbeddingCertificate check_l_embedding(const EndoscopicDatum& d, const EndoscopicCoverResult& r, const Vec& lift, i64 level) {
  const FiniteGroup& G = d.G;
  int n = G.order();
  LEmbeddingCertificate cert;
  cert.level = level > 0 ? level : certificate_level(d, r);
  i64 N = cert.level;
  if (N % 2 != 0) throw ValidationError("certificate level must be even");
  FiniteModule T = r.base.T(N), Tad = r.base.Tad(N);
  std::size_t rk = T.dim(), ns = Tad.dim();
  Mat proj = r.base.projection();
  Vec target = scaled(r.x.c, N / 2, N);
  Mat dad = differential_matrix(G, Tad, 0);  // rows: C^1(T_ad) coordinates
  Vec out_mod(static_cast<std::size_t>(n) * ns, N);

  // solve proj(x) - da = (N/2) c, or da = proj(x) - (N/2) c for a given x
  Mat A = blockwise(G, proj, rk, ns);
  if (ns == 0) {
    cert.lift = lift.empty() ? Vec(static_cast<std::size_t>(n) * rk, 0) : reduce_cochain(T, lift);
    if (cert.lift.size() != static_cast<std::size_t>(n) * rk) throw ValidationError("lift has the wrong dimension");
  } else if (lift.empty()) {
    Mat full = A;
    for (std::size_t i = 0; i < full.size(); ++i)
      for (std::size_t j = 0; j < ns; ++j) full[i].push_back(-dad[i][j]);
    Vec sol;
    if (!solve_mod(full, static_cast<std::size_t>(n) * rk + ns, target, out_mod, N, sol))
      throw ValidationError("certificate: c does not lift to level " + std::to_string(N));
    cert.lift = Vec(sol.begin(), sol.begin() + static_cast<long>(n * rk));
    cert.adjoint_shift = Vec(sol.begin() + static_cast<long>(n * rk), sol.end());
  } else {
    if (lift.size() != static_cast<std::size_t>(n) * rk) throw ValidationError("lift has the wrong dimension");
    cert.lift = reduce_cochain(T, lift);
    Vec rhs = minus_mod(mat_vec(A, cert.lift), target, N);
    Vec a;
    if (!solve_mod(dad, ns, rhs, out_mod, N, a)) throw ValidationError("lift mismatch: image of x is not cohomologous to c");
    cert.adjoint_shift = a;
  }
  if (cert.adjoint_shift.empty()) cert.adjoint_shift.assign(ns, 0);

  WeylGroup W = weyl_group(d.dual);
  for (int g = 0; g < n; ++g) {
    cert.weyl_index.push_back(W.find(d.w[g]));
    cert.words.push_back(reduced_word(d.dual, d.w[g]));
  }
  cert.homomorphic_twisting = true;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mat_mul(d.w[a], twist(d.sigma_G[a], d.w[b])) != d.w[G.mul(a, b)]) {
        cert.homomorphic_twisting = false;
        cert.transcript.push_back("w_sigma sigma_G(w_tau) != w_{sigma tau} at (" + G.names[a] + ", " + G.names[b] + ")");
      }

  Vec zN = scaled(r.x.z, N / 2, N);
  Vec dx = differential(G, T, 1, cert.lift);
  cert.twisted_cocycle = minus_mod(zN, dx, N);

  std::vector<Vec> hs;
  if (static_cast<double>(T.order()) * static_cast<double>(T.order()) * n * n <= 2e6) {
    hs = T.elements();
  } else {
    hs.push_back(Vec(rk, 0));
    for (std::size_t i = 0; i < rk; ++i) {
      Vec e(rk, 0);
      e[i] = 1;
      hs.push_back(e);
    }
  }
  cert.multiplicative = true;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = G.mul(a, b);
      Vec xa = cochain_value(G, T, cert.lift, {a}), xb = cochain_value(G, T, cert.lift, {b}), xab = cochain_value(G, T, cert.lift, {ab});
      Vec zs = cochain_value(G, T, cert.twisted_cocycle, {a, b});
      Vec zw = scaled(weyl_tits_cocycle(d.dual, d.w[a], twist(d.sigma_G[a], d.w[b])), N / 2, N);
      bool ok_pair = cert.weyl_index[ab] == W.find(mat_mul(d.w[a], twist(d.sigma_G[a], d.w[b])));
      for (const auto& h : hs)
        for (const auto& h2 : hs) {
          // source product, then the map
          Vec lhs = T.reduce(minus_mod(add(add(h, T.apply(a, h2)), zs), xab, N));
          // images, then the target product
          Vec rhs = T.reduce(add(add(minus_mod(h, xa, N), T.apply(a, minus_mod(h2, xb, N))), zw));
          ++cert.products_checked;
          if (lhs != rhs) ok_pair = false;
        }
      if (!ok_pair) {
        cert.multiplicative = false;
        cert.transcript.push_back("product fails at (" + G.names[a] + ", " + G.names[b] + ")");
      }
    }

  // n(w_sigma) sigma_G twisted by x(sigma)^-1 preserves the Ad(a)-moved adapted pinning
  ChevalleySystem cs(d.dual);
  cert.pinning_preserved = true;
  std::vector<int> simple_pos(r.H.size(), -1);
  for (std::size_t k = 0; k < r.H.simple.size(); ++k) simple_pos[r.H.simple[k]] = static_cast<int>(k);
  for (int g = 0; g < n; ++g) {
    Vec xg = cochain_value(G, T, cert.lift, {g});
    RootAction act = compose(torus_action(d.dual, scaled(xg, -1, N), N),
                             compose(tits_lift(cs, cert.words[g]), pinned_automorphism(cs, d.sigma_G[g])))
                         .at_level(N);
    Mat inv_sH = inverse_of(r.sigma_H[g]);
    for (std::size_t k = 0; k < r.H.simple.size(); ++k) {
      int alpha = r.H.simple[k];
      int beta = r.H.find_root(mat_vec(inv_sH, r.H.roots[alpha]));
      int kb = simple_pos[beta];
      int bG = r.root_in_G[beta];
      i64 expect = mod(cert.adjoint_shift[k] - cert.adjoint_shift[kb] + (r.pinning_signs[k] != r.pinning_signs[kb] ? N / 2 : 0), N);
      if (act.perm[bG] != r.root_in_G[alpha] || mod(act.phase[bG], N) != expect) {
        cert.pinning_preserved = false;
        cert.transcript.push_back("pinning moved at " + G.names[g] + ", simple root " + std::to_string(k));
      }
    }
  }
  cert.transcript.push_back("level " + std::to_string(N) + ", " + std::to_string(cert.products_checked) + " products checked");
  cert.transcript.push_back(std::string("z dx^-1 ") + (cert.multiplicative ? "equals" : "differs from") + " the section cocycle");
  return cert;
}

LEmbeddingCertificate l_embedding_certificate(const EndoscopicDatum& d, const EndoscopicCoverResult& r, const Vec& lift, i64 level) {
  LEmbeddingCertificate cert = check_l_embedding(d, r, lift, level);
  if (!cert.verified()) {
    std::string msg = "L-embedding certificate failed";
    for (const auto& line : cert.transcript) msg += "; " + line;
    throw CertificateError(msg);
  }
  return cert;
}

ComposedCover compose_with_base_cover(const EndoscopicDatum& d, const EndoscopicCoverResult& r, const CoverDescriptor& x_G) {
  const FiniteGroup& G = d.G;
  CoverBase bG = CoverBase::make_group(G, d.dual, d.sigma_G);
  validate_descriptor(bG, x_G);
  i64 n = x_G.n;
  std::size_t rk = bG.Y.rank, ns = bG.simple_roots.size(), ng = static_cast<std::size_t>(G.order());
  Mat A = blockwise(G, bG.projection(), rk, ns);
  Vec y;
  i64 N = 0;
  for (i64 cand : {n, n * bG.pi0_order()}) {
    Vec out_mod(ng * ns, cand);
    if (solve_mod(A, ng * rk, scaled(x_G.c, cand / n, cand), out_mod, cand, y)) {
      N = cand;
      break;
    }
  }
  if (N == 0) throw CertificateError("base cover: c_G does not lift to T^");
  FiniteModule TN = bG.T(N);
  Vec zc = minus_mod(scaled(x_G.z, N / n, N), differential(G, TN, 1, y), N);

  // zc takes values in Z(G^), on which sigma_H and sigma_G agree
  FiniteModule THN = r.base.T(N);
  if (!is_zero_vec(differential(G, THN, 2, zc))) throw CertificateError("base cover: corrected cocycle is not central");
  ComposedCover out;
  out.center_level = N;
  i64 m = lcm(N, 2);
  CoverDescriptor xh{m, Vec{}, Vec{}};
  xh.z = scaled(zc, m / N, m);
  Vec zHG = scaled(r.x.z, m / 2, m);
  for (std::size_t i = 0; i < xh.z.size(); ++i) xh.z[i] = mod(xh.z[i] + zHG[i], m);
  xh.c = scaled(r.x.c, m / 2, m);
  try {
    validate_descriptor(r.base, xh);
  } catch (const ValidationError& e) {
    throw CertificateError(std::string("composed cover: ") + e.what());
  }
  out.x_H = xh;
  return out;
}

EndoscopicDatum endoscopic_fixture(const std::string& name) {
  EndoscopicDatum d;
  d.G = FiniteGroup::cyclic(2);
  if (name == "a1-elliptic" || name == "a1-split") {
    d.dual = RootDatum::preset("A1.sc");
    d.sigma_G = {identity(1), identity(1)};
    d.s = TorsionPoint::make({{1, 4}});
    d.w = {identity(1), name == "a1-elliptic" ? Mat{{-1}} : identity(1)};
  } else if (name == "a1ad-elliptic") {
    d.dual = RootDatum::preset("A1.ad");
    d.sigma_G = {identity(1), identity(1)};
    d.s = TorsionPoint::make({{1, 2}});
    d.w = {identity(1), Mat{{-1}}};
  } else if (name == "a1xa1-in-c2" || name == "c2-split") {
    d.dual = RootDatum::preset("C2.sc");
    d.sigma_G = {identity(2), identity(2)};
    d.s = TorsionPoint::make({{1, 2}, {0, 1}});
    d.w = {identity(2), name == "a1xa1-in-c2" ? Mat{{0, 1}, {1, 0}} : identity(2)};
  } else {
    throw ValidationError("unknown endoscopic fixture: " + name);
  }
  return d;
}

std::vector<std::string> endoscopic_fixture_names() { return {"a1-elliptic", "a1ad-elliptic", "a1-split", "a1xa1-in-c2", "c2-split"}; }

}  // namespace rcov
