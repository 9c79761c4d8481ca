#include "rcov/covers.hpp"

#include <algorithm>

#include "rcov/error.hpp"

namespace rcov {

namespace {

std::size_t group_power(const FiniteGroup& G, int degree) {
  std::size_t p = 1;
  for (int i = 0; i < degree; ++i) p *= static_cast<std::size_t>(G.order());
  return p;
}

// f applied valuewise to cochains with `copies` values.
Mat blockwise(const Mat& f, std::size_t in_dim, std::size_t copies) {
  std::size_t out_dim = f.size();
  Mat out = zeros(copies * out_dim, copies * in_dim);
  for (std::size_t t = 0; t < copies; ++t)
    for (std::size_t i = 0; i < out_dim; ++i)
      for (std::size_t j = 0; j < in_dim; ++j) out[t * out_dim + i][t * in_dim + j] = f[i][j];
  return out;
}

Mat scaled_identity(std::size_t n, i64 s) {
  Mat m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = s;
  return m;
}

// Horizontal concatenation [A | B] with the given column counts.
Mat hcat(const Mat& A, std::size_t ca, const Mat& B, std::size_t cb) {
  std::size_t rows = std::max(A.size(), B.size());
  Mat out(rows, Vec(ca + cb, 0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < ca; ++j) out[i][j] = A[i][j];
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < cb; ++j) out[i][ca + j] = B[i][j];
  return out;
}

void append(Mat& A, const Mat& B) { A.insert(A.end(), B.begin(), B.end()); }

Vec scale(const Vec& v, i64 s, i64 m) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = mod(v[i] * s, m);
  return out;
}

Vec sub_mod(const Vec& a, const Vec& b, i64 m) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i] - b[i], m);
  return out;
}

bool all_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

i64 group_order(const CoverBase& base) { return base.G.order(); }

// Level at which torsion coboundaries of a torus are seen: n |G|^2.
i64 torus_coboundary_level(const CoverBase& base, i64 n) { return n * group_order(base) * group_order(base); }

// Generators (in C^1(T^[n])) of B^1(T^) n C^1(T^[n]).
Mat torus_coboundaries(const CoverBase& base, i64 n) {
  i64 M = torus_coboundary_level(base, n);
  FiniteModule T = base.T(M);
  std::size_t r = T.dim(), c1 = cochain_dim(base.G, T, 1);
  Mat D0 = differential_matrix(base.G, T, 0);
  Mat nD0 = D0;
  for (auto& row : nD0)
    for (auto& x : row) x *= n;
  Mat ys = kernel_mod(nD0, r, Vec(c1, M), M);
  Mat out;
  for (const auto& y : ys) {
    Vec d = mat_vec(D0, y);
    Vec h(c1);
    for (std::size_t i = 0; i < c1; ++i) h[i] = mod(d[i], M) / (M / n);
    out.push_back(h);
  }
  return out;
}

}  // namespace

CoverBase CoverBase::make_torus(const FiniteGroup& G, const GaloisLattice& L) {
  G.validate();
  L.validate(G);
  CoverBase b;
  b.G = G;
  b.Y = L;
  b.torus = true;
  return b;
}

CoverBase CoverBase::make_group(const FiniteGroup& G, const RootDatum& dual, const std::vector<Mat>& act_on_X) {
  G.validate();
  CoverBase b;
  b.G = G;
  b.torus = false;
  b.dual = dual;
  b.X.rank = dual.rank;
  b.X.act = act_on_X;
  b.X.validate(G);
  for (const auto& A : act_on_X)
    if (!dual.preserves_base(A)) throw ValidationError("group base: the Galois action must preserve the simple roots");
  b.Y.rank = dual.rank;
  for (const auto& A : act_on_X) b.Y.act.push_back(cocharacter_action(A));
  for (int k : dual.simple) b.simple_roots.push_back(dual.roots[k]);
  return b;
}

FiniteModule CoverBase::T(i64 n) const {
  if (n < 1) throw ValidationError("level must be positive");
  FiniteModule M;
  M.moduli.assign(Y.rank, n);
  for (const auto& A : Y.act) {
    Mat a = A;
    for (auto& row : a)
      for (auto& x : row) x = mod(x, n);
    M.act.push_back(a);
  }
  return M;
}

FiniteModule CoverBase::Tad(i64 n) const {
  if (torus) return FiniteModule::zero(G);
  return center_torsion_sequence(G, X, simple_roots, n).Tad;
}

Mat CoverBase::projection() const { return torus ? Mat{} : simple_roots; }

TwoTermComplex CoverBase::complex(i64 n) const {
  if (torus) return TwoTermComplex{T(n), FiniteModule::zero(G), Mat{}};
  CenterSequence cs = center_torsion_sequence(G, X, simple_roots, n);
  return TwoTermComplex{cs.T, cs.Tad, cs.projection};
}

CenterSequence CoverBase::center(i64 n) const {
  if (!torus) return center_torsion_sequence(G, X, simple_roots, n);
  CenterSequence cs;
  cs.n = n;
  cs.T = T(n);
  cs.Tad = FiniteModule::zero(G);
  cs.Z = cs.T;
  cs.inclusion = identity(cs.T.dim());
  cs.check_level = n;
  cs.surjective_at_check_level = true;
  return cs;
}

i64 CoverBase::pi0_order() const {
  if (torus || simple_roots.empty()) return 1;
  i64 o = 1;
  for (i64 d : smith_diagonal(simple_roots, Y.rank))
    if (d != 0) o *= d;
  return o;
}

i64 CoverBase::pi0_exponent() const {
  if (torus || simple_roots.empty()) return 1;
  i64 e = 1;
  for (i64 d : smith_diagonal(simple_roots, Y.rank))
    if (d != 0) e = lcm(e, d);
  return e;
}

bool CoverBase::same_as(const CoverBase& o) const {
  return torus == o.torus && G.table == o.G.table && Y.rank == o.Y.rank && Y.act == o.Y.act &&
         simple_roots == o.simple_roots;
}

Vec CoverDescriptor::total() const {
  Vec x = z;
  x.insert(x.end(), c.begin(), c.end());
  return x;
}

void validate_descriptor(const CoverBase& base, const CoverDescriptor& t) {
  if (t.n < 1) throw ValidationError("descriptor level must be positive");
  TwoTermComplex K = base.complex(t.n);
  if (t.z.size() != cochain_dim(base.G, K.A, 2)) throw ValidationError("descriptor: z has the wrong dimension");
  if (t.c.size() != cochain_dim(base.G, K.B, 1)) throw ValidationError("descriptor: c has the wrong dimension");
  for (i64 v : t.total())
    if (v < 0 || v >= t.n) throw ValidationError("descriptor: entries must lie in [0, n)");
  Vec d = total_differential(base.G, K, 2, t.total());
  if (!all_zero(d)) {
    Vec dz = differential(base.G, K.A, 2, t.z);
    if (!all_zero(dz)) throw ValidationError("descriptor: z is not a 2-cocycle");
    throw ValidationError("descriptor: dc differs from the image of z");
  }
}

CoverDescriptor trivial_descriptor(const CoverBase& base, i64 n) {
  TwoTermComplex K = base.complex(n);
  return CoverDescriptor{n, Vec(cochain_dim(base.G, K.A, 2), 0), Vec(cochain_dim(base.G, K.B, 1), 0)};
}

CoverClassification classify_covers(const CoverBase& base, i64 n, std::size_t max_representatives) {
  if (n < 1) throw ValidationError("level must be positive");
  TwoTermComplex K = base.complex(n);
  CoverClassification out;
  out.n = n;
  out.classes = hyper_h2(base.G, K);
  if (static_cast<std::size_t>(out.classes.order()) > max_representatives)
    throw UnsupportedError("classification: too many classes to list");
  std::size_t za = cochain_dim(base.G, K.A, 2);
  Vec coords(out.classes.orders().size(), 0);
  for (i64 k = 0; k < out.classes.order(); ++k) {
    Vec x = out.classes.lift(coords);
    out.representatives.push_back(CoverDescriptor{n, Vec(x.begin(), x.begin() + static_cast<long>(za)),
                                                  Vec(x.begin() + static_cast<long>(za), x.end())});
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (++coords[j] < out.classes.orders()[j]) break;
      coords[j] = 0;
    }
  }
  if (base.torus) return out;

  // H^2(Z[n]) and its quotient by {dh : h in C^1(Z[ne]), nh in dZ}, all
  // inside C^*(T^[L]).
  const FiniteGroup& G = base.G;
  i64 e = base.pi0_exponent();
  i64 g = G.order();
  i64 L = n * e * e * g * g;
  FiniteModule T = base.T(L);
  std::size_t r = T.dim(), s = base.simple_roots.size();
  std::size_t c1 = cochain_dim(G, T, 1), c2 = cochain_dim(G, T, 2);
  Mat P = base.simple_roots;
  Mat D0 = differential_matrix(G, T, 0), D1 = differential_matrix(G, T, 1), D2 = differential_matrix(G, T, 2);
  Mat P1 = blockwise(P, r, group_power(G, 1)), P2 = blockwise(P, r, group_power(G, 2));

  Mat Zsys = P2;
  append(Zsys, D2);
  append(Zsys, scaled_identity(c2, n));
  Mat z2 = kernel_mod(Zsys, c2, Vec(Zsys.size(), L), L);

  Mat Bsys = P1;
  append(Bsys, scaled_identity(c1, n));
  Mat b2;
  for (const auto& h : kernel_mod(Bsys, c1, Vec(Bsys.size(), L), L)) b2.push_back(mat_vec(D1, h));

  // unknowns (h, f) in C^1(T^[L]) + T^[L]
  Mat Isys = hcat(P1, c1, Mat{}, r);
  append(Isys, hcat(scaled_identity(c1, n * e), c1, Mat{}, r));
  Mat nD0 = D0;
  for (auto& row : nD0)
    for (auto& x : row) x = -x;
  append(Isys, hcat(scaled_identity(c1, n), c1, nD0, r));
  append(Isys, hcat(zeros(s, c1), c1, P, r));
  Mat image;
  for (const auto& hf : kernel_mod(Isys, c1 + r, Vec(Isys.size(), L), L))
    image.push_back(mat_vec(D1, Vec(hf.begin(), hf.begin() + static_cast<long>(c1))));
  for (auto& row : b2)
    for (auto& x : row) x = mod(x, L);
  for (auto& row : image)
    for (auto& x : row) x = mod(x, L);

  Vec mods(c2, L);
  out.center_h2_orders = Subquotient(z2, b2, mods).orders();
  out.tilde_orders = Subquotient(z2, image, mods).orders();
  return out;
}

Vec class_of(const CoverBase& base, const CohomologyGroup& classes, const CoverDescriptor& t) {
  validate_descriptor(base, t);
  return classes.dlog(t.total());
}

namespace {

// Solves for h in C^1(T^[n]) with dh = dz and h_ad - dc in B^1(T^_ad); the
// returned vector is h reduced mod n.
bool solve_witness(const CoverBase& base, i64 n, const Vec& dz, const Vec& dc, Vec& h) {
  const FiniteGroup& G = base.G;
  i64 M = torus_coboundary_level(base, n);
  i64 up = M / n;
  FiniteModule T = base.T(M);
  std::size_t r = T.dim(), c1 = cochain_dim(G, T, 1), c2 = cochain_dim(G, T, 2);
  Mat D1 = differential_matrix(G, T, 1);
  Mat A = hcat(scaled_identity(c1, n), c1, Mat{}, 0);
  Vec b(c1, 0);
  append(A, D1);
  for (std::size_t i = 0; i < c2; ++i) b.push_back(mod(dz[i] * up, M));
  std::size_t s = 0;
  if (!base.torus) {
    FiniteModule Tad = base.Tad(M);
    s = Tad.dim();
    Mat P1 = blockwise(base.simple_roots, r, group_power(G, 1));
    Mat D0ad = differential_matrix(G, Tad, 0);
    for (auto& row : D0ad)
      for (auto& x : row) x = -x;
    A = hcat(A, c1, Mat{}, s);
    append(A, hcat(P1, c1, D0ad, s));
    for (std::size_t i = 0; i < dc.size(); ++i) b.push_back(mod(dc[i] * up, M));
  }
  Vec x;
  if (!solve_mod(A, c1 + s, b, Vec(A.size(), M), M, x)) return false;
  h.assign(c1, 0);
  for (std::size_t i = 0; i < c1; ++i) h[i] = mod(x[i], M) / up;
  return true;
}

void check_pair(const CoverBase& base, const CoverDescriptor& t, const CoverDescriptor& t2) {
  if (t.n != t2.n) throw ValidationError("descriptors have different levels");
  validate_descriptor(base, t);
  validate_descriptor(base, t2);
}

}  // namespace

Subquotient automorphism_group(const CoverBase& base, i64 n) {
  if (n < 1) throw ValidationError("level must be positive");
  const FiniteGroup& G = base.G;
  i64 M = torus_coboundary_level(base, n);
  i64 up = M / n;
  FiniteModule T = base.T(M);
  std::size_t r = T.dim(), c1 = cochain_dim(G, T, 1);
  Mat D1 = differential_matrix(G, T, 1);
  Mat A = hcat(scaled_identity(c1, n), c1, Mat{}, 0);
  append(A, D1);
  std::size_t s = 0;
  if (!base.torus) {
    FiniteModule Tad = base.Tad(M);
    s = Tad.dim();
    Mat P1 = blockwise(base.simple_roots, r, group_power(G, 1));
    Mat D0ad = differential_matrix(G, Tad, 0);
    for (auto& row : D0ad)
      for (auto& x : row) x = -x;
    A = hcat(A, c1, Mat{}, s);
    append(A, hcat(P1, c1, D0ad, s));
  }
  Mat K;
  for (const auto& x : kernel_mod(A, c1 + s, Vec(A.size(), M), M)) {
    Vec h(c1);
    for (std::size_t i = 0; i < c1; ++i) h[i] = mod(x[i], M) / up;
    K.push_back(h);
  }
  return Subquotient(K, torus_coboundaries(base, n), Vec(c1, n));
}

IsomorphismSet cover_isomorphisms(const CoverBase& base, const CoverDescriptor& t, const CoverDescriptor& t2) {
  check_pair(base, t, t2);
  IsomorphismSet out;
  out.automorphisms = automorphism_group(base, t.n);
  out.exists = solve_witness(base, t.n, sub_mod(t2.z, t.z, t.n), sub_mod(t2.c, t.c, t.n), out.particular);
  if (out.exists && !is_isomorphism_witness(base, t, t2, out.particular))
    throw CertificateError("isomorphism witness failed its check");
  return out;
}

std::vector<Vec> enumerate_witnesses(const IsomorphismSet& iso, std::size_t limit) {
  std::vector<Vec> out;
  if (!iso.exists) return out;
  const Vec& orders = iso.automorphisms.orders();
  const Vec& mods = iso.automorphisms.moduli();
  Vec coords(orders.size(), 0);
  for (i64 k = 0; k < iso.automorphisms.order() && out.size() < limit; ++k) {
    Vec a = iso.automorphisms.lift(coords);
    Vec h(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) h[i] = mod(iso.particular[i] + a[i], mods[i]);
    out.push_back(h);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (++coords[j] < orders[j]) break;
      coords[j] = 0;
    }
  }
  return out;
}

bool is_isomorphism_witness(const CoverBase& base, const CoverDescriptor& t, const CoverDescriptor& t2, const Vec& h) {
  if (t.n != t2.n) return false;
  i64 n = t.n;
  FiniteModule T = base.T(n);
  if (h.size() != cochain_dim(base.G, T, 1)) return false;
  Vec dh = differential(base.G, T, 1, h);
  if (dh != sub_mod(t2.z, t.z, n)) return false;
  if (base.torus) return true;
  // h_ad - (c' - c) = du with u of order dividing n |G|^2
  FiniteModule Tad = base.Tad(n);
  Vec had = push_cochain(base.G, T, Tad, base.simple_roots, 1, h);
  Vec rest = sub_mod(had, sub_mod(t2.c, t.c, n), n);
  i64 M = torus_coboundary_level(base, n);
  FiniteModule TadM = base.Tad(M);
  Mat D0 = differential_matrix(base.G, TadM, 0);
  Vec u;
  return solve_mod(D0, TadM.dim(), scale(rest, M / n, M), Vec(D0.size(), M), M, u);
}

CoverDescriptor baer_sum(const CoverBase& base, const CoverDescriptor& a, const CoverDescriptor& b) {
  check_pair(base, a, b);
  CoverDescriptor out{a.n, a.z, a.c};
  for (std::size_t i = 0; i < out.z.size(); ++i) out.z[i] = mod(a.z[i] + b.z[i], a.n);
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = mod(a.c[i] + b.c[i], a.n);
  return out;
}

CoverDescriptor baer_inverse(const CoverBase& base, const CoverDescriptor& a) {
  validate_descriptor(base, a);
  return CoverDescriptor{a.n, scale(a.z, -1, a.n), scale(a.c, -1, a.n)};
}

CoverDescriptor level_raise(const CoverBase& base, const CoverDescriptor& t, i64 m) {
  validate_descriptor(base, t);
  if (m < 1 || m % t.n != 0) throw ValidationError("level_raise: target level must be a multiple of n");
  return CoverDescriptor{m, scale(t.z, m / t.n, m), scale(t.c, m / t.n, m)};
}

DoubleCover double_cover_from_admissible(const CoverBase& base, const AdmissibleSet& R, const Gauge& p, const Vec& c_p) {
  R.validate(base.G);
  if (R.lattice.rank != base.Y.rank || R.lattice.act != base.Y.act)
    throw ValidationError("admissible set: lattice differs from the cover base");
  DoubleCover out;
  out.admissible_size = R.size();
  out.gauge = p.transversal_signs();
  out.descriptor.n = 2;
  out.descriptor.z = tits_cocycle(base.G, R, p);
  FiniteModule Tad = base.Tad(2);
  if (c_p.size() != cochain_dim(base.G, Tad, 1)) throw ValidationError("splitting cochain has the wrong dimension");
  out.descriptor.c = c_p;
  for (auto& x : out.descriptor.c) x = mod(x, 2);
  TwoTermComplex K = base.complex(2);
  out.splitting_consistent = all_zero(total_differential(base.G, K, 2, out.descriptor.total()));
  if (!out.splitting_consistent) throw ValidationError("splitting cochain: dc differs from the image of z_p");
  return out;
}

GaugeChange change_gauge(const CoverBase& base, const AdmissibleSet& R, const DoubleCover& t_p, const Gauge& p, const Gauge& q) {
  GaugeChange out;
  out.witness = gauge_shift(base.G, R, p, q);
  Vec c_q = t_p.descriptor.c;
  if (!base.torus) {
    Vec s_ad = push_cochain(base.G, base.T(2), base.Tad(2), base.simple_roots, 1, out.witness);
    for (std::size_t i = 0; i < c_q.size(); ++i) c_q[i] = mod(c_q[i] + s_ad[i], 2);
  }
  out.cover = double_cover_from_admissible(base, R, q, c_q);
  if (!is_isomorphism_witness(base, t_p.descriptor, out.cover.descriptor, out.witness))
    throw CertificateError("gauge shift is not an isomorphism witness");
  return out;
}

DescentObstruction descent_obstruction(const CoverBase& base, const CoverDescriptor& t) {
  validate_descriptor(base, t);
  const FiniteGroup& G = base.G;
  i64 n = t.n;
  DescentObstruction out;
  if (base.torus) throw ValidationError("descent_obstruction needs a group base");
  // lift c to x in C^1(T^[N]) and correct z into the center
  i64 N = n * base.pi0_order();
  FiniteModule T = base.T(N);
  std::size_t r = T.dim(), s = base.simple_roots.size();
  Vec x(cochain_dim(G, T, 1), 0);
  for (int g = 0; g < G.order(); ++g) {
    Vec target(s), xv;
    for (std::size_t i = 0; i < s; ++i) target[i] = mod(t.c[g * s + i] * (N / n), N);
    if (!solve_mod(base.simple_roots, r, target, Vec(s, N), N, xv))
      throw CertificateError("descent: splitting cochain does not lift");
    for (std::size_t i = 0; i < r; ++i) x[g * r + i] = xv[i];
  }
  Vec zc = sub_mod(scale(t.z, N / n, N), differential(G, T, 1, x), N);
  out.center_cocycle = zc;

  i64 L = N * base.pi0_exponent() * G.order();
  out.level = L;
  FiniteModule TL = base.T(L);
  std::size_t c1 = cochain_dim(G, TL, 1), c2 = cochain_dim(G, TL, 2);
  Mat P1 = blockwise(base.simple_roots, r, group_power(G, 1)), P2 = blockwise(base.simple_roots, r, group_power(G, 2));
  Mat D1 = differential_matrix(G, TL, 1), D2 = differential_matrix(G, TL, 2);
  Mat Zsys = P2;
  append(Zsys, D2);
  Mat z2 = kernel_mod(Zsys, c2, Vec(Zsys.size(), L), L);
  Mat b2;
  for (const auto& h : kernel_mod(P1, c1, Vec(P1.size(), L), L)) {
    Vec d = mat_vec(D1, h);
    for (auto& v : d) v = mod(v, L);
    b2.push_back(d);
  }
  Subquotient H(z2, b2, Vec(c2, L));
  out.center_h2_orders = H.orders();
  Vec zl = scale(zc, L / N, L);
  if (!H.contains(zl)) throw CertificateError("descent: corrected cocycle is not central");
  out.class_coords = H.dlog(zl);
  out.trivial = all_zero(out.class_coords);
  return out;
}

TorsionLiftingReport torsion_lifting(const CoverBase& base, i64 n) {
  if (!base.torus) throw ValidationError("torsion lifting is stated for tori");
  FiniteModule T = base.T(n);
  std::size_t c1 = cochain_dim(base.G, T, 1);
  Mat D0 = differential_matrix(base.G, T, 0);
  Mat fin;
  for (std::size_t j = 0; j < T.dim(); ++j) {
    Vec col(c1);
    for (std::size_t i = 0; i < c1; ++i) col[i] = mod(D0[i][j], n);
    fin.push_back(col);
  }
  TorsionLiftingReport out;
  out.finite_coboundaries = Subquotient(fin, Mat{}, Vec(c1, n)).order();
  out.torsion_coboundaries = Subquotient(torus_coboundaries(base, n), Mat{}, Vec(c1, n)).order();
  out.bijective = out.finite_coboundaries == out.torsion_coboundaries;
  return out;
}

}  // namespace rcov
