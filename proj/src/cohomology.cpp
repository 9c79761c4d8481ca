#include "rcov/cohomology.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "rcov/error.hpp"

namespace rcov {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::vector<int> tuple_at(const FiniteGroup& G, int degree, std::size_t idx) {
  std::vector<int> gs(degree);
  for (int j = degree - 1; j >= 0; --j) {
    gs[j] = static_cast<int>(idx % G.order());
    idx /= G.order();
  }
  return gs;
}

Mat columns_as_rows(const Mat& D, std::size_t cols) {
  Mat out(cols, Vec(D.size(), 0));
  for (std::size_t i = 0; i < D.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j][i] = D[i][j];
  return out;
}

Mat matrix_of(std::size_t in_dim, std::size_t out_dim, const std::function<Vec(const Vec&)>& fn) {
  Mat D = zeros(out_dim, in_dim);
  Vec e(in_dim, 0);
  for (std::size_t j = 0; j < in_dim; ++j) {
    e[j] = 1;
    Vec y = fn(e);
    for (std::size_t i = 0; i < out_dim; ++i) D[i][j] = y[i];
    e[j] = 0;
  }
  return D;
}

}  // namespace

std::size_t cochain_dim(const FiniteGroup& G, const FiniteModule& M, int degree) {
  if (degree < 0) return 0;
  return ipow(G.order(), degree) * M.dim();
}

std::size_t tuple_index(const FiniteGroup& G, const std::vector<int>& gs) {
  std::size_t idx = 0;
  for (int g : gs) idx = idx * G.order() + g;
  return idx;
}

Vec cochain_value(const FiniteGroup& G, const FiniteModule& M, const Vec& c, const std::vector<int>& gs) {
  std::size_t k = M.dim(), base = tuple_index(G, gs) * k;
  return Vec(c.begin() + static_cast<long>(base), c.begin() + static_cast<long>(base + k));
}

void set_cochain_value(const FiniteGroup& G, const FiniteModule& M, Vec& c, const std::vector<int>& gs, const Vec& v) {
  std::size_t k = M.dim(), base = tuple_index(G, gs) * k;
  for (std::size_t j = 0; j < k; ++j) c[base + j] = mod(v[j], M.moduli[j]);
}

Vec reduce_cochain(const FiniteModule& M, Vec c) {
  std::size_t k = M.dim();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod(c[i], M.moduli[i % k]);
  return c;
}

Vec cochain_moduli(const FiniteGroup& G, const FiniteModule& M, int degree) {
  Vec m;
  std::size_t n = degree < 0 ? 0 : ipow(G.order(), degree);
  for (std::size_t t = 0; t < n; ++t) m.insert(m.end(), M.moduli.begin(), M.moduli.end());
  return m;
}

Vec differential(const FiniteGroup& G, const FiniteModule& M, int degree, const Vec& c) {
  if (degree < 0 || degree > 2) throw UnsupportedError("differential: degree must be 0, 1 or 2");
  std::size_t k = M.dim();
  std::size_t n_out = ipow(G.order(), degree + 1);
  Vec out(n_out * k, 0);
  for (std::size_t t = 0; t < n_out; ++t) {
    std::vector<int> gs = tuple_at(G, degree + 1, t);
    Vec acc = M.apply(gs[0], cochain_value(G, M, c, std::vector<int>(gs.begin() + 1, gs.end())));
    for (int j = 1; j <= degree; ++j) {
      std::vector<int> hs;
      for (int q = 0; q <= degree; ++q) {
        if (q == j) continue;
        hs.push_back(q == j - 1 ? G.mul(gs[j - 1], gs[j]) : gs[q]);
      }
      Vec v = cochain_value(G, M, c, hs);
      for (std::size_t a = 0; a < k; ++a) acc[a] += (j % 2 ? -1 : 1) * v[a];
    }
    Vec v = cochain_value(G, M, c, std::vector<int>(gs.begin(), gs.end() - 1));
    for (std::size_t a = 0; a < k; ++a) acc[a] += ((degree + 1) % 2 ? -1 : 1) * v[a];
    for (std::size_t a = 0; a < k; ++a) out[t * k + a] = mod(acc[a], M.moduli[a]);
  }
  return out;
}

Mat differential_matrix(const FiniteGroup& G, const FiniteModule& M, int degree) {
  return matrix_of(cochain_dim(G, M, degree), cochain_dim(G, M, degree + 1),
                   [&](const Vec& e) { return differential(G, M, degree, e); });
}

std::size_t total_dim(const FiniteGroup& G, const TwoTermComplex& K, int degree) {
  return cochain_dim(G, K.A, degree) + cochain_dim(G, K.B, degree - 1);
}

Vec total_moduli(const FiniteGroup& G, const TwoTermComplex& K, int degree) {
  Vec m = cochain_moduli(G, K.A, degree);
  Vec b = cochain_moduli(G, K.B, degree - 1);
  m.insert(m.end(), b.begin(), b.end());
  return m;
}

Vec push_cochain(const FiniteGroup& G, const FiniteModule& M, const FiniteModule& N, const Mat& f, int degree, const Vec& c) {
  std::size_t n = ipow(G.order(), degree), km = M.dim(), kn = N.dim();
  Vec out(n * kn, 0);
  for (std::size_t t = 0; t < n; ++t) {
    Vec v(c.begin() + static_cast<long>(t * km), c.begin() + static_cast<long>((t + 1) * km));
    Vec w = N.reduce(mat_vec(f, v));
    for (std::size_t a = 0; a < kn; ++a) out[t * kn + a] = w[a];
  }
  return out;
}

Vec total_differential(const FiniteGroup& G, const TwoTermComplex& K, int degree, const Vec& x) {
  std::size_t da = cochain_dim(G, K.A, degree);
  Vec a(x.begin(), x.begin() + static_cast<long>(da));
  Vec b(x.begin() + static_cast<long>(da), x.end());
  Vec out = differential(G, K.A, degree, a);
  Vec fb = push_cochain(G, K.A, K.B, K.f, degree, a);
  if (degree >= 1) {
    Vec db = differential(G, K.B, degree - 1, b);
    for (std::size_t i = 0; i < fb.size(); ++i) fb[i] = mod(fb[i] - db[i], K.B.moduli[i % K.B.dim()]);
  }
  out.insert(out.end(), fb.begin(), fb.end());
  return out;
}

Mat total_differential_matrix(const FiniteGroup& G, const TwoTermComplex& K, int degree) {
  return matrix_of(total_dim(G, K, degree), total_dim(G, K, degree + 1),
                   [&](const Vec& e) { return total_differential(G, K, degree, e); });
}

Vec CohomologyGroup::lift(const Vec& coords) const {
  Vec x(sq_.ambient_dim(), 0);
  const Vec& m = sq_.moduli();
  for (std::size_t k = 0; k < lifts_.size(); ++k)
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i] + coords[k] * lifts_[k][i], m[i]);
  return x;
}

Vec normalize_2cocycle(const FiniteGroup& G, const FiniteModule& M, const Vec& z) {
  TwoTermComplex K{M, FiniteModule::zero(G), Mat{}};
  return normalize_hyper2(G, K, z);
}

Vec normalize_hyper2(const FiniteGroup& G, const TwoTermComplex& K, const Vec& x) {
  int e = G.identity;
  Vec m = cochain_value(G, K.A, x, {e, e});
  Vec y(total_dim(G, K, 1), 0);
  for (int g = 0; g < G.order(); ++g) set_cochain_value(G, K.A, y, {g}, m);
  Vec dy = total_differential(G, K, 1, y);
  Vec out(x.size());
  Vec mods = total_moduli(G, K, 2);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = mod(x[i] - dy[i], mods[i]);
  return out;
}

CohomologyGroup hypercohomology(const FiniteGroup& G, const TwoTermComplex& K, int degree) {
  if (degree < 0 || degree > 2) throw UnsupportedError("cohomology: degree must be 0, 1 or 2");
  Vec mods = total_moduli(G, K, degree);
  Vec out_mods = total_moduli(G, K, degree + 1);
  i64 E = 1;
  for (i64 d : mods) E = lcm(E, d);
  for (i64 d : out_mods) E = lcm(E, d);
  std::size_t n = mods.size();
  Mat ker = kernel_mod(total_differential_matrix(G, K, degree), n, out_mods, E);
  Mat bnd;
  if (degree > 0) bnd = columns_as_rows(total_differential_matrix(G, K, degree - 1), total_dim(G, K, degree - 1));
  Subquotient sq(ker, bnd, mods);
  std::vector<Vec> lifts;
  for (std::size_t k = 0; k < sq.orders().size(); ++k) {
    Vec e(sq.orders().size(), 0);
    e[k] = 1;
    Vec x = sq.lift(e);
    if (degree == 2) x = normalize_hyper2(G, K, x);
    lifts.push_back(x);
  }
  return CohomologyGroup(degree, std::move(sq), std::move(lifts));
}

CohomologyGroup cohomology_group(const FiniteGroup& G, const FiniteModule& M, int degree) {
  TwoTermComplex K{M, FiniteModule::zero(G), Mat{}};
  return hypercohomology(G, K, degree);
}

CohomologyGroup hyper_h2(const FiniteGroup& G, const TwoTermComplex& K) { return hypercohomology(G, K, 2); }

i64 TateGroup::order() const {
  i64 o = 1;
  for (i64 d : orders_) o *= d;
  return o;
}

bool TateGroup::in_kernel(const Vec& x) const {
  // x must be an integral combination of the kernel basis; the basis is
  // saturated, so test by rank against the stored transform.
  std::size_t k = kernel_basis_.size();
  if (k == 0) return std::all_of(x.begin(), x.end(), [](i64 t) { return t == 0; });
  Mat A = kernel_basis_;
  A.push_back(x);
  Vec d = smith_diagonal(A, x.size());
  std::size_t rank = 0;
  for (i64 v : d) rank += v != 0;
  return rank == k;
}

Vec TateGroup::dlog(const Vec& x) const {
  // coordinates of x on the kernel basis (rows), via least-index elimination
  std::size_t k = kernel_basis_.size();
  Mat A = transpose(kernel_basis_, x.size());
  Mat U, V;
  Vec d = smith_diagonal(A, k, &U, &V);
  // A c = x  <=>  D (V^-1 c) = U x
  Vec ux = mat_vec(U, x);
  Vec y(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (d[i] == 0 || ux[i] % d[i] != 0) throw std::invalid_argument("tate dlog: element not in ker(Norm)");
    y[i] = ux[i] / d[i];
  }
  Vec c = mat_vec(V, y);
  Vec z = vec_mat(c, V_);
  Vec out(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s) out[s] = mod(z[slots_[s]], orders_[s]);
  return out;
}

Vec TateGroup::lift(const Vec& coords) const {
  std::size_t k = kernel_basis_.size();
  Vec c(k, 0);
  for (std::size_t s = 0; s < slots_.size(); ++s)
    for (std::size_t i = 0; i < k; ++i) c[i] += coords[s] * Vinv_[slots_[s]][i];
  return vec_mat(c, kernel_basis_);
}

TateGroup tate_h_minus1(const FiniteGroup& G, const GaloisLattice& L) {
  L.validate(G);
  std::size_t r = L.rank;
  TateGroup T;
  Mat N = zeros(r, r);
  for (const auto& a : L.act)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) N[i][j] += a[i][j];
  Mat U, V;
  Vec d = smith_diagonal(N, r, &U, &V);
  std::vector<std::size_t> zero_pos;
  for (std::size_t j = 0; j < r; ++j)
    if (j >= d.size() || d[j] == 0) zero_pos.push_back(j);
  for (std::size_t j : zero_pos) {
    Vec col(r);
    for (std::size_t i = 0; i < r; ++i) col[i] = V[i][j];
    T.kernel_basis_.push_back(col);
  }
  std::size_t k = zero_pos.size();
  Mat Vi = r ? unimodular_inverse(V) : Mat{};
  Mat R;
  for (int g = 0; g < G.order(); ++g)
    for (std::size_t j = 0; j < r; ++j) {
      Vec v(r);
      for (std::size_t i = 0; i < r; ++i) v[i] = L.act[g][i][j] - (i == j ? 1 : 0);
      Vec y = mat_vec(Vi, v);
      Vec c;
      for (std::size_t p : zero_pos) c.push_back(y[p]);
      R.push_back(c);
    }
  Mat U2, V2;
  Vec d2 = k ? smith_diagonal(R, k, &U2, &V2) : Vec{};
  T.V_ = k ? V2 : Mat{};
  T.Vinv_ = k ? unimodular_inverse(V2) : Mat{};
  for (std::size_t i = 0; i < k; ++i) {
    i64 s = i < d2.size() ? d2[i] : 0;
    if (s == 0) throw std::logic_error("tate_h_minus1: augmentation image has lower rank than ker(Norm)");
    if (s > 1) {
      T.slots_.push_back(i);
      T.orders_.push_back(s);
    }
  }
  return T;
}

bool RootOrbit::symmetric() const {
  for (const auto& row : act)
    if (row[0] == neg[0]) return true;
  return false;
}

ShapiroCochain shapiro_1cochain(const FiniteGroup& G, const RootOrbit& O) {
  std::size_t m = O.neg.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (O.gauge[i] * O.gauge[O.neg[i]] != -1) throw ValidationError("gauge must satisfy p(-a) = -p(a)");
    if (O.neg[i] == static_cast<int>(i)) throw ValidationError("negation must act freely");
  }
  ShapiroCochain sc;
  sc.factors.resize(G.order());
  for (int s = 0; s < G.order(); ++s) {
    int si = G.inv(s);
    for (std::size_t a = 0; a < m; ++a)
      if (O.gauge[a] == 1 && O.gauge[O.act[si][a]] == -1) sc.factors[s].push_back(static_cast<int>(a));
  }
  sc.symmetric = O.symmetric();
  if (sc.symmetric) {
    for (int t = 0; t < G.order(); ++t) {
      if (O.act[t][0] != O.neg[0]) continue;
      for (int a : sc.factors[t]) {
        if (a == 0) sc.flip_exponent = 1;
        if (a == O.neg[0]) sc.flip_exponent = -1;
      }
      break;
    }
  }
  return sc;
}

}  // namespace rcov
