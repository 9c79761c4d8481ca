#include "rcov/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "rcov/error.hpp"

namespace rcov {

namespace {

i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<__int128>(a) * b) % m);
}

// dst = (x*dst + y*src) mod E on columns [from, end)
void combine_rows(Vec& dst, const Vec& src, i64 x, i64 y, i64 E, std::size_t from = 0) {
  for (std::size_t k = from; k < dst.size(); ++k)
    dst[k] = mod(mulmod(x, dst[k], E) + mulmod(y, src[k], E), E);
}

// Unit u modulo E with u*a = gcd(a, E) (mod E).
i64 normalizing_unit(i64 a, i64 E) {
  i64 g = gcd(a, E);
  i64 Ep = E / g;
  i64 u0 = Ep == 1 ? 0 : inv_mod(mod(a / g, Ep), Ep);
  for (i64 k = 0; k < g; ++k) {
    i64 u = u0 + k * Ep;
    if (gcd(u, E) == 1) return mod(u, E);
  }
  throw std::logic_error("normalizing_unit: no unit found");
}

}  // namespace

i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 gcd(i64 a, i64 b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return std::llabs(a / gcd(a, b) * b);
}

i64 egcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

i64 inv_mod(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 x, y;
  if (egcd(mod(a, m), m, x, y) != 1) throw std::invalid_argument("inv_mod: not a unit");
  return mod(x, m);
}

Mat identity(std::size_t n) {
  Mat m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0)); }

Mat mat_mul(const Mat& a, const Mat& b) {
  std::size_t n = a.size(), k = b.size(), m = k == 0 ? 0 : b[0].size();
  Mat c = zeros(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

Vec mat_vec(const Mat& a, const Vec& v) {
  Vec r(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

Vec vec_mat(const Vec& v, const Mat& a) {
  std::size_t m = a.empty() ? 0 : a[0].size();
  Vec r(m, 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) r[j] += v[i] * a[i][j];
  return r;
}

Mat transpose(const Mat& a, std::size_t cols_if_empty) {
  std::size_t r = a.size(), c = r == 0 ? cols_if_empty : a[0].size();
  Mat t = zeros(c, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) t[j][i] = a[i][j];
  return t;
}

i64 determinant(const Mat& a) {
  // Bareiss fraction-free elimination.
  std::size_t n = a.size();
  if (n == 0) return 1;
  Mat m = a;
  i64 sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && m[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(m[s], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

Mat unimodular_inverse(const Mat& a) {
  std::size_t n = a.size();
  i64 det = determinant(a);
  if (det != 1 && det != -1) throw ValidationError("matrix is not invertible over the integers");
  // Gauss-Jordan over the integers works with unit pivots after a Smith-like
  // reduction; use the adjugate instead, which is exact at desk scale.
  Mat inv = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Mat minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        Vec row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(a[r][c]);
        minor.push_back(row);
      }
      i64 cof = determinant(minor) * (((i + j) % 2) ? -1 : 1);
      inv[i][j] = cof * det;
    }
  return inv;
}

Mat hnf_mod(const Mat& rows_in, std::size_t n, i64 E) {
  Mat rows;
  rows.reserve(rows_in.size());
  for (const auto& r : rows_in) {
    Vec v(n);
    bool nz = false;
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = mod(r[k], E);
      nz = nz || v[k] != 0;
    }
    if (nz) rows.push_back(std::move(v));
  }
  Mat B = zeros(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    // pivot starts as the implicit row E*e_c
    Vec P(n, 0);
    P[c] = E;
    Mat rest;
    rest.reserve(rows.size());
    for (auto& r : rows) {
      i64 b = r[c];
      if (b != 0) {
        i64 a = P[c];
        if (b % a == 0) {
          combine_rows(r, P, 1, mod(-(b / a), E), E, c + 1);
          r[c] = 0;
        } else {
          i64 u, v;
          i64 g = egcd(a, b, u, v);
          Vec other = P;
          combine_rows(other, r, mod(b / g, E), mod(-(a / g), E), E, c + 1);
          other[c] = 0;
          combine_rows(P, r, mod(u, E), mod(v, E), E, c + 1);
          P[c] = g;
          r = std::move(other);
        }
      }
      bool nz = false;
      for (std::size_t k = c + 1; k < n && !nz; ++k) nz = r[k] != 0;
      if (nz) rest.push_back(std::move(r));
    }
    rows = std::move(rest);
    B[c] = std::move(P);
  }
  return B;
}

bool solve_echelon(const Mat& B, const Vec& x, i64 E, Vec& y) {
  std::size_t n = B.size();
  y.assign(n, 0);
  // For small E the products are summed exactly and reduced once.
  const bool small = E < (i64{1} << 20) && n < (std::size_t{1} << 20);
  for (std::size_t c = 0; c < n; ++c) {
    i64 rhs = mod(x[c], E);
    if (small) {
      i64 acc = 0;
      for (std::size_t j = 0; j < c; ++j) acc += y[j] * B[j][c];
      rhs = mod(rhs - acc, E);
    } else {
      for (std::size_t j = 0; j < c; ++j)
        if (y[j] != 0 && B[j][c] != 0) rhs = mod(rhs - mulmod(y[j], B[j][c], E), E);
    }
    i64 p = B[c][c];
    if (rhs % p != 0) return false;
    y[c] = rhs / p;
  }
  return true;
}

Mat kernel_mod(const Mat& A, std::size_t n, const Vec& out_mod, i64 E) {
  std::size_t m = out_mod.size();
  Mat rows(n, Vec(m + n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (E % out_mod[j] != 0) throw std::invalid_argument("kernel_mod: modulus does not divide E");
      rows[i][j] = mod(mulmod(mod(A[j][i], E), E / out_mod[j], E), E);
    }
    rows[i][m + i] = 1;
  }
  Mat H = hnf_mod(rows, m + n, E);
  Mat ker;
  ker.reserve(n);
  for (std::size_t c = m; c < m + n; ++c) ker.emplace_back(H[c].begin() + static_cast<long>(m), H[c].end());
  return ker;
}

bool solve_mod(const Mat& A, std::size_t n, const Vec& b, const Vec& out_mod, i64 E, Vec& x) {
  // kernel of [A | -b] with the extra unknown placed first
  std::size_t m = out_mod.size();
  Mat Ab(m, Vec(n + 1, 0));
  for (std::size_t j = 0; j < m; ++j) {
    Ab[j][0] = -b[j];
    for (std::size_t i = 0; i < n; ++i) Ab[j][i + 1] = A[j][i];
  }
  Mat K = hnf_mod(kernel_mod(Ab, n + 1, out_mod, E), n + 1, E);
  i64 t = K[0][0];
  if (gcd(t, E) != 1) return false;
  i64 u = inv_mod(t, E);
  x.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = mod(mulmod(K[0][i + 1], u, E), E);
  return true;
}

Subquotient::Subquotient(const Mat& L_gens, const Mat& B_gens, const Vec& moduli) : moduli_(moduli) {
  std::size_t n = moduli.size();
  E_ = 1;
  for (i64 d : moduli) E_ = lcm(E_, d);
  Mat drows = zeros(n, n);
  for (std::size_t j = 0; j < n; ++j) drows[j][j] = moduli[j];
  Mat lg = L_gens;
  lg.insert(lg.end(), drows.begin(), drows.end());
  basis_ = hnf_mod(lg, n, E_);

  Mat R;
  R.reserve(B_gens.size() + n);
  auto add_rel = [&](const Vec& b) {
    Vec y;
    if (!solve_echelon(basis_, b, E_, y)) throw std::invalid_argument("Subquotient: B is not contained in L");
    bool nz = std::any_of(y.begin(), y.end(), [](i64 t) { return t != 0; });
    if (nz) R.push_back(std::move(y));
  };
  for (const auto& b : B_gens) add_rel(b);
  for (const auto& b : drows) add_rel(b);
  // coordinates are only defined modulo {y : y * basis = 0 mod E}
  for (auto& y : kernel_mod(transpose(basis_, n), n, Vec(n, E_), E_))
    if (std::any_of(y.begin(), y.end(), [](i64 t) { return t != 0; })) R.push_back(std::move(y));

  for (auto& row : R)
    for (auto& x : row) x = mod(x, E_);
  V_ = identity(n);
  Vinv_ = identity(n);
  Vec diag(n, E_);
  const i64 E = E_;

  auto col_swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : R) std::swap(row[a], row[b]);
    for (auto& row : V_) std::swap(row[a], row[b]);
    std::swap(Vinv_[a], Vinv_[b]);
  };
  // columns (t, j) <- (t, j) * [[u, -b/g], [v, a/g]]
  auto col_bezout = [&](std::size_t t, std::size_t j, i64 u, i64 v, i64 bg, i64 ag) {
    auto apply = [&](Mat& M) {
      for (auto& row : M) {
        i64 x = row[t], y = row[j];
        row[t] = mod(mulmod(u, x, E) + mulmod(v, y, E), E);
        row[j] = mod(mulmod(-bg, x, E) + mulmod(ag, y, E), E);
      }
    };
    apply(R);
    apply(V_);
    // inverse [[a/g, b/g], [-v, u]] acting on rows t, j
    Vec rt = Vinv_[t], rj = Vinv_[j];
    for (std::size_t k = 0; k < n; ++k) {
      Vinv_[t][k] = mod(mulmod(ag, rt[k], E) + mulmod(bg, rj[k], E), E);
      Vinv_[j][k] = mod(mulmod(-v, rt[k], E) + mulmod(u, rj[k], E), E);
    }
  };

  std::size_t t = 0;
  for (; t < n; ++t) {
    // choose the entry with the smallest gcd with E
    std::size_t bi = 0, bj = 0;
    i64 best = 0;
    for (std::size_t i = t; i < R.size(); ++i)
      for (std::size_t j = t; j < n; ++j)
        if (R[i][j] != 0) {
          i64 g = gcd(R[i][j], E);
          if (best == 0 || g < best) {
            best = g;
            bi = i;
            bj = j;
          }
        }
    if (best == 0) break;
    std::swap(R[t], R[bi]);
    col_swap(t, bj);
    for (;;) {
      i64 unit = normalizing_unit(R[t][t], E);
      for (auto& x : R[t]) x = mulmod(x, unit, E);
      i64 g = R[t][t];
      bool changed = false;
      for (std::size_t i = t + 1; i < R.size() && !changed; ++i) {
        i64 b = R[i][t];
        if (b == 0) continue;
        if (b % g == 0) {
          combine_rows(R[i], R[t], 1, mod(-(b / g), E), E);
        } else {
          i64 u, v;
          i64 gg = egcd(g, b, u, v);
          Vec other = R[t];
          combine_rows(other, R[i], mod(b / gg, E), mod(-(g / gg), E), E);
          combine_rows(R[t], R[i], mod(u, E), mod(v, E), E);
          R[i] = std::move(other);
          changed = true;
        }
      }
      if (changed) continue;
      for (std::size_t j = t + 1; j < n && !changed; ++j) {
        i64 b = R[t][j];
        if (b == 0) continue;
        if (b % g == 0) {
          col_bezout(t, j, 1, 0, mod(b / g, E), 1);
        } else {
          i64 u, v;
          i64 gg = egcd(g, b, u, v);
          col_bezout(t, j, mod(u, E), mod(v, E), mod(b / gg, E), mod(g / gg, E));
          changed = true;
        }
      }
      if (changed) continue;
      // divisibility chain
      for (std::size_t i = t + 1; i < R.size() && !changed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (R[i][j] % g != 0) {
            combine_rows(R[t], R[i], 1, 1, E);
            changed = true;
            break;
          }
      if (!changed) break;
    }
    diag[t] = R[t][t];
  }
  for (std::size_t k = 0; k < n; ++k)
    if (diag[k] > 1) {
      slots_.push_back(k);
      orders_.push_back(diag[k]);
    }
}

i64 Subquotient::order() const {
  i64 o = 1;
  for (i64 s : orders_) o *= s;
  return o;
}

bool Subquotient::contains(const Vec& x) const {
  Vec y;
  return solve_echelon(basis_, x, E_, y);
}

Vec Subquotient::dlog(const Vec& x) const {
  Vec y;
  if (!solve_echelon(basis_, x, E_, y)) throw std::invalid_argument("dlog: element not in the subgroup");
  Vec z(slots_.size(), 0);
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    i64 acc = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] != 0) acc = mod(acc + mulmod(y[i], V_[i][slots_[k]], E_), E_);
    z[k] = mod(acc, orders_[k]);
  }
  return z;
}

Vec Subquotient::lift(const Vec& coords) const {
  std::size_t n = moduli_.size();
  Vec y(n, 0);
  for (std::size_t k = 0; k < slots_.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) y[i] = mod(y[i] + mulmod(mod(coords[k], E_), Vinv_[slots_[k]][i], E_), E_);
  Vec x(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) x[j] = mod(x[j] + mulmod(y[i], basis_[i][j], E_), E_);
  }
  for (std::size_t j = 0; j < n; ++j) x[j] = mod(x[j], moduli_[j]);
  return x;
}

bool Subquotient::is_zero(const Vec& x) const {
  Vec y;
  if (!solve_echelon(basis_, x, E_, y)) return false;
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    i64 acc = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] != 0) acc = mod(acc + mulmod(y[i], V_[i][slots_[k]], E_), E_);
    if (mod(acc, orders_[k]) != 0) return false;
  }
  return true;
}

Vec smith_diagonal(const Mat& A, std::size_t cols, Mat* Uout, Mat* Vout) {
  Mat M = A;
  std::size_t r = M.size(), c = cols;
  Mat U = identity(r), V = identity(c);
  std::size_t lim = std::min(r, c);
  auto row_op = [&](std::size_t i, std::size_t j, i64 x, i64 y, i64 z, i64 w) {
    // (row_i, row_j) <- (x row_i + y row_j, z row_i + w row_j)
    for (Mat* P : {&M, &U}) {
      Mat& X = *P;
      for (std::size_t k = 0; k < X[i].size(); ++k) {
        i64 a = X[i][k], b = X[j][k];
        X[i][k] = x * a + y * b;
        X[j][k] = z * a + w * b;
      }
    }
  };
  auto col_op = [&](std::size_t i, std::size_t j, i64 x, i64 y, i64 z, i64 w) {
    // (col_i, col_j) <- (x col_i + y col_j, z col_i + w col_j)
    for (Mat* P : {&M, &V}) {
      Mat& X = *P;
      for (auto& row : X) {
        i64 a = row[i], b = row[j];
        row[i] = x * a + y * b;
        row[j] = z * a + w * b;
      }
    }
  };
  for (std::size_t t = 0; t < lim; ++t) {
    for (;;) {
      std::size_t bi = r, bj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (M[i][j] != 0 && (bi == r || std::llabs(M[i][j]) < std::llabs(M[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == r) break;
      if (bi != t) row_op(t, bi, 0, 1, 1, 0);
      if (bj != t) col_op(t, bj, 0, 1, 1, 0);
      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (M[i][t] == 0) continue;
        i64 a = M[t][t], b = M[i][t], u, v;
        i64 g = egcd(a, b, u, v);
        row_op(t, i, u, v, -b / g, a / g);
        dirty = true;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (M[t][j] == 0) continue;
        i64 a = M[t][t], b = M[t][j], u, v;
        i64 g = egcd(a, b, u, v);
        col_op(t, j, u, v, -b / g, a / g);
        dirty = true;
      }
      if (dirty) continue;
      bool bad = false;
      for (std::size_t i = t + 1; i < r && !bad; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (M[i][j] % M[t][t] != 0) {
            row_op(t, i, 1, 1, 0, 1);
            bad = true;
            break;
          }
      if (!bad) break;
    }
    if (M[t][t] < 0) {
      for (auto& x : M[t]) x = -x;
      for (auto& x : U[t]) x = -x;
    }
  }
  Vec d(lim, 0);
  for (std::size_t t = 0; t < lim; ++t) d[t] = M[t][t];
  if (Uout) *Uout = U;
  if (Vout) *Vout = V;
  return d;
}

}  // namespace rcov
