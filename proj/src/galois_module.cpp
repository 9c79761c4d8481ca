#include "rcov/galois_module.hpp"

#include <boost/rational.hpp>
#include <deque>
#include <map>

#include "rcov/error.hpp"

namespace rcov {

int FiniteGroup::inv(int a) const {
  for (int b = 0; b < order(); ++b)
    if (table[a][b] == identity) return b;
  throw ValidationError("group element without inverse");
}

void FiniteGroup::validate() const {
  int n = order();
  if (n < 1) throw ValidationError("group must have at least one element");
  if (static_cast<int>(names.size()) != n) throw ValidationError("group names and table size differ");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw ValidationError("multiplication table is not square");
    for (int x : row)
      if (x < 0 || x >= n) throw ValidationError("multiplication table entry out of range");
  }
  if (identity < 0 || identity >= n) throw ValidationError("identity out of range");
  for (int a = 0; a < n; ++a)
    if (table[identity][a] != a || table[a][identity] != a) throw ValidationError("identity is not neutral");
  for (int a = 0; a < n; ++a) {
    inv(a);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]]) throw ValidationError("multiplication table is not associative");
  }
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(int n) {
  FiniteGroup g;
  for (int i = 0; i < n; ++i) {
    g.names.push_back(i == 0 ? "1" : (i == 1 ? "s" : "s^" + std::to_string(i)));
    std::vector<int> row(n);
    for (int j = 0; j < n; ++j) row[j] = (i + j) % n;
    g.table.push_back(row);
  }
  return g;
}

FiniteGroup FiniteGroup::klein() {
  FiniteGroup g = product(cyclic(2), cyclic(2));
  g.names = {"1", "a", "b", "ab"};
  return g;
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  FiniteGroup g;
  int na = a.order(), nb = b.order();
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) g.names.push_back("(" + a.names[i] + "," + b.names[j] + ")");
  g.table.assign(na * nb, std::vector<int>(na * nb));
  for (int x = 0; x < na * nb; ++x)
    for (int y = 0; y < na * nb; ++y)
      g.table[x][y] = a.table[x / nb][y / nb] * nb + b.table[x % nb][y % nb];
  g.identity = a.identity * nb + b.identity;
  return g;
}

FiniteGroup FiniteGroup::from_matrices(const std::vector<Mat>& gens, std::vector<Mat>& elements, std::size_t max_order) {
  if (gens.empty()) throw ValidationError("from_matrices: no generators");
  std::size_t r = gens[0].size();
  std::map<Mat, int> index;
  elements.clear();
  Mat id = rcov::identity(r);
  elements.push_back(id);
  index[id] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int e = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      Mat p = mat_mul(elements[e], s);
      if (index.count(p)) continue;
      if (elements.size() >= max_order) throw UnsupportedError("generated group exceeds the desk-scale bound");
      index[p] = static_cast<int>(elements.size());
      elements.push_back(p);
      queue.push_back(index[p]);
    }
  }
  FiniteGroup g;
  int n = static_cast<int>(elements.size());
  g.table.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    g.names.push_back("w" + std::to_string(a));
    for (int b = 0; b < n; ++b) {
      auto it = index.find(mat_mul(elements[a], elements[b]));
      if (it == index.end()) throw ValidationError("from_matrices: set not closed");
      g.table[a][b] = it->second;
    }
  }
  g.names[0] = "1";
  return g;
}

void GaloisLattice::validate(const FiniteGroup& G) const {
  if (static_cast<int>(act.size()) != G.order()) throw ValidationError("lattice action must have one matrix per group element");
  for (const auto& m : act) {
    if (static_cast<int>(m.size()) != rank) throw ValidationError("lattice action matrix has wrong size");
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != rank) throw ValidationError("lattice action matrix has wrong size");
    if (rank > 0) {
      i64 d = determinant(m);
      if (d != 1 && d != -1) throw ValidationError("lattice action matrix is not invertible over Z");
    }
  }
  if (rank > 0 && act[G.identity] != identity(rank)) throw ValidationError("identity must act trivially");
  for (int a = 0; a < G.order(); ++a)
    for (int b = 0; b < G.order(); ++b)
      if (mat_mul(act[a], act[b]) != act[G.mul(a, b)]) throw ValidationError("lattice action does not respect the multiplication table");
}

GaloisLattice GaloisLattice::trivial_action(const FiniteGroup& G, int rank) {
  GaloisLattice L;
  L.rank = rank;
  L.act.assign(G.order(), identity(rank));
  return L;
}

i64 FiniteModule::order() const {
  i64 o = 1;
  for (i64 d : moduli) o *= d;
  return o;
}

i64 FiniteModule::exponent() const {
  i64 e = 1;
  for (i64 d : moduli) e = lcm(e, d);
  return e;
}

Vec FiniteModule::reduce(Vec x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i], moduli[i]);
  return x;
}

Vec FiniteModule::apply(int g, const Vec& x) const { return reduce(mat_vec(act[g], x)); }

std::vector<Vec> FiniteModule::elements() const {
  std::vector<Vec> out;
  Vec x(dim(), 0);
  for (;;) {
    out.push_back(x);
    std::size_t i = dim();
    while (i > 0) {
      --i;
      if (++x[i] < moduli[i]) break;
      x[i] = 0;
      if (i == 0) return out;
    }
    if (dim() == 0) return out;
  }
}

void FiniteModule::validate(const FiniteGroup& G) const {
  std::size_t k = dim();
  for (i64 d : moduli)
    if (d < 1) throw ValidationError("module moduli must be positive");
  if (static_cast<int>(act.size()) != G.order()) throw ValidationError("module action must have one matrix per group element");
  for (const auto& m : act) {
    if (m.size() != k) throw ValidationError("module action matrix has wrong size");
    for (std::size_t i = 0; i < k; ++i) {
      if (m[i].size() != k) throw ValidationError("module action matrix has wrong size");
      for (std::size_t j = 0; j < k; ++j)
        if (mod(m[i][j] * moduli[j], moduli[i]) != 0) throw ValidationError("module action incompatible with invariant factors");
    }
  }
  auto same = [&](const Mat& a, const Mat& b) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (mod(a[i][j] - b[i][j], moduli[i]) != 0) return false;
    return true;
  };
  if (!same(act[G.identity], identity(k))) throw ValidationError("identity must act trivially on the module");
  for (int a = 0; a < G.order(); ++a)
    for (int b = 0; b < G.order(); ++b)
      if (!same(mat_mul(act[a], act[b]), act[G.mul(a, b)])) throw ValidationError("module action is not a homomorphism");
}

FiniteModule FiniteModule::zero(const FiniteGroup& G) {
  FiniteModule M;
  M.act.assign(G.order(), Mat{});
  return M;
}

FiniteModule FiniteModule::trivial_action(const FiniteGroup& G, const Vec& moduli) {
  FiniteModule M;
  M.moduli = moduli;
  M.act.assign(G.order(), identity(moduli.size()));
  return M;
}

TorsionPoint TorsionPoint::make(const std::vector<std::pair<i64, i64>>& raw) {
  TorsionPoint p;
  for (auto [num, den] : raw) {
    if (den == 0) throw ValidationError("torsion point with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    num = mod(num, den);
    i64 g = gcd(num, den);
    if (num == 0) g = den;
    p.coords.emplace_back(num / g, den / g);
  }
  return p;
}

i64 TorsionPoint::order() const {
  i64 o = 1;
  for (auto [num, den] : coords) o = lcm(o, den);
  return o;
}

Vec TorsionPoint::at_level(i64 N) const {
  Vec v;
  for (auto [num, den] : coords) {
    if (N % den != 0) throw ValidationError("torsion point not defined at this level");
    v.push_back(num * (N / den));
  }
  return v;
}

FiniteModule dual_torsion_module(const FiniteGroup& G, const GaloisLattice& L, i64 n) {
  if (n < 1) throw ValidationError("level must be positive");
  FiniteModule M;
  M.moduli.assign(L.rank, n);
  for (int g = 0; g < G.order(); ++g) {
    Mat t = transpose(L.act[G.inv(g)], L.rank);
    for (auto& row : t)
      for (auto& x : row) x = mod(x, n);
    M.act.push_back(t);
  }
  return M;
}

Submodule submodule(const FiniteGroup& G, const FiniteModule& M, const Mat& gens) {
  Submodule S;
  S.coords = Subquotient(gens, Mat{}, M.moduli);
  const Vec& ord = S.coords.orders();
  std::size_t k = ord.size();
  S.module.moduli = ord;
  S.inclusion = zeros(M.dim(), k);
  Mat lifts;
  for (std::size_t i = 0; i < k; ++i) {
    Vec e(k, 0);
    e[i] = 1;
    lifts.push_back(S.coords.lift(e));
    for (std::size_t j = 0; j < M.dim(); ++j) S.inclusion[j][i] = lifts[i][j];
  }
  for (int g = 0; g < G.order(); ++g) {
    Mat a = zeros(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      Vec y = S.coords.dlog(M.apply(g, lifts[i]));
      for (std::size_t j = 0; j < k; ++j) a[j][i] = y[j];
    }
    S.module.act.push_back(a);
  }
  return S;
}

Submodule kernel_submodule(const FiniteGroup& G, const FiniteModule& M, const FiniteModule& N, const Mat& f) {
  i64 E = lcm(M.exponent(), N.exponent());
  Mat ker = kernel_mod(f, M.dim(), N.moduli, E);
  return submodule(G, M, ker);
}

bool is_module_map(const FiniteGroup& G, const FiniteModule& M, const FiniteModule& N, const Mat& f) {
  if (f.size() != N.dim()) return false;
  for (std::size_t j = 0; j < M.dim(); ++j) {
    Vec e(M.dim(), 0);
    e[j] = M.moduli[j];
    if (N.reduce(mat_vec(f, e)) != Vec(N.dim(), 0)) return false;
  }
  for (int g = 0; g < G.order(); ++g) {
    Mat lhs = mat_mul(f, M.act[g]), rhs = mat_mul(N.act[g], f);
    for (std::size_t i = 0; i < N.dim(); ++i)
      for (std::size_t j = 0; j < M.dim(); ++j)
        if (mod(lhs[i][j] - rhs[i][j], N.moduli[i]) != 0) return false;
  }
  return true;
}

Mat simple_root_coordinates(const Mat& simple_roots, const Mat& vectors) {
  using Q = boost::rational<i64>;
  const Q zero(0);
  std::size_t s = simple_roots.size();
  std::size_t r = s == 0 ? (vectors.empty() ? 0 : vectors[0].size()) : simple_roots[0].size();
  Mat out;
  for (const auto& v : vectors) {
    // solve sum_i c_i alpha_i = v
    std::vector<std::vector<Q>> A(r, std::vector<Q>(s + 1));
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t i = 0; i < s; ++i) A[j][i] = simple_roots[i][j];
      A[j][s] = v[j];
    }
    std::vector<std::size_t> pivcol;
    std::size_t row = 0;
    for (std::size_t c = 0; c < s && row < r; ++c) {
      std::size_t p = row;
      while (p < r && A[p][c] == zero) ++p;
      if (p == r) continue;
      std::swap(A[p], A[row]);
      for (std::size_t i = 0; i < r; ++i) {
        if (i == row || A[i][c] == zero) continue;
        Q f = A[i][c] / A[row][c];
        for (std::size_t k = c; k <= s; ++k) A[i][k] -= f * A[row][k];
      }
      pivcol.push_back(c);
      ++row;
    }
    if (pivcol.size() != s) throw ValidationError("incompatible root datum: simple roots are not linearly independent");
    for (std::size_t i = row; i < r; ++i)
      if (A[i][s] != zero) throw ValidationError("vector is not in the span of the simple roots");
    Vec c(s, 0);
    for (std::size_t i = 0; i < s; ++i) {
      Q q = A[i][s] / A[i][pivcol[i]];
      if (q.denominator() != 1) throw ValidationError("vector is not in the root lattice");
      c[pivcol[i]] = q.numerator();
    }
    out.push_back(c);
  }
  return out;
}

CenterSequence center_torsion_sequence(const FiniteGroup& G, const GaloisLattice& X, const Mat& simple_roots, i64 n) {
  CenterSequence cs;
  cs.n = n;
  std::size_t s = simple_roots.size();
  std::size_t r = X.rank;
  for (const auto& a : simple_roots)
    if (a.size() != r) throw ValidationError("incompatible root datum: simple root of wrong rank");
  Vec diag = smith_diagonal(simple_roots, r);
  std::size_t rank_q = 0;
  cs.pi0_order = 1;
  for (i64 d : diag)
    if (d != 0) {
      ++rank_q;
      cs.pi0_order *= d;
    }
  if (rank_q != s) throw ValidationError("incompatible root datum: Q is not a sublattice of full rank on the simple roots");

  cs.T = dual_torsion_module(G, X, n);
  cs.Tad.moduli.assign(s, n);
  for (int g = 0; g < G.order(); ++g) {
    Mat images;
    for (const auto& a : simple_roots) images.push_back(mat_vec(X.act[G.inv(g)], a));
    Mat c = s == 0 ? Mat{} : simple_root_coordinates(simple_roots, images);
    for (auto& row : c)
      for (auto& x : row) x = mod(x, n);
    cs.Tad.act.push_back(c);
  }
  cs.projection = simple_roots;
  for (auto& row : cs.projection)
    for (auto& x : row) x = mod(x, n);
  Submodule K = kernel_submodule(G, cs.T, cs.Tad, cs.projection);
  cs.Z = K.module;
  cs.inclusion = K.inclusion;

  // surjectivity onto T_ad[n] from T[m], m = n * |pi_0|
  i64 m = n * cs.pi0_order;
  cs.check_level = m;
  if (s == 0) {
    cs.surjective_at_check_level = true;
  } else {
    Mat rows;
    for (std::size_t j = 0; j < r; ++j) {
      Vec img(s);
      for (std::size_t i = 0; i < s; ++i) img[i] = mod(simple_roots[i][j], m);
      rows.push_back(img);
    }
    Mat H = hnf_mod(rows, s, m);
    bool ok = true;
    for (std::size_t i = 0; i < s && ok; ++i) {
      Vec target(s, 0), y;
      target[i] = m / n;
      ok = solve_echelon(H, target, m, y);
    }
    cs.surjective_at_check_level = ok;
  }
  return cs;
}

}  // namespace rcov
