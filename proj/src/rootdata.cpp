#include "rcov/rootdata.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <functional>
#include <map>
#include <numeric>

#include "rcov/cohomology.hpp"
#include "rcov/error.hpp"

namespace rcov {

namespace {

using Q = boost::rational<i64>;

Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec negated(Vec a) {
  for (auto& x : a) x = -x;
  return a;
}

i64 dot(const Vec& a, const Vec& b) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Mat cartan_matrix(char type, int n) {
  // C[i][j] = <alpha_j, alpha_i^vee>
  Mat C = zeros(n, n);
  for (int i = 0; i < n; ++i) C[i][i] = 2;
  auto link = [&](int i, int j) { C[i][j] = C[j][i] = -1; };
  switch (type) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'B':
      if (n < 2) throw ValidationError("type B needs rank at least 2");
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      C[n - 1][n - 2] = -2;  // alpha_n short
      break;
    case 'C':
      if (n < 2) throw ValidationError("type C needs rank at least 2");
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      C[n - 2][n - 1] = -2;  // alpha_n long
      break;
    case 'D':
      if (n < 3) throw ValidationError("type D needs rank at least 3");
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case 'G':
      if (n != 2) throw ValidationError("type G only in rank 2");
      C[0][1] = -3;  // alpha_1 short
      C[1][0] = -1;
      break;
    default:
      throw ValidationError(std::string("unknown Cartan type ") + type);
  }
  return C;
}

}  // namespace

Mat cocharacter_action(const Mat& A) { return transpose(unimodular_inverse(A), A.size()); }

i64 RootDatum::pairing(const Vec& x, const Vec& y) const { return dot(x, y); }

int RootDatum::find_root(const Vec& v) const {
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (roots[i] == v) return static_cast<int>(i);
  return -1;
}

Mat RootDatum::reflection(int i) const {
  Mat M = identity(rank);
  for (int r = 0; r < rank; ++r)
    for (int c = 0; c < rank; ++c) M[r][c] -= roots[i][r] * coroots[i][c];
  return M;
}

void RootDatum::finalize() {
  if (rank < 0) throw ValidationError("root datum rank must be nonnegative");
  if (roots.size() != coroots.size()) throw ValidationError("roots and coroots differ in number");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (static_cast<int>(roots[i].size()) != rank || static_cast<int>(coroots[i].size()) != rank)
      throw ValidationError("root or coroot of wrong rank");
    if (dot(roots[i], coroots[i]) != 2) throw ValidationError("root and coroot do not pair to 2");
    for (std::size_t j = 0; j < i; ++j)
      if (roots[i] == roots[j] || coroots[i] == coroots[j]) throw ValidationError("repeated root or coroot");
  }
  neg.assign(roots.size(), -1);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    neg[i] = find_root(negated(roots[i]));
    if (neg[i] < 0 || coroots[neg[i]] != negated(coroots[i])) throw ValidationError("roots are not closed under negation");
  }
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t b = 0; b < roots.size(); ++b) {
      i64 k = dot(roots[b], coroots[a]);
      Vec r = roots[b], c = coroots[b];
      for (int t = 0; t < rank; ++t) {
        r[t] -= k * roots[a][t];
        c[t] -= dot(roots[a], coroots[b]) * coroots[a][t];
      }
      int j = find_root(r);
      if (j < 0 || coroots[j] != c) throw ValidationError("reflections do not preserve the roots and coroots");
    }
  for (int s : simple)
    if (s < 0 || s >= static_cast<int>(roots.size())) throw ValidationError("simple root index out of range");
  Mat simple_rows;
  for (int s : simple) simple_rows.push_back(roots[s]);
  simple_coords = simple.empty() ? Mat(roots.size()) : simple_root_coordinates(simple_rows, roots);
  height.assign(roots.size(), 0);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    bool nonneg = true, nonpos = true;
    for (i64 c : simple_coords[i]) {
      nonneg = nonneg && c >= 0;
      nonpos = nonpos && c <= 0;
      height[i] += c;
    }
    if (!nonneg && !nonpos) throw ValidationError("simple roots do not form a base");
  }
  positive.clear();
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (height[i] > 0) positive.push_back(static_cast<int>(i));
  std::sort(positive.begin(), positive.end(), [&](int a, int b) {
    if (height[a] != height[b]) return height[a] < height[b];
    return simple_coords[a] > simple_coords[b];
  });
  for (int s : simple)
    if (height[s] != 1) throw ValidationError("simple root listed twice");
}

std::vector<int> RootDatum::root_permutation(const Mat& A) const {
  Mat Ac = cocharacter_action(A);
  std::vector<int> perm(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    int j = find_root(mat_vec(A, roots[i]));
    if (j < 0 || mat_vec(Ac, coroots[i]) != coroots[j]) throw ValidationError("lattice automorphism does not preserve the root datum");
    perm[i] = j;
  }
  return perm;
}

bool RootDatum::preserves_base(const Mat& A) const {
  auto perm = root_permutation(A);
  for (int s : simple)
    if (std::find(simple.begin(), simple.end(), perm[s]) == simple.end()) return false;
  return true;
}

std::vector<std::vector<int>> RootDatum::components() const {
  std::size_t k = simple.size();
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && dot(roots[simple[j]], coroots[simple[i]]) != 0) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < k; ++i) groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) out.push_back(members);
  return out;
}

RootDatum RootDatum::cartan(char type, int n, bool simply_connected) {
  if (n < 1) throw ValidationError("Cartan rank must be positive");
  Mat C = cartan_matrix(type, n);
  RootDatum rd;
  rd.rank = n;
  Mat sroots, scoroots;
  for (int j = 0; j < n; ++j) {
    Vec a(n, 0), c(n, 0);
    for (int i = 0; i < n; ++i) {
      if (simply_connected) {
        a[i] = C[i][j];
        c[i] = i == j;
      } else {
        a[i] = i == j;
        c[i] = C[j][i];
      }
    }
    sroots.push_back(a);
    scoroots.push_back(c);
  }
  // close under simple reflections, carrying coroots along
  rd.roots = sroots;
  rd.coroots = scoroots;
  for (std::size_t idx = 0; idx < rd.roots.size(); ++idx) {
    for (int k = 0; k < n; ++k) {
      Vec r = rd.roots[idx], c = rd.coroots[idx];
      i64 p = dot(r, scoroots[k]), q = dot(sroots[k], c);
      for (int t = 0; t < n; ++t) {
        r[t] -= p * sroots[k][t];
        c[t] -= q * scoroots[k][t];
      }
      if (std::find(rd.roots.begin(), rd.roots.end(), r) == rd.roots.end()) {
        rd.roots.push_back(r);
        rd.coroots.push_back(c);
      }
    }
  }
  for (int k = 0; k < n; ++k) rd.simple.push_back(k);
  rd.finalize();
  return rd;
}

std::vector<std::string> RootDatum::preset_names() { return {"A1.sc", "A1.ad", "A2.sc", "C2.sc", "C2.ad", "G2", "A1xA1 in C2", "GL1"}; }

RootDatum RootDatum::preset(const std::string& name) {
  RootDatum rd;
  if (name == "A1.sc") {
    rd.rank = 1;
    rd.roots = {{2}, {-2}};
    rd.coroots = {{1}, {-1}};
    rd.simple = {0};
  } else if (name == "A1.ad") {
    rd.rank = 1;
    rd.roots = {{1}, {-1}};
    rd.coroots = {{2}, {-2}};
    rd.simple = {0};
  } else if (name == "A2.sc") {
    return cartan('A', 2, true);
  } else if (name == "C2.ad") {
    return cartan('C', 2, false);
  } else if (name == "G2") {
    return cartan('G', 2, true);
  } else if (name == "C2.sc") {
    rd.rank = 2;
    rd.roots = {{1, -1}, {0, 2}, {1, 1}, {2, 0}, {-1, 1}, {0, -2}, {-1, -1}, {-2, 0}};
    rd.coroots = {{1, -1}, {0, 1}, {1, 1}, {1, 0}, {-1, 1}, {0, -1}, {-1, -1}, {-1, 0}};
    rd.simple = {0, 1};
  } else if (name == "A1xA1 in C2") {
    rd.rank = 2;
    rd.roots = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
    rd.coroots = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    rd.simple = {0, 1};
  } else if (name == "GL1") {
    rd.rank = 1;
  } else {
    throw ValidationError("unknown root datum preset: " + name);
  }
  rd.finalize();
  return rd;
}

int WeylGroup::find(const Mat& w) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == w) return static_cast<int>(i);
  return -1;
}

std::vector<int> reduced_word(const RootDatum& rd, const Mat& w0) {
  Mat w = w0;
  std::vector<int> word;
  for (std::size_t guard = 0; guard <= rd.size(); ++guard) {
    bool found = false;
    for (std::size_t k = 0; k < rd.simple.size(); ++k) {
      int j = rd.find_root(mat_vec(w, rd.roots[rd.simple[k]]));
      if (j < 0) throw ValidationError("matrix is not a Weyl group element");
      if (!rd.is_positive(j)) {
        w = mat_mul(w, rd.simple_reflection(static_cast<int>(k)));
        word.push_back(static_cast<int>(k));
        found = true;
        break;
      }
    }
    if (!found) {
      if (w != identity(rd.rank)) throw ValidationError("matrix is not a Weyl group element");
      std::reverse(word.begin(), word.end());
      return word;
    }
  }
  throw ValidationError("matrix is not a Weyl group element");
}

int weyl_length(const RootDatum& rd, const Mat& w) {
  int len = 0;
  for (int a : rd.positive) {
    int j = rd.find_root(mat_vec(w, rd.roots[a]));
    if (j < 0) throw ValidationError("matrix does not preserve the roots");
    len += !rd.is_positive(j);
  }
  return len;
}

WeylGroup weyl_group(const RootDatum& rd) {
  if (rd.simple.size() > 8) throw UnsupportedError("Weyl group: semisimple rank above 8");
  WeylGroup W;
  std::vector<Mat> gens;
  for (std::size_t k = 0; k < rd.simple.size(); ++k) gens.push_back(rd.simple_reflection(static_cast<int>(k)));
  if (gens.empty()) gens.push_back(identity(rd.rank));
  W.group = FiniteGroup::from_matrices(gens, W.elements, 1000000);
  for (const auto& w : W.elements) W.words.push_back(reduced_word(rd, w));
  return W;
}

i64 QuotientLattice::torsion_order() const {
  i64 o = 1;
  for (i64 d : invariants)
    if (d != 0) o *= d;
  return o;
}

int QuotientLattice::free_rank() const { return static_cast<int>(std::count(invariants.begin(), invariants.end(), 0)); }

QuotientLattice pi1(const RootDatum& rd, const std::vector<Mat>& act_on_X) {
  QuotientLattice q;
  std::size_t r = rd.rank;
  Mat V = identity(r);
  Vec diag;
  if (!rd.roots.empty()) diag = smith_diagonal(rd.roots, r, nullptr, &V);
  diag.resize(r, 0);
  Mat P = transpose(V, r);
  Mat Pinv = unimodular_inverse(P);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < r; ++i)
    if (diag[i] != 1 && diag[i] != -1) kept.push_back(i);
  for (std::size_t i : kept) {
    q.invariants.push_back(diag[i] < 0 ? -diag[i] : diag[i]);
    q.proj.push_back(P[i]);
  }
  for (const auto& A : act_on_X) {
    rd.root_permutation(A);
    Mat B = mat_mul(mat_mul(P, A), Pinv);
    Mat sub;
    for (std::size_t i : kept) {
      Vec row;
      for (std::size_t j : kept) row.push_back(B[i][j]);
      sub.push_back(row);
    }
    q.act.push_back(sub);
  }
  return q;
}

void AdmissibleSet::validate(const FiniteGroup& G) const {
  std::size_t m = neg.size();
  lattice.validate(G);
  if (vectors.size() != m) throw ValidationError("admissible set: one vector per element required");
  if (static_cast<int>(act.size()) != G.order()) throw ValidationError("admissible set: one permutation per group element required");
  for (std::size_t i = 0; i < m; ++i) {
    if (neg[i] < 0 || neg[i] >= static_cast<int>(m) || neg[i] == static_cast<int>(i) || neg[neg[i]] != static_cast<int>(i))
      throw ValidationError("admissible set: -1 must act as a fixed-point-free involution");
    if (static_cast<int>(vectors[i].size()) != lattice.rank) throw ValidationError("admissible set: vector of wrong rank");
    if (vectors[neg[i]] != negated(vectors[i])) throw ValidationError("admissible set: map is not odd");
  }
  for (int g = 0; g < G.order(); ++g) {
    if (act[g].size() != m) throw ValidationError("admissible set: permutation of wrong size");
    std::vector<bool> seen(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      int j = act[g][i];
      if (j < 0 || j >= static_cast<int>(m) || seen[j]) throw ValidationError("admissible set: action is not a permutation");
      seen[j] = true;
      if (act[g][neg[i]] != neg[j]) throw ValidationError("admissible set: action does not commute with -1");
      if (mat_vec(lattice.act[g], vectors[i]) != vectors[j]) throw ValidationError("admissible set: map is not equivariant");
    }
  }
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h)
      for (std::size_t i = 0; i < m; ++i)
        if (act[G.mul(g, h)][i] != act[g][act[h][i]]) throw ValidationError("admissible set: not a group action");
}

std::vector<std::vector<int>> AdmissibleSet::orbits(const FiniteGroup& G) const {
  std::size_t m = size();
  std::vector<bool> seen(m, false);
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i]) continue;
    std::vector<int> orb;
    for (int g = 0; g < G.order(); ++g)
      for (int x : {act[g][i], neg[act[g][i]]})
        if (!seen[x]) {
          seen[x] = true;
          orb.push_back(x);
        }
    std::sort(orb.begin(), orb.end());
    out.push_back(orb);
  }
  return out;
}

bool AdmissibleSet::symmetric(const FiniteGroup& G, int i) const {
  for (int g = 0; g < G.order(); ++g)
    if (act[g][i] == neg[i]) return true;
  return false;
}

FiniteModule AdmissibleSet::two_torsion() const {
  FiniteModule M;
  M.moduli.assign(lattice.rank, 2);
  for (const auto& A : lattice.act) {
    Mat B = A;
    for (auto& row : B)
      for (auto& x : row) x = mod(x, 2);
    M.act.push_back(B);
  }
  return M;
}

AdmissibleSet AdmissibleSet::from_root_datum(const FiniteGroup& G, const RootDatum& rd, const std::vector<Mat>& act_on_X) {
  if (static_cast<int>(act_on_X.size()) != G.order()) throw ValidationError("one action matrix per group element required");
  AdmissibleSet R;
  R.neg = rd.neg;
  R.vectors = rd.coroots;
  R.lattice.rank = rd.rank;
  for (const auto& A : act_on_X) {
    R.act.push_back(rd.root_permutation(A));
    R.lattice.act.push_back(cocharacter_action(A));
  }
  R.validate(G);
  return R;
}

Gauge::Gauge(const AdmissibleSet& R, std::vector<int> transversal_signs) : neg_(R.neg), slot_(R.size(), -1) {
  int k = 0;
  for (std::size_t i = 0; i < R.size(); ++i)
    if (static_cast<int>(i) < R.neg[i]) slot_[i] = slot_[R.neg[i]] = k++;
  if (static_cast<int>(transversal_signs.size()) != k) throw ValidationError("gauge: one sign per {+-1}-orbit required");
  for (int s : transversal_signs)
    if (s != 1 && s != -1) throw ValidationError("gauge: signs must be +1 or -1");
  signs_ = std::move(transversal_signs);
}

int Gauge::operator()(int i) const {
  int s = signs_[slot_[i]];
  return i < neg_[i] ? s : -s;
}

Gauge Gauge::from_signs(const AdmissibleSet& R, const std::vector<int>& signs) {
  if (signs.size() != R.size()) throw ValidationError("gauge: one sign per element required");
  std::vector<int> t;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (signs[i] != -signs[R.neg[i]]) throw ValidationError("gauge: p(-a) must equal -p(a)");
    if (static_cast<int>(i) < R.neg[i]) t.push_back(signs[i]);
  }
  return Gauge(R, t);
}

Gauge Gauge::positive_roots(const AdmissibleSet& R, const RootDatum& rd) {
  if (R.size() != rd.size()) throw ValidationError("gauge: admissible set does not match the root datum");
  std::vector<int> s(R.size());
  for (std::size_t i = 0; i < R.size(); ++i) s[i] = rd.is_positive(static_cast<int>(i)) ? 1 : -1;
  return from_signs(R, s);
}

Vec tits_cocycle(const FiniteGroup& G, const AdmissibleSet& R, const Gauge& p) {
  FiniteModule M = R.two_torsion();
  Vec z(static_cast<std::size_t>(G.order() * G.order()) * M.dim(), 0);
  for (int s = 0; s < G.order(); ++s)
    for (int t = 0; t < G.order(); ++t) {
      int si = G.inv(s), sti = G.inv(G.mul(s, t));
      Vec v(M.dim(), 0);
      for (std::size_t a = 0; a < R.size(); ++a)
        if (p.positive(static_cast<int>(a)) && !p.positive(R.act[si][a]) && p.positive(R.act[sti][a])) v = add(v, R.vectors[a]);
      set_cochain_value(G, M, z, {s, t}, M.reduce(v));
    }
  return z;
}

Vec gauge_shift(const FiniteGroup& G, const AdmissibleSet& R, const Gauge& p, const Gauge& q) {
  FiniteModule M = R.two_torsion();
  Vec s(static_cast<std::size_t>(G.order()) * M.dim(), 0);
  for (int g = 0; g < G.order(); ++g) {
    int gi = G.inv(g);
    Vec v(M.dim(), 0);
    for (std::size_t a = 0; a < R.size(); ++a) {
      int b = R.act[gi][a];
      bool pa = p.positive(static_cast<int>(a)), qa = q.positive(static_cast<int>(a));
      bool pb = p.positive(b), qb = q.positive(b);
      if ((!pa && !qa && pb && !qb) || (!pa && qa && !pb && !qb)) v = add(v, R.vectors[a]);
    }
    set_cochain_value(G, M, s, {g}, M.reduce(v));
  }
  return s;
}

ChevalleySystem::ChevalleySystem(RootDatum rd) : rd_(std::move(rd)) {
  for (const auto& comp : rd_.components())
    if (comp.size() > 4) throw UnsupportedError("structure constants: irreducible component of rank above 4");
  std::size_t m = rd_.size();
  sum_.assign(m, std::vector<int>(m, -1));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) sum_[a][b] = rd_.find_root(add(rd_.roots[a], rd_.roots[b]));
  form_ = zeros(rd_.rank, rd_.rank);
  for (const auto& c : rd_.coroots)
    for (int i = 0; i < rd_.rank; ++i)
      for (int j = 0; j < rd_.rank; ++j) form_[i][j] += c[i] * c[j];

  std::vector<int> order_pos(m, -1);
  for (std::size_t k = 0; k < rd_.positive.size(); ++k) order_pos[rd_.positive[k]] = static_cast<int>(k);
  // extraspecial pair of each non-simple positive root
  std::vector<std::pair<int, int>> es(m, {-1, -1});
  for (int xi : rd_.positive) {
    if (rd_.height[xi] == 1) continue;
    for (int a : rd_.positive) {
      int b = rd_.find_root(add(rd_.roots[xi], negated(rd_.roots[a])));
      if (b >= 0 && rd_.is_positive(b)) {
        es[xi] = {a, b};
        extraspecial_.push_back({a, b});
        break;
      }
    }
  }
  auto string_p = [&](int a, int b) {
    // largest p with b - p a a root
    i64 p = 0;
    Vec v = rd_.roots[b];
    for (;;) {
      v = add(v, negated(rd_.roots[a]));
      if (rd_.find_root(v) < 0) return p;
      ++p;
    }
  };
  const i64 unset = INT64_MIN;
  N_.assign(m, std::vector<i64>(m, unset));
  std::function<i64(int, int)> val = [&](int a, int b) -> i64 {
    if (sum_[a][b] < 0) return 0;
    if (N_[a][b] != unset) return N_[a][b];
    i64 r;
    bool pa = rd_.is_positive(a), pb = rd_.is_positive(b);
    int c = sum_[a][b];
    if (pa && pb) {
      if (order_pos[a] > order_pos[b]) {
        r = -val(b, a);
      } else {
        auto [g, d] = es[c];
        if (g == a && d == b) {
          r = string_p(a, b) + 1;
        } else {
          Q acc(0);
          int bg = rd_.find_root(add(rd_.roots[b], negated(rd_.roots[g])));
          if (bg >= 0) acc += Q(val(b, rd_.neg[g]) * val(a, rd_.neg[d]), inner(rd_.roots[bg], rd_.roots[bg]));
          int ag = rd_.find_root(add(rd_.roots[a], negated(rd_.roots[g])));
          if (ag >= 0) acc += Q(val(rd_.neg[g], a) * val(b, rd_.neg[d]), inner(rd_.roots[ag], rd_.roots[ag]));
          Q q = acc * Q(inner(rd_.roots[c], rd_.roots[c]), val(g, d));
          if (q.denominator() != 1) throw CertificateError("structure constant is not integral");
          r = q.numerator();
        }
      }
    } else if (!pa && !pb) {
      r = -val(rd_.neg[a], rd_.neg[b]);
    } else if (!pa) {
      r = -val(b, a);
    } else {
      // a > 0 > b, c = a + b; a + b + (-c) = 0
      Q q = rd_.is_positive(c) ? Q(inner(rd_.roots[c], rd_.roots[c]), inner(rd_.roots[a], rd_.roots[a])) * Q(val(b, rd_.neg[c]))
                               : Q(inner(rd_.roots[c], rd_.roots[c]), inner(rd_.roots[b], rd_.roots[b])) * Q(val(rd_.neg[c], a));
      if (q.denominator() != 1) throw CertificateError("structure constant is not integral");
      r = q.numerator();
    }
    N_[a][b] = r;
    return r;
  };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) N_[a][b] = val(static_cast<int>(a), static_cast<int>(b));
}

i64 ChevalleySystem::N(int a, int b) const { return N_[a][b]; }

i64 ChevalleySystem::inner(const Vec& x, const Vec& y) const { return dot(x, mat_vec(form_, y)); }

Vec ChevalleySystem::bracket(const Vec& x, const Vec& y) const {
  std::size_t m = rd_.size(), r = rd_.rank;
  Vec out(dim(), 0);
  for (std::size_t a = 0; a < m; ++a) {
    if (x[a] == 0) continue;
    for (std::size_t b = 0; b < m; ++b) {
      if (y[b] == 0) continue;
      i64 k = x[a] * y[b];
      if (static_cast<int>(b) == rd_.neg[a]) {
        for (std::size_t t = 0; t < r; ++t) out[m + t] += k * rd_.coroots[a][t];
      } else if (sum_[a][b] >= 0) {
        out[sum_[a][b]] += k * N_[a][b];
      }
    }
    for (std::size_t t = 0; t < r; ++t)
      if (y[m + t] != 0) out[a] -= x[a] * y[m + t] * rd_.roots[a][t];
  }
  for (std::size_t t = 0; t < r; ++t) {
    if (x[m + t] == 0) continue;
    for (std::size_t b = 0; b < m; ++b)
      if (y[b] != 0) out[b] += x[m + t] * y[b] * rd_.roots[b][t];
  }
  return out;
}

Mat ChevalleySystem::ad(const Vec& x) const {
  std::size_t n = dim();
  Mat M = zeros(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0);
    e[j] = 1;
    Vec c = bracket(x, e);
    for (std::size_t i = 0; i < n; ++i) M[i][j] = c[i];
  }
  return M;
}

Mat ChevalleySystem::n_matrix(int a) const {
  std::size_t n = dim();
  auto expo = [&](const Mat& X) {
    Mat result = identity(n), power = identity(n);
    for (i64 k = 1;; ++k) {
      power = mat_mul(power, X);
      bool zero = true;
      for (auto& row : power)
        for (i64 v : row) zero = zero && v == 0;
      if (zero) return result;
      i64 fact = 1;
      for (i64 j = 2; j <= k; ++j) fact *= j;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (power[i][j] % fact != 0) throw CertificateError("exponential of a root vector is not integral");
          result[i][j] += power[i][j] / fact;
        }
      if (k > static_cast<i64>(n)) throw CertificateError("root vector is not nilpotent");
    }
  };
  Vec ea(n, 0), fa(n, 0);
  ea[a] = 1;
  fa[rd_.neg[a]] = -1;
  Mat E = expo(ad(ea)), F = expo(ad(fa));
  return mat_mul(mat_mul(E, F), E);
}

RootAction RootAction::identity(const RootDatum& rd, i64 level) {
  RootAction r;
  r.level = level;
  r.on_X = rcov::identity(rd.rank);
  r.perm.resize(rd.size());
  std::iota(r.perm.begin(), r.perm.end(), 0);
  r.phase.assign(rd.size(), 0);
  return r;
}

RootAction RootAction::at_level(i64 N) const {
  if (N % level != 0) throw ValidationError("root action: level must divide the new level");
  RootAction r = *this;
  r.level = N;
  for (auto& p : r.phase) p = mod(p * (N / level), N);
  return r;
}

int RootAction::sign(int b) const {
  i64 p = mod(phase[b], level);
  if (p == 0) return 1;
  if (2 * p == level) return -1;
  throw ValidationError("root action: phase is not a sign");
}

bool RootAction::operator==(const RootAction& o) const {
  i64 L = lcm(level, o.level);
  RootAction a = at_level(L), b = o.at_level(L);
  return a.on_X == b.on_X && a.perm == b.perm && a.phase == b.phase;
}

RootAction compose(const RootAction& a0, const RootAction& b0) {
  i64 L = lcm(a0.level, b0.level);
  RootAction a = a0.at_level(L), b = b0.at_level(L);
  RootAction r;
  r.level = L;
  r.on_X = mat_mul(a.on_X, b.on_X);
  r.perm.resize(b.perm.size());
  r.phase.resize(b.perm.size());
  for (std::size_t x = 0; x < b.perm.size(); ++x) {
    r.perm[x] = a.perm[b.perm[x]];
    r.phase[x] = mod(b.phase[x] + a.phase[b.perm[x]], L);
  }
  return r;
}

RootAction inverse(const RootAction& a) {
  RootAction r;
  r.level = a.level;
  r.on_X = unimodular_inverse(a.on_X);
  r.perm.resize(a.perm.size());
  r.phase.resize(a.perm.size());
  for (std::size_t x = 0; x < a.perm.size(); ++x) {
    r.perm[a.perm[x]] = static_cast<int>(x);
    r.phase[a.perm[x]] = mod(-a.phase[x], a.level);
  }
  return r;
}

RootAction torus_action(const RootDatum& rd, const Vec& t, i64 N) {
  RootAction r = RootAction::identity(rd, N);
  for (std::size_t b = 0; b < rd.size(); ++b) r.phase[b] = mod(dot(rd.roots[b], t), N);
  return r;
}

RootAction simple_tits_action(const ChevalleySystem& cs, int k) {
  const RootDatum& rd = cs.datum();
  Mat M = cs.n_matrix(rd.simple[k]);
  RootAction r = RootAction::identity(rd, 2);
  r.on_X = rd.simple_reflection(k);
  for (std::size_t b = 0; b < rd.size(); ++b) {
    int target = rd.find_root(mat_vec(r.on_X, rd.roots[b]));
    for (std::size_t i = 0; i < M.size(); ++i) {
      i64 v = M[i][b];
      if (static_cast<int>(i) == target) {
        if (v != 1 && v != -1) throw CertificateError("Tits lift does not map root vectors to root vectors");
        r.perm[b] = target;
        r.phase[b] = v == 1 ? 0 : 1;
      } else if (v != 0) {
        throw CertificateError("Tits lift does not map root vectors to root vectors");
      }
    }
  }
  return r;
}

RootAction tits_lift(const ChevalleySystem& cs, const std::vector<int>& word) {
  RootAction r = RootAction::identity(cs.datum(), 2);
  std::map<int, RootAction> cache;
  for (int k : word) {
    if (k < 0 || k >= static_cast<int>(cs.datum().simple.size())) throw ValidationError("word letter out of range");
    if (!cache.count(k)) cache.emplace(k, simple_tits_action(cs, k));
    r = compose(r, cache.at(k));
  }
  return r;
}

RootAction pinned_automorphism(const ChevalleySystem& cs, const Mat& A) {
  const RootDatum& rd = cs.datum();
  if (!rd.preserves_base(A)) throw ValidationError("automorphism does not preserve the base");
  RootAction r = RootAction::identity(rd, 2);
  r.on_X = A;
  r.perm = rd.root_permutation(A);
  std::vector<int> sgn(rd.size(), 1);
  for (int xi : rd.positive) {
    if (rd.height[xi] == 1) continue;
    for (int s : rd.simple) {
      int eta = rd.find_root(add(rd.roots[xi], negated(rd.roots[s])));
      if (eta < 0 || !rd.is_positive(eta)) continue;
      // e_xi = [e_s, e_eta] / N(s, eta)
      i64 num = cs.N(r.perm[s], r.perm[eta]) * sgn[eta], den = cs.N(s, eta);
      if (num != den && num != -den) throw CertificateError("pinned automorphism does not preserve structure constants");
      sgn[xi] = num == den ? 1 : -1;
      break;
    }
  }
  for (std::size_t b = 0; b < rd.size(); ++b) {
    int s = rd.is_positive(static_cast<int>(b)) ? sgn[b] : sgn[rd.neg[b]];
    r.phase[b] = s == 1 ? 0 : 1;
  }
  return r;
}

std::pair<int, int> tits_lift_action(const ChevalleySystem& cs, const std::vector<int>& word, int b) {
  RootAction r = tits_lift(cs, word);
  return {r.sign(b), r.perm[b]};
}

}  // namespace rcov
