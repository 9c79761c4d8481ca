#pragma once

#include <vector>

#include "rcov/galois_module.hpp"
#include "rcov/linalg.hpp"

namespace rcov {

// Cochains in C^i(G, M) are flat vectors: index (g_1, ..., g_i, coordinate)
// in row-major order, so dim = |G|^i * dim(M).
std::size_t cochain_dim(const FiniteGroup& G, const FiniteModule& M, int degree);
std::size_t tuple_index(const FiniteGroup& G, const std::vector<int>& gs);
Vec cochain_value(const FiniteGroup& G, const FiniteModule& M, const Vec& c, const std::vector<int>& gs);
void set_cochain_value(const FiniteGroup& G, const FiniteModule& M, Vec& c, const std::vector<int>& gs, const Vec& v);
Vec reduce_cochain(const FiniteModule& M, Vec c);
Vec cochain_moduli(const FiniteGroup& G, const FiniteModule& M, int degree);

// Inhomogeneous differential, left action:
// (dc)(g_0..g_i) = g_0 c(g_1..g_i) + sum_j (-1)^j c(..g_{j-1}g_j..) + (-1)^{i+1} c(g_0..g_{i-1}).
Vec differential(const FiniteGroup& G, const FiniteModule& M, int degree, const Vec& c);
Mat differential_matrix(const FiniteGroup& G, const FiniteModule& M, int degree);  // rows: output coords

// Two-term complex A -> B, A in degree 0. Total degree-i cochains are
// (a, b) in C^i(A) + C^{i-1}(B) with d(a, b) = (da, f a - db).
struct TwoTermComplex {
  FiniteModule A, B;
  Mat f;  // dim(B) x dim(A)
};
std::size_t total_dim(const FiniteGroup& G, const TwoTermComplex& K, int degree);
Vec total_moduli(const FiniteGroup& G, const TwoTermComplex& K, int degree);
Vec total_differential(const FiniteGroup& G, const TwoTermComplex& K, int degree, const Vec& x);
Mat total_differential_matrix(const FiniteGroup& G, const TwoTermComplex& K, int degree);

// H^i as an abstract finite abelian group with lifts and discrete logs.
class CohomologyGroup {
public:
  CohomologyGroup() = default;
  CohomologyGroup(int degree, Subquotient sq, std::vector<Vec> lifts) : degree_(degree), sq_(std::move(sq)), lifts_(std::move(lifts)) {}

  int degree() const { return degree_; }
  const Vec& orders() const { return sq_.orders(); }
  i64 order() const { return sq_.order(); }
  bool is_cocycle(const Vec& x) const { return sq_.contains(x); }
  bool is_coboundary(const Vec& x) const { return sq_.is_zero(x); }
  Vec dlog(const Vec& x) const { return sq_.dlog(x); }
  Vec lift(const Vec& coords) const;
  const std::vector<Vec>& generators() const { return lifts_; }
  const Vec& ambient_moduli() const { return sq_.moduli(); }

private:
  int degree_ = 0;
  Subquotient sq_;
  std::vector<Vec> lifts_;  // normalized representatives of the generators
};

CohomologyGroup cohomology_group(const FiniteGroup& G, const FiniteModule& M, int degree);
CohomologyGroup hypercohomology(const FiniteGroup& G, const TwoTermComplex& K, int degree);
CohomologyGroup hyper_h2(const FiniteGroup& G, const TwoTermComplex& K);

// Degree-2 normalization: subtract the coboundary of the constant 1-cochain
// z(1,1) so that z(1,.) = z(.,1) = 0 (and c(1) = 0 for hypercocycles).
Vec normalize_2cocycle(const FiniteGroup& G, const FiniteModule& M, const Vec& z);
Vec normalize_hyper2(const FiniteGroup& G, const TwoTermComplex& K, const Vec& x);

// Pushforward along a module map f : M -> N on i-cochains.
Vec push_cochain(const FiniteGroup& G, const FiniteModule& M, const FiniteModule& N, const Mat& f, int degree, const Vec& c);

// Tate H^{-1}(G, L) = ker(Norm) / I_G L for a lattice.
class TateGroup {
public:
  const Vec& orders() const { return orders_; }
  i64 order() const;
  Vec dlog(const Vec& x) const;  // x in ker(Norm)
  Vec lift(const Vec& coords) const;
  bool in_kernel(const Vec& x) const;

  friend TateGroup tate_h_minus1(const FiniteGroup& G, const GaloisLattice& L);

private:
  Mat kernel_basis_;  // rows, a Z-basis of ker(Norm)
  Mat V_;             // coordinate transform of the relation SNF
  Mat Vinv_;
  std::vector<std::size_t> slots_;
  Vec orders_;
};
TateGroup tate_h_minus1(const FiniteGroup& G, const GaloisLattice& L);

// A Sigma-orbit of roots for the Shapiro description: elements 0..m-1 with
// negation and a G-action by permutations, plus a gauge p.
struct RootOrbit {
  std::vector<int> neg;                 // neg[i] = index of -alpha_i
  std::vector<std::vector<int>> act;    // act[g][i] = index of g alpha_i
  std::vector<int> gauge;               // +1 / -1, gauge[neg[i]] = -gauge[i]
  bool symmetric() const;               // alpha and -alpha in one G-orbit
};

// Table sigma -> { alpha : p(alpha) = +, p(sigma^-1 alpha) = - }: the factors
// alpha^vee(eta_alpha) of the Shapiro 1-cochain.
struct ShapiroCochain {
  std::vector<std::vector<int>> factors;
  bool symmetric = false;
  int flip_exponent = 0;  // exponent of eta_{alpha_0} in the alpha_0 component at a flip, 0 if asymmetric
  // Class is trivial iff asymmetric or the sign character kills eta.
  bool is_trivial(int kappa_of_eta) const { return !symmetric || kappa_of_eta == 1; }
};
ShapiroCochain shapiro_1cochain(const FiniteGroup& G, const RootOrbit& O);

}  // namespace rcov
