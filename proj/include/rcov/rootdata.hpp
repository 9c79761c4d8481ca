#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rcov/galois_module.hpp"
#include "rcov/linalg.hpp"

namespace rcov {

// Based root datum with X = X_* = Z^rank and the standard pairing.
// Roots and coroots are rows; coroots[i] belongs to roots[i].
struct RootDatum {
  int rank = 0;
  Mat roots;
  Mat coroots;
  std::vector<int> simple;  // indices into roots, in Dynkin order

  // Filled by finalize().
  std::vector<int> neg;          // neg[i] = index of -roots[i]
  Mat simple_coords;             // coordinates of each root on the simple roots
  Vec height;
  std::vector<int> positive;     // positive roots, by height then coordinates

  // Validates the axioms and computes the derived tables.
  void finalize();

  std::size_t size() const { return roots.size(); }
  int find_root(const Vec& v) const;  // -1 when v is not a root
  bool is_positive(int i) const { return height[i] > 0; }
  i64 pairing(const Vec& x, const Vec& y) const;
  Mat reflection(int i) const;         // s_i on X
  Mat simple_reflection(int k) const { return reflection(simple[k]); }
  // Permutation of roots induced by a lattice automorphism A of X; throws
  // when A does not preserve roots and coroots compatibly.
  std::vector<int> root_permutation(const Mat& A) const;
  bool preserves_base(const Mat& A) const;
  // Roots are grouped in irreducible components (lists of simple indices).
  std::vector<std::vector<int>> components() const;

  static RootDatum preset(const std::string& name);
  static std::vector<std::string> preset_names();
  // Simply connected or adjoint datum of type A, B, C, D, G.
  static RootDatum cartan(char type, int n, bool simply_connected);
};

// Action on X_* contragredient to A on X.
Mat cocharacter_action(const Mat& A);

// Weyl group generated by simple reflections on X.
struct WeylGroup {
  FiniteGroup group;
  std::vector<Mat> elements;
  std::vector<std::vector<int>> words;  // reduced words in simple indices
  int find(const Mat& w) const;         // -1 when absent
};
WeylGroup weyl_group(const RootDatum& rd);
// Reduced word of w (as a matrix on X) in simple indices, w = s_{k1} ... s_{km}.
std::vector<int> reduced_word(const RootDatum& rd, const Mat& w);
int weyl_length(const RootDatum& rd, const Mat& w);

// X / span(roots): for the dual datum this is pi_1 of the group.
struct QuotientLattice {
  Vec invariants;            // 0 for a free summand
  Mat proj;                  // row i gives coordinate i
  std::vector<Mat> act;      // induced action on coordinates (unreduced)
  i64 torsion_order() const;
  int free_rank() const;
};
QuotientLattice pi1(const RootDatum& rd, const std::vector<Mat>& act_on_X = {});

// Finite set with an action of G x {+-1} and an equivariant map to a lattice.
struct AdmissibleSet {
  std::vector<int> neg;
  std::vector<std::vector<int>> act;  // act[g][i] = index of g.i
  Mat vectors;                        // vectors[i] in L
  GaloisLattice lattice;

  std::size_t size() const { return neg.size(); }
  void validate(const FiniteGroup& G) const;
  // Orbits under G x {+-1}, each listed from its least element.
  std::vector<std::vector<int>> orbits(const FiniteGroup& G) const;
  bool symmetric(const FiniteGroup& G, int i) const;  // i and -i share a G-orbit
  FiniteModule two_torsion() const;                   // L / 2L
  // Roots with the coroot map and the action on X_* induced by act_on_X.
  static AdmissibleSet from_root_datum(const FiniteGroup& G, const RootDatum& rd, const std::vector<Mat>& act_on_X);
};

// Sign function with p(-a) = -p(a), stored on the transversal {i : i < neg[i]}.
class Gauge {
public:
  Gauge() = default;
  Gauge(const AdmissibleSet& R, std::vector<int> transversal_signs);
  static Gauge from_signs(const AdmissibleSet& R, const std::vector<int>& signs);  // full table, validated
  static Gauge positive_roots(const AdmissibleSet& R, const RootDatum& rd);

  int operator()(int i) const;
  bool positive(int i) const { return (*this)(i) > 0; }
  std::size_t size() const { return neg_.size(); }
  const std::vector<int>& transversal_signs() const { return signs_; }

private:
  std::vector<int> neg_;
  std::vector<int> slot_;   // slot_[i] = position in the transversal of i or -i
  std::vector<int> signs_;
};

// z_p(s, t) = sum of a over a with p(a) = +, p(s^-1 a) = -, p((st)^-1 a) = +,
// as a 2-cochain in C^2(G, L/2L).
Vec tits_cocycle(const FiniteGroup& G, const AdmissibleSet& R, const Gauge& p);
// s_{q/p} in C^1(G, L/2L) with d s_{q/p} = z_q - z_p.
Vec gauge_shift(const FiniteGroup& G, const AdmissibleSet& R, const Gauge& p, const Gauge& q);

// Chevalley basis of the Lie algebra of the datum: basis e_a for each root
// followed by the standard basis of X_* (x) Q. Structure constants come from
// the extraspecial-pair method with positive roots ordered as rd.positive.
class ChevalleySystem {
public:
  explicit ChevalleySystem(RootDatum rd);

  const RootDatum& datum() const { return rd_; }
  i64 N(int a, int b) const;  // 0 when a + b is not a root
  int sum(int a, int b) const { return sum_[a][b]; }
  const std::vector<std::pair<int, int>>& extraspecial() const { return extraspecial_; }
  i64 inner(const Vec& x, const Vec& y) const;  // invariant form on X

  std::size_t dim() const { return rd_.size() + static_cast<std::size_t>(rd_.rank); }
  Vec bracket(const Vec& x, const Vec& y) const;
  Mat ad(const Vec& x) const;
  // exp(ad e_a) exp(-ad e_{-a}) exp(ad e_a) as an integer matrix.
  Mat n_matrix(int a) const;

private:
  RootDatum rd_;
  std::vector<std::vector<int>> sum_;
  std::vector<std::vector<i64>> N_;
  std::vector<std::pair<int, int>> extraspecial_;
  Mat form_;
};

// Automorphism of the Lie algebra of the shape e_b -> zeta_level^{phase[b]} e_{perm[b]}
// on root vectors, with on_X the induced action on X.
struct RootAction {
  i64 level = 2;
  Mat on_X;
  std::vector<int> perm;
  Vec phase;

  static RootAction identity(const RootDatum& rd, i64 level);
  RootAction at_level(i64 N) const;  // N a multiple of level
  int sign(int b) const;             // +-1, only for level-2 phases
  bool operator==(const RootAction& o) const;
};
// a after b.
RootAction compose(const RootAction& a, const RootAction& b);
RootAction inverse(const RootAction& a);
// Torus element t in X_* / N acting by zeta_N^{<b, t>}.
RootAction torus_action(const RootDatum& rd, const Vec& t, i64 N);
// n(s_k) for a simple index k, read off from n_matrix.
RootAction simple_tits_action(const ChevalleySystem& cs, int k);
// n(w) = n(s_{k1}) ... n(s_{km}) for a word.
RootAction tits_lift(const ChevalleySystem& cs, const std::vector<int>& word);
// Pinned automorphism acting by A on X and fixing simple root vectors.
RootAction pinned_automorphism(const ChevalleySystem& cs, const Mat& A);
// n(w) e_b = sign * e_{image}.
std::pair<int, int> tits_lift_action(const ChevalleySystem& cs, const std::vector<int>& word, int b);

}  // namespace rcov
