#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rcov/linalg.hpp"

namespace rcov {

// Finite group given by its multiplication table.
struct FiniteGroup {
  std::vector<std::string> names;
  std::vector<std::vector<int>> table;  // table[a][b] = a*b
  int identity = 0;

  int order() const { return static_cast<int>(table.size()); }
  int mul(int a, int b) const { return table[a][b]; }
  int inv(int a) const;
  void validate() const;  // throws ValidationError

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup klein();
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);
  // Group generated by invertible integer matrices; elements in BFS order.
  static FiniteGroup from_matrices(const std::vector<Mat>& gens, std::vector<Mat>& elements, std::size_t max_order = 100000);
};

// Free Z-module of finite rank with a left action act[g] (column vectors).
struct GaloisLattice {
  int rank = 0;
  std::vector<Mat> act;

  void validate(const FiniteGroup& G) const;
  static GaloisLattice trivial_action(const FiniteGroup& G, int rank);
};

// Z^k / diag(moduli) with a left action on coordinate column vectors.
struct FiniteModule {
  Vec moduli;
  std::vector<Mat> act;

  std::size_t dim() const { return moduli.size(); }
  i64 order() const;
  i64 exponent() const;
  Vec reduce(Vec x) const;
  Vec apply(int g, const Vec& x) const;
  std::vector<Vec> elements() const;  // all elements, lexicographic
  void validate(const FiniteGroup& G) const;

  static FiniteModule zero(const FiniteGroup& G);
  static FiniteModule trivial_action(const FiniteGroup& G, const Vec& moduli);
};

// Finite-order point of a torus, coordinates in Q/Z reduced into [0, 1).
struct TorsionPoint {
  std::vector<std::pair<i64, i64>> coords;  // (numerator, denominator)

  static TorsionPoint make(const std::vector<std::pair<i64, i64>>& raw);
  i64 order() const;
  // Coordinates scaled to level N (N must be a multiple of the order).
  Vec at_level(i64 N) const;
  bool operator==(const TorsionPoint& o) const { return coords == o.coords; }
};

// Hom(L, Z/n) with the contragredient action.
FiniteModule dual_torsion_module(const FiniteGroup& G, const GaloisLattice& L, i64 n);

// Submodule of M generated by `gens`, in invariant-factor form.
struct Submodule {
  FiniteModule module;
  Mat inclusion;  // dim(M) x dim(sub); column i is the image of generator i
  Subquotient coords;
};
Submodule submodule(const FiniteGroup& G, const FiniteModule& M, const Mat& gens);

// Kernel of the module map f : M -> N (f is dim(N) x dim(M)).
Submodule kernel_submodule(const FiniteGroup& G, const FiniteModule& M, const FiniteModule& N, const Mat& f);

// Checks that f : M -> N is a well-defined equivariant homomorphism.
bool is_module_map(const FiniteGroup& G, const FiniteModule& M, const FiniteModule& N, const Mat& f);

// 1 -> Z[n] -> T[n] -> T_ad[n] for the dual torus with character lattice X
// and simple roots (rows, in X-coordinates).
struct CenterSequence {
  FiniteModule T, Tad, Z;
  Mat projection;  // T -> Tad
  Mat inclusion;   // Z -> T
  i64 n = 1;
  i64 pi0_order = 1;        // |pi_0(Z)| = |torsion of X/Q|
  i64 check_level = 1;      // n * pi0_order
  bool surjective_at_check_level = false;
};
CenterSequence center_torsion_sequence(const FiniteGroup& G, const GaloisLattice& X, const Mat& simple_roots, i64 n);

// Coordinates of each root-lattice vector on the simple roots (rational solve,
// must be integral); throws ValidationError when impossible.
Mat simple_root_coordinates(const Mat& simple_roots, const Mat& vectors);

}  // namespace rcov
