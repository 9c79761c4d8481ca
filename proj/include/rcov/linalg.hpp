#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rcov {

using i64 = std::int64_t;
using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;  // row-major

i64 mod(i64 a, i64 m);
i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
// Returns g = gcd(a, b) >= 0 with x*a + y*b = g.
i64 egcd(i64 a, i64 b, i64& x, i64& y);
// Multiplicative inverse of a modulo m; a must be a unit.
i64 inv_mod(i64 a, i64 m);

Mat identity(std::size_t n);
Mat zeros(std::size_t r, std::size_t c);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& a, const Vec& v);
Vec vec_mat(const Vec& v, const Mat& a);
Mat transpose(const Mat& a, std::size_t cols_if_empty = 0);
// Inverse of a unimodular integer matrix; throws if not unimodular.
Mat unimodular_inverse(const Mat& a);
i64 determinant(const Mat& a);

// Echelon basis of the lattice spanned by `rows` together with E*Z^ncols.
// The result is ncols x ncols, upper triangular, with pivots dividing E and
// entries reduced into [0, E).
Mat hnf_mod(const Mat& rows, std::size_t ncols, i64 E);

// Solves y * B = x (mod E) for an echelon basis B from hnf_mod.
// Returns false when x is not in the lattice.
bool solve_echelon(const Mat& B, const Vec& x, i64 E, Vec& y);

// Generators of {x in Z^n : (A x)_j = 0 mod out_mod[j]} where A is m x n and
// every out_mod[j] divides E. The result contains E*Z^n.
Mat kernel_mod(const Mat& A, std::size_t n, const Vec& out_mod, i64 E);

// One solution x of (A x)_j = b_j mod out_mod[j], reduced mod E; false when
// the system is inconsistent.
bool solve_mod(const Mat& A, std::size_t n, const Vec& b, const Vec& out_mod, i64 E, Vec& x);

// Finite abelian group L/B where Dz^n <= B <= L <= Z^n, all reduced mod E.
// Coordinates: invariant factors s_1 | s_2 | ... (only factors > 1 kept).
class Subquotient {
public:
  Subquotient() = default;
  Subquotient(const Mat& L_gens, const Mat& B_gens, const Vec& moduli);

  const Vec& orders() const { return orders_; }
  i64 order() const;
  std::size_t ambient_dim() const { return moduli_.size(); }
  const Vec& moduli() const { return moduli_; }

  bool contains(const Vec& x) const;          // x in L
  Vec dlog(const Vec& x) const;                // x in L -> coordinates
  Vec lift(const Vec& coords) const;           // coordinates -> representative in L
  bool is_zero(const Vec& x) const;            // x in B

private:
  Vec moduli_;
  i64 E_ = 1;
  Mat basis_;                        // echelon basis of L
  Mat V_, Vinv_;                     // column transform of the relation SNF
  std::vector<std::size_t> slots_;   // positions with invariant factor > 1
  Vec orders_;
};

// Smith normal form over Z for small matrices: returns diagonal entries
// (including zeros) of length min(rows, cols) and, if requested, unimodular
// U, V with U*A*V = diag.
Vec smith_diagonal(const Mat& A, std::size_t cols, Mat* U = nullptr, Mat* V = nullptr);

}  // namespace rcov
