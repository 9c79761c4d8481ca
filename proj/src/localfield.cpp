#include "rcov/localfield.hpp"

#include "rcov/error.hpp"

namespace rcov {

namespace {

void require_nonzero(const Rational& x, const char* what) {
  if (x == Rational(0)) throw ValidationError(std::string(what) + " must be nonzero");
}

i64 pow_i(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// parity helpers for the dyadic formula, u an odd residue mod 8
int eps2(i64 u) { return static_cast<int>(mod((u - 1) / 2, 2)); }
int omega2(i64 u) { return static_cast<int>(mod((u * u - 1) / 8, 2)); }

}  // namespace

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Place Place::padic(i64 p) {
  if (!is_prime(p)) throw ValidationError("place: " + std::to_string(p) + " is not prime");
  return Place{p};
}

std::string Place::name() const { return is_real() ? "R" : "Q_" + std::to_string(p); }

int valuation(i64 x, i64 p) {
  if (x == 0) throw ValidationError("valuation of zero");
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

int valuation(const Rational& x, i64 p) { return valuation(x.numerator(), p) - valuation(x.denominator(), p); }

i64 unit_residue(const Rational& x, i64 p, int k) {
  require_nonzero(x, "unit_residue argument");
  i64 m = pow_i(p, k);
  i64 num = x.numerator(), den = x.denominator();
  while (num % p == 0) num /= p;
  while (den % p == 0) den /= p;
  return mod(mod(num, m) * inv_mod(mod(den, m), m), m);
}

int legendre(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0) throw ValidationError("legendre: argument divisible by p");
  // Euler's criterion
  i64 r = 1, b = a, e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

int hilbert_symbol(const Rational& a, const Rational& b, const Place& v) {
  require_nonzero(a, "hilbert_symbol argument");
  require_nonzero(b, "hilbert_symbol argument");
  if (v.is_real()) return (a < Rational(0) && b < Rational(0)) ? -1 : 1;
  i64 p = v.p;
  int al = valuation(a, p), be = valuation(b, p);
  if (p == 2) {
    i64 u = unit_residue(a, 2, 3), w = unit_residue(b, 2, 3);
    int e = eps2(u) * eps2(w) + al * omega2(w) + be * omega2(u);
    return e % 2 ? -1 : 1;
  }
  i64 u = unit_residue(a, p, 1), w = unit_residue(b, p, 1);
  int s = (al * be % 2 != 0 && (p - 1) / 2 % 2 != 0) ? -1 : 1;
  if (be % 2 != 0) s *= legendre(u, p);
  if (al % 2 != 0) s *= legendre(w, p);
  return s;
}

bool is_square(const Rational& a, const Place& v) {
  require_nonzero(a, "is_square argument");
  if (v.is_real()) return a > Rational(0);
  if (valuation(a, v.p) % 2 != 0) return false;
  if (v.p == 2) return unit_residue(a, 2, 3) == 1;
  return legendre(unit_residue(a, v.p, 1), v.p) == 1;
}

Rational square_class(const Rational& a, const Place& v) {
  require_nonzero(a, "square_class argument");
  if (v.is_real()) return a > Rational(0) ? Rational(1) : Rational(-1);
  i64 p = v.p;
  i64 e = mod(valuation(a, p), 2);
  i64 pe = e ? p : 1;
  if (p == 2) return Rational(unit_residue(a, 2, 3) * pe);
  i64 u = unit_residue(a, p, 1);
  if (legendre(u, p) == 1) return Rational(pe);
  // least quadratic nonresidue
  i64 n = 2;
  while (legendre(n, p) == 1) ++n;
  return Rational(n * pe);
}

QuadExt QuadExt::make(const Place& v, const Rational& d) {
  require_nonzero(d, "discriminant");
  if (is_square(d, v)) throw ValidationError("discriminant is a square at " + v.name());
  return QuadExt{v, d};
}

bool QuadExt::ramified() const {
  if (v.is_real()) return true;
  if (valuation(d, v.p) % 2 != 0) return true;
  if (v.p == 2) return unit_residue(d, 2, 3) % 4 != 1;
  return false;
}

QuadExtElement QuadExtElement::operator*(const QuadExtElement& o) const {
  return QuadExtElement{E, a * o.a + E.d * b * o.b, a * o.b + b * o.a};
}

QuadExtElement QuadExtElement::inverse() const {
  Rational n = norm();
  if (n == Rational(0)) throw ValidationError("inverse of zero");
  return QuadExtElement{E, a / n, -b / n};
}

int kappa(const Rational& eta, const QuadExt& E) {
  require_nonzero(eta, "kappa argument");
  return hilbert_symbol(E.d, eta, E.v);
}

}  // namespace rcov
