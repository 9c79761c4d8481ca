#pragma once

#include <string>

#include <boost/rational.hpp>

#include "rcov/linalg.hpp"

namespace rcov {

using Rational = boost::rational<i64>;

// The real place (p = 0) or Q_p for a prime p.
struct Place {
  i64 p = 0;

  static Place real() { return Place{0}; }
  static Place padic(i64 p);  // throws unless p is prime
  bool is_real() const { return p == 0; }
  std::string name() const;
  bool operator==(const Place& o) const { return p == o.p; }
};

bool is_prime(i64 n);
int valuation(i64 x, i64 p);            // x != 0
int valuation(const Rational& x, i64 p);
// x / p^v(x) reduced into an integer unit modulo p^k (k >= 1).
i64 unit_residue(const Rational& x, i64 p, int k);
int legendre(i64 a, i64 p);             // odd p, a prime to p

// Hilbert symbol (a, b)_v in {+1, -1}; a, b nonzero rationals.
int hilbert_symbol(const Rational& a, const Rational& b, const Place& v);
bool is_square(const Rational& a, const Place& v);
// Canonical representative of the square class of a at v: -1 or 1 at the
// real place, and for Q_p an integer of the form u p^e with e in {0, 1}.
Rational square_class(const Rational& a, const Place& v);

// F(sqrt d) over F = Q_v; d is a nonsquare at v.
struct QuadExt {
  Place v;
  Rational d;

  static QuadExt make(const Place& v, const Rational& d);
  bool ramified() const;  // real place: C / R counts as ramified
};

// a + b sqrt(d).
struct QuadExtElement {
  QuadExt E;
  Rational a{0}, b{0};

  Rational norm() const { return a * a - E.d * b * b; }
  Rational trace() const { return 2 * a; }
  QuadExtElement conj() const { return QuadExtElement{E, a, -b}; }
  QuadExtElement operator*(const QuadExtElement& o) const;
  QuadExtElement operator-(const QuadExtElement& o) const { return QuadExtElement{E, a - o.a, b - o.b}; }
  QuadExtElement inverse() const;
  bool is_zero() const { return a == Rational(0) && b == Rational(0); }
  bool in_base() const { return b == Rational(0); }
  bool operator==(const QuadExtElement& o) const { return a == o.a && b == o.b && E.d == o.E.d; }
};

// Sign character of F^x / N(E^x): +1 iff eta is a norm from E.
int kappa(const Rational& eta, const QuadExt& E);

}  // namespace rcov
