#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rcov/endoscopy.hpp"
#include "rcov/localfield.hpp"
#include "rcov/rootdata.hpp"

namespace rcov {

// Desk model: Gamma = Gal(E/F) = {1, sigma} for a quadratic extension E of
// F = Q_v, and every torus in sight splits over E.

// exp(2 pi i num / den).
struct RootOfUnity {
  i64 num = 0, den = 1;

  static RootOfUnity sign(int s) { return RootOfUnity{s < 0 ? 1 : 0, 2}.reduced(); }
  RootOfUnity reduced() const;
  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity inverse() const { return RootOfUnity{-num, den}.reduced(); }
  bool operator==(const RootOfUnity& o) const;
  std::complex<double> value() const;
  int as_sign() const;  // throws unless the value is +-1
};

// Point of a split torus over E: values on the basis of X^*(T).
struct TorusPoint {
  std::vector<QuadExtElement> values;

  static TorusPoint one(const QuadExt& E, int rank);
  // lambda(a) for a cocharacter lambda in X_*(T).
  static TorusPoint cocharacter(const QuadExt& E, const Vec& lambda, const QuadExtElement& a);
  QuadExtElement eval(const Vec& chi) const;
  TorusPoint operator*(const TorusPoint& o) const;
  TorusPoint inverse() const;
  TorusPoint act(const Mat& w) const;  // (w t)(chi) = t(w^-1 chi)
  bool operator==(const TorusPoint& o) const;
};

// The group G: its root datum (X = X^*(T), the dual of the preset datum of
// G^), the pinned action sigma_T on X^*(T), and the splitting field.
struct TransferGroup {
  RootDatum G;
  Mat sigma_T;
  QuadExt E;

  static TransferGroup from_datum(const EndoscopicDatum& d, const QuadExt& E);
};
RootDatum group_datum(const RootDatum& dual);  // roots and coroots exchanged

// t n(w), with n the Tits section of the pinning.
struct NormalizerElement {
  TorusPoint t;
  Mat w;
  bool operator==(const NormalizerElement& o) const { return t == o.t && w == o.w; }
};
NormalizerElement normalizer_multiply(const TransferGroup& tg, const NormalizerElement& a, const NormalizerElement& b);
NormalizerElement normalizer_galois(const TransferGroup& tg, const NormalizerElement& a);

// Maximal torus S realized by the Weyl 1-cocycle omega (omega_sigma on
// X^*(T)), so that sigma acts on X^*(S) = X^*(T) by sigma_S = omega sigma_T.
struct TorusEmbedding {
  Mat omega;
  Mat sigma_S(const TransferGroup& tg) const { return mat_mul(omega, tg.sigma_T); }
};
void validate_embedding(const TransferGroup& tg, const TorusEmbedding& emb);

// Root orbits of Gamma x {+-1} on R(S, G), each listed from its least index.
struct RootOrbit2 {
  std::vector<int> roots;
  bool symmetric = false;  // sigma_S a = -a
};
std::vector<RootOrbit2> root_orbits(const TransferGroup& tg, const TorusEmbedding& emb);

// delta in S(F) with delta_a in F_a^x for every root a; asymmetric_flips
// records factors eps_O for asymmetric orbits (indexed like root_orbits).
struct CoverElement {
  TorusPoint delta;
  std::vector<QuadExtElement> root_values;
  std::vector<int> asymmetric_flips;
};
void validate_cover_element(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& d);

// x_sigma for sigma in {1, sigma}; gauge: +-1 per root, empty for positivity.
std::vector<NormalizerElement> ls_cocycle(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& d,
                                          const std::vector<int>& gauge = {});
bool is_normalizer_cocycle(const TransferGroup& tg, const std::vector<NormalizerElement>& x);

// kappa on X_*(S_sc) given by pairing coroots with s in X^*(T) (x) Q/Z.
struct KappaCharacter {
  TorsionPoint s;

  RootOfUnity value(const Vec& coroot) const;
  std::vector<int> R_kappa(const RootDatum& G) const;
};
void validate_kappa(const TransferGroup& tg, const TorusEmbedding& emb, const KappaCharacter& k);

// eta_a in F_{+-a}^x, one per root.
struct EtaShift {
  std::vector<QuadExtElement> values;
};
void validate_eta(const TransferGroup& tg, const TorusEmbedding& emb, const EtaShift& eta);
int eta_shift_pairing(const TransferGroup& tg, const TorusEmbedding& emb, const EtaShift& eta, const KappaCharacter& k);
// eta with eta * a = b (same delta); throws when a and b lie over different points.
EtaShift eta_between(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& a, const CoverElement& b);

enum class Normalization { pinning, whittaker };
enum class CftConvention { deligne, artin };

// psi(x) = exp(sign * 2 pi i {scale x}) at a finite place and
// exp(sign * 2 pi i scale x) at the real place.
struct AdditiveCharacter {
  int sign = 1;
  Rational scale{1};
};

struct TransferInput {
  EndoscopicDatum datum;
  QuadExt E;
  TorusEmbedding embedding;
  CoverElement gamma;                 // gamma_x, a tuple over R(S,G) \ R(S,H)
  CoverElement delta;                 // delta_pm, a tuple over R(S,G) \ R(S,H)
  std::optional<CoverElement> base;   // base point over the same delta
  int base_value = 1;                 // <inv(base, pin), s>
  bool kostant_trivial = false;       // caller asserts the base value is 1
  // Class of inv(delta_1, delta) in F^x / N(E^x) per symmetric orbit, for a
  // stable conjugate of the base point's element; empty when none.
  std::vector<Rational> stable_class;
  CftConvention cft = CftConvention::deligne;
  Normalization normalization = Normalization::pinning;
  AdditiveCharacter lambda;
};

// epsilon(1/2, chi_E, psi) by Gauss sums (odd p), 1 when E/F is unramified,
// and the standard value at the real place; p = 2 ramified is unsupported.
RootOfUnity epsilon_quadratic(const QuadExt& E, const AdditiveCharacter& psi);
// Gauss sum sum_u (u/p) exp(2 pi i u / p).
std::complex<double> gauss_sum(i64 p);
// epsilon(1/2, X^*(T) - X^*(T^H), psi).
RootOfUnity epsilon_whittaker(const EndoscopicDatum& d, const QuadExt& E, const AdditiveCharacter& psi);

int inv_pairing(const TransferInput& in);
int inv_H(const TransferInput& in);

struct TransferValue {
  bool zero = false;
  RootOfUnity phase;
};
struct TransferReport {
  EndoscopicCoverResult cover;
  std::vector<QuadExtElement> x_sigma_torus;  // torus part of x_sigma(delta) on X^*(T)
  int inv_pairing = 1;
  int inv_H = 1;
  RootOfUnity epsilon;
  TransferValue value;
  bool related = true;
};
TransferReport delta_prime(const TransferInput& in);

// Both Delta_II formulas with quadratic chi-data chi_a = phi o N_{E/F}, phi a
// quartic character of F^x with phi^2 = kappa_E.
struct QuarticCharacter {
  QuadExt E;
  static std::optional<QuarticCharacter> make(const QuadExt& E);  // none when kappa_E(-1) = -1 or p = 2
  RootOfUnity operator()(const Rational& x) const;
  int chi(const QuadExtElement& x) const;  // phi(N x), a sign
};
struct DeltaIIBridge {
  int quotient_formula = 1;  // prod chi_a((a(delta) - 1) / a_a)
  int tuple_formula = 1;     // prod chi_a(delta_a)
  bool agree() const { return quotient_formula == tuple_formula; }
};
DeltaIIBridge delta_ii_bridge(const TransferGroup& tg, const TorusEmbedding& emb, const CoverElement& d, const QuarticCharacter& chi);

}  // namespace rcov
