#pragma once

#include <string>
#include <vector>

#include "rcov/cohomology.hpp"
#include "rcov/galois_module.hpp"
#include "rcov/rootdata.hpp"

namespace rcov {

// Base object of a cover: a torus given by X^*(S) = X_*(S^), or a group given
// by the root datum of its dual and the Galois action on X^*(T^), which must
// preserve the simple roots (G quasi-split).
// Internally Y = X_*(T^) = X^*(T), so that T^[n] = Y / nY.
struct CoverBase {
  FiniteGroup G;
  GaloisLattice Y;
  bool torus = true;
  RootDatum dual;               // groups only
  GaloisLattice X;              // X^*(T^) with its action, groups only
  Mat simple_roots;             // rows in X^*(T^), groups only

  static CoverBase make_torus(const FiniteGroup& G, const GaloisLattice& L);
  static CoverBase make_group(const FiniteGroup& G, const RootDatum& dual, const std::vector<Mat>& act_on_X);

  FiniteModule T(i64 n) const;     // T^[n]
  FiniteModule Tad(i64 n) const;   // T^_ad[n]; zero for tori
  Mat projection() const;          // T^ -> T^_ad on coordinates
  TwoTermComplex complex(i64 n) const;
  // 1 -> Z(G^)[n] -> T^[n] -> T^_ad[n]; for tori Z = T^.
  CenterSequence center(i64 n) const;
  i64 pi0_order() const;
  i64 pi0_exponent() const;
  bool same_as(const CoverBase& o) const;
};

// t = (z, c) with z in Z^2(T^[n]) and c in C^1(T^_ad[n]), dc = image of z.
struct CoverDescriptor {
  i64 n = 1;
  Vec z;
  Vec c;  // empty for tori

  Vec total() const;  // (z, c) as a total 2-cochain
};

// Throws ValidationError unless t is a hypercocycle at its level.
void validate_descriptor(const CoverBase& base, const CoverDescriptor& t);
CoverDescriptor trivial_descriptor(const CoverBase& base, i64 n);

struct CoverClassification {
  i64 n = 1;
  CohomologyGroup classes;                    // H^2(T^[n] -> T^_ad[n])
  std::vector<CoverDescriptor> representatives;  // one per class, in coordinate order
  // Groups only: H^2(Z(G^)[n]) and its quotient by the image of the
  // n-torsion of C^1(Z(G^)) / B^1(Z(G^)).
  Vec center_h2_orders;
  Vec tilde_orders;
};
CoverClassification classify_covers(const CoverBase& base, i64 n, std::size_t max_representatives = 4096);
Vec class_of(const CoverBase& base, const CohomologyGroup& classes, const CoverDescriptor& t);

// Isomorphisms of covers at level n: h in C^1(T^[n]) modulo B^1(T^) with
// dh = z' - z and h_ad - (c' - c) in B^1(T^_ad).
struct IsomorphismSet {
  bool exists = false;
  Vec particular;                 // one witness
  Subquotient automorphisms;      // the torsor group, on C^1(T^[n])
  i64 count() const { return exists ? automorphisms.order() : 0; }
};
IsomorphismSet cover_isomorphisms(const CoverBase& base, const CoverDescriptor& t, const CoverDescriptor& t2);
std::vector<Vec> enumerate_witnesses(const IsomorphismSet& iso, std::size_t limit);
bool is_isomorphism_witness(const CoverBase& base, const CoverDescriptor& t, const CoverDescriptor& t2, const Vec& h);

// H^1(S^)[n] for tori, H^1(Z(G^))[n] for groups, on C^1(T^[n]).
Subquotient automorphism_group(const CoverBase& base, i64 n);

CoverDescriptor baer_sum(const CoverBase& base, const CoverDescriptor& a, const CoverDescriptor& b);
CoverDescriptor baer_inverse(const CoverBase& base, const CoverDescriptor& a);
// Pushforward along T^[n] -> T^[m], m a multiple of n.
CoverDescriptor level_raise(const CoverBase& base, const CoverDescriptor& t, i64 m);

// Double cover from an admissible set over Y with gauge p and a splitting
// cochain c_p (groups only; empty for tori).
struct DoubleCover {
  CoverDescriptor descriptor;
  std::vector<int> gauge;  // transversal signs of p
  std::size_t admissible_size = 0;
  bool splitting_consistent = false;  // dc_p = image of z_p and 2 c_p = 0
};
DoubleCover double_cover_from_admissible(const CoverBase& base, const AdmissibleSet& R, const Gauge& p, const Vec& c_p);
// Descriptor for gauge q with the witness s_{q/p} relating it to t_p.
struct GaugeChange {
  DoubleCover cover;
  Vec witness;
};
GaugeChange change_gauge(const CoverBase& base, const AdmissibleSet& R, const DoubleCover& t_p, const Gauge& p, const Gauge& q);

// Image of t in H^2(Z(G^)), computed in H^2(Z(G^)[level]) where that map
// is injective on the relevant classes.
struct DescentObstruction {
  i64 level = 1;
  Vec center_h2_orders;
  Vec class_coords;
  bool trivial = true;
  Vec center_cocycle;  // representative in Z^2(T^[level]) with trivial image in T^_ad
};
DescentObstruction descent_obstruction(const CoverBase& base, const CoverDescriptor& t);

// Torsion lifting for a torus: is C^1(S^[n]) / B^1(S^[n]) -> (C^1(S^) / B^1(S^))[n]
// bijective? Reports both coboundary groups inside C^1(S^[n]).
struct TorsionLiftingReport {
  i64 finite_coboundaries = 0;   // |B^1(S^[n])|
  i64 torsion_coboundaries = 0;  // |B^1(S^) n C^1(S^[n])|
  bool bijective = false;
};
TorsionLiftingReport torsion_lifting(const CoverBase& base, i64 n);

}  // namespace rcov
