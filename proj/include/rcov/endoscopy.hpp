#pragma once

#include <string>
#include <vector>

#include "rcov/cohomology.hpp"
#include "rcov/covers.hpp"
#include "rcov/galois_module.hpp"
#include "rcov/rootdata.hpp"

namespace rcov {

// Endoscopic datum inside the L-group of a quasi-split G: the dual root datum
// with its pinned Galois action, a finite-order point s of T^ and the twisting
// sigma -> w_sigma in the Weyl group. All matrices act on X^*(T^).
struct EndoscopicDatum {
  FiniteGroup G;
  RootDatum dual;
  std::vector<Mat> sigma_G;
  TorsionPoint s;            // in X_*(T^) (x) Q/Z
  std::vector<Mat> w;        // one Weyl element per group element
  bool strict_s = false;     // require sigma_H(s) = s exactly, not modulo Z(G^)

  std::vector<Mat> sigma_H() const;  // w_sigma sigma_G
};

// Roots of G^ taking integral values on s, with the base induced by the
// positive roots of G^. Root indices of the result follow those of G^ through
// `root_in_G` when it is given.
RootDatum centralizer_root_system(const RootDatum& dual, const TorsionPoint& s, std::vector<int>* root_in_G = nullptr);

// Throws ValidationError naming the first violated condition.
void validate_datum(const EndoscopicDatum& d);

// n(w) n(v) = t n(wv) for the Tits section of W in G^; t in X_*(T^) / 2.
Vec weyl_tits_cocycle(const RootDatum& rd, const Mat& w, const Mat& v);

struct EndoscopicCoverResult {
  RootDatum H;                    // dual root datum of H
  std::vector<int> root_in_G;     // H root index -> G^ root index
  std::vector<Mat> sigma_H;
  CoverBase base;                 // H with the action sigma_H
  std::vector<int> pinning_signs; // adapted pinning X^H_a = sign_a e_a on simple roots of H
  std::vector<std::vector<int>> eps;  // eps[g][k] for the k-th simple root of H
  CoverDescriptor x;              // (z, c) at level 2
  Vec class_orders;               // hyper-H^2 at level 2
  Vec class_coords;
  bool trivial_class = true;
  QuotientLattice pi1_H;
  std::string conjugacy_note = "conjugacy checked within N(T^, G^)";
};

// Default adapted pinning: all signs +1.
EndoscopicCoverResult endoscopic_cover(const EndoscopicDatum& d, std::vector<int> pinning_signs = {});

// Conjugate of the datum by a Weyl element w of G^: s -> w s and
// w_sigma -> w w_sigma sigma_G(w)^-1.
EndoscopicDatum conjugate_datum(const EndoscopicDatum& d, const Mat& w);

// Finite model at level N of the map h x sigma -> (h - x(sigma), w_sigma, sigma)
// from H^[N] twisted by z - dx into triples (t, w, sigma) multiplied with the
// Tits cocycle of G^.
struct LEmbeddingCertificate {
  i64 level = 2;
  Vec lift;                          // x in C^1(H^[N]) lifting c
  Vec adjoint_shift;                 // a in T^_ad[N] with image(x) = c + da
  std::vector<int> weyl_index;       // index of w_sigma in the Weyl group
  std::vector<std::vector<int>> words;
  Vec twisted_cocycle;               // z - dx in Z^2(H^[N])
  std::size_t products_checked = 0;
  bool homomorphic_twisting = false; // w_sigma sigma_G(w_tau) = w_{sigma tau}
  bool multiplicative = false;
  bool pinning_preserved = false;
  std::vector<std::string> transcript;

  bool verified() const { return homomorphic_twisting && multiplicative && pinning_preserved; }
};

// Default level lcm(2 e_H, order of s), e_H the exponent of pi_0(Z(H^)).
i64 certificate_level(const EndoscopicDatum& d, const EndoscopicCoverResult& r);
// Runs every check and records the outcome. An empty lift is solved for; a
// lift whose image differs from c by more than a coboundary of T^_ad[N]
// throws ValidationError.
LEmbeddingCertificate check_l_embedding(const EndoscopicDatum& d, const EndoscopicCoverResult& r, const Vec& lift = {}, i64 level = 0);
// As check_l_embedding, throwing CertificateError when a check fails.
LEmbeddingCertificate l_embedding_certificate(const EndoscopicDatum& d, const EndoscopicCoverResult& r, const Vec& lift = {}, i64 level = 0);

// x_H as the Baer sum of x_{H,G} and the pullback of a base cover x_G of G
// (a descriptor over CoverBase::make_group(G, dual, sigma_G)) through Z(G^).
struct ComposedCover {
  i64 center_level = 1;   // level at which x_G was corrected into Z(G^)
  CoverDescriptor x_H;    // over r.base at level lcm(center_level, 2)
};
ComposedCover compose_with_base_cover(const EndoscopicDatum& d, const EndoscopicCoverResult& r, const CoverDescriptor& x_G);

// Named fixtures: "a1-elliptic", "a1ad-elliptic", "a1-split", "a1xa1-in-c2", "c2-split".
EndoscopicDatum endoscopic_fixture(const std::string& name);
std::vector<std::string> endoscopic_fixture_names();

}  // namespace rcov
