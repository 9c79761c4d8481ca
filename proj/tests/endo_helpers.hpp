#pragma once

// Endoscopy helpers shared by the unit tests and the acceptance binary.

#include <stdexcept>
#include <vector>

#include "rcov/cohomology.hpp"
#include "rcov/covers.hpp"
#include "rcov/endoscopy.hpp"

namespace endo_helpers {

using namespace rcov;

// Is (z, c) = d(a, b) for some a in C^1(T[2]), b in C^0(T_ad[2])? Direct
// enumeration with the differential written out by hand.
inline bool brute_hyper_trivial(const CoverBase& base, const CoverDescriptor& t) {
  const FiniteGroup& G = base.G;
  int n = G.order();
  FiniteModule T = base.T(2), Tad = base.Tad(2);
  Mat P = base.projection();
  std::size_t rk = T.dim(), ns = Tad.dim();
  std::size_t na = n * rk, nb = ns;
  for (i64 code = 0; code < (i64{1} << (na + nb)); ++code) {
    Vec a(na), b(nb);
    for (std::size_t i = 0; i < na; ++i) a[i] = (code >> i) & 1;
    for (std::size_t i = 0; i < nb; ++i) b[i] = (code >> (na + i)) & 1;
    auto av = [&](int g) { return Vec(a.begin() + g * rk, a.begin() + (g + 1) * rk); };
    bool ok = true;
    for (int s = 0; s < n && ok; ++s)
      for (int u = 0; u < n && ok; ++u) {
        Vec v = T.apply(s, av(u));
        Vec x = av(G.mul(s, u)), y = av(s);
        for (std::size_t j = 0; j < rk; ++j)
          if (mod(v[j] - x[j] + y[j] - t.z[(s * n + u) * rk + j], 2) != 0) ok = false;
      }
    for (int s = 0; s < n && ok; ++s) {
      Vec pa = mat_vec(P, av(s)), sb = Tad.apply(s, b);
      for (std::size_t j = 0; j < ns; ++j)
        if (mod(pa[j] - (sb[j] - b[j]) - t.c[s * ns + j], 2) != 0) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

inline std::vector<std::vector<int>> all_signs(std::size_t k) {
  std::vector<std::vector<int>> out;
  for (int m = 0; m < (1 << k); ++m) {
    std::vector<int> s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = (m >> i) & 1 ? -1 : 1;
    out.push_back(s);
  }
  return out;
}

// Pushforward of a descriptor on H along Ad(w) : T^ -> T^ to the base of the
// conjugate datum; T^_ad coordinates follow the simple roots.
inline CoverDescriptor push_by_weyl(const EndoscopicCoverResult& r, const EndoscopicCoverResult& r2, const Mat& w, const CoverDescriptor& t) {
  const FiniteGroup& G = r.base.G;
  FiniteModule T = r.base.T(t.n), Tad = r.base.Tad(t.n), Tad2 = r2.base.Tad(t.n);
  Mat wy = cocharacter_action(w);
  CoverDescriptor out{t.n, Vec(t.z.size()), Vec(t.c.size())};
  for (int s = 0; s < G.order(); ++s)
    for (int u = 0; u < G.order(); ++u) set_cochain_value(G, T, out.z, {s, u}, mat_vec(wy, cochain_value(G, T, t.z, {s, u})));
  std::vector<int> relabel;
  for (int k : r.H.simple) {
    Vec img = mat_vec(w, r.H.roots[k]);
    int j = r2.H.find_root(img);
    int pos = -1;
    for (std::size_t q = 0; q < r2.H.simple.size(); ++q)
      if (r2.H.simple[q] == j) pos = static_cast<int>(q);
    if (pos < 0) throw std::logic_error("Weyl image of a simple root of H is not simple");
    relabel.push_back(pos);
  }
  for (int s = 0; s < G.order(); ++s) {
    Vec v = cochain_value(G, Tad, t.c, {s}), img(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) img[relabel[k]] = v[k];
    set_cochain_value(G, Tad2, out.c, {s}, img);
  }
  return out;
}

}  // namespace endo_helpers
