#pragma once

// Independent brute-force oracles used by the unit tests and the acceptance
// binary. Nothing here calls the Smith-form engine.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "rcov/cohomology.hpp"
#include "rcov/galois_module.hpp"
#include "rcov/rootdata.hpp"

namespace oracle {

using rcov::i64;
using rcov::Vec;

struct ModuleCase {
  std::string label;
  rcov::FiniteGroup G;
  rcov::FiniteModule M;
};

// All (G, M, action) with G in {1, Z/2, Z/3, Z/4, V4}, |M| <= max_order,
// actions taken up to conjugation by Aut(M).
std::vector<ModuleCase> enumerate_cases(int max_order = 16);

// Exhaustive cochain-level data.
struct Brute {
  i64 h0 = 0;
  std::vector<Vec> z1, b1;   // full 1-cocycles, coboundaries
  std::vector<Vec> z2, b2;   // normalized 2-cocycles, normalized coboundaries
};
Brute brute_force(const rcov::FiniteGroup& G, const rcov::FiniteModule& M, int max_degree = 2);

// Direct evaluation of the differential from its defining formula.
Vec d_direct(const rcov::FiniteGroup& G, const rcov::FiniteModule& M, int degree, const Vec& c);


// Compares the engine against brute force in degrees 0..2. On mismatch
// returns false and fills `why`.
bool compare_cohomology(const ModuleCase& mc, std::string& why);

// Random admissible set: G drawn from {Z/2, Z/3, Z/4, V4}, a lattice of rank
// 1 or 2 with a random action, and 1 to 3 orbits of the form Sigma/H for a
// subgroup H of the stabilizer of a random vector.
struct AdmissibleCase {
  rcov::FiniteGroup G;
  rcov::AdmissibleSet R;
};
AdmissibleCase random_admissible_set(std::mt19937_64& rng, int max_rank = 2);

// All gauges on R (2^{|R|/2} of them).
std::vector<rcov::Gauge> all_gauges(const rcov::AdmissibleSet& R);

// x in C^1(G, M) is d of some element of M, by enumeration of M.
bool is_coboundary_1(const rcov::FiniteGroup& G, const rcov::FiniteModule& M, const Vec& x);

// Subgroups of G as sorted element lists.
std::vector<std::vector<int>> subgroups(const rcov::FiniteGroup& G);

// Permutation lattice Z[G/H_1] + ... + Z[G/H_k].
rcov::GaloisLattice induced_lattice(const rcov::FiniteGroup& G, const std::vector<std::vector<int>>& Hs);

// Coboundary sets inside C^1(G, L/nL) for the torus with cocharacters L:
// finite = {dy : y in L/nL}; torsion = {dy : y in (1/K)L/L, n dy = 0}, read at level n.
struct CoboundarySets {
  std::set<Vec> finite, torsion;
};
CoboundarySets coboundary_sets(const rcov::FiniteGroup& G, const rcov::GaloisLattice& L, i64 n, i64 K);

// Normalized 2-cocycles mod coboundaries of L/nL, by backtracking.
i64 brute_h2_count(const rcov::FiniteGroup& G, const rcov::FiniteModule& M);

}  // namespace oracle
