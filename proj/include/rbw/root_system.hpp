#pragma once

#include <string>
#include <vector>

#include "rbw/linalg.hpp"

namespace rbw {

enum class Family { A, B, C, D, E, F, G };

// Crystallographic root system for one irreducible family/rank, realized in
// R^d (types whose natural ambient space is larger, A_d and E6/E7, are
// re-expressed in an orthonormal basis of the root span).
//
// Coordinate convention (see README for the full table): simple roots follow
// the standard Bourbaki ordering per family, but lengths are normalized so
// that SHORT roots have length 1. In simply-laced types every root then has
// length 1 and the mirrors H_alpha^k = {x : x.alpha = k} of each family are
// unit-spaced along the unit normal; for A1 this puts the mirrors exactly at
// the integers. The normalization matters: crossing-rate and variance
// constants scale with it.
struct RootSystemSpec {
  Family family;
  int rank = 0;  // d

  std::vector<Vec> roots;         // all of Phi
  std::vector<Vec> coroots;       // coroots[i] = 2*roots[i]/<roots[i],roots[i]>
  std::vector<int> positive;      // indices into roots: one of each +-pair
  std::vector<Vec> simple_roots;  // alpha_1..alpha_d
  Vec highest_root;               // theta
  Mat coroot_basis;               // columns alpha^vee_1..alpha^vee_d

  std::string name() const;  // e.g. "A2", "G2"
  int dim() const { return rank; }
  Vec coroot_of(const Vec& alpha) const { return 2.0 * alpha / alpha.squaredNorm(); }
};

// Parse "A1".."A9", "B2".., "C3".., "D4".., "E6".."E8", "F4", "G2".
// Throws InvalidType.
std::pair<Family, int> parse_type(const std::string& type);
std::string family_letter(Family f);

// Order of the finite Weyl group, from the classical closed forms.
std::uint64_t weyl_order(Family family, int rank);

// Throws InvalidType for unsupported (family, rank).
RootSystemSpec build_root_system(Family family, int rank);
inline RootSystemSpec build_root_system(const std::string& type) {
  auto [f, r] = parse_type(type);
  return build_root_system(f, r);
}

// r_alpha = I - 2*alpha*alpha^T/(alpha^T alpha). Throws ZeroVector.
Mat reflection_matrix(const Vec& alpha);

}  // namespace rbw
