#pragma once

// Test-only oracles, independent of the library implementation paths they
// check. Expected values frozen into the tests were computed with these.

#include <cmath>
#include <cstdint>
#include <vector>

#include "rbw/linalg.hpp"

namespace oracle {

using rbw::Mat;
using rbw::Vec;

// Closure of the simple roots under reflections about every discovered root.
// Brute-force O(|Phi|^2) set growth; the defining property of a root system.
inline std::vector<Vec> root_closure(const std::vector<Vec>& simple) {
  std::vector<Vec> roots;
  auto add = [&](const Vec& r) {
    for (const Vec& s : roots)
      if ((s - r).cwiseAbs().maxCoeff() < 1e-8) return false;
    roots.push_back(r);
    return true;
  };
  for (const Vec& a : simple) {
    add(a);
    add(-a);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < roots.size(); ++i)
      for (size_t j = 0; j < roots.size(); ++j) {
        const Vec& a = roots[i];
        Vec r = roots[j] - (2.0 * roots[j].dot(a) / a.squaredNorm()) * a;
        if (add(r)) grew = true;
      }
  }
  return roots;
}

// Direct 1D bouncing walk on integer mirrors: an independent route to the
// discretized A1 dynamics. Mirrors at every integer; starts inside (0,1).
struct Walk1D {
  double x;
  int dir;  // +-1
  // positions after each crossing decision; eps[i] = 1 means transmit
  static std::vector<double> centroids(double x0, int dir0, const std::vector<int>& eps) {
    double lo = std::floor(x0), hi = lo + 1.0;
    int dir = dir0;
    std::vector<double> out;
    for (int e : eps) {
      if (e) {  // transmit: move to the neighboring cell
        if (dir > 0) {
          lo += 1.0;
          hi += 1.0;
        } else {
          lo -= 1.0;
          hi -= 1.0;
        }
      } else {  // reflect: direction flips, cell unchanged
        dir = -dir;
      }
      out.push_back(0.5 * (lo + hi));
    }
    return out;
  }
};

// Mean and standard error of a sample.
inline std::pair<double, double> mean_se(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= double(v.size());
  double s2 = 0;
  for (double x : v) s2 += (x - m) * (x - m);
  s2 /= double(v.size() - 1);
  return {m, std::sqrt(s2 / double(v.size()))};
}

// Smallest period of a sequence (brute force), 0 if none at or below pmax.
inline int smallest_period(const std::vector<int>& s, int pmax) {
  for (int p = 1; p <= pmax; ++p) {
    bool ok = true;
    for (size_t i = 0; i + p < s.size() && ok; ++i) ok = s[i] == s[i + p];
    if (ok) return p;
  }
  return 0;
}

}  // namespace oracle
