#include "rbw/direction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rbw/errors.hpp"

namespace rbw {

std::string to_string(DirectionClass c) {
  switch (c) {
    case DirectionClass::rational: return "rational";
    case DirectionClass::fully_irrational: return "fully_irrational";
    case DirectionClass::intermediate: return "intermediate";
  }
  return "?";
}

namespace {

// Best rational approximation p/q to x with q <= qmax, by continued fractions.
std::pair<long, long> rational_approx(double x, long qmax) {
  long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  while (frac > 1e-15) {
    double inv = 1.0 / frac;
    double ip = std::floor(inv);
    if (ip > 4e18 / std::max<long>(q1, 1)) break;
    long a = static_cast<long>(ip);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > qmax) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    frac = inv - ip;
  }
  return {p1, q1};
}

// Textbook LLL (delta = 0.99) on row vectors, floating arithmetic. Plenty for
// an advisory search at rank <= 8 and height <= 1e6.
void lll_reduce(std::vector<Vec>& basis) {
  const int n = static_cast<int>(basis.size());
  auto gs = [&](std::vector<Vec>& ortho, Mat& mu) {
    for (int i = 0; i < n; ++i) {
      ortho[i] = basis[i];
      for (int j = 0; j < i; ++j) {
        mu(i, j) = basis[i].dot(ortho[j]) / ortho[j].squaredNorm();
        ortho[i] -= mu(i, j) * ortho[j];
      }
    }
  };
  std::vector<Vec> ortho(n);
  Mat mu = Mat::Zero(n, n);
  gs(ortho, mu);
  int k = 1;
  int guard = 0;
  while (k < n && ++guard < 10000) {
    for (int j = k - 1; j >= 0; --j) {
      double m = std::round(mu(k, j));
      if (m != 0.0) {
        basis[k] -= m * basis[j];
        gs(ortho, mu);
      }
    }
    if (ortho[k].squaredNorm() >=
        (0.99 - mu(k, k - 1) * mu(k, k - 1)) * ortho[k - 1].squaredNorm()) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gs(ortho, mu);
      k = std::max(k - 1, 1);
    }
  }
}

}  // namespace

// Double precision can certify an integer relation m.y = 0 only while true
// relations (residual ~ |m|*eps) stay separated from the best chance
// approximations (residual ~ 1/|m|^2 for badly approximable inputs in rank
// 2). The windows cross near |m| ~ 3e4, so the definite search is capped at
// height 1e4 and anything requested beyond that is reported as unsearched.
static constexpr double kReliableHeight = 1e4;

DirectionReport classify_direction(const Vec& b, const RootSystemSpec& spec, double height) {
  if (b.norm() <= 0.0) throw ZeroVector("classify_direction: zero direction");
  const int d = spec.rank;
  Vec bu = b / b.norm();

  DirectionReport rep;
  rep.coroot_coords = spec.coroot_basis.inverse() * bu;
  const Vec& y = rep.coroot_coords;
  double yscale = y.cwiseAbs().maxCoeff();

  if (d == 1) {
    rep.cls = DirectionClass::rational;
    rep.note = "rank 1: every direction is a coroot multiple";
    return rep;
  }

  const auto hmax = static_cast<long>(std::min(height, kReliableHeight));
  // Residual consistent with an exact relation computed in doubles.
  auto exact_cut = [&](double coeff_mass) {
    return std::max(1e-14, 10.0 * 2.3e-16 * coeff_mass) * yscale;
  };
  const double ambiguous_cut = 1e-10 * yscale;

  // Proportionality to a rational vector: approximate every ratio y_i / y_pivot.
  int pivot = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(y[i]) > std::abs(y[pivot])) pivot = i;
  {
    std::vector<long> den(d);
    bool ok = true;
    long common = 1;
    for (int i = 0; i < d && ok; ++i) {
      auto [p, q] = rational_approx(y[i] / y[pivot], hmax);
      (void)p;
      den[i] = q;
      if (q <= 0) ok = false;
    }
    for (int i = 0; i < d && ok; ++i) {
      long g = std::gcd(common, den[i]);
      if (double(common) / double(g) * double(den[i]) > double(hmax)) ok = false;
      else common = common / g * den[i];
    }
    if (ok) {
      double unitlen = y[pivot] / double(common);
      double resid = 0.0;
      double mass = 0.0;
      for (int i = 0; i < d; ++i) {
        double m = std::round(y[i] / unitlen);
        mass = std::max(mass, std::abs(m));
        resid = std::max(resid, std::abs(y[i] - m * unitlen));
      }
      if (resid < exact_cut(mass + double(common))) {
        rep.cls = DirectionClass::rational;
        rep.residual = resid;
        return rep;
      }
      if (resid < ambiguous_cut) {
        rep.cls = DirectionClass::intermediate;
        rep.residual = resid;
        rep.note = "proportional to a rational vector at low height up to residual " +
                   std::to_string(resid) + "; flagged ambiguous";
        return rep;
      }
    }
  }

  // Single-relation search: LLL on rows (e_i | C y_i) for a ladder of C.
  double best_resid = std::numeric_limits<double>::infinity();
  std::vector<long> best_m;
  for (double c : {1e4, 1e6, 1e8}) {
    std::vector<Vec> basis(d, Vec::Zero(d + 1));
    for (int i = 0; i < d; ++i) {
      basis[i][i] = 1.0;
      basis[i][d] = c * y[i];
    }
    lll_reduce(basis);
    for (const Vec& v : basis) {
      std::vector<long> m(d);
      double resid = 0.0;
      long l1 = 0;
      bool zero = true;
      for (int i = 0; i < d; ++i) {
        m[i] = std::lround(v[i]);
        if (m[i] != 0) zero = false;
        l1 += std::labs(m[i]);
        resid += double(m[i]) * y[i];
      }
      resid = std::abs(resid);
      if (zero || l1 > hmax) continue;
      if (resid < best_resid) {
        best_resid = resid;
        best_m = m;
      }
    }
  }

  if (!best_m.empty()) {
    long l1 = 0;
    for (long m : best_m) l1 += std::labs(m);
    if (best_resid < exact_cut(double(l1))) {
      rep.relation = best_m;
      rep.residual = best_resid;
      rep.cls = DirectionClass::intermediate;
      rep.note = "integer relation found at height " + std::to_string(hmax);
      return rep;
    }
    if (best_resid < ambiguous_cut) {
      rep.relation = best_m;
      rep.residual = best_resid;
      rep.cls = DirectionClass::intermediate;
      rep.note = "near-relation at height " + std::to_string(hmax) + "; flagged ambiguous";
      return rep;
    }
  }

  rep.cls = DirectionClass::fully_irrational;
  if (!best_m.empty()) {
    rep.relation = best_m;
    rep.residual = best_resid;
  }
  rep.note = "no integer relation below height " + std::to_string(hmax);
  if (height > kReliableHeight)
    rep.note += " (requested height " + std::to_string(static_cast<long>(height)) +
                " exceeds double-precision resolution; searched to " +
                std::to_string(hmax) + ")";
  return rep;
}

}  // namespace rbw
