#include "rbw/root_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "rbw/errors.hpp"

namespace rbw {

std::string family_letter(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::E: return "E";
    case Family::F: return "F";
    case Family::G: return "G";
  }
  return "?";
}

std::string RootSystemSpec::name() const { return family_letter(family) + std::to_string(rank); }

std::pair<Family, int> parse_type(const std::string& type) {
  if (type.size() < 2) throw InvalidType("type string too short: '" + type + "'");
  Family f;
  switch (type[0]) {
    case 'A': f = Family::A; break;
    case 'B': f = Family::B; break;
    case 'C': f = Family::C; break;
    case 'D': f = Family::D; break;
    case 'E': f = Family::E; break;
    case 'F': f = Family::F; break;
    case 'G': f = Family::G; break;
    default: throw InvalidType("unknown family in type '" + type + "'");
  }
  int rank = 0;
  try {
    size_t pos = 0;
    rank = std::stoi(type.substr(1), &pos);
    if (pos + 1 != type.size()) throw InvalidType("trailing characters in type '" + type + "'");
  } catch (const std::exception&) {
    throw InvalidType("bad rank in type '" + type + "'");
  }
  return {f, rank};
}

static void check_rank(Family f, int d) {
  auto bad = [&] {
    throw InvalidType("unsupported type " + family_letter(f) + std::to_string(d));
  };
  switch (f) {
    case Family::A: if (d < 1 || d > 9) bad(); break;
    case Family::B: if (d < 2 || d > 9) bad(); break;
    case Family::C: if (d < 3 || d > 9) bad(); break;
    case Family::D: if (d < 4 || d > 9) bad(); break;
    case Family::E: if (d < 6 || d > 8) bad(); break;
    case Family::F: if (d != 4) bad(); break;
    case Family::G: if (d != 2) bad(); break;
  }
}

std::uint64_t weyl_order(Family family, int rank) {
  check_rank(family, rank);
  auto fact = [](int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  };
  switch (family) {
    case Family::A: return fact(rank + 1);
    case Family::B:
    case Family::C: return (std::uint64_t(1) << rank) * fact(rank);
    case Family::D: return (std::uint64_t(1) << (rank - 1)) * fact(rank);
    case Family::E:
      if (rank == 6) return 51840ULL;
      if (rank == 7) return 2903040ULL;
      return 696729600ULL;
    case Family::F: return 1152ULL;
    case Family::G: return 12ULL;
  }
  return 0;
}

Mat reflection_matrix(const Vec& alpha) {
  double n2 = alpha.squaredNorm();
  if (n2 <= 0.0) throw ZeroVector("reflection_matrix: zero normal vector");
  Mat r = Mat::Identity(alpha.size(), alpha.size());
  r -= (2.0 / n2) * (alpha * alpha.transpose());
  return r;
}

namespace {

Vec unit(int n, int i) {
  Vec v = Vec::Zero(n);
  v[i] = 1.0;
  return v;
}

struct AmbientSystem {
  std::vector<Vec> roots;   // all of Phi, ambient coordinates
  std::vector<Vec> simple;  // alpha_1..alpha_d, ambient coordinates
};

AmbientSystem ambient_ADE8(Family f, int d) {
  AmbientSystem s;
  if (f == Family::A) {
    int n = d + 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s.roots.push_back(unit(n, i) - unit(n, j));
    for (int i = 0; i < d; ++i) s.simple.push_back(unit(n, i) - unit(n, i + 1));
    return s;
  }
  // E8 ambient; E6/E7 are carved out of it by the caller.
  const int n = 8;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int si : {-1, 1})
        for (int sj : {-1, 1}) s.roots.push_back(si * unit(n, i) + sj * unit(n, j));
  for (int mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) % 2 != 0) continue;  // even number of minus signs
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? -0.5 : 0.5;
    s.roots.push_back(v);
  }
  Vec a1(n);
  a1 << 0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, 0.5;
  s.simple.push_back(a1);
  s.simple.push_back(unit(n, 0) + unit(n, 1));
  s.simple.push_back(unit(n, 1) - unit(n, 0));
  s.simple.push_back(unit(n, 2) - unit(n, 1));
  s.simple.push_back(unit(n, 3) - unit(n, 2));
  s.simple.push_back(unit(n, 4) - unit(n, 3));
  s.simple.push_back(unit(n, 5) - unit(n, 4));
  s.simple.push_back(unit(n, 6) - unit(n, 5));
  return s;
}

AmbientSystem ambient_system(Family f, int d) {
  AmbientSystem s;
  switch (f) {
    case Family::A:
      return ambient_ADE8(f, d);
    case Family::B: {
      for (int i = 0; i < d; ++i)
        for (int sgn : {-1, 1}) s.roots.push_back(double(sgn) * unit(d, i));
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          for (int si : {-1, 1})
            for (int sj : {-1, 1}) s.roots.push_back(si * unit(d, i) + sj * unit(d, j));
      for (int i = 0; i + 1 < d; ++i) s.simple.push_back(unit(d, i) - unit(d, i + 1));
      s.simple.push_back(unit(d, d - 1));
      return s;
    }
    case Family::C: {
      for (int i = 0; i < d; ++i)
        for (int sgn : {-1, 1}) s.roots.push_back(2.0 * sgn * unit(d, i));
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          for (int si : {-1, 1})
            for (int sj : {-1, 1}) s.roots.push_back(si * unit(d, i) + sj * unit(d, j));
      for (int i = 0; i + 1 < d; ++i) s.simple.push_back(unit(d, i) - unit(d, i + 1));
      s.simple.push_back(2.0 * unit(d, d - 1));
      return s;
    }
    case Family::D: {
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          for (int si : {-1, 1})
            for (int sj : {-1, 1}) s.roots.push_back(si * unit(d, i) + sj * unit(d, j));
      for (int i = 0; i + 1 < d; ++i) s.simple.push_back(unit(d, i) - unit(d, i + 1));
      s.simple.push_back(unit(d, d - 2) + unit(d, d - 1));
      return s;
    }
    case Family::E: {
      AmbientSystem e8 = ambient_ADE8(Family::E, 8);
      if (d == 8) return e8;
      s.simple.assign(e8.simple.begin(), e8.simple.begin() + d);
      // Keep the E8 roots lying in the span of the first d simple roots.
      Mat basis(8, d);
      for (int i = 0; i < d; ++i) basis.col(i) = s.simple[i];
      Eigen::FullPivHouseholderQR<Mat> qr(basis);
      Mat q = qr.matrixQ().leftCols(d);
      for (const Vec& r : e8.roots) {
        Vec proj = q * (q.transpose() * r);
        if ((proj - r).norm() < 1e-9) s.roots.push_back(r);
      }
      return s;
    }
    case Family::F: {
      const int n = 4;
      for (int i = 0; i < n; ++i)
        for (int sgn : {-1, 1}) s.roots.push_back(double(sgn) * unit(n, i));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int si : {-1, 1})
            for (int sj : {-1, 1}) s.roots.push_back(si * unit(n, i) + sj * unit(n, j));
      for (int mask = 0; mask < 16; ++mask) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? -0.5 : 0.5;
        s.roots.push_back(v);
      }
      s.simple.push_back(unit(n, 1) - unit(n, 2));
      s.simple.push_back(unit(n, 2) - unit(n, 3));
      s.simple.push_back(unit(n, 3));
      Vec a4(n);
      a4 << 0.5, -0.5, -0.5, -0.5;
      s.simple.push_back(a4);
      return s;
    }
    case Family::G: {
      Vec a1(2), a2(2);
      a1 << 1.0, 0.0;
      a2 << -1.5, std::sqrt(3.0) / 2.0;
      std::vector<Vec> base = {a1, a2, a1 + a2, 2 * a1 + a2, 3 * a1 + a2, 3 * a1 + 2 * a2};
      for (const Vec& r : base) {
        s.roots.push_back(r);
        s.roots.push_back(-r);
      }
      s.simple = {a1, a2};
      return s;
    }
  }
  throw InvalidType("unreachable");
}

}  // namespace

RootSystemSpec build_root_system(Family family, int rank) {
  check_rank(family, rank);
  AmbientSystem amb = ambient_system(family, rank);

  // Scale so the shortest root has length exactly 1.
  double minlen2 = amb.roots.front().squaredNorm();
  for (const Vec& r : amb.roots) minlen2 = std::min(minlen2, r.squaredNorm());
  double scale = 1.0 / std::sqrt(minlen2);
  for (Vec& r : amb.roots) r *= scale;
  for (Vec& r : amb.simple) r *= scale;

  // Re-express in an orthonormal basis of the root span when the ambient
  // space is larger than the rank (A_d, E6, E7). Gram-Schmidt on the simple
  // roots in order fixes the basis deterministically.
  int ambient_dim = static_cast<int>(amb.simple.front().size());
  RootSystemSpec spec;
  spec.family = family;
  spec.rank = rank;
  if (ambient_dim != rank) {
    Mat q(ambient_dim, rank);
    for (int i = 0; i < rank; ++i) {
      Vec v = amb.simple[i];
      for (int j = 0; j < i; ++j) v -= q.col(j).dot(v) * q.col(j);
      q.col(i) = v / v.norm();
    }
    for (Vec& r : amb.roots) r = q.transpose() * r;
    for (Vec& r : amb.simple) r = q.transpose() * r;
  }
  spec.roots = std::move(amb.roots);
  spec.simple_roots = std::move(amb.simple);

  // Positive roots: nonnegative coordinates in the simple-root basis.
  Mat a(rank, rank);
  for (int i = 0; i < rank; ++i) a.col(i) = spec.simple_roots[i];
  Mat a_inv = a.inverse();
  double best_height = -1.0;
  for (size_t i = 0; i < spec.roots.size(); ++i) {
    Vec coeff = a_inv * spec.roots[i];
    if (coeff.minCoeff() > -1e-9) {
      spec.positive.push_back(static_cast<int>(i));
      double h = coeff.sum();
      if (h > best_height) {
        best_height = h;
        spec.highest_root = spec.roots[i];
      }
    }
  }

  spec.coroots.reserve(spec.roots.size());
  for (const Vec& r : spec.roots) spec.coroots.push_back(spec.coroot_of(r));

  spec.coroot_basis.resize(rank, rank);
  for (int i = 0; i < rank; ++i) spec.coroot_basis.col(i) = spec.coroot_of(spec.simple_roots[i]);

  return spec;
}

}  // namespace rbw
