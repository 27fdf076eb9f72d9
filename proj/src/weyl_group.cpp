#include "rbw/weyl_group.hpp"

#include <cmath>
#include <deque>

#include "rbw/errors.hpp"

namespace rbw {

std::uint64_t FiniteWeylGroup::hash_matrix(const Mat& m) const {
  // FNV-1a over entries quantized at 1e-6.
  std::uint64_t h = 1469598103934665603ULL;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) {
      auto q = static_cast<std::int64_t>(std::llround(m(r, c) * 1e6));
      auto u = static_cast<std::uint64_t>(q);
      for (int b = 0; b < 8; ++b) {
        h ^= (u >> (8 * b)) & 0xff;
        h *= 1099511628211ULL;
      }
    }
  return h;
}

int FiniteWeylGroup::lookup_exact(const Mat& m) const {
  auto it = index_.find(hash_matrix(m));
  if (it == index_.end()) return -1;
  for (std::int32_t idx : it->second)
    if (approx_eq(elements_[idx], m, 1e-6)) return idx;
  return -1;
}

std::optional<int> FiniteWeylGroup::find(const Mat& m, double tol) const {
  int idx = lookup_exact(m);
  if (idx >= 0) return idx;
  // Entries can straddle a quantization boundary; fall back to a scan.
  double best = tol;
  int best_idx = -1;
  for (size_t i = 0; i < elements_.size(); ++i) {
    double d = (elements_[i] - m).cwiseAbs().maxCoeff();
    if (d < best) {
      best = d;
      best_idx = static_cast<int>(i);
    }
  }
  if (best_idx < 0) return std::nullopt;
  return best_idx;
}

int FiniteWeylGroup::mult(int a, int b) const {
  if (!mult_table_.empty()) return mult_table(a, b);
  int idx = lookup_exact(elements_[a] * elements_[b]);
  if (idx < 0) throw NotInGroup("mult: product left the enumerated group");
  return idx;
}

FiniteWeylGroup FiniteWeylGroup::enumerate(const RootSystemSpec& spec, std::uint64_t cap) {
  std::uint64_t order = weyl_order(spec.family, spec.rank);
  if (order > cap) {
    throw GroupTooLarge("enumerate_weyl_group: |W(" + spec.name() + ")| = " +
                        std::to_string(order) + " exceeds cap " + std::to_string(cap));
  }

  FiniteWeylGroup g;
  g.dim_ = spec.rank;

  std::vector<Mat> gens;
  gens.push_back(reflection_matrix(spec.highest_root));  // pi(s_0)
  for (const Vec& a : spec.simple_roots) gens.push_back(reflection_matrix(a));

  auto push = [&](const Mat& m) {
    auto idx = static_cast<std::int32_t>(g.elements_.size());
    g.elements_.push_back(m);
    g.index_[g.hash_matrix(m)].push_back(idx);
    return idx;
  };

  g.identity_ = push(Mat::Identity(spec.rank, spec.rank));
  std::deque<int> frontier{g.identity_};
  while (!frontier.empty()) {
    int w = frontier.front();
    frontier.pop_front();
    for (const Mat& s : gens) {
      Mat m = g.elements_[w] * s;
      if (g.lookup_exact(m) < 0) {
        frontier.push_back(push(m));
        if (g.elements_.size() > order)
          throw NotInGroup("enumerate_weyl_group: closure exceeded the classical order; "
                           "generator matrices are inconsistent");
      }
    }
  }
  if (g.elements_.size() != order)
    throw NotInGroup("enumerate_weyl_group: closure has " + std::to_string(g.elements_.size()) +
                     " elements, expected " + std::to_string(order));

  for (const Mat& s : gens) g.gen_index_.push_back(g.lookup_exact(s));

  const int n = g.size();
  const int ng = static_cast<int>(gens.size());
  g.right_gen_.resize(static_cast<size_t>(n) * ng);
  for (int w = 0; w < n; ++w)
    for (int i = 0; i < ng; ++i) {
      int idx = g.lookup_exact(g.elements_[w] * gens[i]);
      if (idx < 0) throw NotInGroup("enumerate_weyl_group: right-generator product not found");
      g.right_gen_[static_cast<size_t>(w) * ng + i] = idx;
    }

  g.inverse_.resize(n);
  for (int w = 0; w < n; ++w) {
    int idx = g.lookup_exact(g.elements_[w].transpose());
    if (idx < 0) throw NotInGroup("enumerate_weyl_group: inverse not found");
    g.inverse_[w] = idx;
  }

  if (n <= kDenseMultTableCap) {
    g.mult_table_.resize(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int idx = g.lookup_exact(g.elements_[a] * g.elements_[b]);
        if (idx < 0) throw NotInGroup("enumerate_weyl_group: product not found");
        g.mult_table_[static_cast<size_t>(a) * n + b] = idx;
      }
  }
  return g;
}

}  // namespace rbw
