#include "rbw/mixing.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "rbw/errors.hpp"

namespace rbw {

DistributionOnW uniform_distribution(const FiniteWeylGroup& g) {
  return {Vec::Constant(g.size(), 1.0 / double(g.size()))};
}

DistributionOnW delta_distribution(const FiniteWeylGroup& g, int index) {
  Vec p = Vec::Zero(g.size());
  p[index] = 1.0;
  return {p};
}

void apply_T_inplace(const FiniteWeylGroup& g, Vec& probs, Vec& scratch, int i, double p) {
  const int n = static_cast<int>(probs.size());
  for (int v = 0; v < n; ++v) scratch[v] = p * probs[v] + (1.0 - p) * probs[g.right_gen(v, i)];
  probs.swap(scratch);
}

DistributionOnW apply_T(const FiniteWeylGroup& g, const DistributionOnW& dist, int i, double p) {
  DistributionOnW out{dist.probs};
  Vec scratch(dist.probs.size());
  apply_T_inplace(g, out.probs, scratch, i, p);
  return out;
}

ContractionResult contraction_constant(const FiniteWeylGroup& g, const std::vector<int>& iota,
                                       double p) {
  const int n = g.size();
  if (n > 20000)
    throw GroupTooLarge("contraction_constant: dense operator norm capped at |W| <= 2e4");

  ContractionResult res;
  std::set<int> labels(iota.begin(), iota.end());
  res.all_labels_present = static_cast<int>(labels.size()) == g.num_generators();

  // Subgroup generated by the named reflections, by index closure.
  {
    std::unordered_set<int> seen{g.identity_index()};
    std::vector<int> frontier{g.identity_index()};
    while (!frontier.empty()) {
      int w = frontier.back();
      frontier.pop_back();
      for (int i : labels) {
        int u = g.right_gen(w, i);
        if (seen.insert(u).second) frontier.push_back(u);
      }
    }
    res.generates_group = static_cast<int>(seen.size()) == n;
  }

  // Compose the T_i as a dense matrix acting on distributions.
  Mat m = Mat::Identity(n, n);
  Mat next(n, n);
  for (int i : iota) {
    for (int v = 0; v < n; ++v) next.row(v) = p * m.row(v) + (1.0 - p) * m.row(g.right_gen(v, i));
    m.swap(next);
  }
  // Restrict to the complement of the uniform vector.
  Mat proj = Mat::Identity(n, n) - Mat::Constant(n, n, 1.0 / double(n));
  Eigen::BDCSVD<Mat> svd(m * proj);
  res.value = svd.singularValues()[0];
  return res;
}

int measured_cover(const std::vector<int>& labels, int num_labels) {
  std::vector<std::uint8_t> tmp(labels.begin(), labels.end());
  return measured_cover(tmp, num_labels);
}

int measured_cover(const std::vector<std::uint8_t>& labels, int num_labels) {
  // 1 + the longest stretch missing some label.
  std::vector<long> last_seen(num_labels, -1);
  long best = 0;
  for (long n = 0; n < static_cast<long>(labels.size()); ++n) {
    last_seen[labels[n]] = n;
    long oldest = n;
    for (int i = 0; i < num_labels; ++i) oldest = std::min(oldest, last_seen[i]);
    // stretch (oldest, n] misses the oldest label until position n
    best = std::max(best, n - oldest);
  }
  for (int i = 0; i < num_labels; ++i)
    if (last_seen[i] < 0) throw Error("measured_cover: a label never appears in the sequence");
  return static_cast<int>(best + 1);
}

int covering_certificate(const std::shared_ptr<const AffineContext>& ctx) {
  const int nl = ctx->num_labels();
  const int d = ctx->dim();
  int worst = 0;
  for (int i = 0; i < nl; ++i) {
    // Tile P_i: orbit of A0 under the parabolic generated by {s_j : j != i}
    // (finite: deleting one node of the extended diagram leaves finite type).
    std::map<std::pair<int, std::vector<int>>, AlcoveCoord> tile;
    auto key_of = [&](const AlcoveCoord& w) {
      std::vector<int> latv(w.lat.data(), w.lat.data() + d);
      return std::make_pair(w.g, latv);
    };
    std::vector<AlcoveCoord> frontier{ctx->identity_coord()};
    tile[key_of(frontier[0])] = frontier[0];
    while (!frontier.empty()) {
      AlcoveCoord w = frontier.back();
      frontier.pop_back();
      for (int j = 0; j < nl; ++j) {
        if (j == i) continue;
        AlcoveCoord u = ctx->mul_gen(w, j);
        if (tile.emplace(key_of(u), u).second) frontier.push_back(u);
      }
      if (tile.size() > 2000000) throw Error("covering_certificate: tile closure too large");
    }

    // Distinct hyperplanes carrying interior facets: image of wall j under
    // each tile alcove, normalized to (positive-root index, level).
    std::set<std::pair<int, long>> planes;
    for (const auto& [key, w] : tile) {
      (void)key;
      AffineIsometry iso = ctx->to_isometry(w);
      for (int j = 0; j < nl; ++j) {
        if (j == i) continue;
        const Vec normal = j == 0 ? ctx->spec().highest_root : ctx->spec().simple_roots[j - 1];
        const double offset = j == 0 ? 1.0 : 0.0;
        Vec beta = iso.linear * normal;
        double level = offset + iso.translation.dot(beta);
        int pos_idx = -1;
        double sign = 1.0;
        for (size_t r = 0; r < ctx->spec().positive.size(); ++r) {
          const Vec& root = ctx->spec().roots[ctx->spec().positive[r]];
          if ((root - beta).cwiseAbs().maxCoeff() < 1e-8) {
            pos_idx = static_cast<int>(r);
            sign = 1.0;
            break;
          }
          if ((root + beta).cwiseAbs().maxCoeff() < 1e-8) {
            pos_idx = static_cast<int>(r);
            sign = -1.0;
            break;
          }
        }
        if (pos_idx < 0) throw Error("covering_certificate: facet normal is not a root");
        long k = std::lround(sign * level);
        planes.insert({pos_idx, k});
      }
    }
    worst = std::max(worst, 1 + static_cast<int>(planes.size()));
  }
  return worst;
}

namespace {

// Shared prefix-then-branch driver: integer counts per (n, cell), merged
// across threads by commutative integer addition so results are invariant
// under the thread count.
template <class CellFn>
std::vector<long> branched_counts(const DiscreteWalkKernel& kernel, long n0, long n_max, long M,
                                  std::uint64_t seed, long cells, CellFn cell_of,
                                  const EnsembleOptions& opts) {
  std::vector<long> counts(static_cast<size_t>(n_max + 1) * cells, 0);
  DiscreteWalkKernel::State prefix = kernel.initial();
  kernel.advance(prefix, seed, kPrefixStream, n0);

  const int max_threads =
      opts.exec == Exec::serial
          ? 1
          : std::max(1, opts.threads > 0 ? opts.threads : omp_get_max_threads());
  std::vector<std::vector<long>> partial(max_threads, std::vector<long>(counts.size(), 0));
  for_each_run(
      M,
      [&](long r) {
        auto& local = partial[static_cast<size_t>(omp_get_thread_num()) % partial.size()];
        auto s = prefix;
        for (long n = 1; n <= n_max; ++n) {
          kernel.advance(s, seed, static_cast<std::uint64_t>(r), 1);
          ++local[static_cast<size_t>(n) * cells + cell_of(s)];
        }
      },
      opts);
  for (auto& local : partial)
    for (size_t i = 0; i < counts.size(); ++i) counts[i] += local[i];
  return counts;
}

}  // namespace

MixingCurve mixing_curve(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                         const Vec& b, double p, long n_max, long M, std::uint64_t seed, long n0,
                         const EnsembleOptions& opts) {
  if (!ctx->has_group()) throw GroupTooLarge("mixing_curve: requires an enumerated group");
  const FiniteWeylGroup& g = ctx->group();
  const long W = g.size();

  DiscreteWalkKernel kernel(ctx, L0, b, p, n0 + n_max);
  auto counts = branched_counts(
      kernel, n0, n_max, M, seed, W, [](const DiscreteWalkKernel::State& s) { return long(s.g); },
      opts);

  MixingCurve curve;
  curve.runs = M;
  for (long n = 1; n <= n_max; ++n) {
    double tv = 0.0;
    for (long w = 0; w < W; ++w)
      tv += std::abs(double(counts[static_cast<size_t>(n) * W + w]) / double(M) - 1.0 / double(W));
    curve.n.push_back(n);
    curve.tv.push_back(0.5 * tv);
  }

  double sd = std::sqrt((1.0 / double(W)) * (1.0 - 1.0 / double(W)) / double(M));
  curve.noise_floor = 0.5 * double(W) * sd * std::sqrt(2.0 / 3.14159265358979323846);
  curve.band = 1.5 * double(W) * sd;

  // Log-linear fit over the clean regime.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (size_t i = 0; i < curve.tv.size(); ++i) {
    if (curve.tv[i] < 10.0 * curve.noise_floor) continue;
    double x = double(curve.n[i]);
    double y = std::log(curve.tv[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    double slope = (double(cnt) * sxy - sx * sy) / (double(cnt) * sxx - sx * sx);
    double inter = (sy - slope * sx) / double(cnt);
    curve.c_hat = std::exp(slope);
    curve.a_hat = std::exp(inter);
  } else {
    curve.c_hat = 0.5;  // everything at the noise floor already
    curve.a_hat = 1.0;
  }

  // Certified constant from the observed windows of the covering length.
  curve.m_cover = measured_cover(kernel.labels(), ctx->num_labels());
  curve.m_cover_certified = covering_certificate(ctx);
  std::set<std::vector<int>> windows;
  const auto& labs = kernel.labels();
  for (size_t s = 0; s + curve.m_cover <= labs.size(); ++s)
    windows.insert(std::vector<int>(labs.begin() + s, labs.begin() + s + curve.m_cover));
  double worst = 0.0;
  for (const auto& w : windows) worst = std::max(worst, contraction_constant(g, w, p).value);
  curve.c_certified = std::pow(worst, 1.0 / double(curve.m_cover));
  return curve;
}

QuotientChainSpec make_quotient(const std::shared_ptr<const AffineContext>& ctx, int lambda,
                                long max_cells) {
  if (!ctx->has_group()) throw GroupTooLarge("make_quotient: requires an enumerated group");
  if (lambda < 1) throw ConfigError("make_quotient: lambda must be positive");
  QuotientChainSpec q;
  q.lambda = lambda;
  q.dim = ctx->dim();
  q.group_order = ctx->group().size();
  double cells = double(q.group_order);
  for (int k = 0; k < q.dim; ++k) cells *= lambda;
  if (cells > double(max_cells))
    throw QuotientTooLarge("make_quotient: |D| = " + std::to_string(cells) + " exceeds budget");
  q.size = static_cast<long>(cells);
  return q;
}

QuotientCurve quotient_equidistribution(const std::shared_ptr<const AffineContext>& ctx,
                                        int lambda, const Vec& L0, const Vec& b, double p,
                                        long n_max, long M, std::uint64_t seed,
                                        const EnsembleOptions& opts) {
  QuotientCurve out;
  out.quotient = make_quotient(ctx, lambda);
  out.runs = M;
  if (double(out.quotient.size) * double(n_max + 1) > 4e8)
    throw QuotientTooLarge("quotient_equidistribution: count table exceeds memory budget");

  DiscreteWalkKernel kernel(ctx, L0, b, p, n_max);
  const QuotientChainSpec q = out.quotient;
  auto counts = branched_counts(
      kernel, 0, n_max, M, seed, q.size,
      [&q](const DiscreteWalkKernel::State& s) { return q.cell_of(s); }, opts);

  for (long n = 1; n <= n_max; ++n) {
    double dev = 0.0;
    for (long c = 0; c < q.size; ++c)
      dev = std::max(dev, std::abs(double(counts[static_cast<size_t>(n) * q.size + c]) /
                                       double(M) -
                                   1.0 / double(q.size)));
    out.n.push_back(n);
    out.max_dev.push_back(dev);
  }
  return out;
}

StepBiasCurve step_bias(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                        const Vec& b, double p, long n_max, long n0, long M, std::uint64_t seed,
                        long exact_horizon, const EnsembleOptions& opts) {
  if (!ctx->has_group()) throw GroupTooLarge("step_bias: requires an enumerated group");
  const FiniteWeylGroup& g = ctx->group();
  const int d = ctx->dim();

  DiscreteWalkKernel kernel(ctx, L0, b, p, n0 + n_max + 1);
  DiscreteWalkKernel::State prefix = kernel.initial();
  kernel.advance(prefix, seed, kPrefixStream, n0);

  StepBiasCurve out;
  out.runs = M;
  out.n.resize(n_max + 1);
  out.bias.resize(n_max + 1);
  out.exact.assign(n_max + 1, 0);

  // Exact region: evolve the conditional distribution of pi(w) through the
  // labels; E[dX_{n0+n} | F_{n0}] = (1-p) sum_w P_n[w] rho(w) beta_{label}.
  {
    Vec probs = delta_distribution(g, prefix.g).probs;
    Vec scratch(g.size());
    const auto& labs = kernel.labels();
    for (long n = 0; n <= std::min(exact_horizon, n_max); ++n) {
      int lab = labs[n0 + n];
      Vec mean = Vec::Zero(d);
      for (int w = 0; w < g.size(); ++w)
        if (probs[w] != 0.0) mean += probs[w] * ctx->step_vector(w, lab);
      mean *= (1.0 - p);
      out.n[n] = n;
      out.bias[n] = mean.norm();
      out.exact[n] = 1;
      apply_T_inplace(g, probs, scratch, lab, p);
    }
  }

  // Monte-Carlo region: branch M continuations and average the step vectors.
  if (exact_horizon < n_max) {
    const long first_mc = exact_horizon + 1;
    std::vector<Vec> zero_block(static_cast<size_t>(n_max - first_mc + 1), Vec::Zero(d));
    const int max_threads =
        opts.exec == Exec::serial
            ? 1
            : std::max(1, opts.threads > 0 ? opts.threads : omp_get_max_threads());
    std::vector<std::vector<Vec>> partial(max_threads, zero_block);
    for_each_run(
        M,
        [&](long r) {
          auto& local = partial[static_cast<size_t>(omp_get_thread_num()) % partial.size()];
          auto s = prefix;
          kernel.advance(s, seed, static_cast<std::uint64_t>(r), first_mc);
          for (long n = first_mc; n <= n_max; ++n) {
            kernel.run(s, seed, static_cast<std::uint64_t>(r), 1,
                       [&](long step, int gi, bool eps, int lab) {
                         (void)step;
                         if (eps) {
                           const double* sv = kernel.context().step_vector_ptr(gi, lab);
                           for (int k = 0; k < d; ++k) local[n - first_mc][k] += sv[k];
                         }
                       });
          }
        },
        opts);
    std::vector<Vec> sums = zero_block;
    for (auto& block : partial)
      for (size_t i = 0; i < sums.size(); ++i) sums[i] += block[i];
    for (long n = first_mc; n <= n_max; ++n) {
      out.n[n] = n;
      out.bias[n] = (sums[n - first_mc] / double(M)).norm();
    }
    double mean_sq = 0.0;
    for (const Vec& beta : ctx->frame().beta) mean_sq = std::max(mean_sq, beta.squaredNorm());
    out.band = 3.0 * std::sqrt((1.0 - p) * mean_sq / double(M));
  }
  return out;
}

Vec conditional_mean_displacement(const DiscreteWalkKernel& kernel,
                                  const DiscreteWalkKernel::State& at_n0, long N) {
  const AffineContext& ctx = kernel.context();
  const FiniteWeylGroup& g = ctx.group();
  const int d = ctx.dim();
  const double p = kernel.p();
  Vec probs = delta_distribution(g, at_n0.g).probs;
  Vec scratch(g.size());
  Vec total = Vec::Zero(d);
  const auto& labs = kernel.labels();
  for (long n = 0; n < N; ++n) {
    int lab = labs[at_n0.n + n];
    for (int w = 0; w < g.size(); ++w)
      if (probs[w] != 0.0) total += (1.0 - p) * probs[w] * ctx.step_vector(w, lab);
    apply_T_inplace(g, probs, scratch, lab, p);
  }
  return total;
}

MartingaleGap martingale_gap(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                             const Vec& b, double p, long N, long n0, long M, std::uint64_t seed,
                             double c_hat, const EnsembleOptions& opts) {
  DiscreteWalkKernel kernel(ctx, L0, b, p, n0 + N + 1);
  auto prefix = kernel.initial();
  kernel.advance(prefix, seed, kPrefixStream, n0);

  MartingaleGap out;
  out.runs = M;
  const int d = ctx->dim();
  std::vector<Vec> disp(M, Vec::Zero(d));
  for_each_run(
      M,
      [&](long r) { disp[r] = kernel.displacement(prefix, seed, static_cast<std::uint64_t>(r), N); },
      opts);
  Vec mean = Vec::Zero(d);
  for (const Vec& v : disp) mean += v;
  mean /= double(std::max<long>(M, 1));
  out.gap = mean.norm();
  out.gap_exact = N > 0 ? conditional_mean_displacement(kernel, prefix, N).norm() : 0.0;

  double max_beta = 0.0;
  for (const Vec& beta : ctx->frame().beta) max_beta = std::max(max_beta, beta.norm());
  out.certified_C = (1.0 - p) * double(ctx->group().size()) * max_beta / (1.0 - c_hat);
  return out;
}

}  // namespace rbw
