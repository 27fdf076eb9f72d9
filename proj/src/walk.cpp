#include "rbw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbw/errors.hpp"

namespace rbw {

Vec Trajectory::value_at(double t) const {
  if (t <= times.front()) return points.front();
  if (t >= times.back()) return points.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t hi = static_cast<size_t>(it - times.begin());
  size_t lo = hi - 1;
  double span = times[hi] - times[lo];
  double u = span > 0 ? (t - times[lo]) / span : 0.0;
  return (1.0 - u) * points[lo] + u * points[hi];
}

RescaledTrajectory::RescaledTrajectory(const Trajectory& traj, double n) : traj_(&traj), n_(n) {
  if (n <= 0) throw HorizonExceeded("rescale: n must be positive");
  if (n > traj.horizon() * (1.0 + 1e-12))
    throw HorizonExceeded("rescale: trajectory horizon " + std::to_string(traj.horizon()) +
                          " shorter than n = " + std::to_string(n));
}

Vec RescaledTrajectory::operator()(double t) const {
  double s = n_ * t;
  if (s > traj_->horizon() * (1.0 + 1e-12))
    throw HorizonExceeded("rescale: evaluation past the recorded horizon");
  return traj_->value_at(s) / std::sqrt(n_);
}

WalkState make_walk_state(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                          const Vec& b, std::uint64_t seed, std::uint64_t stream) {
  WalkState s;
  s.exact = ctx->has_group();
  if (s.exact) {
    s.w = ctx->locate(L0);
    s.centroid = ctx->centroid(s.w);
    s.wiso = ctx->to_isometry(s.w);
  } else {
    s.wiso = AffineIsometry::identity(ctx->dim());
    const AlcoveFrame& f = ctx->frame();
    for (int it = 0; it < 1000000; ++it) {
      Vec y = s.wiso.inverse().apply(L0);
      int violated = -1;
      double worst = -1e-12;
      for (size_t j = 0; j < f.walls.size(); ++j)
        if (double v = f.walls[j].eval(y); v < worst) {
          worst = v;
          violated = static_cast<int>(j);
        }
      if (violated < 0) break;
      s.wiso = s.wiso.compose(f.simple_affine[violated]);
    }
    s.centroid = s.wiso.apply(f.centroid0);
  }
  s.position = L0;
  s.direction = b / b.norm();
  s.rng = RngStream{seed, stream, 0};
  return s;
}

bool step_discrete(const std::shared_ptr<const AffineContext>& ctx, WalkState& state, int label,
                   double p) {
  bool eps = state.rng.bernoulli(1.0 - p);
  if (eps) {
    if (state.exact) {
      state.centroid += ctx->step_vector(state.w.g, label);
      state.w = ctx->mul_gen(state.w, label);
      state.wiso = ctx->to_isometry(state.w);
    } else {
      state.centroid += state.wiso.linear * ctx->frame().beta[label];
      state.wiso = state.wiso.compose(ctx->frame().simple_affine[label]);
    }
  } else {
    // The continuous direction reflects in the wall being struck.
    Vec normal = state.wiso.linear * (label == 0 ? ctx->spec().highest_root
                                                 : ctx->spec().simple_roots[label - 1]);
    state.direction -= (2.0 * state.direction.dot(normal) / normal.squaredNorm()) * normal;
  }
  ++state.n;
  return eps;
}

DiscreteWalkKernel::DiscreteWalkKernel(std::shared_ptr<const AffineContext> ctx, const Vec& L0,
                                       const Vec& b, double p, long N)
    : ctx_(std::move(ctx)), p_(p) {
  if (!ctx_->has_group())
    throw GroupTooLarge("DiscreteWalkKernel: requires an enumerated Weyl group");
  if (ctx_->dim() > kMaxRank) throw GroupTooLarge("DiscreteWalkKernel: rank too large");

  std::vector<int> labs = cutting_sequence(ctx_, L0, b, N);
  labels_.assign(labs.begin(), labs.end());

  AlcoveCoord w0 = ctx_->locate(L0);
  init_.g = w0.g;
  init_.n = 0;
  init_.lat.fill(0);
  for (int k = 0; k < ctx_->dim(); ++k) init_.lat[k] = w0.lat[k];

  bern_threshold_ = static_cast<std::uint64_t>(std::llround((1.0 - p) * 9007199254740992.0));
  num_labels_ = ctx_->num_labels();
  dim_ = ctx_->dim();

  const FiniteWeylGroup& g = ctx_->group();
  right_gen_ = g.right_gen_data();
  theta_step_flat_.resize(static_cast<size_t>(g.size()) * dim_);
  for (int w = 0; w < g.size(); ++w) {
    const IVec& ts = ctx_->theta_step(w);
    for (int k = 0; k < dim_; ++k) theta_step_flat_[static_cast<size_t>(w) * dim_ + k] = ts[k];
  }
  theta_step_ = theta_step_flat_.data();
}

Vec DiscreteWalkKernel::position(const State& s) const {
  Vec lat(dim_);
  for (int k = 0; k < dim_; ++k) lat[k] = s.lat[k];
  return ctx_->group().matrix(s.g) * ctx_->frame().centroid0 + ctx_->spec().coroot_basis * lat;
}

Vec DiscreteWalkKernel::displacement(State s, std::uint64_t seed, std::uint64_t stream,
                                     long steps) const {
  Vec from = position(s);
  advance(s, seed, stream, steps);
  return position(s) - from;
}

namespace {

struct ContinuousStepper {
  // Reflected/refracted ray: direction changes at crossings, so heights and
  // velocities are recomputed per event rather than carried.
  const AffineContext& ctx;
  Vec x;
  Vec dir;
  bool exact;
  AlcoveCoord w;
  AffineIsometry wiso;
  long n = 0;
  int reanchor_countdown = 4096;

  struct Hit {
    double dt;
    int family;
    long k;
  };

  Hit next_hit() const {
    const auto& pos = ctx.spec().positive;
    double t1 = std::numeric_limits<double>::infinity(), t2 = t1;
    int jstar = -1;
    long kstar = 0;
    for (size_t j = 0; j < pos.size(); ++j) {
      const Vec& alpha = ctx.spec().roots[pos[j]];
      double v = dir.dot(alpha);
      if (v == 0.0) continue;
      double a = x.dot(alpha);
      long k = v > 0 ? static_cast<long>(std::floor(a + 1e-9)) + 1
                     : static_cast<long>(std::ceil(a - 1e-9)) - 1;
      double t = (double(k) - a) / v;
      if (t < t1) {
        t2 = t1;
        t1 = t;
        jstar = static_cast<int>(j);
        kstar = k;
      } else if (t < t2) {
        t2 = t;
      }
    }
    if (jstar < 0)
      throw DegenerateDirection("simulate: direction crosses no hyperplane family");
    if (t2 - t1 < 1e-9 * std::max(t1, 1e-30))
      throw DegenerateDirection("simulate: two mirrors struck simultaneously (within 1e-9); "
                                "jitter the direction");
    return {t1, jstar, kstar};
  }

  int label_at(const Vec& point) const {
    return exact ? ctx.crossing_label(w, point) : ctx.crossing_label(wiso, point);
  }

  void cross(int label) {
    if (exact) {
      w = ctx.mul_gen(w, label);
    } else {
      wiso = wiso.compose(ctx.frame().simple_affine[label]);
    }
  }

  void reanchor() {
    if (--reanchor_countdown > 0) return;
    reanchor_countdown = 4096;
    // Rebuild the position from the exact alcove plus its in-alcove offset,
    // clamping tiny wall violations accumulated by the float updates.
    Vec y = exact ? ctx.apply_inverse(w, x) : wiso.inverse().apply(x);
    for (const Wall& wall : ctx.frame().walls) {
      double v = wall.eval(y);
      if (v < 0.0) y -= (v / wall.normal.squaredNorm()) * wall.normal;
    }
    x = exact ? ctx.apply(w, y) : wiso.apply(y);
  }
};

Trajectory simulate_bouncing(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                             const Vec& b, double p, double T, std::uint64_t seed,
                             std::uint64_t stream, WalkMode mode) {
  if (p <= 0.0 || p >= 1.0) throw ConfigError("simulate: p must lie in (0,1)");
  if (T <= 0.0) throw ConfigError("simulate: T must be positive");
  Trajectory traj;
  traj.mode = mode;

  ContinuousStepper st{*ctx, L0, b / b.norm(), ctx->has_group(), {}, {}, 0, 4096};
  if (st.exact)
    st.w = ctx->locate(L0);
  else
    st.wiso = make_walk_state(ctx, L0, b, 0, 0).wiso;

  traj.times.push_back(0.0);
  traj.points.push_back(L0);

  const auto threshold = static_cast<std::uint64_t>(std::llround((1.0 - p) * 9007199254740992.0));
  double t = 0.0;
  while (true) {
    auto hit = st.next_hit();
    if (t + hit.dt >= T) break;
    t += hit.dt;
    st.x += hit.dt * st.dir;
    // Snap onto the hyperplane to keep heights consistent.
    const Vec& alpha = ctx->spec().roots[ctx->spec().positive[hit.family]];
    st.x -= ((st.x.dot(alpha) - double(hit.k)) / alpha.squaredNorm()) * alpha;

    int label = st.label_at(st.x);
    bool eps = (RngStream::at(seed, stream, static_cast<std::uint64_t>(st.n)) >> 11) < threshold;
    ++st.n;

    if (mode == WalkMode::continuous) {
      if (eps) {
        st.cross(label);  // transmit: straight through
      } else {
        st.dir -= (2.0 * st.dir.dot(alpha) / alpha.squaredNorm()) * alpha;  // reflect
      }
    } else {  // refraction: always crosses; the coin flips the tangential part
      st.cross(label);
      if (!eps) {
        // outgoing = 2(dir.n)n - dir: normal component kept, tangential negated
        st.dir = (2.0 * st.dir.dot(alpha) / alpha.squaredNorm()) * alpha - st.dir;
      }
    }

    traj.times.push_back(t);
    traj.points.push_back(st.x);
    traj.labels.push_back(label);
    traj.epsilons.push_back(eps ? 1 : 0);
    st.reanchor();
  }
  traj.times.push_back(T);
  traj.points.push_back(st.x + (T - t) * st.dir);
  return traj;
}

}  // namespace

Trajectory simulate_discrete(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                             const Vec& b, double p, long N, std::uint64_t seed,
                             std::uint64_t stream) {
  if (p <= 0.0 || p >= 1.0) throw ConfigError("simulate_discrete: p must lie in (0,1)");
  Trajectory traj;
  traj.mode = WalkMode::discrete;
  traj.times.reserve(N + 1);
  traj.points.reserve(N + 1);

  if (ctx->has_group()) {
    DiscreteWalkKernel kernel(ctx, L0, b, p, N);
    auto s = kernel.initial();
    traj.times.push_back(0.0);
    traj.points.push_back(kernel.position(s));
    for (long n = 0; n < N; ++n) {
      bool tr = false;
      kernel.run(s, seed, stream, 1, [&](long, int, bool eps, int) { tr = eps; });
      traj.times.push_back(double(n + 1));
      traj.points.push_back(kernel.position(s));
      traj.labels.push_back(kernel.labels()[n]);
      traj.epsilons.push_back(tr ? 1 : 0);
    }
    return traj;
  }

  // No enumerated group: drive the state machine off the ray labels with
  // floating isometries (E7/E8 path).
  std::vector<int> labels = cutting_sequence(ctx, L0, b, N);
  WalkState st = make_walk_state(ctx, L0, b, seed, stream);
  traj.times.push_back(0.0);
  traj.points.push_back(st.centroid);
  for (long n = 0; n < N; ++n) {
    bool eps = step_discrete(ctx, st, labels[n], p);
    traj.times.push_back(double(n + 1));
    traj.points.push_back(st.centroid);
    traj.labels.push_back(labels[n]);
    traj.epsilons.push_back(eps ? 1 : 0);
  }
  return traj;
}

Trajectory simulate_continuous(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                               const Vec& b, double p, double T, std::uint64_t seed,
                               std::uint64_t stream) {
  return simulate_bouncing(ctx, L0, b, p, T, seed, stream, WalkMode::continuous);
}

Trajectory simulate_refraction(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                               const Vec& b, double p, double T, std::uint64_t seed,
                               std::uint64_t stream) {
  return simulate_bouncing(ctx, L0, b, p, T, seed, stream, WalkMode::refraction);
}

}  // namespace rbw
