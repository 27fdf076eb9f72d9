#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "rbw/affine.hpp"
#include "rbw/linalg.hpp"
#include "rbw/ray.hpp"
#include "rbw/rng.hpp"

namespace rbw {

enum class WalkMode { discrete, continuous, refraction };

struct Trajectory {
  WalkMode mode = WalkMode::discrete;
  std::vector<double> times;            // strictly increasing; starts at 0
  std::vector<Vec> points;              // |points| == |times|
  std::vector<int> labels;              // one per crossing
  std::vector<std::uint8_t> epsilons;   // one per crossing; 1 = transmitted

  double horizon() const { return times.back(); }
  // Linear interpolation between recorded samples.
  Vec value_at(double t) const;
};

// t in [0,1] |-> value(n t)/sqrt(n). Throws HorizonExceeded past the record.
class RescaledTrajectory {
 public:
  RescaledTrajectory(const Trajectory& traj, double n);
  Vec operator()(double t) const;

 private:
  const Trajectory* traj_;
  double n_;
};
inline RescaledTrajectory rescale(const Trajectory& traj, double n) { return {traj, n}; }

// Discretized walk state for single-step evolution. The alcove is carried
// both exactly (group index + lattice, when the group is enumerated) and as
// a floating isometry otherwise.
struct WalkState {
  AlcoveCoord w;        // exact mode
  AffineIsometry wiso;  // float mode
  bool exact = false;
  Vec centroid;
  Vec position;
  Vec direction;
  long n = 0;
  RngStream rng;
};

WalkState make_walk_state(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                          const Vec& b, std::uint64_t seed, std::uint64_t stream);

// One step of the discretized walk at the supplied face label: draw
// eps ~ Ber(1-p); on eps=1 advance the alcove (centroid += rho(w_prev) beta_i),
// on eps=0 only the continuous direction reflects. n increments either way.
// Returns the drawn eps.
bool step_discrete(const std::shared_ptr<const AffineContext>& ctx, WalkState& state, int label,
                   double p);

Trajectory simulate_discrete(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                             const Vec& b, double p, long N, std::uint64_t seed,
                             std::uint64_t stream = 0);
Trajectory simulate_continuous(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                               const Vec& b, double p, double T, std::uint64_t seed,
                               std::uint64_t stream = 0);
Trajectory simulate_refraction(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                               const Vec& b, double p, double T, std::uint64_t seed,
                               std::uint64_t stream = 0);

// Replay engine for the discretized walk: the label sequence is computed once
// (it is seed-independent) and each run is pure integer/table arithmetic over
// the counter-based epsilon stream. This is the kernel every Monte-Carlo
// estimator fans out over; see ensemble.hpp for the parallel driver.
class DiscreteWalkKernel {
 public:
  static constexpr int kMaxRank = 9;

  // Requires the enumerated group. Throws GroupTooLarge otherwise.
  DiscreteWalkKernel(std::shared_ptr<const AffineContext> ctx, const Vec& L0, const Vec& b,
                     double p, long N);

  struct State {
    std::int32_t g = 0;
    long n = 0;
    std::array<std::int32_t, kMaxRank> lat{};
  };

  const std::vector<std::uint8_t>& labels() const { return labels_; }
  long max_steps() const { return static_cast<long>(labels_.size()); }
  const AffineContext& context() const { return *ctx_; }
  State initial() const { return init_; }

  // Position of the walk (alcove centroid) at a state.
  Vec position(const State& s) const;

  // Advance `steps` steps; epsilon for step n is drawn at counter n of
  // (seed, stream), so a prefix advanced under one stream and continued under
  // another realizes conditioning on F_{n0}.
  void advance(State& s, std::uint64_t seed, std::uint64_t stream, long steps) const {
    run(s, seed, stream, steps, [](long, int, bool, int) {});
  }

  // Streaming visitor: fn(n, g_before, transmitted, label).
  template <class F>
  void run(State& s, std::uint64_t seed, std::uint64_t stream, long steps, F&& fn) const {
    const std::int32_t* rg = right_gen_;
    const int nl = num_labels_;
    const int d = dim_;
    const std::uint64_t thr = bern_threshold_;
    for (long k = 0; k < steps; ++k) {
      const long n = s.n;
      const int lab = labels_[n];
      const bool eps = (RngStream::at(seed, stream, static_cast<std::uint64_t>(n)) >> 11) < thr;
      fn(n, static_cast<int>(s.g), eps, lab);
      if (eps) {
        if (lab == 0) {
          const std::int32_t* ts = theta_step_ + static_cast<size_t>(s.g) * d;
          for (int i = 0; i < d; ++i) s.lat[i] += ts[i];
        }
        s.g = rg[static_cast<size_t>(s.g) * nl + lab];
      }
      s.n = n + 1;
    }
  }

  // Displacement of the alcove centroid over `steps` steps from state s.
  Vec displacement(State s, std::uint64_t seed, std::uint64_t stream, long steps) const;

  double transmit_probability() const { return 1.0 - p_; }
  double p() const { return p_; }

 private:
  std::shared_ptr<const AffineContext> ctx_;
  std::vector<std::uint8_t> labels_;
  State init_;
  double p_ = 0.0;
  std::uint64_t bern_threshold_ = 0;
  const std::int32_t* right_gen_ = nullptr;
  const std::int32_t* theta_step_ = nullptr;
  int num_labels_ = 0;
  int dim_ = 0;

  std::vector<std::int32_t> theta_step_flat_;
};

}  // namespace rbw
