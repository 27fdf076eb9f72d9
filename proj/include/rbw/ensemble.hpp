#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rbw/walk.hpp"

namespace rbw {

// Execution policy for Monte-Carlo fan-out. `parallel` distributes runs over
// OpenMP threads; `serial` is the reference implementation the tests compare
// against. Every estimator writes per-run results into slots indexed by run
// (or accumulates integer counts), so results are identical under both
// policies and under any thread count.
enum class Exec { serial, parallel };

struct EnsembleOptions {
  Exec exec = Exec::parallel;
  int threads = 0;  // 0 = OpenMP default
};

// Runs fn(run_index) for run_index in [0, M). Exceptions thrown by runs are
// collected and rethrown as one Error listing the failing run indices.
void for_each_run(long M, const std::function<void(long)>& fn, const EnsembleOptions& opts = {});

// The ensemble operation over full trajectories: M independent runs with
// streams (seed, stream0 + run), reduced to one scalar statistic per run.
std::vector<double> ensemble(const std::shared_ptr<const AffineContext>& ctx, WalkMode mode,
                             const Vec& L0, const Vec& b, double p, double horizon, long M,
                             std::uint64_t seed,
                             const std::function<double(const Trajectory&)>& statistic,
                             const EnsembleOptions& opts = {}, std::uint64_t stream0 = 0);

}  // namespace rbw
