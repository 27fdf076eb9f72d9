#include "rbw/ensemble.hpp"

#include <omp.h>

#include <mutex>

#include "rbw/errors.hpp"

namespace rbw {

void for_each_run(long M, const std::function<void(long)>& fn, const EnsembleOptions& opts) {
  std::vector<std::pair<long, std::string>> failures;
  std::mutex mu;

  if (opts.exec == Exec::serial) {
    for (long r = 0; r < M; ++r) {
      try {
        fn(r);
      } catch (const std::exception& e) {
        failures.emplace_back(r, e.what());
      }
    }
  } else {
    int nt = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long r = 0; r < M; ++r) {
      try {
        fn(r);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        failures.emplace_back(r, e.what());
      }
    }
  }

  if (!failures.empty()) {
    std::string msg = "ensemble: " + std::to_string(failures.size()) + " run(s) failed:";
    for (size_t i = 0; i < failures.size() && i < 8; ++i)
      msg += " [run " + std::to_string(failures[i].first) + "] " + failures[i].second + ";";
    throw Error(msg);
  }
}

std::vector<double> ensemble(const std::shared_ptr<const AffineContext>& ctx, WalkMode mode,
                             const Vec& L0, const Vec& b, double p, double horizon, long M,
                             std::uint64_t seed,
                             const std::function<double(const Trajectory&)>& statistic,
                             const EnsembleOptions& opts, std::uint64_t stream0) {
  if (M < 1) throw ConfigError("ensemble: M must be at least 1");
  std::vector<double> values(M);
  for_each_run(
      M,
      [&](long r) {
        Trajectory traj;
        switch (mode) {
          case WalkMode::discrete:
            traj = simulate_discrete(ctx, L0, b, p, static_cast<long>(horizon), seed, stream0 + r);
            break;
          case WalkMode::continuous:
            traj = simulate_continuous(ctx, L0, b, p, horizon, seed, stream0 + r);
            break;
          case WalkMode::refraction:
            traj = simulate_refraction(ctx, L0, b, p, horizon, seed, stream0 + r);
            break;
        }
        values[r] = statistic(traj);
      },
      opts);
  return values;
}

}  // namespace rbw
