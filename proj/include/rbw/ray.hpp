#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "rbw/affine.hpp"
#include "rbw/linalg.hpp"

namespace rbw {

// One hyperplane crossing of the straight ray: the hyperplane x.alpha = k
// (alpha a positive root), the crossing time and point, and the face label.
struct CuttingEvent {
  long n = 0;          // 1-based crossing index along the ray
  double t = 0.0;      // seconds at unit speed
  int alpha_index = 0; // index into spec.positive
  long k = 0;          // integer height
  int label = 0;       // face label in 0..d
  Vec point;
};

// Straight-line flow through the Coxeter arrangement. The direction never
// changes, so every crossing time is computed in one expression from the
// fixed start heights; nothing accumulates. The alcove is tracked exactly
// (group index + lattice vector) when the finite group is enumerated, and by
// a floating isometry with periodic re-orthonormalization otherwise.
class RayTracer {
 public:
  // Throws ZeroVector; b is normalized to unit length. jitter > 0 applies a
  // seeded perturbation of that magnitude to b (then renormalizes), the
  // opt-in escape hatch for directions aimed at codimension-2 strata.
  RayTracer(std::shared_ptr<const AffineContext> ctx, const Vec& L0, const Vec& b,
            double jitter = 0.0, std::uint64_t jitter_seed = 0);

  // Next crossing; throws DegenerateDirection when the two smallest crossing
  // times agree to relative 1e-9.
  CuttingEvent next();

  const Vec& direction() const { return b_; }
  const Vec& origin() const { return x0_; }
  // Alcove the ray currently lies in (exact mode only).
  const AlcoveCoord& alcove() const { return w_; }

 private:
  std::shared_ptr<const AffineContext> ctx_;
  Vec x0_, b_;
  bool exact_ = false;
  AlcoveCoord w_;
  AffineIsometry wf_;
  int ortho_countdown_ = 1024;

  std::vector<double> height0_;  // x0 . alpha per positive root
  std::vector<double> vel_;      // b . alpha per positive root
  std::vector<long> level_;      // next integer height per positive root
  long n_ = 0;
  double t_last_ = 0.0;
};

// Minimal crossing of the ray from x in direction b (unit-normalized inside).
CuttingEvent next_crossing(std::shared_ptr<const AffineContext> ctx, const Vec& x, const Vec& b);

// Labels of the first N faces hit by the unreflected ray from L0.
std::vector<int> cutting_sequence(std::shared_ptr<const AffineContext> ctx, const Vec& L0,
                                  const Vec& b, long N);

// k_b = (1/4) sum_{alpha in Phi} |b . alpha^vee| for unit b. With every root
// at length 1 (simply-laced types here) this equals the number of hyperplane
// crossings per second of the straight ray; see README on normalization.
double hit_rate(const Vec& b, const RootSystemSpec& spec);

// Sliding-window pattern counts over labels i_{n0+1}..i_{n0+N}.
struct WindowFrequencyTable {
  int window_length = 1;
  int alphabet = 2;  // d+1
  long total = 0;
  std::map<std::uint64_t, long> counts;  // key = base-(d+1) encoding

  static std::uint64_t encode(const std::vector<int>& window, int alphabet);
  double frequency(std::uint64_t key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0.0 : double(it->second) / double(total);
  }
};

constexpr int kMaxWindowLength = 17;  // matches the interaction-series cap

WindowFrequencyTable window_frequencies(std::shared_ptr<const AffineContext> ctx, const Vec& L0,
                                        const Vec& b, int window_length, long N, long n0 = 0);
// Same counting over a precomputed label sequence.
WindowFrequencyTable window_frequencies(const std::vector<int>& labels, int alphabet,
                                        int window_length, long n0 = 0);

// First return of the straight flow to the hyperplane family
// {x.alpha = k : k = parity mod 2}. x must lie on a hyperplane of the family.
// Returns the landing point, elapsed time, and the number of intermediate
// T_b steps (crossings of any hyperplane, counting the landing one).
struct FirstReturn {
  Vec point;
  double time = 0.0;
  long steps = 0;
};
FirstReturn first_return(std::shared_ptr<const AffineContext> ctx, int alpha_index, int parity,
                         const Vec& x, const Vec& b);

void write_events_csv(std::ostream& os, const std::vector<CuttingEvent>& events, int dim);

}  // namespace rbw
