#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rbw/ensemble.hpp"
#include "rbw/walk.hpp"

namespace rbw {

// Probability distribution on the enumerated finite Weyl group, in the group
// ring's standard basis.
struct DistributionOnW {
  Vec probs;

  double total() const { return probs.sum(); }
  bool is_valid(double tol = 1e-12) const {
    return probs.minCoeff() >= 0.0 && std::abs(total() - 1.0) < tol;
  }
};

DistributionOnW uniform_distribution(const FiniteWeylGroup& g);
DistributionOnW delta_distribution(const FiniteWeylGroup& g, int index);

// One step of the direction chain: dist' = p*dist + (1-p)*(dist * pi(s_i)).
DistributionOnW apply_T(const FiniteWeylGroup& g, const DistributionOnW& dist, int i, double p);
void apply_T_inplace(const FiniteWeylGroup& g, Vec& probs, Vec& scratch, int i, double p);

// Operator norm of T_{iota_m} ... T_{iota_1} restricted to the orthogonal
// complement of the uniform distribution (dense SVD; |W| capped at 2e4).
// all_labels_present: iota contains every label 0..d.
// generates_group: the reflections named by iota generate all of W; the norm
// is < 1 exactly when this holds.
struct ContractionResult {
  double value = 1.0;
  bool all_labels_present = false;
  bool generates_group = false;
};
ContractionResult contraction_constant(const FiniteWeylGroup& g, const std::vector<int>& iota,
                                       double p);

// Smallest window length L such that every length-L window of `labels`
// contains every label in 0..num_labels-1.
int measured_cover(const std::vector<int>& labels, int num_labels);
int measured_cover(const std::vector<std::uint8_t>& labels, int num_labels);

// Geometric certificate for the covering length: faces with a fixed label
// delimit congruent tiles; a straight segment inside one tile crosses each
// interior hyperplane at most once, so the gap between consecutive
// occurrences of label i is at most 1 + (#hyperplanes meeting the tile's
// interior). Returns the max over labels.
int covering_certificate(const std::shared_ptr<const AffineContext>& ctx);

struct MixingCurve {
  std::vector<long> n;
  std::vector<double> tv;
  double c_hat = 0.0;        // least-squares log-linear decay rate
  double a_hat = 0.0;        // fitted intercept
  double c_certified = 1.0;  // from contraction constants over observed windows
  int m_cover = 0;           // measured covering length
  int m_cover_certified = 0;
  double band = 0.0;         // 3 sigma Monte-Carlo band for one TV estimate
  double noise_floor = 0.0;  // E[TV] when already uniform
  long runs = 0;
};

// Empirical TV distance to uniform of pi(w_{n0+n}) conditioned on one frozen
// prefix of length n0, per n = 1..n_max, from M branched continuations.
MixingCurve mixing_curve(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                         const Vec& b, double p, long n_max, long M, std::uint64_t seed,
                         long n0 = 0, const EnsembleOptions& opts = {});

// Finite quotient W~/(lambda Q^vee): |D| = |W| * lambda^d cells.
struct QuotientChainSpec {
  int lambda = 1;
  int dim = 0;
  long group_order = 0;
  long size = 0;  // |D|

  long cell_of(const DiscreteWalkKernel::State& s) const {
    long cell = s.g;
    for (int k = 0; k < dim; ++k) {
      int r = s.lat[k] % lambda;
      if (r < 0) r += lambda;
      cell = cell * lambda + r;
    }
    return cell;
  }
};
QuotientChainSpec make_quotient(const std::shared_ptr<const AffineContext>& ctx, int lambda,
                                long max_cells = 100000000);

struct QuotientCurve {
  QuotientChainSpec quotient;
  std::vector<long> n;
  std::vector<double> max_dev;  // sup_cell |p_hat - 1/|D|| per n
  long runs = 0;
};
QuotientCurve quotient_equidistribution(const std::shared_ptr<const AffineContext>& ctx,
                                        int lambda, const Vec& L0, const Vec& b, double p,
                                        long n_max, long M, std::uint64_t seed,
                                        const EnsembleOptions& opts = {});

// || E[dX_{n+n0} | F_{n0}] || for n = 0..n_max, from one frozen prefix.
// Exact (group-ring recursion over the epsilon randomness, equivalent to
// exhausting the epsilon patterns) for n below exact_horizon; Monte-Carlo
// over M continuations beyond.
struct StepBiasCurve {
  std::vector<long> n;
  std::vector<double> bias;
  std::vector<std::uint8_t> exact;  // 1 where the entry is exact
  double band = 0.0;                // 3 sigma band for the MC entries
  long runs = 0;
};
StepBiasCurve step_bias(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                        const Vec& b, double p, long n_max, long n0, long M, std::uint64_t seed,
                        long exact_horizon = 19, const EnsembleOptions& opts = {});

// Exact conditional mean of X_{n0+N} - X_{n0} given the chain state at n0,
// by evolving the distribution on W along the labels. O(N |W| d).
Vec conditional_mean_displacement(const DiscreteWalkKernel& kernel,
                                  const DiscreteWalkKernel::State& at_n0, long N);

// || E^[X_{n0+N} | F_{n0}] - X_{n0} || (Monte Carlo) and the certified bound
// C = (1-p) |W| max||beta|| / (1 - c).
struct MartingaleGap {
  double gap = 0.0;
  double gap_exact = 0.0;  // same quantity via the exact recursion
  double certified_C = 0.0;
  long runs = 0;
};
MartingaleGap martingale_gap(const std::shared_ptr<const AffineContext>& ctx, const Vec& L0,
                             const Vec& b, double p, long N, long n0, long M, std::uint64_t seed,
                             double c_hat, const EnsembleOptions& opts = {});

// Stream index reserved for frozen prefixes (continuations use 0..M-1).
constexpr std::uint64_t kPrefixStream = 0x7fffffff00000000ULL;

}  // namespace rbw
