#include "rbw/ray.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "rbw/errors.hpp"
#include "rbw/rng.hpp"

namespace rbw {

RayTracer::RayTracer(std::shared_ptr<const AffineContext> ctx, const Vec& L0, const Vec& b,
                     double jitter, std::uint64_t jitter_seed)
    : ctx_(std::move(ctx)), x0_(L0), b_(b) {
  if (b_.norm() <= 0.0) throw ZeroVector("RayTracer: zero direction");
  if (jitter > 0.0) {
    RngStream rng{jitter_seed, 0xb1111a2d, 0};
    for (int k = 0; k < b_.size(); ++k) b_[k] += jitter * (2.0 * rng.next_unit() - 1.0);
  }
  b_.normalize();

  exact_ = ctx_->has_group();
  if (exact_) {
    w_ = ctx_->locate(x0_);
  } else {
    wf_ = AffineIsometry::identity(ctx_->dim());
    // Float fold into the fundamental alcove.
    const AlcoveFrame& f = ctx_->frame();
    for (int it = 0; it < 1000000; ++it) {
      Vec y = wf_.inverse().apply(x0_);
      int violated = -1;
      double worst = -1e-12;
      for (size_t j = 0; j < f.walls.size(); ++j) {
        double v = f.walls[j].eval(y);
        if (v < worst) {
          worst = v;
          violated = static_cast<int>(j);
        }
      }
      if (violated < 0) break;
      wf_ = wf_.compose(f.simple_affine[violated]);
    }
  }

  const auto& pos = ctx_->spec().positive;
  height0_.resize(pos.size());
  vel_.resize(pos.size());
  level_.resize(pos.size());
  for (size_t j = 0; j < pos.size(); ++j) {
    const Vec& alpha = ctx_->spec().roots[pos[j]];
    height0_[j] = x0_.dot(alpha);
    vel_[j] = b_.dot(alpha);
    if (vel_[j] > 0.0)
      level_[j] = static_cast<long>(std::floor(height0_[j] + 1e-9)) + 1;
    else if (vel_[j] < 0.0)
      level_[j] = static_cast<long>(std::ceil(height0_[j] - 1e-9)) - 1;
    else
      level_[j] = 0;  // family never crossed
  }
}

CuttingEvent RayTracer::next() {
  double t1 = std::numeric_limits<double>::infinity();
  double t2 = t1;
  int jstar = -1;
  for (size_t j = 0; j < vel_.size(); ++j) {
    if (vel_[j] == 0.0) continue;
    double t = (double(level_[j]) - height0_[j]) / vel_[j];
    if (t < t1) {
      t2 = t1;
      t1 = t;
      jstar = static_cast<int>(j);
    } else if (t < t2) {
      t2 = t;
    }
  }
  if (jstar < 0) throw DegenerateDirection("next_crossing: direction crosses no hyperplane family");
  // Tie test is relative to the time-to-crossing from the current point, not
  // to total elapsed time, so long rays do not trip it spuriously.
  double dt1 = t1 - t_last_;
  if (t2 - t1 < 1e-9 * std::max(dt1, 1e-30))
    throw DegenerateDirection("next_crossing: two mirrors struck simultaneously (within 1e-9); "
                              "jitter the direction");
  t_last_ = t1;

  CuttingEvent ev;
  ev.n = ++n_;
  ev.t = t1;
  ev.alpha_index = jstar;
  ev.k = level_[jstar];
  ev.point = x0_ + t1 * b_;
  // Snap the crossing point onto its hyperplane.
  const Vec& alpha = ctx_->spec().roots[ctx_->spec().positive[jstar]];
  ev.point -= ((ev.point.dot(alpha) - double(ev.k)) / alpha.squaredNorm()) * alpha;

  if (exact_) {
    ev.label = ctx_->crossing_label(w_, ev.point);
    w_ = ctx_->mul_gen(w_, ev.label);
  } else {
    ev.label = ctx_->crossing_label(wf_, ev.point);
    wf_ = wf_.compose(ctx_->frame().simple_affine[ev.label]);
    if (--ortho_countdown_ == 0) {
      ortho_countdown_ = 1024;
      // Gram-Schmidt the linear part to stop orthogonality drift.
      Mat& m = wf_.linear;
      for (int c = 0; c < m.cols(); ++c) {
        for (int c2 = 0; c2 < c; ++c2) m.col(c) -= m.col(c2).dot(m.col(c)) * m.col(c2);
        m.col(c).normalize();
      }
    }
  }

  level_[jstar] += vel_[jstar] > 0.0 ? 1 : -1;
  return ev;
}

CuttingEvent next_crossing(std::shared_ptr<const AffineContext> ctx, const Vec& x, const Vec& b) {
  RayTracer tracer(std::move(ctx), x, b);
  return tracer.next();
}

std::vector<int> cutting_sequence(std::shared_ptr<const AffineContext> ctx, const Vec& L0,
                                  const Vec& b, long N) {
  RayTracer tracer(std::move(ctx), L0, b);
  std::vector<int> labels;
  labels.reserve(N);
  for (long n = 0; n < N; ++n) labels.push_back(tracer.next().label);
  return labels;
}

double hit_rate(const Vec& b, const RootSystemSpec& spec) {
  double s = 0.0;
  for (const Vec& cv : spec.coroots) s += std::abs(b.dot(cv));
  return 0.25 * s;
}

std::uint64_t WindowFrequencyTable::encode(const std::vector<int>& window, int alphabet) {
  std::uint64_t key = 0;
  for (int v : window) key = key * alphabet + static_cast<std::uint64_t>(v);
  return key;
}

WindowFrequencyTable window_frequencies(const std::vector<int>& labels, int alphabet,
                                        int window_length, long n0) {
  if (window_length < 1 || window_length > kMaxWindowLength)
    throw WindowTooLong("window_frequencies: window length " + std::to_string(window_length));
  WindowFrequencyTable tab;
  tab.window_length = window_length;
  tab.alphabet = alphabet;
  std::uint64_t modulus = 1;
  for (int i = 0; i + 1 < window_length; ++i) modulus *= alphabet;
  std::uint64_t key = 0;
  long have = 0;
  for (size_t n = n0; n < labels.size(); ++n) {
    key = (key % modulus) * alphabet + static_cast<std::uint64_t>(labels[n]);
    if (++have >= window_length) {
      ++tab.counts[key];
      ++tab.total;
    }
  }
  return tab;
}

WindowFrequencyTable window_frequencies(std::shared_ptr<const AffineContext> ctx, const Vec& L0,
                                        const Vec& b, int window_length, long N, long n0) {
  std::vector<int> labels = cutting_sequence(std::move(ctx), L0, b, n0 + N);
  return window_frequencies(labels, static_cast<int>(L0.size()) + 1, window_length, n0);
}

FirstReturn first_return(std::shared_ptr<const AffineContext> ctx, int alpha_index, int parity,
                         const Vec& x, const Vec& b) {
  RayTracer tracer(std::move(ctx), x, b);
  FirstReturn r;
  for (long guard = 0; guard < 100000000; ++guard) {
    CuttingEvent ev = tracer.next();
    ++r.steps;
    if (ev.alpha_index == alpha_index && ((ev.k % 2) + 2) % 2 == parity) {
      r.point = ev.point;
      r.time = ev.t;
      return r;
    }
  }
  throw Error("first_return: flow never returned to the family");
}

void write_events_csv(std::ostream& os, const std::vector<CuttingEvent>& events, int dim) {
  os << "n,t,alpha,k,label";
  for (int k = 1; k <= dim; ++k) os << ",x_" << k;
  os << "\n";
  char buf[64];
  for (const CuttingEvent& ev : events) {
    os << ev.n << ',';
    std::snprintf(buf, sizeof buf, "%.17g", ev.t);
    os << buf << ',' << ev.alpha_index << ',' << ev.k << ',' << ev.label;
    for (int k = 0; k < dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", ev.point[k]);
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace rbw
