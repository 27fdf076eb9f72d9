#include "rbw/affine.hpp"

#include <cmath>
#include <limits>

#include "rbw/errors.hpp"

namespace rbw {

double AlcoveFrame::diameter() const {
  double best = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i)
    for (size_t j = i + 1; j < vertices.size(); ++j)
      best = std::max(best, (vertices[i] - vertices[j]).norm());
  return best;
}

bool AlcoveFrame::contains(const Vec& x, double tol) const {
  for (const Wall& w : walls)
    if (w.eval(x) < -tol) return false;
  return true;
}

int AlcoveFrame::nearest_wall(const Vec& y, double* residual) const {
  int best = -1;
  double best_val = std::numeric_limits<double>::infinity();
  double second = best_val;
  for (size_t i = 0; i < walls.size(); ++i) {
    double v = std::abs(walls[i].eval(y)) / walls[i].normal.norm();
    if (v < best_val) {
      second = best_val;
      best_val = v;
      best = static_cast<int>(i);
    } else if (v < second) {
      second = v;
    }
  }
  if (residual) *residual = second;
  return best;
}

AlcoveFrame fundamental_alcove(const RootSystemSpec& spec) {
  const int d = spec.rank;
  AlcoveFrame f;

  Mat a(d, d);
  for (int i = 0; i < d; ++i) a.col(i) = spec.simple_roots[i];

  // marks: theta = sum m_i alpha_i; comarks: theta^vee = sum c_i alpha^vee_i.
  Vec marks = a.colPivHouseholderQr().solve(spec.highest_root);
  Vec theta_vee = spec.coroot_of(spec.highest_root);
  Vec comarks = spec.coroot_basis.colPivHouseholderQr().solve(theta_vee);
  for (int i = 0; i < d; ++i) {
    long m = std::lround(marks[i]);
    long c = std::lround(comarks[i]);
    if (std::abs(marks[i] - m) > 1e-9 || std::abs(comarks[i] - c) > 1e-9)
      throw Error("fundamental_alcove: non-integer marks for " + spec.name());
    f.marks.push_back(static_cast<int>(m));
    f.comarks.push_back(static_cast<int>(c));
  }

  // Vertices: the origin plus omega^vee_i / m_i, where omega^vee_i is the
  // dual basis to the simple roots.
  Mat omega = a.transpose().inverse();
  f.vertices.push_back(Vec::Zero(d));
  for (int i = 0; i < d; ++i) f.vertices.push_back(omega.col(i) / double(f.marks[i]));

  f.centroid0 = Vec::Zero(d);
  for (const Vec& v : f.vertices) f.centroid0 += v;
  f.centroid0 /= double(f.vertices.size());

  // Wall 0 sits on x.theta = 1; wall i>=1 on x.alpha_i = 0.
  f.walls.push_back({-spec.highest_root, -1.0});
  for (int i = 0; i < d; ++i) f.walls.push_back({spec.simple_roots[i], 0.0});

  f.simple_affine.push_back({reflection_matrix(spec.highest_root), theta_vee});
  for (int i = 0; i < d; ++i)
    f.simple_affine.push_back({reflection_matrix(spec.simple_roots[i]), Vec::Zero(d)});

  for (const AffineIsometry& s : f.simple_affine)
    f.beta.push_back(s.apply(f.centroid0) - f.centroid0);

  return f;
}

std::shared_ptr<const AffineContext> AffineContext::create(const RootSystemSpec& spec,
                                                           std::uint64_t cap) {
  auto ctx = std::make_shared<AffineContext>();
  ctx->spec_ = spec;
  ctx->frame_ = fundamental_alcove(spec);
  ctx->coroot_basis_inv_ = spec.coroot_basis.inverse();

  if (weyl_order(spec.family, spec.rank) <= cap) {
    ctx->group_ = FiniteWeylGroup::enumerate(spec, cap);
    const FiniteWeylGroup& g = *ctx->group_;
    const int d = spec.rank;
    const int nl = d + 1;
    Vec theta_vee = spec.coroot_of(spec.highest_root);
    ctx->theta_step_.reserve(g.size());
    ctx->step_vec_.resize(static_cast<size_t>(g.size()) * nl * d);
    for (int w = 0; w < g.size(); ++w) {
      Vec t = ctx->coroot_basis_inv_ * (g.matrix(w) * theta_vee);
      IVec ti(d);
      for (int k = 0; k < d; ++k) {
        ti[k] = static_cast<int>(std::lround(t[k]));
        if (std::abs(t[k] - ti[k]) > 1e-6)
          throw Error("AffineContext: rho(w) theta^vee left the coroot lattice");
      }
      ctx->theta_step_.push_back(std::move(ti));
      for (int i = 0; i < nl; ++i) {
        Vec sv = g.matrix(w) * ctx->frame_.beta[i];
        for (int k = 0; k < d; ++k)
          ctx->step_vec_[(static_cast<size_t>(w) * nl + i) * d + k] = sv[k];
      }
    }
  }
  return ctx;
}

AlcoveCoord AffineContext::mul_gen(const AlcoveCoord& w, int i) const {
  AlcoveCoord r;
  r.g = group_->right_gen(w.g, i);
  r.lat = (i == 0) ? (w.lat + theta_step_[w.g]).eval() : w.lat;
  return r;
}

AlcoveCoord AffineContext::mul_coord(const AlcoveCoord& a, const AlcoveCoord& b) const {
  // (rho(ga), B la) (rho(gb), B lb) = (rho(ga gb), rho(ga) B lb + B la);
  // rho(g) B lb is again in the coroot lattice.
  AlcoveCoord r;
  r.g = group_->mult(a.g, b.g);
  Vec t = coroot_basis_inv_ * (group_->matrix(a.g) * (spec_.coroot_basis * b.lat.cast<double>()));
  r.lat = a.lat;
  for (int k = 0; k < dim(); ++k) r.lat[k] += static_cast<int>(std::lround(t[k]));
  return r;
}

AlcoveCoord AffineContext::inverse(const AlcoveCoord& w) const {
  AlcoveCoord r;
  r.g = group_->inverse(w.g);
  Vec t = -(coroot_basis_inv_ *
            (group_->matrix(r.g) * (spec_.coroot_basis * w.lat.cast<double>())));
  r.lat.resize(dim());
  for (int k = 0; k < dim(); ++k) r.lat[k] = static_cast<int>(std::lround(t[k]));
  return r;
}

AffineIsometry AffineContext::to_isometry(const AlcoveCoord& w) const {
  return {group_->matrix(w.g), spec_.coroot_basis * w.lat.cast<double>()};
}

Vec AffineContext::apply(const AlcoveCoord& w, const Vec& x) const {
  return group_->matrix(w.g) * x + spec_.coroot_basis * w.lat.cast<double>();
}

Vec AffineContext::apply_inverse(const AlcoveCoord& w, const Vec& x) const {
  return group_->matrix(w.g).transpose() * (x - spec_.coroot_basis * w.lat.cast<double>());
}

Vec AffineContext::step_vector(int g, int i) const {
  const double* p = step_vector_ptr(g, i);
  Vec v(dim());
  for (int k = 0; k < dim(); ++k) v[k] = p[k];
  return v;
}

AlcoveCoord AffineContext::locate(const Vec& x) const {
  AlcoveCoord w = identity_coord();
  const int max_iter = 100000;
  for (int it = 0; it < max_iter; ++it) {
    Vec y = apply_inverse(w, x);
    int violated = -1;
    double worst = -1e-12;
    for (size_t j = 0; j < frame_.walls.size(); ++j) {
      double v = frame_.walls[j].eval(y);
      if (v < worst) {
        worst = v;
        violated = static_cast<int>(j);
      }
    }
    if (violated < 0) return w;
    w = mul_gen(w, violated);
  }
  throw Error("locate: alcove fold did not terminate");
}

namespace {
int label_from_pullback(const AlcoveFrame& frame, const Vec& y) {
  double second = 0.0;
  int lab = frame.nearest_wall(y, &second);
  (void)second;
  return lab;
}
}  // namespace

int AffineContext::crossing_label(const AlcoveCoord& w, const Vec& x) const {
  return label_from_pullback(frame_, apply_inverse(w, x));
}

int AffineContext::crossing_label(const AffineIsometry& w, const Vec& x) const {
  return label_from_pullback(frame_, w.inverse().apply(x));
}

int AffineContext::project_to_W(const AffineIsometry& g) const {
  auto idx = group_->find(g.linear, 1e-4);
  if (!idx) throw NotInGroup("project_to_W: linear part is not near any enumerated element");
  return *idx;
}

}  // namespace rbw
