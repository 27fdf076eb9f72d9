#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rbw/linalg.hpp"
#include "rbw/root_system.hpp"
#include "rbw/weyl_group.hpp"

namespace rbw {

// Element of the affine Weyl group (or any affine isometry of R^d),
// acting by x |-> linear*x + translation.
struct AffineIsometry {
  Mat linear;
  Vec translation;

  static AffineIsometry identity(int d) {
    return {Mat::Identity(d, d), Vec::Zero(d)};
  }
  Vec apply(const Vec& x) const { return linear * x + translation; }
  // this after other: (this*other)(x) = this(other(x)).
  AffineIsometry compose(const AffineIsometry& o) const {
    return {linear * o.linear, linear * o.translation + translation};
  }
  AffineIsometry inverse() const {  // linear part assumed orthogonal
    Mat lt = linear.transpose();
    return {lt, -(lt * translation)};
  }
};

// Affine functional of one alcove wall; positive inside the alcove.
struct Wall {
  Vec normal;
  double offset;
  double eval(const Vec& x) const { return normal.dot(x) - offset; }
};

// Fundamental alcove A0 = {x : x.alpha_i > 0 (i=1..d), x.theta < 1}, with its
// walls labeled (wall on x.alpha_i = 0 gets i, wall on x.theta = 1 gets 0),
// the affine simple reflections s_0..s_d in those walls, and the step vectors
// beta_i = s_i(centroid) - centroid.
struct AlcoveFrame {
  Vec centroid0;
  std::vector<AffineIsometry> simple_affine;  // s_0..s_d
  std::vector<Vec> beta;                      // beta_0..beta_d
  std::vector<Wall> walls;                    // index = label
  std::vector<Vec> vertices;                  // 0, omega^vee_i / m_i
  std::vector<int> marks;                     // theta = sum m_i alpha_i
  std::vector<int> comarks;                   // theta^vee = sum c_i alpha^vee_i

  double diameter() const;
  bool contains(const Vec& x, double tol = 0.0) const;
  // Wall index of a boundary point of A0 (the wall with smallest residual).
  int nearest_wall(const Vec& y, double* residual = nullptr) const;
};

AlcoveFrame fundamental_alcove(const RootSystemSpec& spec);

// Exact representation of w in W~ = W x| Q^vee relative to an enumerated W:
// w acts by x |-> rho(g) x + B*lat with B the coroot basis and lat integer.
struct AlcoveCoord {
  int g = 0;
  IVec lat;
};

// Binds a root system, its alcove frame, and (when enumerable) the finite
// Weyl group, plus the integer tables that make right-multiplication by the
// affine generators exact. For types too large to enumerate (E7, E8) the
// group is absent and callers fall back to floating AffineIsometry tracking.
class AffineContext {
 public:
  // enumerate: build the finite group when its order fits under cap.
  static std::shared_ptr<const AffineContext> create(const RootSystemSpec& spec,
                                                     std::uint64_t cap = FiniteWeylGroup::kDefaultCap);

  const RootSystemSpec& spec() const { return spec_; }
  const AlcoveFrame& frame() const { return frame_; }
  bool has_group() const { return group_.has_value(); }
  const FiniteWeylGroup& group() const { return *group_; }
  int dim() const { return spec_.rank; }
  int num_labels() const { return spec_.rank + 1; }

  AlcoveCoord identity_coord() const { return {group_->identity_index(), IVec::Zero(dim())}; }
  // w * s_i, exact.
  AlcoveCoord mul_gen(const AlcoveCoord& w, int i) const;
  AlcoveCoord mul_coord(const AlcoveCoord& a, const AlcoveCoord& b) const;
  AlcoveCoord inverse(const AlcoveCoord& w) const;
  AffineIsometry to_isometry(const AlcoveCoord& w) const;

  Vec apply(const AlcoveCoord& w, const Vec& x) const;
  Vec apply_inverse(const AlcoveCoord& w, const Vec& x) const;
  Vec centroid(const AlcoveCoord& w) const { return apply(w, frame_.centroid0); }

  // rho(g) beta_i, from the precomputed step table.
  Vec step_vector(int g, int i) const;
  const double* step_vector_ptr(int g, int i) const {
    return step_vec_.data() + (static_cast<size_t>(g) * num_labels() + i) * dim();
  }
  // Integer coroot coordinates of rho(g) theta^vee.
  const IVec& theta_step(int g) const { return theta_step_[g]; }

  // Locate the alcove whose closure contains x, by folding through violated
  // walls. Requires the enumerated group.
  AlcoveCoord locate(const Vec& x) const;

  // Label of the facet of w(A0) containing the boundary point x: pull back
  // through w^{-1} and read the wall index. residual (if given) receives the
  // second-smallest wall distance as an ambiguity diagnostic.
  int crossing_label(const AlcoveCoord& w, const Vec& x) const;
  int crossing_label(const AffineIsometry& w, const Vec& x) const;

  // Index of the enumerated element nearest to g.linear (snap).
  // Throws NotInGroup when the distance exceeds 1e-4.
  int project_to_W(const AffineIsometry& g) const;

 private:
  RootSystemSpec spec_;
  AlcoveFrame frame_;
  std::optional<FiniteWeylGroup> group_;
  std::vector<IVec> theta_step_;
  std::vector<double> step_vec_;  // [g][label][coord]
  Mat coroot_basis_inv_;

  friend class DiscreteWalkKernel;
};

}  // namespace rbw
