#pragma once

#include <Eigen/Dense>

namespace rbw {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;

inline bool approx_eq(const Mat& a, const Mat& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() < tol;
}
inline bool approx_eq(const Vec& a, const Vec& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace rbw
