#pragma once

#include <Eigen/Dense>

#include "tgk/errors.hpp"

namespace tgk {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Cplx = std::complex<double>;

inline Mat sym(const Mat& a) { return 0.5 * (a + a.transpose()); }
inline Mat asym(const Mat& a) { return 0.5 * (a - a.transpose()); }

inline double min_eigenvalue_sym(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline Mat spd_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  return es.operatorSqrt();
}

inline Mat spd_inv_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  return es.operatorInverseSqrt();
}

// 2-norm condition number; sizes here are tiny so a full SVD is fine.
inline double condition_number(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

// Inverse with a conditioning guard: near the polytope boundary the Hessian
// blows up and silent loss of precision must surface as an error instead.
inline Mat inverse_guarded(const Mat& a, double cond_limit = 1e12) {
  const double cond = condition_number(a);
  if (!(cond < cond_limit)) {
    throw conditioning_error("matrix inversion rejected: condition number " +
                                 std::to_string(cond) + " exceeds " +
                                 std::to_string(cond_limit),
                             cond);
  }
  return a.partialPivLu().inverse();
}

}  // namespace tgk
