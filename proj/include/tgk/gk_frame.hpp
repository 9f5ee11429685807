#pragma once

#include <vector>

#include "tgk/linalg.hpp"
#include "tgk/potential.hpp"

namespace tgk {

// The two constant antisymmetric matrices of the construction: C is the
// antisymmetric part of phi (phi = phi_s + C) and F deforms Xi.
struct GKParams {
  Mat C;
  Mat F;

  GKParams(Mat c, Mat f);
  static GKParams zero(int n) { return GKParams(Mat::Zero(n, n), Mat::Zero(n, n)); }
  int dim() const { return static_cast<int>(C.rows()); }
};

// Every pointwise matrix of the structure in the frame (dtheta_1..dtheta_n,
// dmu_1..dmu_n). The 2n x 2n tables are stored in row-expansion convention:
// row a of J holds the coefficients of J(e_a) in the frame, so the
// endomorphism component matrix is the transpose of the stored table. Bilinear
// forms are Gram matrices: g(a,b) = g(e_a, e_b).
struct FrameTensors {
  Vec mu;
  Mat phi_s;       // Hessian of tau
  Mat phi;         // phi_s + C
  Mat phi_inv;     // phi^{-1}
  Mat Xi;          // phi_s + (1/4) F phi_s^{-1} F
  Mat Xi_inv;
  CMat Q;          // 2 phi^T (phi_s - i/2 F)^{-1} phi
  Mat J_plus;      // [[ phi^{-1}F/2,            -phi^{-1}    ],
                   //  [ phi + F phi^{-1} F / 4, -F phi^{-1}/2 ]]
  Mat J_minus;     // same with phi -> phi^T and the theta-row signs flipped
  Mat g;           // Riemannian metric
  Mat b;           // 2-form relating the two splittings
  Mat omega;       // [[0, -I], [I, 0]]
  Mat A_half_inv;  // ((J_plus + J_minus)/2)^{-1}
};

// Assembles all frame tensors at an interior point. Throws
// admissibility_error when I + (1/4)(phi_s^{-1/2} F phi_s^{-1/2})^2 fails to
// be positive definite and conditioning_error when phi (or Xi) is too
// ill-conditioned to invert trustworthily.
FrameTensors assemble_frame(const PotentialModel& model, const GKParams& params,
                            const Vec& mu);

// Smallest eigenvalue of I + (1/4)(phi_s^{-1/2} F phi_s^{-1/2})^2; positive
// iff (phi_s, F) is admissible.
double admissibility_eigenvalue(const Mat& phi_s, const Mat& F);

// Smallest admissibility eigenvalue over a grid; failures are reported, not
// thrown.
struct AdmissibilityReport {
  double min_eigenvalue = 0.0;
  Vec worst_point;
  bool pass = false;
};

AdmissibilityReport validate_params(const PotentialModel& model, const GKParams& params,
                                    const std::vector<Vec>& grid);

// Max-abs residuals of the frame identities at one point; used by the scan
// commands and the acceptance suite.
struct FrameResiduals {
  double j_squared;        // J_plus^2 + Id and J_minus^2 + Id
  double gualtieri_g;      // g + (J_plus + J_minus) omega / 2
  double gualtieri_b;      // b + (J_plus - J_minus) omega / 2
  double adjoint;          // J_minus + omega^{-1} J_plus^T omega
  double g_symmetry;       // g - g^T
  double b_antisymmetry;   // b + b^T
  double det_g;            // relative: det g - det (phi^{-1})_s det Xi
  double phi_sandwich;     // phi^T (phi^{-1})_s phi - phi_s
  double max() const;
};

FrameResiduals frame_residuals(const FrameTensors& f);

}  // namespace tgk
