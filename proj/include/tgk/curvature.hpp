#pragma once

#include <string>
#include <vector>

#include "tgk/gk_frame.hpp"
#include "tgk/linalg.hpp"
#include "tgk/polytope.hpp"
#include "tgk/potential.hpp"

namespace tgk {

// Xi = phi_s + (1/4) F phi_s^{-1} F together with its first and second
// mu-derivatives and those of its inverse, all in closed form from the third
// and fourth derivatives of tau. Everything scalar-curvature-shaped is built
// from these.
struct XiDerivatives {
  Mat phi_s_inv;
  Mat Xi;
  Mat Xi_inv;
  std::vector<Mat> dXi;                   // dXi[p] = d_p Xi
  std::vector<Mat> dXi_inv;               // d_p (Xi^{-1})
  std::vector<std::vector<Mat>> d2Xi;     // d2Xi[p][q] = d_q d_p Xi
  std::vector<std::vector<Mat>> d2Xi_inv; // d_q d_p (Xi^{-1})
};

// Requires derivatives of order >= 4.
XiDerivatives xi_derivatives(const TauDerivatives& d, const Mat& F);

// Scalar curvature as minus the double divergence of Xi^{-1}. Depends on tau
// and F only; C never enters.
double kappa_boulanger(const TauDerivatives& d, const Mat& F);

// Scalar curvature through the potential f = (1/2) log det(phi_s Xi):
// kappa = sum_ij [ f_,ij (Xi^{-1})_ij + f_,j d_i (Xi^{-1})_ij ].
double kappa_goto(const TauDerivatives& d, const Mat& F);

// The Ricci-form candidate P1 = d alpha with alpha = (1/2) A^{-1} df,
// A = (J_plus + J_minus)/2, expressed in the frame (dtheta, dmu) as an
// antisymmetric 2n x 2n Gram matrix. Only the dmu-dtheta block feeds the
// scalar curvature; the dmu-dmu block carries the C-dependence.
struct RicciFormSample {
  Mat P1;
};

RicciFormSample ricci_form(const TauDerivatives& d, const GKParams& params);

// Contraction of P1 back to the scalar curvature: 2 sum_i P1(dmu_i, dtheta_i).
double kappa_from_ricci(const Mat& P1);

// Residuals of the determinant identities
//   det(phi_s + i/2 F) = sqrt(det phi_s det Xi)   (real and positive)
//   Xi^{-1} = (phi_s - i/2 F)^{-1} phi_s (phi_s + i/2 F)^{-1},
// both relative. first = determinant identity, second = factorization.
struct DetResiduals {
  double determinant = 0.0;
  double factorization = 0.0;
  double max() const { return determinant > factorization ? determinant : factorization; }
};

DetResiduals det_identity_residuals(const Mat& phi_s, const Mat& F);

// One grid point of the curvature scan. On failure (non-convex point,
// inadmissible params, ill-conditioned inverse) ok is false, error holds the
// reason and the kappas are NaN.
struct CurvatureSample {
  Vec mu;
  double kappa_boulanger = 0.0;
  double kappa_goto = 0.0;
  double kappa_from_ricci = 0.0;
  double abs_diff = 0.0;  // |kappa_boulanger - kappa_goto|
  bool ok = false;
  std::string error;
};

struct ScanSummary {
  double tolerance = 0.0;
  double max_rel_diff = 0.0;        // |kB - kG| / (1 + |kB|), over ok points
  double max_ricci_rel_diff = 0.0;  // |kR - kG| / (1 + |kG|), over ok points
  double kappa_min = 0.0;           // of kappa_boulanger over ok points
  double kappa_max = 0.0;
  int n_points = 0;
  int n_errors = 0;
  bool pass = false;  // max_rel_diff <= tolerance and no failed points
};

struct ScanResult {
  std::vector<CurvatureSample> samples;
  ScanSummary summary;
};

// Evaluates both scalar-curvature formulas (and the Ricci contraction) on the
// interior grid. The parallel and serial paths run the same per-point kernel,
// so their outputs are bitwise identical.
ScanResult equivalence_scan(const PotentialModel& model, const GKParams& params,
                            const GridSpec& grid, double tolerance = 1e-7,
                            bool parallel = true);

}  // namespace tgk
