#pragma once

#include <vector>

#include "tgk/gk_frame.hpp"
#include "tgk/linalg.hpp"
#include "tgk/potential.hpp"

namespace tgk {

enum class ConnectionFlavor { levi_civita, bismut_plus, bismut_minus };

// Christoffel coefficients Gamma_ij^k at a point, upper index last; the first
// lower index is the direction of differentiation. The levi_civita flavor is
// exactly symmetric in (i, j); the bismut flavors add the torsion term
// +-(1/2) g^{kl} H_ijl.
struct ChristoffelField {
  ConnectionFlavor flavor = ConnectionFlavor::levi_civita;
  int dim = 0;  // 2n
  std::vector<double> coeff;
  double& at(int i, int j, int k) { return coeff[(i * dim + j) * dim + k]; }
  double at(int i, int j, int k) const { return coeff[(i * dim + j) * dim + k]; }
};

// Alternating 3-tensor H = db in the chart basis; alternation is exact by
// construction.
struct TorsionH {
  int dim = 0;  // 2n
  std::vector<double> comp;
  double& at(int a, int b, int c) { return comp[(a * dim + b) * dim + c]; }
  double at(int a, int b, int c) const { return comp[(a * dim + b) * dim + c]; }
};

// Covariant curvature tensor R(X,Y,Z,W) = g(R(X,Y)Z, W) at a point, together
// with the mixed-index version R(X,Y)Z = endo[m index].
struct CurvatureTensor {
  int dim = 0;  // 2n
  std::vector<double> comp;           // lowered, dim^4
  std::vector<double> mixed;          // R^m_ijk at ((i*dim+j)*dim+k)*dim+m
  double& at(int i, int j, int k, int l) {
    return comp[((i * dim + j) * dim + k) * dim + l];
  }
  double at(int i, int j, int k, int l) const {
    return comp[((i * dim + j) * dim + k) * dim + l];
  }
  double up(int i, int j, int k, int m) const {
    return mixed[((i * dim + j) * dim + k) * dim + m];
  }
};

// Frame tensors plus their analytic first mu-derivatives: the J tables (row
// expansion), g and b. Everything downstream differentiates these.
struct FrameDerivatives {
  FrameTensors f;
  std::vector<Mat> dJ_plus;
  std::vector<Mat> dJ_minus;
  std::vector<Mat> dg;
  std::vector<Mat> db;
};

FrameDerivatives frame_derivatives(const PotentialModel& model, const GKParams& params,
                                   const Vec& mu);

TorsionH torsion_h(const PotentialModel& model, const GKParams& params, const Vec& mu);

ChristoffelField christoffel(const PotentialModel& model, const GKParams& params,
                             const Vec& mu, ConnectionFlavor flavor);

// Max-abs covariant-derivative residuals: the Bismut connections must
// parallelize their own complex structure and both must be metric. dJ is
// finite-differenced (central, step fd_step), Gamma and dg are analytic.
struct CovariantConstancyReport {
  double nabla_plus_j_plus = 0.0;
  double nabla_minus_j_minus = 0.0;
  double nabla_plus_g = 0.0;
  double nabla_minus_g = 0.0;
  double max() const;
};

CovariantConstancyReport covariant_constancy_residuals(const PotentialModel& model,
                                                       const GKParams& params,
                                                       const Vec& mu,
                                                       double fd_step = 1e-5);

// Curvature of the Bismut connection nabla^{sign} (sign = +1 or -1), with
// analytic Gamma and central finite differences for dGamma (step fd_step).
CurvatureTensor bismut_curvature(const PotentialModel& model, const GKParams& params,
                                 const Vec& mu, int sign, double fd_step = 1e-4);

struct CurvatureSymmetryReport {
  double xy_antisymmetry = 0.0;  // exact by construction
  double zw_antisymmetry = 0.0;  // FD-limited
  double plus_minus_swap = 0.0;  // R+(X,Y,Z,W) - R-(Z,W,X,Y)
  double j_invariance = 0.0;     // R+(J-X, J-Y, ., .) - R+ and the mirror
  double max() const;
};

CurvatureSymmetryReport curvature_symmetry_residuals(const PotentialModel& model,
                                                     const GKParams& params,
                                                     const Vec& mu,
                                                     double fd_step = 1e-4);

// Scalar curvature from the line-bundle side: the curvature 2-form of the
// anticanonical bundle of J_plus (half trace of J_plus composed with the
// curvature endomorphism) contracted over a J_minus-adapted g-orthonormal
// frame. Kaehler case: the Riemannian scalar curvature.
double canonical_scalar_curvature(const PotentialModel& model, const GKParams& params,
                                  const Vec& mu, double fd_step = 1e-4);

// Residual of the holomorphy identity for the weighted canonical section: the
// connection form sigma of the plus Bismut connection on the anticanonical
// bundle, evaluated on each antiholomorphic minus-frame field, must cancel
// the corresponding derivative of log eps,
//   eps = [det(phi_s Xi) / (det phi)^2]^{-1/2}.
// fd_step = 0 uses the analytic derivative of log eps; a positive step
// replaces it by a central difference (the residual then decays at second
// order in the step).
double epsilon_section_residual(const PotentialModel& model, const GKParams& params,
                                const Vec& mu, double fd_step = 0.0);

// The two Hermitian 2-forms omega_pm = g(J_pm ., .) have d^c derivatives that
// cancel against each other and reproduce +-H.
struct IntegrabilityReport {
  double dc_sum = 0.0;      // d^c_+ omega_+ + d^c_- omega_-
  double h_plus_dc = 0.0;   // H + d^c_+ omega_+
  double h_minus_dc = 0.0;  // H - d^c_- omega_-
  double max() const;
};

IntegrabilityReport integrability_residuals(const PotentialModel& model,
                                            const GKParams& params, const Vec& mu);

}  // namespace tgk
