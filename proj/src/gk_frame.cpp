#include "tgk/gk_frame.hpp"

#include <algorithm>
#include <string>

#include "tgk/errors.hpp"

namespace tgk {

namespace {

void require_antisymmetric(const Mat& m, const char* name) {
  if (m.rows() != m.cols()) throw domain_error(std::string(name) + " must be square");
  if ((m + m.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw domain_error(std::string(name) + " must be exactly antisymmetric");
  }
}

}  // namespace

double admissibility_eigenvalue(const Mat& phi_s, const Mat& F) {
  const Mat r = spd_inv_sqrt(phi_s);
  const Mat s = r * F * r;
  const int n = static_cast<int>(F.rows());
  return min_eigenvalue_sym(Mat::Identity(n, n) + 0.25 * sym(s * s));
}

GKParams::GKParams(Mat c, Mat f) : C(std::move(c)), F(std::move(f)) {
  require_antisymmetric(C, "C");
  require_antisymmetric(F, "F");
  if (C.rows() != F.rows()) throw domain_error("C and F must have equal dimensions");
}

FrameTensors assemble_frame(const PotentialModel& model, const GKParams& params,
                            const Vec& mu) {
  const int n = model.dim();
  if (params.dim() != n) throw domain_error("params dimension does not match model");

  FrameTensors f;
  f.mu = mu;
  f.phi_s = model.derivatives(mu, 2).hess;

  const double adm = admissibility_eigenvalue(f.phi_s, params.F);
  if (adm <= 0.0) {
    throw admissibility_error(
        "params are inadmissible at this point: min eigenvalue of "
        "I + (phi_s^{-1/2} F phi_s^{-1/2})^2/4 is " +
            std::to_string(adm),
        adm);
  }

  f.phi = f.phi_s + params.C;
  f.phi_inv = inverse_guarded(f.phi);
  // Inverses of (bitwise) symmetric matrices are kept bitwise symmetric so the
  // Kaehler reduction C = F = 0 collapses exactly, not just to roundoff.
  if (((f.phi - f.phi.transpose()).cwiseAbs().maxCoeff()) == 0.0) {
    f.phi_inv = sym(f.phi_inv);
  }
  const Mat phi_s_inv = sym(inverse_guarded(f.phi_s));
  f.Xi = sym(f.phi_s + 0.25 * params.F * phi_s_inv * params.F);
  f.Xi_inv = sym(inverse_guarded(f.Xi));

  const CMat m_minus =
      f.phi_s.cast<Cplx>() - Cplx(0, 0.5) * params.F.cast<Cplx>();
  f.Q = 2.0 * f.phi.transpose().cast<Cplx>() * m_minus.partialPivLu().solve(f.phi.cast<Cplx>());

  const Mat& F = params.F;
  const Mat x = f.phi_inv;              // phi^{-1}
  const Mat y = f.phi_inv.transpose();  // (phi^T)^{-1}
  const Mat xs = sym(x);
  const Mat xa = asym(x);

  // Literal matrix tables in the frame (dtheta, dmu); rows expand the image
  // of the corresponding frame vector.
  f.J_plus = Mat::Zero(2 * n, 2 * n);
  f.J_plus.topLeftCorner(n, n) = 0.5 * x * F;
  f.J_plus.topRightCorner(n, n) = -x;
  f.J_plus.bottomLeftCorner(n, n) = f.phi + 0.25 * F * x * F;
  f.J_plus.bottomRightCorner(n, n) = -0.5 * F * x;

  f.J_minus = Mat::Zero(2 * n, 2 * n);
  f.J_minus.topLeftCorner(n, n) = -0.5 * y * F;
  f.J_minus.topRightCorner(n, n) = -y;
  f.J_minus.bottomLeftCorner(n, n) = f.phi.transpose() + 0.25 * F * y * F;
  f.J_minus.bottomRightCorner(n, n) = 0.5 * F * y;

  f.g = Mat::Zero(2 * n, 2 * n);
  f.g.topLeftCorner(n, n) = xs;
  f.g.topRightCorner(n, n) = 0.5 * xa * F;
  f.g.bottomLeftCorner(n, n) = 0.5 * F * xa;
  f.g.bottomRightCorner(n, n) = sym(f.phi_s + 0.25 * F * xs * F);

  f.b = Mat::Zero(2 * n, 2 * n);
  f.b.topLeftCorner(n, n) = xa;
  f.b.topRightCorner(n, n) = 0.5 * xs * F;
  f.b.bottomLeftCorner(n, n) = 0.5 * F * xs;
  f.b.bottomRightCorner(n, n) = params.C + 0.25 * F * xa * F;

  f.omega = Mat::Zero(2 * n, 2 * n);
  f.omega.topRightCorner(n, n) = -Mat::Identity(n, n);
  f.omega.bottomLeftCorner(n, n) = Mat::Identity(n, n);

  f.A_half_inv = inverse_guarded(0.5 * (f.J_plus + f.J_minus));
  return f;
}

AdmissibilityReport validate_params(const PotentialModel& model, const GKParams& params,
                                    const std::vector<Vec>& grid) {
  if (grid.empty()) throw domain_error("validate_params needs a nonempty grid");
  AdmissibilityReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const Vec& mu : grid) {
    const Mat phi_s = model.derivatives(mu, 2).hess;
    const Mat r = spd_inv_sqrt(phi_s);
    const Mat s = r * params.F * r;
    const int n = params.dim();
    const double eig = min_eigenvalue_sym(Mat::Identity(n, n) + 0.25 * sym(s * s));
    if (eig < rep.min_eigenvalue) {
      rep.min_eigenvalue = eig;
      rep.worst_point = mu;
    }
  }
  rep.pass = rep.min_eigenvalue > 0.0;
  return rep;
}

double FrameResiduals::max() const {
  return std::max({j_squared, gualtieri_g, gualtieri_b, adjoint, g_symmetry,
                   b_antisymmetry, det_g, phi_sandwich});
}

FrameResiduals frame_residuals(const FrameTensors& f) {
  const int nn = static_cast<int>(f.g.rows());
  const Mat id = Mat::Identity(nn, nn);
  FrameResiduals r;
  r.j_squared = std::max((f.J_plus * f.J_plus + id).cwiseAbs().maxCoeff(),
                         (f.J_minus * f.J_minus + id).cwiseAbs().maxCoeff());
  r.gualtieri_g = (f.g + 0.5 * (f.J_plus + f.J_minus) * f.omega).cwiseAbs().maxCoeff();
  r.gualtieri_b = (f.b + 0.5 * (f.J_plus - f.J_minus) * f.omega).cwiseAbs().maxCoeff();
  // omega^{-1} = -omega for the standard block form.
  r.adjoint = (f.J_minus - f.omega * f.J_plus.transpose() * f.omega).cwiseAbs().maxCoeff();
  r.g_symmetry = (f.g - f.g.transpose()).cwiseAbs().maxCoeff();
  r.b_antisymmetry = (f.b + f.b.transpose()).cwiseAbs().maxCoeff();
  const double dg = f.g.determinant();
  const double expect = sym(f.phi_inv).determinant() * f.Xi.determinant();
  r.det_g = std::abs(dg - expect) / std::max(1.0, std::abs(expect));
  r.phi_sandwich =
      (f.phi.transpose() * sym(f.phi_inv) * f.phi - f.phi_s).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace tgk
