#include "tgk/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>

#include "tgk/errors.hpp"

namespace tgk {

namespace {

void require_order(const TauDerivatives& d, int order) {
  if (d.order < order) {
    throw domain_error("curvature formulas need tau derivatives of order " +
                       std::to_string(order));
  }
}

}  // namespace

XiDerivatives xi_derivatives(const TauDerivatives& d, const Mat& F) {
  require_order(d, 4);
  const int n = static_cast<int>(d.grad.size());

  XiDerivatives x;
  x.phi_s_inv = sym(inverse_guarded(d.hess));
  const Mat& Y = x.phi_s_inv;
  x.Xi = sym(d.hess + 0.25 * F * Y * F);
  x.Xi_inv = sym(inverse_guarded(x.Xi));

  x.dXi.resize(n);
  x.dXi_inv.resize(n);
  std::vector<Mat> YTY(n);  // Y T3[p] Y
  for (int p = 0; p < n; ++p) {
    YTY[p] = Y * d.third[p] * Y;
    x.dXi[p] = d.third[p] - 0.25 * F * YTY[p] * F;
    x.dXi_inv[p] = -x.Xi_inv * x.dXi[p] * x.Xi_inv;
  }

  x.d2Xi.assign(n, std::vector<Mat>(n));
  x.d2Xi_inv.assign(n, std::vector<Mat>(n));
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const Mat inner = YTY[q] * d.third[p] * Y + YTY[p] * d.third[q] * Y -
                        Y * d.fourth[p][q] * Y;
      x.d2Xi[p][q] = d.fourth[p][q] + 0.25 * F * inner * F;
      x.d2Xi_inv[p][q] = -x.dXi_inv[q] * x.dXi[p] * x.Xi_inv -
                         x.Xi_inv * x.d2Xi[p][q] * x.Xi_inv -
                         x.Xi_inv * x.dXi[p] * x.dXi_inv[q];
    }
  }
  return x;
}

double kappa_boulanger(const TauDerivatives& d, const Mat& F) {
  const XiDerivatives x = xi_derivatives(d, F);
  const int n = static_cast<int>(d.grad.size());
  double kappa = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) kappa -= x.d2Xi_inv[p][q](p, q);
  }
  return kappa;
}

namespace {

// Gradient and Hessian of f = (1/2) log det(phi_s Xi).
void log_det_derivatives(const TauDerivatives& d, const XiDerivatives& x, Vec& fp,
                         Mat& fpq) {
  const int n = static_cast<int>(d.grad.size());
  const Mat& Y = x.phi_s_inv;
  fp.resize(n);
  fpq.resize(n, n);
  std::vector<Mat> YT(n), XdX(n);
  for (int p = 0; p < n; ++p) {
    YT[p] = Y * d.third[p];
    XdX[p] = x.Xi_inv * x.dXi[p];
    fp(p) = 0.5 * (YT[p].trace() + XdX[p].trace());
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      fpq(p, q) = 0.5 * (-(YT[q] * YT[p]).trace() + (Y * d.fourth[p][q]).trace() -
                         (XdX[q] * XdX[p]).trace() +
                         (x.Xi_inv * x.d2Xi[p][q]).trace());
    }
  }
}

}  // namespace

double kappa_goto(const TauDerivatives& d, const Mat& F) {
  const XiDerivatives x = xi_derivatives(d, F);
  const int n = static_cast<int>(d.grad.size());
  Vec fp;
  Mat fpq;
  log_det_derivatives(d, x, fp, fpq);
  double kappa = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      kappa += fpq(j, i) * x.Xi_inv(i, j) + fp(j) * x.dXi_inv[i](i, j);
    }
  }
  return kappa;
}

RicciFormSample ricci_form(const TauDerivatives& d, const GKParams& params) {
  const int n = static_cast<int>(d.grad.size());
  if (params.dim() != n) throw domain_error("params dimension does not match point");
  const XiDerivatives x = xi_derivatives(d, params.F);
  const Mat& Y = x.phi_s_inv;
  Vec fp;
  Mat fpq;
  log_det_derivatives(d, x, fp, fpq);

  // alpha = (1/2) A^{-1} (0, df) in the (dtheta, dmu) frame, with the closed
  // form of A^{-1} = ((J_plus + J_minus)/2)^{-1}:
  //   alpha_theta = (1/2) Xi^{-1} f_,
  //   alpha_mu    = -(1/4) (Xi^{-1} F phi_0)^T f_,   phi_0 = phi_s^{-1} C.
  const Mat phi0 = Y * params.C;
  const Mat W = x.Xi_inv * params.F * phi0;

  Mat d_alpha_theta(n, n);  // (p, q) = d_p alpha_theta_q
  Mat d_alpha_mu(n, n);
  for (int p = 0; p < n; ++p) {
    const Vec dat = 0.5 * (x.dXi_inv[p] * fp + x.Xi_inv * fpq.col(p));
    const Mat dphi0 = -Y * d.third[p] * phi0;
    const Mat dW = x.dXi_inv[p] * params.F * phi0 + x.Xi_inv * params.F * dphi0;
    const Vec dam = -0.25 * (dW.transpose() * fp + W.transpose() * fpq.col(p));
    d_alpha_theta.row(p) = dat.transpose();
    d_alpha_mu.row(p) = dam.transpose();
  }

  RicciFormSample r;
  r.P1 = Mat::Zero(2 * n, 2 * n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      r.P1(n + p, q) = d_alpha_theta(p, q);
      r.P1(q, n + p) = -d_alpha_theta(p, q);
      r.P1(n + p, n + q) = d_alpha_mu(p, q) - d_alpha_mu(q, p);
    }
  }
  return r;
}

double kappa_from_ricci(const Mat& P1) {
  const int n = static_cast<int>(P1.rows()) / 2;
  double kappa = 0.0;
  for (int i = 0; i < n; ++i) kappa += P1(n + i, i);
  return 2.0 * kappa;
}

DetResiduals det_identity_residuals(const Mat& phi_s, const Mat& F) {
  const Mat Y = sym(inverse_guarded(phi_s));
  const Mat Xi = sym(phi_s + 0.25 * F * Y * F);

  const CMat plus = phi_s.cast<Cplx>() + Cplx(0.0, 0.5) * F.cast<Cplx>();
  const CMat minus = phi_s.cast<Cplx>() - Cplx(0.0, 0.5) * F.cast<Cplx>();
  const double target = std::sqrt(phi_s.determinant() * Xi.determinant());

  DetResiduals r;
  const double scale_d = 1.0 + std::abs(target);
  r.determinant = std::max(std::abs(plus.determinant() - target),
                           std::abs(minus.determinant() - target)) /
                  scale_d;

  const Mat Xi_inv = sym(inverse_guarded(Xi));
  const CMat factor = minus.partialPivLu().solve(phi_s.cast<Cplx>()) *
                      plus.partialPivLu().inverse();
  const double scale_f = 1.0 + Xi_inv.cwiseAbs().maxCoeff();
  r.factorization = (factor - Xi_inv.cast<Cplx>()).cwiseAbs().maxCoeff() / scale_f;
  return r;
}

namespace {

// Shared per-point kernel. Kept out of line so the serial and OpenMP loops
// execute identical code and the two scan modes agree bitwise.
__attribute__((noinline)) CurvatureSample eval_sample(const PotentialModel& model,
                                                      const GKParams& params,
                                                      const Vec& mu) {
  CurvatureSample s;
  s.mu = mu;
  try {
    const TauDerivatives d = model.derivatives(mu, 4);
    const double adm = admissibility_eigenvalue(d.hess, params.F);
    if (adm <= 0.0) {
      throw admissibility_error(
          "inadmissible point: min admissibility eigenvalue " + std::to_string(adm),
          adm);
    }
    s.kappa_boulanger = kappa_boulanger(d, params.F);
    s.kappa_goto = kappa_goto(d, params.F);
    s.kappa_from_ricci = kappa_from_ricci(ricci_form(d, params).P1);
    s.abs_diff = std::abs(s.kappa_boulanger - s.kappa_goto);
    s.ok = true;
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.kappa_boulanger = s.kappa_goto = s.kappa_from_ricci = s.abs_diff = nan;
    s.ok = false;
    s.error = e.what();
  }
  return s;
}

}  // namespace

ScanResult equivalence_scan(const PotentialModel& model, const GKParams& params,
                            const GridSpec& grid, double tolerance, bool parallel) {
  const std::vector<Vec> points = interior_grid(model.polytope(), grid);
  ScanResult result;
  result.samples.resize(points.size());
  const std::int64_t count = static_cast<std::int64_t>(points.size());

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      result.samples[i] = eval_sample(model, params, points[i]);
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      result.samples[i] = eval_sample(model, params, points[i]);
    }
  }

  ScanSummary& sum = result.summary;
  sum.tolerance = tolerance;
  sum.n_points = static_cast<int>(count);
  sum.kappa_min = std::numeric_limits<double>::infinity();
  sum.kappa_max = -std::numeric_limits<double>::infinity();
  for (const CurvatureSample& s : result.samples) {
    if (!s.ok) {
      ++sum.n_errors;
      continue;
    }
    sum.max_rel_diff = std::max(sum.max_rel_diff,
                                s.abs_diff / (1.0 + std::abs(s.kappa_boulanger)));
    sum.max_ricci_rel_diff =
        std::max(sum.max_ricci_rel_diff,
                 std::abs(s.kappa_from_ricci - s.kappa_goto) /
                     (1.0 + std::abs(s.kappa_goto)));
    sum.kappa_min = std::min(sum.kappa_min, s.kappa_boulanger);
    sum.kappa_max = std::max(sum.kappa_max, s.kappa_boulanger);
  }
  sum.pass = sum.n_errors == 0 && sum.max_rel_diff <= tolerance;
  return result;
}

}  // namespace tgk
