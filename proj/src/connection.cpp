#include "tgk/connection.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "tgk/errors.hpp"

namespace tgk {

namespace {

// Sign conventions pinned numerically: the torsion sign making the plus
// Bismut connection parallelize J_plus, the d^c convention making
// H = -d^c_+ omega_+, and the orientation of the canonical-curvature trace
// making the Kaehler case reproduce the Riemannian scalar curvature.
constexpr double kTorsionSignPlus = 1.0;
constexpr double kDcSign = -1.0;  // d^c omega = kDcSign * d omega(J., J., J.)
constexpr double kKcSign = 1.0;

double max3(double a, double b, double c) { return std::max(a, std::max(b, c)); }

TorsionH torsion_from(const FrameDerivatives& fd) {
  const int N = static_cast<int>(fd.f.g.rows());
  const int n = N / 2;
  TorsionH h;
  h.dim = N;
  h.comp.assign(static_cast<size_t>(N) * N * N, 0.0);
  const auto dB = [&](int a, int b, int c) -> double {
    return a < n ? 0.0 : fd.db[a - n](b, c);
  };
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) {
      for (int c = b + 1; c < N; ++c) {
        const double v = dB(a, b, c) - dB(b, a, c) + dB(c, a, b);
        h.at(a, b, c) = v;
        h.at(b, c, a) = v;
        h.at(c, a, b) = v;
        h.at(b, a, c) = -v;
        h.at(a, c, b) = -v;
        h.at(c, b, a) = -v;
      }
    }
  }
  return h;
}

ChristoffelField christoffel_from(const FrameDerivatives& fd, ConnectionFlavor flavor) {
  const int N = static_cast<int>(fd.f.g.rows());
  const int n = N / 2;
  ChristoffelField cf;
  cf.flavor = flavor;
  cf.dim = N;
  cf.coeff.assign(static_cast<size_t>(N) * N * N, 0.0);

  const Mat ginv = sym(inverse_guarded(fd.f.g));
  const auto dG = [&](int a, int i, int j) -> double {
    return a < n ? 0.0 : fd.dg[a - n](i, j);
  };

  std::vector<double> lower(static_cast<size_t>(N) * N * N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int l = 0; l < N; ++l) {
        lower[(i * N + j) * N + l] = 0.5 * (dG(i, j, l) + dG(j, i, l) - dG(l, i, j));
      }
    }
  }

  double torsion_sign = 0.0;
  if (flavor == ConnectionFlavor::bismut_plus) torsion_sign = kTorsionSignPlus;
  if (flavor == ConnectionFlavor::bismut_minus) torsion_sign = -kTorsionSignPlus;

  TorsionH h;
  if (torsion_sign != 0.0) h = torsion_from(fd);

  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < N; ++k) {
        double v = 0.0;
        for (int l = 0; l < N; ++l) v += ginv(k, l) * lower[(i * N + j) * N + l];
        if (torsion_sign != 0.0) {
          double t = 0.0;
          for (int l = 0; l < N; ++l) t += ginv(k, l) * h.at(i, j, l);
          v += torsion_sign * 0.5 * t;
        }
        cf.at(i, j, k) = v;
      }
    }
  }
  return cf;
}

}  // namespace

FrameDerivatives frame_derivatives(const PotentialModel& model, const GKParams& params,
                                   const Vec& mu) {
  FrameDerivatives fd;
  fd.f = assemble_frame(model, params, mu);
  const TauDerivatives d = model.derivatives(mu, 3);
  const int n = model.dim();
  const Mat& F = params.F;
  const Mat& x = fd.f.phi_inv;

  fd.dJ_plus.resize(n);
  fd.dJ_minus.resize(n);
  fd.dg.resize(n);
  fd.db.resize(n);
  for (int p = 0; p < n; ++p) {
    const Mat dx = -x * d.third[p] * x;
    const Mat dy = dx.transpose();
    const Mat dxs = sym(dx);
    const Mat dxa = asym(dx);

    Mat jp = Mat::Zero(2 * n, 2 * n);
    jp.topLeftCorner(n, n) = 0.5 * dx * F;
    jp.topRightCorner(n, n) = -dx;
    jp.bottomLeftCorner(n, n) = d.third[p] + 0.25 * F * dx * F;
    jp.bottomRightCorner(n, n) = -0.5 * F * dx;
    fd.dJ_plus[p] = jp;

    Mat jm = Mat::Zero(2 * n, 2 * n);
    jm.topLeftCorner(n, n) = -0.5 * dy * F;
    jm.topRightCorner(n, n) = -dy;
    jm.bottomLeftCorner(n, n) = d.third[p] + 0.25 * F * dy * F;
    jm.bottomRightCorner(n, n) = 0.5 * F * dy;
    fd.dJ_minus[p] = jm;

    Mat g = Mat::Zero(2 * n, 2 * n);
    g.topLeftCorner(n, n) = dxs;
    g.topRightCorner(n, n) = 0.5 * dxa * F;
    g.bottomLeftCorner(n, n) = 0.5 * F * dxa;
    g.bottomRightCorner(n, n) = sym(d.third[p] + 0.25 * F * dxs * F);
    fd.dg[p] = g;

    Mat b = Mat::Zero(2 * n, 2 * n);
    b.topLeftCorner(n, n) = dxa;
    b.topRightCorner(n, n) = 0.5 * dxs * F;
    b.bottomLeftCorner(n, n) = 0.5 * F * dxs;
    b.bottomRightCorner(n, n) = 0.25 * F * dxa * F;
    fd.db[p] = b;
  }
  return fd;
}

TorsionH torsion_h(const PotentialModel& model, const GKParams& params, const Vec& mu) {
  return torsion_from(frame_derivatives(model, params, mu));
}

ChristoffelField christoffel(const PotentialModel& model, const GKParams& params,
                             const Vec& mu, ConnectionFlavor flavor) {
  return christoffel_from(frame_derivatives(model, params, mu), flavor);
}

double CovariantConstancyReport::max() const {
  return std::max(std::max(nabla_plus_j_plus, nabla_minus_j_minus),
                  std::max(nabla_plus_g, nabla_minus_g));
}

CovariantConstancyReport covariant_constancy_residuals(const PotentialModel& model,
                                                       const GKParams& params,
                                                       const Vec& mu, double fd_step) {
  const FrameDerivatives fd = frame_derivatives(model, params, mu);
  const int n = model.dim();
  const int N = 2 * n;
  const ChristoffelField gp = christoffel_from(fd, ConnectionFlavor::bismut_plus);
  const ChristoffelField gm = christoffel_from(fd, ConnectionFlavor::bismut_minus);

  std::vector<Mat> dJp(n), dJm(n);
  for (int p = 0; p < n; ++p) {
    Vec up = mu, dn = mu;
    up(p) += fd_step;
    dn(p) -= fd_step;
    const FrameTensors fu = assemble_frame(model, params, up);
    const FrameTensors fl = assemble_frame(model, params, dn);
    dJp[p] = (fu.J_plus - fl.J_plus).transpose() / (2.0 * fd_step);
    dJm[p] = (fu.J_minus - fl.J_minus).transpose() / (2.0 * fd_step);
  }

  const auto nabla_j = [&](const ChristoffelField& G, const Mat& Jtable,
                           const std::vector<Mat>& dJ) {
    const Mat Je = Jtable.transpose();
    double worst = 0.0;
    for (int a = 0; a < N; ++a) {
      for (int k = 0; k < N; ++k) {
        for (int l = 0; l < N; ++l) {
          double v = a >= n ? dJ[a - n](k, l) : 0.0;
          for (int m = 0; m < N; ++m) {
            v += G.at(a, m, k) * Je(m, l) - G.at(a, l, m) * Je(k, m);
          }
          worst = std::max(worst, std::abs(v));
        }
      }
    }
    return worst;
  };

  const auto nabla_g = [&](const ChristoffelField& G) {
    double worst = 0.0;
    for (int a = 0; a < N; ++a) {
      for (int j = 0; j < N; ++j) {
        for (int l = 0; l < N; ++l) {
          double v = a >= n ? fd.dg[a - n](j, l) : 0.0;
          for (int m = 0; m < N; ++m) {
            v -= G.at(a, j, m) * fd.f.g(m, l) + G.at(a, l, m) * fd.f.g(j, m);
          }
          worst = std::max(worst, std::abs(v));
        }
      }
    }
    return worst;
  };

  CovariantConstancyReport r;
  r.nabla_plus_j_plus = nabla_j(gp, fd.f.J_plus, dJp);
  r.nabla_minus_j_minus = nabla_j(gm, fd.f.J_minus, dJm);
  r.nabla_plus_g = nabla_g(gp);
  r.nabla_minus_g = nabla_g(gm);
  return r;
}

CurvatureTensor bismut_curvature(const PotentialModel& model, const GKParams& params,
                                 const Vec& mu, int sign, double fd_step) {
  const ConnectionFlavor flavor =
      sign >= 0 ? ConnectionFlavor::bismut_plus : ConnectionFlavor::bismut_minus;
  const FrameDerivatives fd = frame_derivatives(model, params, mu);
  const ChristoffelField g0 = christoffel_from(fd, flavor);
  const int N = g0.dim;
  const int n = N / 2;

  std::vector<ChristoffelField> dG(n);
  for (int p = 0; p < n; ++p) {
    Vec up = mu, dn = mu;
    up(p) += fd_step;
    dn(p) -= fd_step;
    const ChristoffelField gu = christoffel(model, params, up, flavor);
    const ChristoffelField gl = christoffel(model, params, dn, flavor);
    dG[p] = g0;
    for (size_t t = 0; t < dG[p].coeff.size(); ++t) {
      dG[p].coeff[t] = (gu.coeff[t] - gl.coeff[t]) / (2.0 * fd_step);
    }
  }
  const auto dGamma = [&](int dir, int j, int k, int m) -> double {
    return dir < n ? 0.0 : dG[dir - n].at(j, k, m);
  };

  CurvatureTensor R;
  R.dim = N;
  R.mixed.assign(static_cast<size_t>(N) * N * N * N, 0.0);
  R.comp.assign(static_cast<size_t>(N) * N * N * N, 0.0);

  // D(i,j,k,m) = d_i Gamma_jk^m + Gamma_ip^m Gamma_jk^p; the curvature is its
  // exact antisymmetrization in (i, j).
  std::vector<double> D(static_cast<size_t>(N) * N * N * N, 0.0);
  const auto idx = [N](int i, int j, int k, int m) {
    return ((static_cast<size_t>(i) * N + j) * N + k) * N + m;
  };
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < N; ++k) {
        for (int m = 0; m < N; ++m) {
          double v = dGamma(i, j, k, m);
          for (int p = 0; p < N; ++p) v += g0.at(i, p, m) * g0.at(j, k, p);
          D[idx(i, j, k, m)] = v;
        }
      }
    }
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < N; ++k) {
        for (int m = 0; m < N; ++m) {
          R.mixed[idx(i, j, k, m)] = D[idx(i, j, k, m)] - D[idx(j, i, k, m)];
        }
        for (int l = 0; l < N; ++l) {
          double v = 0.0;
          for (int m = 0; m < N; ++m) v += R.mixed[idx(i, j, k, m)] * fd.f.g(m, l);
          R.at(i, j, k, l) = v;
        }
      }
    }
  }
  return R;
}

double CurvatureSymmetryReport::max() const {
  return std::max(std::max(xy_antisymmetry, zw_antisymmetry),
                  std::max(plus_minus_swap, j_invariance));
}

CurvatureSymmetryReport curvature_symmetry_residuals(const PotentialModel& model,
                                                     const GKParams& params,
                                                     const Vec& mu, double fd_step) {
  const CurvatureTensor Rp = bismut_curvature(model, params, mu, +1, fd_step);
  const CurvatureTensor Rm = bismut_curvature(model, params, mu, -1, fd_step);
  const FrameTensors f = assemble_frame(model, params, mu);
  const Mat Jep = f.J_plus.transpose();
  const Mat Jem = f.J_minus.transpose();
  const int N = Rp.dim;

  CurvatureSymmetryReport r;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < N; ++k) {
        for (int l = 0; l < N; ++l) {
          r.xy_antisymmetry = max3(r.xy_antisymmetry,
                                   std::abs(Rp.at(i, j, k, l) + Rp.at(j, i, k, l)),
                                   std::abs(Rm.at(i, j, k, l) + Rm.at(j, i, k, l)));
          r.zw_antisymmetry = max3(r.zw_antisymmetry,
                                   std::abs(Rp.at(i, j, k, l) + Rp.at(i, j, l, k)),
                                   std::abs(Rm.at(i, j, k, l) + Rm.at(i, j, l, k)));
          r.plus_minus_swap = std::max(r.plus_minus_swap,
                                       std::abs(Rp.at(i, j, k, l) - Rm.at(k, l, i, j)));
          double tp = 0.0, tm = 0.0;
          for (int a = 0; a < N; ++a) {
            for (int b = 0; b < N; ++b) {
              tp += Jem(a, i) * Jem(b, j) * Rp.at(a, b, k, l);
              tm += Jep(a, i) * Jep(b, j) * Rm.at(a, b, k, l);
            }
          }
          r.j_invariance = max3(r.j_invariance, std::abs(tp - Rp.at(i, j, k, l)),
                                std::abs(tm - Rm.at(i, j, k, l)));
        }
      }
    }
  }
  return r;
}

double canonical_scalar_curvature(const PotentialModel& model, const GKParams& params,
                                  const Vec& mu, double fd_step) {
  const CurvatureTensor Rp = bismut_curvature(model, params, mu, +1, fd_step);
  const FrameTensors f = assemble_frame(model, params, mu);
  const int N = Rp.dim;
  const int n = N / 2;
  const Mat Jep = f.J_plus.transpose();
  const Mat Jem = f.J_minus.transpose();

  // rho(a, b) = (1/2) tr(J_plus R(e_a, e_b)) -- the real curvature 2-form of
  // the anticanonical bundle of J_plus.
  Mat rho = Mat::Zero(N, N);
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      double t = 0.0;
      for (int k = 0; k < N; ++k) {
        for (int m = 0; m < N; ++m) t += Jep(k, m) * Rp.up(a, b, k, m);
      }
      rho(a, b) = 0.5 * t;
    }
  }

  // g-orthonormal frame adapted to J_minus: pairs (u_i, J_minus u_i).
  std::vector<Vec> done;
  std::vector<Vec> us;
  for (int c = 0; c < N && static_cast<int>(us.size()) < n; ++c) {
    Vec v = Vec::Unit(N, c);
    for (const Vec& w : done) v -= (w.transpose() * f.g * v)(0) * w;
    const double nrm2 = (v.transpose() * f.g * v)(0);
    if (nrm2 < 1e-10) continue;
    const Vec u = v / std::sqrt(nrm2);
    Vec ju = Jem * u;
    ju /= std::sqrt((ju.transpose() * f.g * ju)(0));
    us.push_back(u);
    done.push_back(u);
    done.push_back(ju);
  }

  double kappa = 0.0;
  for (const Vec& u : us) kappa += (u.transpose() * rho * (Jem * u))(0);
  return kKcSign * 2.0 * kappa;
}

double epsilon_section_residual(const PotentialModel& model, const GKParams& params,
                                const Vec& mu, double fd_step) {
  const FrameTensors f = assemble_frame(model, params, mu);
  const TauDerivatives d = model.derivatives(mu, 3);
  const int n = model.dim();
  const Mat& F = params.F;
  const Mat& x = f.phi_inv;
  const Mat y = x.transpose();
  const Mat Fy = F * y;
  const Mat Y = sym(inverse_guarded(f.phi_s));
  const Cplx im(0.0, 1.0);

  std::vector<Mat> dX(n), dY(n), dXF(n), FdY(n), dXi(n);
  for (int p = 0; p < n; ++p) {
    dX[p] = -x * d.third[p] * x;
    dY[p] = dX[p].transpose();
    dXF[p] = dX[p] * F;
    FdY[p] = F * dY[p];
    dXi[p] = d.third[p] - 0.25 * F * Y * d.third[p] * Y * F;
  }

  // Connection 1-form of the plus Bismut connection on the anticanonical
  // bundle in the coordinate frame, evaluated on d/dtheta_i and d/dmu_i.
  // Assembled from the lowered connection coefficients
  //   Gamma(th_i, th_j, mu_k) = -1/2 dy_k(i,j)
  //   Gamma(mu_i, th_j, th_k) = +1/2 dx_i(j,k)
  //   Gamma(mu_i, th_j, mu_k) = 1/4 [(dx_i F)(j,k) + (F dy_k)(i,j)]
  // and the (0,1)-covector expansions via Q; coefficient matrix of
  // g^{-1}dzbar_l in the holomorphic frame is Q^T.
  CVec sig_theta = CVec::Zero(n), sig_mu = CVec::Zero(n);
  for (int i = 0; i < n; ++i) {
    Cplx st(0.0, 0.0), sm(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          st += dY[k](i, j) * y(k, l) * f.Q(l, j);
          const Cplx t1 =
              dX[i](j, k) * ((k == l ? 1.0 : 0.0) - 0.5 * im * Fy(k, l));
          const Cplx t2 = -0.5 * im * (dXF[i](j, k) + FdY[k](i, j)) * y(k, l);
          sm += (t1 + t2) * f.Q(l, j);
        }
      }
    }
    sig_theta(i) = 0.25 * im * st;
    sig_mu(i) = 0.25 * sm;
  }

  // d/dmu_p of log eps, eps = [det(phi_s Xi) / det(phi)^2]^{-1/2}.
  Vec dle(n);
  if (fd_step > 0.0) {
    const auto log_eps = [&](const Vec& m) {
      const Mat hess = model.derivatives(m, 2).hess;
      const Mat y = sym(inverse_guarded(hess));
      const Mat xi = sym(hess + 0.25 * F * y * F);
      const Mat phi = hess + params.C;
      return -0.5 * (std::log(hess.determinant()) + std::log(xi.determinant()) -
                     2.0 * std::log(phi.determinant()));
    };
    for (int p = 0; p < n; ++p) {
      Vec up = mu, dn = mu;
      up(p) += fd_step;
      dn(p) -= fd_step;
      dle(p) = (log_eps(up) - log_eps(dn)) / (2.0 * fd_step);
    }
  } else {
    for (int p = 0; p < n; ++p) {
      dle(p) = -0.5 * ((Y * d.third[p]).trace() + (f.Xi_inv * dXi[p]).trace() -
                       2.0 * (x * d.third[p]).trace());
    }
  }

  // Antiholomorphic minus-frame fields w_k = (1/2)(Id + i J_minus) d/dtheta_k.
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    Cplx sw(0.0, 0.0), wle(0.0, 0.0);
    for (int a = 0; a < 2 * n; ++a) {
      const Cplx w = 0.5 * ((a == k ? 1.0 : 0.0) + im * f.J_minus(k, a));
      sw += w * (a < n ? sig_theta(a) : sig_mu(a - n));
      if (a >= n) wle += w * dle(a - n);
    }
    worst = std::max(worst, std::abs(sw + wle));
  }
  return worst;
}

double IntegrabilityReport::max() const {
  return max3(dc_sum, h_plus_dc, h_minus_dc);
}

IntegrabilityReport integrability_residuals(const PotentialModel& model,
                                            const GKParams& params, const Vec& mu) {
  const FrameDerivatives fd = frame_derivatives(model, params, mu);
  const int n = model.dim();
  const int N = 2 * n;

  std::vector<Mat> dwp(n), dwm(n);
  for (int p = 0; p < n; ++p) {
    dwp[p] = fd.dJ_plus[p] * fd.f.g + fd.f.J_plus * fd.dg[p];
    dwm[p] = fd.dJ_minus[p] * fd.f.g + fd.f.J_minus * fd.dg[p];
  }

  const auto idx = [N](int a, int b, int c) {
    return (static_cast<size_t>(a) * N + b) * N + c;
  };
  const auto exterior = [&](const std::vector<Mat>& dw) {
    std::vector<double> t(static_cast<size_t>(N) * N * N, 0.0);
    const auto pd = [&](int a, int b, int c) -> double {
      return a < n ? 0.0 : dw[a - n](b, c);
    };
    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) {
        for (int c = 0; c < N; ++c) {
          t[idx(a, b, c)] = pd(a, b, c) - pd(b, a, c) + pd(c, a, b);
        }
      }
    }
    return t;
  };
  const auto pullback_j = [&](const std::vector<double>& t, const Mat& table) {
    std::vector<double> out(static_cast<size_t>(N) * N * N, 0.0);
    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) {
        for (int c = 0; c < N; ++c) {
          double v = 0.0;
          for (int m = 0; m < N; ++m) {
            for (int q = 0; q < N; ++q) {
              for (int l = 0; l < N; ++l) {
                v += table(a, m) * table(b, q) * table(c, l) * t[idx(m, q, l)];
              }
            }
          }
          out[idx(a, b, c)] = kDcSign * v;
        }
      }
    }
    return out;
  };

  const std::vector<double> dcp = pullback_j(exterior(dwp), fd.f.J_plus);
  const std::vector<double> dcm = pullback_j(exterior(dwm), fd.f.J_minus);
  const TorsionH h = torsion_from(fd);

  IntegrabilityReport r;
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      for (int c = 0; c < N; ++c) {
        r.dc_sum = std::max(r.dc_sum, std::abs(dcp[idx(a, b, c)] + dcm[idx(a, b, c)]));
        r.h_plus_dc =
            std::max(r.h_plus_dc, std::abs(h.at(a, b, c) + dcp[idx(a, b, c)]));
        r.h_minus_dc =
            std::max(r.h_minus_dc, std::abs(h.at(a, b, c) - dcm[idx(a, b, c)]));
      }
    }
  }
  return r;
}

}  // namespace tgk
