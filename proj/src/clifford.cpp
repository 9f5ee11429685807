#include "tgk/clifford.hpp"

#include <atomic>
#include <chrono>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace tgk {

namespace {

int popcount(unsigned x) { return __builtin_popcount(x); }

// Crossings when merging the ascending monomials of masks a and b; gives the
// sign of e_a . e_b -> e_{a xor b} in the orthonormal model (e_i^2 = +1).
int reorder_sign(unsigned a, unsigned b) {
  int s = 0;
  for (unsigned x = a >> 1; x; x >>= 1) s += popcount(x & b);
  return (s & 1) ? -1 : 1;
}

// (-1)^{p(p-1)/2}: sign of writing a degree-p monomial in reverse order.
int reversal_sign(int p) { return (p * (p - 1) / 2) % 2 ? -1 : 1; }

int bits_below(unsigned mask, int k) { return popcount(mask & ((1u << k) - 1u)); }

void check_same(int an, int bn, const char* what) {
  if (an != bn) throw std::invalid_argument(std::string("dimension mismatch in ") + what);
}

void check_frame(const SpinorFrame& fr, const Spinor& s, const char* what) {
  if (s.frame_id != fr.id)
    throw std::invalid_argument(std::string("spinor frame mismatch in ") + what);
}

}  // namespace

CliffordElement clifford_zero(int n) {
  return CliffordElement{n, CVec::Zero(1 << (2 * n))};
}

CliffordElement clifford_unit(int n) {
  CliffordElement a = clifford_zero(n);
  a.coeff(0) = 1.0;
  return a;
}

CliffordElement clifford_generator(int n, int k) {
  if (k < 0 || k >= 2 * n) throw std::invalid_argument("generator index out of range");
  CliffordElement a = clifford_zero(n);
  a.coeff(1u << k) = 1.0;
  return a;
}

CliffordElement clifford_vector(const CVec& v) {
  const int n = static_cast<int>(v.size()) / 2;
  if (v.size() != 2 * n || n == 0) throw std::invalid_argument("vector must have even size");
  CliffordElement a = clifford_zero(n);
  for (int k = 0; k < 2 * n; ++k) a.coeff(1u << k) = v(k);
  return a;
}

CliffordElement chirality_element(int n) {
  CliffordElement a = clifford_zero(n);
  a.coeff((1u << (2 * n)) - 1u) = std::pow(Cplx(0.0, 1.0), n);
  return a;
}

CliffordElement clifford_multiply(const CliffordElement& a, const CliffordElement& b) {
  check_same(a.n, b.n, "clifford_multiply");
  CliffordElement out = clifford_zero(a.n);
  const int size = 1 << (2 * a.n);
  for (int p = 0; p < size; ++p) {
    if (a.coeff(p) == 0.0) continue;
    for (int q = 0; q < size; ++q) {
      if (b.coeff(q) == 0.0) continue;
      out.coeff(p ^ q) += double(reorder_sign(p, q)) * a.coeff(p) * b.coeff(q);
    }
  }
  return out;
}

CliffordElement order_reversal(const CliffordElement& a) {
  CliffordElement out = a;
  for (int m = 0; m < out.coeff.size(); ++m)
    out.coeff(m) *= reversal_sign(popcount(m));
  return out;
}

CliffordElement dagger(const CliffordElement& a) {
  CliffordElement out = order_reversal(a);
  out.coeff = out.coeff.conjugate();
  return out;
}

FormElement j_iso(const CliffordElement& a) { return FormElement{a.n, a.coeff}; }

CliffordElement j_iso_inverse(const FormElement& f) { return CliffordElement{f.n, f.coeff}; }

FormElement form_zero(int n) { return FormElement{n, CVec::Zero(1 << (2 * n))}; }

FormElement form_basis(int n, unsigned mask) {
  FormElement f = form_zero(n);
  f.coeff(mask) = 1.0;
  return f;
}

FormElement wedge(const FormElement& a, const FormElement& b) {
  check_same(a.n, b.n, "wedge");
  FormElement out = form_zero(a.n);
  const int size = 1 << (2 * a.n);
  for (int p = 0; p < size; ++p) {
    if (a.coeff(p) == 0.0) continue;
    for (int q = 0; q < size; ++q) {
      if ((p & q) || b.coeff(q) == 0.0) continue;
      out.coeff(p | q) += double(reorder_sign(p, q)) * a.coeff(p) * b.coeff(q);
    }
  }
  return out;
}

FormElement contract(const CVec& v, const FormElement& f) {
  if (v.size() != 2 * f.n) throw std::invalid_argument("contract: vector size mismatch");
  FormElement out = form_zero(f.n);
  const int size = 1 << (2 * f.n);
  for (int m = 0; m < size; ++m) {
    if (f.coeff(m) == 0.0) continue;
    for (int k = 0; k < 2 * f.n; ++k) {
      const unsigned bit = 1u << k;
      if (!(m & bit) || v(k) == 0.0) continue;
      const double sign = bits_below(m, k) % 2 ? -1.0 : 1.0;
      out.coeff(m & ~bit) += sign * v(k) * f.coeff(m);
    }
  }
  return out;
}

FormElement parity_twist(const FormElement& f) {
  FormElement out = f;
  for (int m = 0; m < out.coeff.size(); ++m)
    if (popcount(m) % 2) out.coeff(m) = -out.coeff(m);
  return out;
}

FormElement generalized_action(const CVec& X, const CVec& xi, const FormElement& f) {
  if (xi.size() != 2 * f.n) throw std::invalid_argument("generalized_action: covector size");
  FormElement out = contract(X, f);
  const int size = 1 << (2 * f.n);
  for (int m = 0; m < size; ++m) {
    if (f.coeff(m) == 0.0) continue;
    for (int k = 0; k < 2 * f.n; ++k) {
      const unsigned bit = 1u << k;
      if ((m & bit) || xi(k) == 0.0) continue;
      const double sign = bits_below(m, k) % 2 ? -1.0 : 1.0;
      out.coeff(m | bit) += sign * xi(k) * f.coeff(m);
    }
  }
  return out;
}

CMat generalized_action_matrix(const CVec& X, const CVec& xi, int n) {
  const int size = 1 << (2 * n);
  CMat out = CMat::Zero(size, size);
  for (int m = 0; m < size; ++m) {
    FormElement col = generalized_action(X, xi, form_basis(n, m));
    out.col(m) = col.coeff;
  }
  return out;
}

Cplx chevalley_pairing(const FormElement& a, const FormElement& b) {
  check_same(a.n, b.n, "chevalley_pairing");
  const unsigned full = (1u << (2 * a.n)) - 1u;
  Cplx out(0.0, 0.0);
  for (unsigned p = 0; p <= full; ++p) {
    const unsigned q = full & ~p;
    out += double(reversal_sign(popcount(q)) * reorder_sign(p, q)) * a.coeff(p) *
           b.coeff(q);
  }
  return out;
}

Mat standard_complex_structure(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.block(n, 0, n, n) = Mat::Identity(n, n);
  j.block(0, n, n, n) = -Mat::Identity(n, n);
  return j;
}

SpinorFrame spinor_frame(const Mat& J) {
  const int d = static_cast<int>(J.rows());
  const int n = d / 2;
  if (d != J.cols() || d != 2 * n || n < 1)
    throw std::invalid_argument("complex structure must be square of even size");
  if ((J * J + Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10 ||
      (J.transpose() * J - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("complex structure must be orthogonal with J^2 = -1");

  // adapted orthonormal basis u_1, J u_1, ..., u_n, J u_n
  static std::atomic<long> next_id{1};
  SpinorFrame fr;
  fr.n = n;
  fr.id = next_id++;
  fr.J = J;
  fr.f = CMat::Zero(d, n);
  fr.fbar = CMat::Zero(d, n);
  std::vector<Vec> chosen;
  for (int i = 0; i < n; ++i) {
    Vec u;
    double best = -1.0;
    for (int s = 0; s < d; ++s) {
      Vec cand = Vec::Unit(d, s);
      for (const Vec& w : chosen) cand -= w.dot(cand) * w;
      if (cand.norm() > best) {
        best = cand.norm();
        u = cand;
      }
    }
    u /= u.norm();
    const Vec v = J * u;
    chosen.push_back(u);
    chosen.push_back(v);
    fr.f.col(i) = (u.cast<Cplx>() - Cplx(0, 1) * v.cast<Cplx>()) / std::sqrt(2.0);
    fr.fbar.col(i) = fr.f.col(i).conjugate();
  }

  const int sdim = 1 << n;
  std::vector<CMat> wedge_op(n, CMat::Zero(sdim, sdim));
  std::vector<CMat> contr_op(n, CMat::Zero(sdim, sdim));
  for (int j = 0; j < n; ++j) {
    const unsigned bit = 1u << j;
    for (unsigned s = 0; s < static_cast<unsigned>(sdim); ++s) {
      const double sign = bits_below(s, j) % 2 ? -1.0 : 1.0;
      if (!(s & bit)) wedge_op[j](s | bit, s) = sign;
      if (s & bit) contr_op[j](s & ~bit, s) = sign;
    }
  }
  fr.rho_gen.assign(d, CMat::Zero(sdim, sdim));
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < n; ++j) {
      fr.rho_gen[k] += std::sqrt(2.0) *
                       (fr.fbar(k, j) * wedge_op[j] + fr.f(k, j) * contr_op[j]);
    }
  }
  return fr;
}

Spinor spinor_basis(const SpinorFrame& fr, unsigned mask) {
  Spinor s{fr.n, fr.id, CVec::Zero(1 << fr.n)};
  s.coeff(mask) = 1.0;
  return s;
}

Cplx spinor_h(const Spinor& a, const Spinor& b) {
  if (a.frame_id != b.frame_id) throw std::invalid_argument("spinor_h: frame mismatch");
  return a.coeff.dot(b.coeff);  // Eigen dot conjugates the first argument
}

CMat rho_matrix(const SpinorFrame& fr, const CliffordElement& a) {
  check_same(fr.n, a.n, "rho_matrix");
  const int sdim = 1 << fr.n;
  const int size = 1 << (2 * fr.n);
  CMat out = CMat::Zero(sdim, sdim);
  std::vector<CMat> blade(size);
  blade[0] = CMat::Identity(sdim, sdim);
  for (int m = 1; m < size; ++m) {
    const int low = __builtin_ctz(m);
    blade[m] = fr.rho_gen[low] * blade[m & (m - 1)];
  }
  for (int m = 0; m < size; ++m)
    if (a.coeff(m) != 0.0) out += a.coeff(m) * blade[m];
  return out;
}

Spinor spinor_action(const SpinorFrame& fr, const CliffordElement& a, const Spinor& s) {
  check_frame(fr, s, "spinor_action");
  return Spinor{fr.n, fr.id, rho_matrix(fr, a) * s.coeff};
}

CliffordElement rho_inverse(const SpinorFrame& fr, const CMat& m) {
  const int sdim = 1 << fr.n;
  const int size = 1 << (2 * fr.n);
  if (m.rows() != sdim || m.cols() != sdim)
    throw std::invalid_argument("rho_inverse: matrix size mismatch");
  CMat rep(sdim * sdim, size);
  for (int c = 0; c < size; ++c) {
    CliffordElement basis = clifford_zero(fr.n);
    basis.coeff(c) = 1.0;
    const CMat rm = rho_matrix(fr, basis);
    rep.col(c) = Eigen::Map<const CVec>(rm.data(), sdim * sdim);
  }
  const CVec rhs = Eigen::Map<const CVec>(m.data(), sdim * sdim);
  return CliffordElement{fr.n, rep.partialPivLu().solve(rhs)};
}

Cplx pairing_q(const Spinor& a, const Spinor& b) {
  if (a.frame_id != b.frame_id) throw std::invalid_argument("pairing_q: frame mismatch");
  const unsigned full = (1u << a.n) - 1u;
  Cplx out(0.0, 0.0);
  for (unsigned p = 0; p <= full; ++p) {
    const unsigned q = full & ~p;
    out += double(reversal_sign(popcount(p)) * reorder_sign(p, q)) * a.coeff(p) *
           b.coeff(q);
  }
  return out;
}

Spinor charge_conjugate(const Spinor& a) {
  Spinor out = a;
  const int sdim = static_cast<int>(a.coeff.size());
  for (int t = 0; t < sdim; ++t) {
    Spinor basis{a.n, a.frame_id, CVec::Zero(sdim)};
    basis.coeff(t) = 1.0;
    out.coeff(t) = std::conj(pairing_q(a, basis));
  }
  return out;
}

FormElement bispinor_to_form(const SpinorFrame& fr, const Spinor& phi, const Spinor& psi) {
  check_frame(fr, phi, "bispinor_to_form");
  check_frame(fr, psi, "bispinor_to_form");
  const int sdim = 1 << fr.n;
  CMat m(sdim, sdim);
  for (int t = 0; t < sdim; ++t) {
    Spinor basis{fr.n, fr.id, CVec::Zero(sdim)};
    basis.coeff(t) = 1.0;
    m.col(t) = pairing_q(psi, basis) * phi.coeff;
  }
  return j_iso(rho_inverse(fr, m));
}

TraceMetrics trace_metrics(const SpinorFrame& fr, const CliffordElement& a,
                           const CliffordElement& b) {
  TraceMetrics out;
  out.h_r = clifford_multiply(dagger(a), b).coeff(0);
  out.h_r_prime = (rho_matrix(fr, a).adjoint() * rho_matrix(fr, b)).trace();
  return out;
}

CMat intertwiner_p(const SpinorFrame& to_frame, const SpinorFrame& from_frame) {
  check_same(to_frame.n, from_frame.n, "intertwiner_p");
  const int d = 2 * to_frame.n;
  const int sdim = 1 << to_frame.n;
  const CMat id = CMat::Identity(sdim, sdim);
  CMat sys(d * sdim * sdim, sdim * sdim);
  for (int k = 0; k < d; ++k) {
    sys.middleRows(k * sdim * sdim, sdim * sdim) =
        Eigen::kroneckerProduct(id, to_frame.rho_gen[k]) -
        Eigen::kroneckerProduct(from_frame.rho_gen[k].transpose(), id);
  }
  Eigen::JacobiSVD<CMat> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(sdim * sdim - 1) > 1e-8 * sv(0))
    throw std::runtime_error("no Clifford-equivariant intertwiner exists");
  CMat p = Eigen::Map<const CMat>(svd.matrixV().col(sdim * sdim - 1).data(), sdim, sdim);
  const double scale = std::sqrt((p.adjoint() * p).trace().real() / sdim);
  p /= scale;
  // phase: positive-real overlap with degree 0, else first sizable entry
  const CVec image = p.col(0);
  Cplx ph = image(0);
  for (int k = 0; std::abs(ph) < 1e-8 && k < sdim; ++k) ph = image(k);
  p *= std::abs(ph) / ph;
  return p;
}

namespace {

Mat random_rotation(int d, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = nd(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

Mat random_complex_structure(int n, std::mt19937& rng) {
  const Mat q = random_rotation(2 * n, rng);
  return q * standard_complex_structure(n) * q.transpose();
}

CVec random_cvec(int d, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = Cplx(nd(rng), nd(rng));
  return v;
}

Vec random_rvec(int d, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = nd(rng);
  return v;
}

CliffordElement random_element(int n, std::mt19937& rng) {
  return CliffordElement{n, random_cvec(1 << (2 * n), rng) / double(1 << n)};
}

Spinor random_spinor(const SpinorFrame& fr, std::mt19937& rng) {
  return Spinor{fr.n, fr.id, random_cvec(1 << fr.n, rng)};
}

}  // namespace

CliffordReport clifford_selftest(unsigned seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CliffordReport report;
  report.seed = seed;
  std::mt19937 rng(seed);

  const auto add = [&report](const std::string& name, int n, double residual,
                             double tol) {
    report.checks.push_back(CliffordCheck{name, n, residual, tol, residual <= tol});
  };
  const double tol = 1e-12;
  const auto maxabs = [](const CVec& v) { return v.cwiseAbs().maxCoeff(); };

  for (int n : {1, 2}) {
    const int d = 2 * n;
    const int sdim = 1 << n;
    const CliffordElement one = clifford_unit(n);
    const SpinorFrame std_fr = spinor_frame(standard_complex_structure(n));

    double r = 0.0;
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        const CliffordElement ek = clifford_generator(n, k);
        const CliffordElement el = clifford_generator(n, l);
        const CVec anti = clifford_multiply(ek, el).coeff +
                          clifford_multiply(el, ek).coeff -
                          (k == l ? 2.0 : 0.0) * one.coeff;
        r = std::max(r, maxabs(anti));
      }
    add("generator_relations", n, r, tol);

    r = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      const CliffordElement a = random_element(n, rng);
      const CliffordElement b = random_element(n, rng);
      const CliffordElement c = random_element(n, rng);
      r = std::max(r, maxabs(clifford_multiply(clifford_multiply(a, b), c).coeff -
                             clifford_multiply(a, clifford_multiply(b, c)).coeff));
    }
    add("associativity", n, r, tol);

    // j_iso turns left multiplication into wedge + contraction, and right
    // multiplication into the parity-twisted version
    r = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const CVec v = random_cvec(d, rng);
      const CliffordElement a = random_element(n, rng);
      const FormElement ja = j_iso(a);
      const FormElement vf = j_iso(clifford_vector(v));
      r = std::max(r, maxabs(j_iso(clifford_multiply(clifford_vector(v), a)).coeff -
                             wedge(vf, ja).coeff - contract(v, ja).coeff));
      const FormElement tw = parity_twist(ja);
      r = std::max(r, maxabs(j_iso(clifford_multiply(a, clifford_vector(v))).coeff -
                             wedge(vf, tw).coeff + contract(v, tw).coeff));
    }
    add("j_isomorphism", n, r, tol);

    // the representation is an algebra map and squares vectors to their norm
    r = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const SpinorFrame fr = rep < 5 ? std_fr
                                     : spinor_frame(random_complex_structure(n, rng));
      const CliffordElement a = random_element(n, rng);
      const CliffordElement b = random_element(n, rng);
      r = std::max(r, (rho_matrix(fr, clifford_multiply(a, b)) -
                       rho_matrix(fr, a) * rho_matrix(fr, b))
                          .cwiseAbs()
                          .maxCoeff());
      const Vec v = random_rvec(d, rng);
      const CMat rv = rho_matrix(fr, clifford_vector(v.cast<Cplx>()));
      r = std::max(r, (rv * rv - v.squaredNorm() * CMat::Identity(sdim, sdim))
                          .cwiseAbs()
                          .maxCoeff());
    }
    add("spinor_representation", n, r, tol);

    if (n == 1) {
      CMat swap(2, 2);
      swap << 0, 1, 1, 0;
      add("rho_e1_matrix", n,
          (rho_matrix(std_fr, clifford_generator(1, 0)) - swap).cwiseAbs().maxCoeff(),
          tol);
    }

    // h-adjunction against the dagger and the q / order-reversal adjunction
    r = 0.0;
    double rq = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const SpinorFrame fr = rep < 5 ? std_fr
                                     : spinor_frame(random_complex_structure(n, rng));
      const CliffordElement a = random_element(n, rng);
      const Spinor phi = random_spinor(fr, rng);
      const Spinor psi = random_spinor(fr, rng);
      r = std::max(r, std::abs(spinor_h(spinor_action(fr, a, phi), psi) -
                               spinor_h(phi, spinor_action(fr, dagger(a), psi))));
      rq = std::max(rq, std::abs(pairing_q(spinor_action(fr, a, phi), psi) -
                                 pairing_q(phi, spinor_action(fr, order_reversal(a),
                                                              psi))));
    }
    add("h_adjunction", n, r, tol);
    add("q_adjunction", n, rq, tol);

    if (n == 1) {
      const Spinor s0 = spinor_basis(std_fr, 0);
      const Spinor s1 = spinor_basis(std_fr, 1);
      double re = std::abs(pairing_q(s0, s1) - 1.0);
      re = std::max(re, std::abs(pairing_q(s0, s0)));
      add("q_examples", n, re, tol);
    }

    // charge conjugation: defining property, isometry, conjugate-linearity
    r = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const SpinorFrame fr = rep < 5 ? std_fr
                                     : spinor_frame(random_complex_structure(n, rng));
      const Spinor phi = random_spinor(fr, rng);
      const Spinor chi = random_spinor(fr, rng);
      const Spinor pc = charge_conjugate(phi);
      r = std::max(r, std::abs(pairing_q(phi, chi) - spinor_h(pc, chi)));
      r = std::max(r, std::abs(spinor_h(pc, pc) - spinor_h(phi, phi)));
      Spinor iphi = phi;
      iphi.coeff *= Cplx(0.0, 1.0);
      r = std::max(r, maxabs(charge_conjugate(iphi).coeff + Cplx(0.0, 1.0) * pc.coeff));
    }
    add("charge_conjugation", n, r, tol);
    if (n == 1) {
      const Spinor c0 = charge_conjugate(spinor_basis(std_fr, 0));
      add("charge_conjugate_vacuum", n,
          maxabs(c0.coeff - spinor_basis(std_fr, 1).coeff), tol);
    }

    // operator trace is 2^n times the degree-0 trace
    r = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const CliffordElement a = random_element(n, rng);
      const CliffordElement b = random_element(n, rng);
      const TraceMetrics tm = trace_metrics(std_fr, a, b);
      r = std::max(r, std::abs(tm.h_r_prime - double(sdim) * tm.h_r));
    }
    {
      const TraceMetrics te = trace_metrics(std_fr, clifford_generator(n, 0),
                                            clifford_generator(n, 0));
      r = std::max(r, std::abs(te.h_r - 1.0));
      r = std::max(r, std::abs(te.h_r_prime - double(sdim)));
    }
    add("trace_metric_ratio", n, r, tol);

    // bi-spinor identities and its isometry, on random frames too
    double r1 = 0.0, r2 = 0.0, riso = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
      const SpinorFrame fr = rep < 3 ? std_fr
                                     : spinor_frame(random_complex_structure(n, rng));
      const Spinor phi = random_spinor(fr, rng);
      const Spinor psi = random_spinor(fr, rng);
      const FormElement form = bispinor_to_form(fr, phi, psi);
      const Vec v = random_rvec(d, rng);
      const CVec vc = v.cast<Cplx>();
      const CliffordElement cv = clifford_vector(vc);
      r1 = std::max(r1, maxabs(bispinor_to_form(fr, spinor_action(fr, cv, phi), psi)
                                   .coeff -
                               generalized_action(vc, vc, form).coeff));
      r2 = std::max(r2, maxabs(bispinor_to_form(fr, phi, spinor_action(fr, cv, psi))
                                   .coeff +
                               generalized_action(vc, -vc, parity_twist(form)).coeff));
      riso = std::max(riso, std::abs(double(sdim) * form.coeff.squaredNorm() -
                                     (spinor_h(phi, phi) * spinor_h(psi, psi)).real()));
    }
    add("bispinor_left_action", n, r1, tol);
    add("bispinor_right_action", n, r2, tol);
    add("bispinor_isometry", n, riso, tol);

    // generalized Clifford relation and the graded tensor split
    r = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const CVec X = random_cvec(d, rng);
      const CVec xi = random_cvec(d, rng);
      const CMat ax = generalized_action_matrix(X, xi, n);
      const Cplx norm2 = (xi.transpose() * X)(0, 0);
      r = std::max(r, (ax * ax - norm2 * CMat::Identity(ax.rows(), ax.cols()))
                          .cwiseAbs()
                          .maxCoeff());
    }
    add("generalized_clifford_square", n, r, tol);

    r = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      const CVec v = random_rvec(d, rng).cast<Cplx>();
      const CVec w = random_rvec(d, rng).cast<Cplx>();
      const CMat vp = generalized_action_matrix(v, v, n);
      const CMat vm = generalized_action_matrix(v, -v, n);
      const CMat wp = generalized_action_matrix(w, w, n);
      const CMat wm = generalized_action_matrix(w, -w, n);
      const Cplx gvw = (v.transpose() * w)(0, 0);
      const CMat id = CMat::Identity(vp.rows(), vp.cols());
      r = std::max(r, (vp * wm + wm * vp).cwiseAbs().maxCoeff());
      r = std::max(r, (vp * wp + wp * vp - 2.0 * gvw * id).cwiseAbs().maxCoeff());
      r = std::max(r, (vm * wm + wm * vm + 2.0 * gvw * id).cwiseAbs().maxCoeff());
    }
    add("graded_tensor_relations", n, r, tol);

    if (n == 1) {
      double re = std::abs(chevalley_pairing(form_basis(1, 3), form_basis(1, 0)) - 1.0);
      re = std::max(re,
                    std::abs(chevalley_pairing(form_basis(1, 0), form_basis(1, 3)) + 1.0));
      re = std::max(re, std::abs(chevalley_pairing(form_basis(1, 0), form_basis(1, 0))));
      add("chevalley_examples", n, re, tol);
    }

    // Chevalley pairing is invariant under exponentials of spin bivectors
    r = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      const CMat a1 = generalized_action_matrix(random_rvec(d, rng).cast<Cplx>(),
                                                random_rvec(d, rng).cast<Cplx>(), n);
      const CMat a2 = generalized_action_matrix(random_rvec(d, rng).cast<Cplx>(),
                                                random_rvec(d, rng).cast<Cplx>(), n);
      const CMat u = (0.25 * 0.3 * (a1 * a2 - a2 * a1)).exp();
      const FormElement phi{n, random_cvec(1 << d, rng)};
      const FormElement psi{n, random_cvec(1 << d, rng)};
      const FormElement uphi{n, u * phi.coeff};
      const FormElement upsi{n, u * psi.coeff};
      r = std::max(r, std::abs(chevalley_pairing(uphi, upsi) -
                               chevalley_pairing(phi, psi)));
    }
    add("chevalley_spin_invariance", n, r, 1e-10);

    // Hodge metric recovered through the star element of the Chevalley pairing
    r = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      const FormElement phi{n, random_cvec(1 << d, rng)};
      const FormElement psi{n, random_cvec(1 << d, rng)};
      FormElement sp{n, psi.coeff.conjugate()};
      for (int k = 0; k < d; ++k) {  // e_1^+ acts first in e_{2n}^+ ... e_1^+
        CVec ek = CVec::Zero(d);
        ek(k) = 1.0;
        sp = generalized_action(ek, ek, sp);
      }
      const Cplx hodge = psi.coeff.dot(phi.coeff);  // conjugates psi
      r = std::max(r, std::abs(chevalley_pairing(phi, sp) - hodge));
    }
    add("hodge_star_pairing", n, r, tol);

    // chirality element: squares to one, diagonal degree pattern
    {
      const CliffordElement gam = chirality_element(n);
      double re = maxabs(clifford_multiply(gam, gam).coeff - one.coeff);
      const SpinorFrame fr = spinor_frame(random_complex_structure(n, rng));
      const CMat rg = rho_matrix(fr, gam);
      const double base = (n * (n + 1) / 2) % 2 ? -1.0 : 1.0;
      for (int s = 0; s < sdim; ++s)
        for (int t = 0; t < sdim; ++t) {
          const Cplx want = s == t ? base * (popcount(s) % 2 ? -1.0 : 1.0) : 0.0;
          re = std::max(re, std::abs(rg(s, t) - want));
        }
      add("chirality", n, re, tol);
    }

    // intertwiner: identity case, equivariance, unitarity
    {
      const SpinorFrame fr1 = spinor_frame(random_complex_structure(n, rng));
      const SpinorFrame fr2 = spinor_frame(random_complex_structure(n, rng));
      const CMat pid = intertwiner_p(fr1, fr1);
      add("intertwiner_identity", n,
          (pid - CMat::Identity(sdim, sdim)).cwiseAbs().maxCoeff(), tol);
      const CMat p = intertwiner_p(fr1, fr2);
      double re = 0.0;
      for (int k = 0; k < d; ++k)
        re = std::max(re,
                      (fr1.rho_gen[k] * p - p * fr2.rho_gen[k]).cwiseAbs().maxCoeff());
      add("intertwiner_equivariance", n, re, tol);
      add("intertwiner_unitarity", n,
          (p.adjoint() * p - CMat::Identity(sdim, sdim)).cwiseAbs().maxCoeff(), tol);

      // fiberwise annihilator: [phi (x) p(psi)] is killed by both
      // (Id + g) T+^{0,1} and (Id - g) T-^{0,1}
      const Spinor vac2 = spinor_basis(fr2, 0);
      const Spinor pvac{fr1.n, fr1.id, p * vac2.coeff};
      const FormElement form = bispinor_to_form(fr1, spinor_basis(fr1, 0), pvac);
      re = 0.0;
      for (int j = 0; j < n; ++j) {
        const CVec xp = fr1.fbar.col(j);
        re = std::max(re, maxabs(generalized_action(xp, xp, form).coeff));
        const CVec xm = fr2.fbar.col(j);
        re = std::max(re, maxabs(generalized_action(xm, -xm, form).coeff));
      }
      add("annihilator", n, re, tol);
    }

    if (n == 1) {
      const SpinorFrame fr1 = std_fr;
      const SpinorFrame fr2 = spinor_frame(Mat(-standard_complex_structure(1)));
      const CMat p = intertwiner_p(fr1, fr2);
      double re = std::abs(p(0, 0));
      re = std::max(re, std::abs(std::abs(p(1, 0)) - 1.0));
      add("intertwiner_conjugate_structure", n, re, tol);
    }
  }

  // n = 3 smoke: representation, adjunctions, bi-spinor and annihilator
  {
    const int n = 3, sdim = 8;
    const double stol = 1e-10;
    const SpinorFrame fr = spinor_frame(random_complex_structure(n, rng));
    double r = 0.0;
    for (int rep = 0; rep < 2; ++rep) {
      const CliffordElement a = random_element(n, rng);
      const CliffordElement b = random_element(n, rng);
      r = std::max(r, (rho_matrix(fr, clifford_multiply(a, b)) -
                       rho_matrix(fr, a) * rho_matrix(fr, b))
                          .cwiseAbs()
                          .maxCoeff());
      const Spinor phi = random_spinor(fr, rng);
      const Spinor psi = random_spinor(fr, rng);
      r = std::max(r, std::abs(pairing_q(spinor_action(fr, a, phi), psi) -
                               pairing_q(phi, spinor_action(fr, order_reversal(a),
                                                            psi))));
    }
    add("n3_representation", n, r, stol);

    const SpinorFrame fr2 = spinor_frame(random_complex_structure(n, rng));
    const CMat p = intertwiner_p(fr, fr2);
    r = (p.adjoint() * p - CMat::Identity(sdim, sdim)).cwiseAbs().maxCoeff();
    const Spinor pvac{fr.n, fr.id, p * spinor_basis(fr2, 0).coeff};
    const FormElement form = bispinor_to_form(fr, spinor_basis(fr, 0), pvac);
    for (int j = 0; j < n; ++j) {
      const CVec xp = fr.fbar.col(j);
      r = std::max(r, generalized_action(xp, xp, form).coeff.cwiseAbs().maxCoeff());
      const CVec xm = fr2.fbar.col(j);
      r = std::max(r, generalized_action(xm, -xm, form).coeff.cwiseAbs().maxCoeff());
    }
    add("n3_annihilator", n, r, stol);
  }

  report.all_pass = true;
  report.max_residual = 0.0;
  for (const CliffordCheck& c : report.checks) {
    report.all_pass = report.all_pass && c.pass;
    if (c.tolerance <= 1e-12) report.max_residual = std::max(report.max_residual, c.residual);
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace tgk
