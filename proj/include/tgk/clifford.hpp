#pragma once

#include <string>
#include <vector>

#include "tgk/linalg.hpp"

namespace tgk {

// Exact small-dimension Clifford / spinor kernel over V = R^{2n} with the
// standard inner product (any compatible metric can be orthonormalized into
// this model first). Elements of Cl(V) (x) C and of Lambda(V* (x) C) share the
// same indexing: coefficient index m is the bitmask of the ascending basis
// monomial e_{i1}...e_{ip} (resp. e^{i1}^...^e^{ip}), so the vector-space
// isomorphism between them is the identity on coefficients while the two
// products differ. Supported sizes are n in {1, 2, 3}.

// Element of Cl(R^{2n}) (x) C, 4^n coefficients over bitmask blades.
struct CliffordElement {
  int n = 0;
  CVec coeff;
};

// Element of Lambda(V* (x) C), same 4^n coefficient layout.
struct FormElement {
  int n = 0;
  CVec coeff;
};

CliffordElement clifford_zero(int n);
CliffordElement clifford_unit(int n);
CliffordElement clifford_generator(int n, int k);  // e_k, 0 <= k < 2n
// Sum v_k e_k for a complex vector of size 2n.
CliffordElement clifford_vector(const CVec& v);
// (i)^n e_1 e_2 ... e_{2n}, the chirality element of the ambient orientation.
CliffordElement chirality_element(int n);

CliffordElement clifford_multiply(const CliffordElement& a, const CliffordElement& b);
// mu: e_{i1}...e_{ip} -> e_{ip}...e_{i1}, i.e. (-1)^{p(p-1)/2} per degree.
CliffordElement order_reversal(const CliffordElement& a);
// Conjugate-linear extension of the order reversal.
CliffordElement dagger(const CliffordElement& a);

// The canonical vector-space isomorphism Cl(V) -> Lambda V and its inverse
// (identity on coefficients in this orthonormal model).
FormElement j_iso(const CliffordElement& a);
CliffordElement j_iso_inverse(const FormElement& f);

FormElement form_zero(int n);
FormElement form_basis(int n, unsigned mask);
FormElement wedge(const FormElement& a, const FormElement& b);
// Contraction with a (complex) vector, extended bilinearly in the metric.
FormElement contract(const CVec& v, const FormElement& f);
// Degree-parity involution: multiplies the degree-p part by (-1)^p.
FormElement parity_twist(const FormElement& f);
// Clifford action of X + xi on forms: iota_X f + xi ^ f. X and xi are complex
// vectors of size 2n (the metric identifies V with V*).
FormElement generalized_action(const CVec& X, const CVec& xi, const FormElement& f);
// Same operator as a 4^n x 4^n matrix on form coefficients.
CMat generalized_action_matrix(const CVec& X, const CVec& xi, int n);
// Top-degree coefficient of a ^ (order reversal of b).
Cplx chevalley_pairing(const FormElement& a, const FormElement& b);

// Unitary frame f_i = (u_i - i J u_i)/sqrt(2) of V^{1,0} for an orthogonal
// complex structure J, together with the spinor representation
// rho(fbar_i) = sqrt(2) iota_{fbar_i}, rho(f_i) = sqrt(2) fbar^i ^ .
// on Lambda V*_{0,1} (2^n coefficients over bitmasks of fbar^1..fbar^n).
struct SpinorFrame {
  int n = 0;
  long id = 0;  // provenance tag; operations on mismatched frames throw
  Mat J;
  CMat f;     // columns f_1..f_n over the ambient basis
  CMat fbar;  // conjugate columns
  std::vector<CMat> rho_gen;  // rho(e_k), 2^n x 2^n, k = 0..2n-1
};

struct Spinor {
  int n = 0;
  long frame_id = 0;
  CVec coeff;  // 2^n entries
};

// Requires J orthogonal with J^2 = -Id (checked).
SpinorFrame spinor_frame(const Mat& J);
// The standard block structure [[0,-I],[I,0]] on R^{2n}.
Mat standard_complex_structure(int n);

Spinor spinor_basis(const SpinorFrame& fr, unsigned mask);
// Hermitian metric, conjugate-linear in the first slot; basis monomials are
// orthonormal.
Cplx spinor_h(const Spinor& a, const Spinor& b);

// rho extended to the whole algebra as a 2^n x 2^n matrix.
CMat rho_matrix(const SpinorFrame& fr, const CliffordElement& a);
Spinor spinor_action(const SpinorFrame& fr, const CliffordElement& a, const Spinor& s);
// Inverse of rho: the unique algebra element represented by the matrix m.
CliffordElement rho_inverse(const SpinorFrame& fr, const CMat& m);

// Bilinear pairing q(phi, psi): top coefficient of reversal(phi) ^ psi in the
// fbar^1..fbar^n volume monomial.
Cplx pairing_q(const Spinor& a, const Spinor& b);
// Conjugate-linear c with q(phi, .) = h(phi^c, .).
Spinor charge_conjugate(const Spinor& a);

// Bi-spinor form [phi (x) psi] = j_iso(rho^{-1}(q#(phi (x) psi))) where
// q#(phi (x) psi)(chi) = q(psi, chi) phi.
FormElement bispinor_to_form(const SpinorFrame& fr, const Spinor& phi, const Spinor& psi);

// h_r: degree-0 part of j_iso(dagger(a) b); h_r_prime: operator trace of
// rho(a)^* rho(b). The second is 2^n times the first.
struct TraceMetrics {
  Cplx h_r;
  Cplx h_r_prime;
};
TraceMetrics trace_metrics(const SpinorFrame& fr, const CliffordElement& a,
                           const CliffordElement& b);

// Clifford-equivariant isometry p: S2 -> S1 with rho1(v) p = p rho2(v),
// unitary, phase fixed by making the first nonzero coefficient of p applied to
// the degree-0 generator real positive (preferring the degree-0 overlap when
// it is nonzero). Throws if the equivariance system has no solution.
CMat intertwiner_p(const SpinorFrame& to_frame, const SpinorFrame& from_frame);

// Structured self-test over all identities of the kernel. Deterministic for a
// fixed seed; full pass at n = 1, 2 plus a reduced n = 3 section.
struct CliffordCheck {
  std::string name;
  int n = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CliffordReport {
  unsigned seed = 0;
  std::vector<CliffordCheck> checks;
  bool all_pass = false;
  double max_residual = 0.0;  // over checks with tolerance 1e-12
  double seconds = 0.0;
};

CliffordReport clifford_selftest(unsigned seed);

}  // namespace tgk
