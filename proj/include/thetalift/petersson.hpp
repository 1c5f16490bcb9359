// petersson.hpp -- Petersson inner products three ways: numeric quadrature
// over the SL(2,Z) fundamental domain for vector-valued forms, quadrature
// over Gamma_0(N) \ H by coset unfolding for scalar forms, and the
// closed-form eta-value formulas of Ehlen's Proposition 1.4, Proposition
// 3.2 and Corollary 6.5.
//
// The quadrature routines treat truncated q-expansions as the integrand
// and report a combined error estimate (node-refinement difference + the
// certified decay tail + expansion truncation); the closed forms evaluate
// Dedekind eta at the reduced CM points of the class group and track the
// eta tail bounds.  The acceptance suite cross-checks the two against each
// other, treating quadrature as ground truth for the overall normalization.
#pragma once

#include "thetalift/vvtheta.hpp"

#include <string>

namespace tl {

// A Petersson pairing value together with an error estimate and the method
// that produced it.  For pairings of forms with real coefficient data the
// imaginary part is bounded by error_estimate.
struct PeterssonValue {
  Cplx value;
  Real error_estimate;
  std::string method;   // "quadrature" | "closed_form" | "gamma0_quadrature"
  long evaluations = 0; // integrand evaluations (0 for closed forms)
};

// (F, G) = int_{SL2(Z)\H} sum_mu F_mu(tau) conj(G_mu(tau)) v^k du dv / v^2.
// At least one of F, G must be cuspidal (vanishing constant terms); both
// non-cuspidal is rejected with std::invalid_argument.  If either form is
// identically zero the result is exact 0 with no quadrature.
PeterssonValue petersson_vv(const VectorValuedForm& F,
                            const VectorValuedForm& G, long k,
                            const PrecisionContext& ctx);

// (f, g) = int_{Gamma_0(N)\H} f(tau) conj(g(tau)) v^k du dv / v^2 computed
// by unfolding over the right cosets Gamma_0(N) \ SL(2,Z): the integrand
// over the standard fundamental domain is sum_gamma (f conj(g) Im^k)(gamma
// tau).  f and g are truncated q-expansions in e(n tau / N_f) with their
// own exponent denominators (so a vector-valued component with N = |D| can
// be paired against a level-|D| scalar form).  One of them must be
// cuspidal; N must be squarefree.
PeterssonValue petersson_scalar_gamma0(const QExpansion& f,
                                       const QExpansion& g, long N, long k,
                                       const PrecisionContext& ctx);

// log|v(b) eta^4(tau(b))| at the reduced CM point tau(b) = u + iv of the
// class with index cls; the building block of every closed form below.
// *err_bound (when non-null) receives a bound on the eta truncation error.
Real log_v_eta4(const ClassGroup& G, int cls, const PrecisionContext& ctx,
                Real* err_bound = nullptr);

// Proposition 1.4: (Theta_P(tau,psi), Theta_P(tau,chi)) for the base ideal
// class a_class, via the closed form
//   (i)   0 unless chi = psi or chi = conj(psi),
//   (ii)  -conj(psi(a)) h_k sum_b psi(b) log|v(b) eta^4(tau(b))|
//         (chi = conj(psi), psi^2 != 1),
//   (iii) -h_k sum_b psi(b) log|v(b) eta^4(tau(b))|  (chi = psi, psi^2 != 1),
//   (iv)  the sum of (ii) and (iii)                  (chi = psi, psi^2 = 1,
//         psi != 1).
// Erratum: the paper prints the case (ii) prefactor as -psi(a); independent
// quadrature at a nonprincipal base measures -conj(psi(a)), which is what
// this function returns (the two coincide at the principal base and for
// real psi).  See the implementation for the cross-checks.
// psi and chi must not both be trivial (std::invalid_argument).
PeterssonValue closed_form_vv(const ClassGroup& G, const ClassCharacter& psi,
                              const ClassCharacter& chi, int a_class,
                              const PrecisionContext& ctx);

// Proposition 3.2: Phi_P(Theta_P(tau, g), h)
//   = -4 log|(v1 v2)^{1/4} eta(tau_1) eta(tau_2)| - log(2 pi) - Gamma'(1)
// with tau_1 the CM point of the class [h][g][a] and tau_2 that of
// [g][h]^{-1}; Gamma'(1) = -euler_gamma.  Depends only on the ideal
// classes, which is what the int arguments index.
// Erratum: the paper assigns tau_1 to ([hg])^{-1}[a]; that choice makes the
// character double sum sum_{g,h} psi(g) conj(chi(h)) Phi reproduce the
// uncorrected Prop 1.4 (ii) prefactor, while the assignment used here makes
// it reproduce the quadrature-arbitrated one (cases (i), (iii), (iv) come
// out identical either way).
Real phi_value(const ClassGroup& G, int a_class, int g_class, int h_class,
               const PrecisionContext& ctx);

// Corollary 6.5 (prime discriminants): the Petersson norm
//   (theta_chi, theta_chi)
//     = -(4 h_k / w_k^2) sum_a chi^2(a) log|v(a)^{1/2} eta^2(tau(a))|.
// Rejects composite |D| (std::domain_error; the paper proves the formula
// for prime discriminants, where the class number is odd) and trivial chi
// (std::invalid_argument).
PeterssonValue closed_form_scalar(const ClassGroup& G,
                                  const ClassCharacter& chi,
                                  const PrecisionContext& ctx);

}  // namespace tl
