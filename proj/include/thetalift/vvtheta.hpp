// vvtheta.hpp -- vector-valued theta functions Theta_P(tau, h) attached to
// an ideal lattice P and a class group element h, their character
// combinations Theta_P(tau, psi), and the structure of the space they span
// (Theorem 1.1).
//
// The discriminant group d^{-1}P / P is identified with the A-model
// Z/|D| (weilrep.hpp) through the generator A / sqrt(D), where A is the
// leading coefficient of the fixed coprime-to-D representative of [P]; the
// class h acts through the coset transport P + beta -> h(P + beta) inside
// a_dst = P b^2 / N(b) (ideallat.hpp).  All coefficients are exact:
// integers for Theta_P(tau, h), cyclotomic numbers for Theta_P(tau, psi).
#pragma once

#include "thetalift/cyclotomic.hpp"
#include "thetalift/ideallat.hpp"
#include "thetalift/weilrep.hpp"

#include <vector>

namespace tl {

// Theta_P(tau, h) = sum_beta sum_{lambda in h(P + beta)} e(Q(lambda) tau) e_beta.
// counts[r][n] is the number of lambda in the transported coset of
// beta = r A/sqrt(D) with |D| Q(lambda) = n, for 0 <= n <= n_max (so the
// component expansions live in powers of q^{1/|D|}).
struct VVTheta {
  int a_class = 0;
  int h_class = 0;
  QuadForm a_form;  // coprime representative fixing the A-model of P
  QuadForm h_form;  // coprime representative b of the acting class
  long A = 1;       // N(P) = leading coefficient of a_form
  long n_max = 0;
  std::vector<std::vector<Int>> counts;

  VectorValuedForm to_form(const PrecisionContext& ctx) const;
};

// The discriminant-form model used for base class a_class (A-model with the
// deterministic coprime representative); all vvtheta/petersson component
// indexing is relative to this.
DiscriminantForm discform_of_base(const ClassGroup& G, int a_class);

VVTheta vv_theta(const ClassGroup& G, int a_class, int h_class, long n_max,
                 bool parallel = true);

// All h at once (shared base model; used by the character sums and rank).
std::vector<VVTheta> vv_theta_family(const ClassGroup& G, int a_class,
                                     long n_max, bool parallel = true);

// Theta_P(tau, psi) = sum_h psi(h) Theta_P(tau, h), exact coefficients in
// Q(zeta_h).  Row r, column n as in VVTheta::counts.
std::vector<std::vector<CycQ>> vv_theta_psi_exact(const ClassGroup& G,
                                                  int a_class, int psi,
                                                  long n_max);
VectorValuedForm vv_theta_psi(const ClassGroup& G, int a_class, int psi,
                              long n_max, const PrecisionContext& ctx);

// weilrep.symmetrize applied to Theta_P(tau, h).
VectorValuedForm vv_theta_sym(const ClassGroup& G, int a_class, int h_class,
                              long n_max, const PrecisionContext& ctx);

// Rank data for Theta(P) = span{Theta_P(tau, h)} (Theorem 1.1 (iii)/(iv)).
struct ThetaSpace {
  long rank = 0;         // rank of the exact coefficient matrix, rows = h
  long rank_half = 0;    // same at truncation n_max/2 (stability check)
  long dim_formula = 0;  // (h_k + 2^{t-1}) / 2
  std::vector<int> basis_characters;  // one psi per conjugate pair
};

// Throws domain_error if the rank has not stabilized between n_max/2 and
// n_max (request a larger n_max in that case).
ThetaSpace theta_space(const ClassGroup& G, int a_class, long n_max);

// Exact rank over Q of a rational matrix (Gaussian elimination); the rows
// may be modified.  Exposed for tests.
long rat_matrix_rank(std::vector<std::vector<Rat>>& rows);

}  // namespace tl
