// weilrep.hpp -- the discriminant form P'/P of an ideal lattice, the Weil
// representation of SL(2,Z) attached to it, the Gamma_0(N) character chi_L,
// the orthogonal group of the discriminant form with symmetrization, the
// epsilon signs and nu counts of the lifting theorems, and the scalar ->
// vector-valued lifting map S_L.
//
// Convention note: for our positive definite lattices (signature (2,0)) the
// S-matrix carries the phase e(-1/4) = -i together with the pairing
// e(-(mu,nu)).  With the opposite phase the assignment satisfies the
// SL(2,Z) relations only on the symmetric subspace {e_mu = e_-mu}; the
// phase used here makes rho a genuine representation on all of C[P'/P] and
// reproduces the numerical transformation behaviour of the theta functions.
#pragma once

#include "thetalift/arith.hpp"
#include "thetalift/scalartheta.hpp"

#include <vector>

namespace tl {

// The discriminant form P'/P = d^{-1}a / a of an ideal lattice whose class
// has a representative form with leading coefficient A coprime to |D|:
// cyclic of order |D| with Q(r) = A r^2 / |D| mod 1.
struct DiscriminantForm {
  FundamentalDiscriminant disc;
  long A = 1;   // leading coefficient, gcd(A, |D|) = 1
  long n = 0;   // |P'/P| = |D|
  // signature (b+, b-) = (2, 0)

  // Q(r) and the bilinear form (r, s) = 2 A r s / |D|, both reduced to [0,1).
  Rat q_of(long r) const;
  Rat bilinear(long r, long s) const;
  // N Q(r) mod N as an integer (N = n is the level of the lattice).
  long nq_num(long r) const;
};

DiscriminantForm build_discform(long D, long A);

// Dense complex matrices/vectors of dimension n = |D| (row-major).
using CVec = std::vector<Cplx>;
using CMat = std::vector<CVec>;

CMat mat_identity(long n);
CMat mat_mul(const CMat& a, const CMat& b);
CVec mat_vec(const CMat& a, const CVec& v);

// Generator matrices of the Weil representation:
//   rho(T) = diag e(Q(mu)),
//   rho(S) = (e(-1/4)/sqrt[n]) [ e(-(mu,nu)) ].
CMat rho_T(const DiscriminantForm& df, const PrecisionContext& ctx);
CMat rho_S(const DiscriminantForm& df, const PrecisionContext& ctx);

// rho(g) along the S/T word of g; word-independent since rho is a true
// representation (verified in the test suite and acceptance run).
CMat rho(const DiscriminantForm& df, const ModularMatrix& g,
         const PrecisionContext& ctx);

// rho(g) e_0 and the 0-th row of rho(g), in O(words * n^2) without forming
// the full matrix (the factor matrices are symmetric).
CVec rho_apply_e0(const DiscriminantForm& df, const ModularMatrix& g,
                  const PrecisionContext& ctx);
CVec rho_row0(const DiscriminantForm& df, const ModularMatrix& g,
              const PrecisionContext& ctx);

// The quadratic character of Gamma_0(n) acting on e_0: rho(g) e_0 =
// chi_L(g) e_0, concretely chi_L(g) = (D | d).  Throws if g is not in
// Gamma_0(n).
int chi_L(const DiscriminantForm& df, const ModularMatrix& g);

// O(P'/P) = {u in (Z/n)^x : u^2 = 1 mod n}, ascending; acts by mu -> u mu.
std::vector<long> orthogonal_group(const DiscriminantForm& df);

// Per prime p_i | n: +1 if N Q restricted to the p_i-part of P'/P
// represents all nonzero squares mod p_i, else -1.  Computed by
// enumeration; equals the Legendre symbol (A | p_i).
std::vector<int> epsilon_signs(const DiscriminantForm& df);

// nu(m) = #{mu in P'/P : N Q(mu) = m mod N}, by enumeration.
long nu_count(const DiscriminantForm& df, long m);

// A vector-valued modular form as a row of q-expansions in e(n tau / N),
// N = |D|; component mu is supported on n = N Q(mu) mod N.
struct VectorValuedForm {
  long D = 0;
  Rat weight = Rat(1);
  std::vector<QExpansion> components;  // size |D|, each with N = |D|
};

// Sum over O(P'/P) of the permuted forms; the output is invariant under
// every sigma.
VectorValuedForm symmetrize(const DiscriminantForm& df,
                            const VectorValuedForm& F);

// Largest |coefficient| sitting off the support rule, across components.
Real support_violation(const DiscriminantForm& df, const VectorValuedForm& F);

// A weight-k Gamma_0(N) form that can be evaluated in slashed position
// (f |_k gamma)(tau) for arbitrary gamma in SL(2,Z).  Implementations based
// on theta functions transform tau to the fundamental domain internally and
// are accurate for any tau; the plain q-expansion adapter below is only as
// good as Im(gamma tau) allows.
struct SlashEvaluable {
  virtual ~SlashEvaluable() = default;
  virtual Cplx slash_value(const ModularMatrix& gamma, const Cplx& tau,
                           const PrecisionContext& ctx) const = 0;
  virtual long weight() const = 0;
};

// Direct evaluation of a stored q-expansion: (f|_k gamma)(tau) =
// j(gamma,tau)^{-k} f(gamma tau).  Throws std::domain_error when the
// truncation tail at gamma tau exceeds max_tail.
struct QExpansionSlash : SlashEvaluable {
  QExpansion f;
  Real max_tail;
  QExpansionSlash(QExpansion f_, Real max_tail_);
  Cplx slash_value(const ModularMatrix& gamma, const Cplx& tau,
                   const PrecisionContext& ctx) const override;
  long weight() const override;

 private:
  // Cached at construction so slash_value can sum ascending nonzero terms
  // and stop once the certified bound on the remainder is below max_tail/4:
  // the transformed points gamma tau range over wildly different heights,
  // and most need only a short prefix of the expansion.
  std::vector<std::pair<long, Cplx>> nz_;  // (exponent, coefficient)
  Real abs_sum_;                           // sum of |coefficients|
  Real growth_;                            // max |c_n| / max(n,1)
};

// Precomputed data for a lift: the coset representative system of
// Gamma_0(N) \ SL(2,Z) and the vectors rho(g^{-1}) e_0, which do not depend
// on tau.
struct LiftContext {
  std::vector<ModularMatrix> reps;
  std::vector<CVec> rho_inv_e0;
};
LiftContext make_lift_context(const DiscriminantForm& df,
                              const PrecisionContext& ctx,
                              const std::vector<ModularMatrix>* reps = nullptr);

// S_L(f)(tau) = sum_{gamma in Gamma_0(N) \ SL2(Z)} (f|_k gamma)(tau)
//               rho(gamma^{-1}) e_0, as a value vector of length |D|.
CVec lift_eval(const SlashEvaluable& f, const DiscriminantForm& df,
               const LiftContext& lc, const Cplx& tau,
               const PrecisionContext& ctx);
CVec lift_eval(const SlashEvaluable& f, const DiscriminantForm& df,
               const Cplx& tau, const PrecisionContext& ctx);

// Fourier coefficients of every component of S_L(f) up to n_max (exponents
// n in e(n tau / N)), sampled on the horizontal line Im tau = v0.
VectorValuedForm lift_coefficients(const SlashEvaluable& f,
                                   const DiscriminantForm& df, long n_max,
                                   const PrecisionContext& ctx,
                                   Real* alias_estimate = nullptr,
                                   const Real& v0 = Real(1));

}  // namespace tl
