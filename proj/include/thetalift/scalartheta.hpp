// scalartheta.hpp -- scalar theta series of ideal classes, their character
// combinations theta_psi, the genus Eisenstein series E_A, and numerical
// evaluation of truncated q-expansions with a rigorous tail bound.
//
// Coefficients are computed by exact integer lattice-point enumeration;
// character combinations are kept as exact cyclotomic numbers and collapse
// to complex floats only at evaluation time.
#pragma once

#include "thetalift/classgroup.hpp"
#include "thetalift/ideallat.hpp"

#include <string>
#include <vector>

namespace tl {

// A truncated q-expansion  f(tau) = sum_{n=0}^{n_max} c_n e(n tau / N).
// For integral scalar forms N = 1; vector-valued components use N = |D|.
struct QExpansion {
  long N = 1;
  std::vector<Cplx> coeffs;  // index n, 0 <= n <= n_max
  Rat weight = Rat(1);
  std::string meta;

  long n_max() const { return static_cast<long>(coeffs.size()) - 1; }
};

// Addition with lcm-merge of the exponent denominators; truncates to the
// shorter reach.  Scalar multiple keeps N.
QExpansion qexp_add(const QExpansion& f, const QExpansion& g);
QExpansion qexp_scale(const QExpansion& f, const Cplx& s);

// Exact representation numbers rho(n, a) = #{(x, y) : a x^2 + b x y + c y^2
// = n} of the (positive definite) form, n = 0..n_max.  rho(0) = 1.
struct RepNumbers {
  QuadForm form;
  std::vector<Int> rho;
};
RepNumbers rep_numbers(const QuadForm& f, long n_max, bool parallel = true);

// Serial reference enumeration, kept independent of the OpenMP kernel for
// equivalence testing and benchmarks.
std::vector<long long> rep_numbers_reference(const QuadForm& f, long n_max);

// theta_a(tau) = 1 + sum_{n >= 1} rho(n, a) e(n tau): weight-1 theta series
// of the class with index cls.
QExpansion theta_ideal(const ClassGroup& G, int cls, long n_max,
                       const PrecisionContext& ctx);

// theta_psi = (1/w_k) sum_[a] psi([a]) theta_a, exact in Q(zeta_m) with m
// the class group exponent, and as a complex QExpansion.
std::vector<CycQ> theta_psi_exact(const ClassGroup& G,
                                  const ClassCharacter& psi, long n_max);
QExpansion theta_psi(const ClassGroup& G, const ClassCharacter& psi,
                     long n_max, const PrecisionContext& ctx);

// Genus Eisenstein series E_A = (1/h_k) sum_[b] theta_{a b^2}, exact
// rational coefficients; A is the genus of the class with index cls.
std::vector<Rat> genus_eisenstein_exact(const ClassGroup& G, int cls,
                                        long n_max);
QExpansion genus_eisenstein(const ClassGroup& G, int cls, long n_max,
                            const PrecisionContext& ctx);

// Evaluate a truncated expansion at tau (Im tau > 0).  The tail bound uses
// the conservative coefficient growth |c_n| <= C n with C read off from the
// stored coefficients; callers decide whether the bound is acceptable.
struct EvalResult {
  Cplx value;
  Real tail_bound;
};
EvalResult evaluate(const QExpansion& f, const Cplx& tau,
                    const PrecisionContext& ctx);

}  // namespace tl
