// arith.hpp -- elementary number theory and SL(2,Z) bookkeeping: Kronecker
// symbols, fundamental discriminants, Gamma_0(N) coset representatives,
// decomposition of modular matrices into S/T generator words, and reduction
// of points to the standard fundamental domain.
#pragma once

#include "thetalift/numerics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tl {

// Kronecker symbol (a|n), defined for all integers (GMP-backed).
int kronecker(const Int& a, const Int& n);
int kronecker(long a, long n);

// True iff D is a fundamental discriminant (D = 1 is excluded).
bool is_fundamental(long D);

// An odd negative fundamental discriminant together with the factorisation
// data the rest of the library keeps asking for.
struct FundamentalDiscriminant {
  long D = 0;                // the discriminant itself, D < 0, D odd
  std::vector<long> primes;  // distinct primes dividing |D|, ascending

  long abs_D() const { return -D; }
  int t() const { return static_cast<int>(primes.size()); }
  // Number of roots of unity in Q(sqrt(D)); 2 for every odd D < -3.
  int w_k() const { return D == -3 ? 6 : 2; }
};

// Validates D (negative, odd, fundamental) and factors |D|.
FundamentalDiscriminant make_fundamental(long D);

// chi_D(n) = (D|n), the quadratic character attached to D.
int chi_D(const FundamentalDiscriminant& disc, long n);

// 2x2 integer matrix of determinant 1.  Entries are 64-bit; products check
// for overflow via 128-bit intermediates.
struct ModularMatrix {
  long long a = 1, b = 0, c = 0, d = 1;
  long long det() const;
  std::string str() const;
  bool operator==(const ModularMatrix& o) const = default;
};

extern const ModularMatrix kIdentity;
extern const ModularMatrix kS;  // (0 -1; 1 0)
extern const ModularMatrix kT;  // (1 1; 0 1)

ModularMatrix mm_mul(const ModularMatrix& x, const ModularMatrix& y);
ModularMatrix mm_inv(const ModularMatrix& g);
ModularMatrix mm_T_pow(long long n);

// Moebius action and automorphy factor j(g, tau) = c*tau + d.
Cplx apply_mobius(const ModularMatrix& g, const Cplx& tau);
Cplx j_factor(const ModularMatrix& g, const Cplx& tau);

// A word in the generators: tokens are either S or T^n, multiplied
// left-to-right.  st_evaluate is the (test oracle) inverse of st_decompose.
struct STWord {
  struct Token {
    bool is_S = false;
    long long t_pow = 0;  // only meaningful when !is_S
  };
  std::vector<Token> tokens;
};

STWord st_decompose(const ModularMatrix& g);
ModularMatrix st_evaluate(const STWord& w);

// Right coset representatives for Gamma_0(N) \ SL(2,Z), one per point of
// P^1(Z/N).  Each coset is keyed by the lexicographically smallest pair
// (c mod N, d mod N) in its unit-scaling orbit, and the list is sorted by
// that key (so the identity coset, key (0,1), always comes first).
std::vector<ModularMatrix> coset_reps_gamma0(long N);
long gamma0_index(long N);  // N * prod_{p | N} (1 + 1/p)

// Moves tau into the closed standard fundamental domain
// {|tau| >= 1, |Re tau| <= 1/2}; returns the reduced point and the matrix
// gamma with gamma(tau) equal to it.  Comparisons at the boundary use the
// given tolerance.
struct FDReduction {
  Cplx tau;
  ModularMatrix gamma;
  int translations = 0;
  int inversions = 0;
};
FDReduction reduce_to_fundamental_domain(const Cplx& tau,
                                         double boundary_tol = 1e-12);

}  // namespace tl
