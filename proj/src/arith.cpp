// arith.cpp -- implementation of the elementary arithmetic layer.
#include "thetalift/arith.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>

namespace tl {

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.backend().data(), n.backend().data());
}

int kronecker(long a, long n) { return kronecker(Int(a), Int(n)); }

namespace {

// Distinct prime factors by trial division (inputs here are tiny).
std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  if (n < 0) n = -n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool squarefree(long n) {
  if (n < 0) n = -n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return n != 0;
}

}  // namespace

bool is_fundamental(long D) {
  if (D == 1 || D == 0) return false;
  long m4 = ((D % 4) + 4) % 4;
  if (m4 == 1) return squarefree(D);
  if (m4 == 0) {
    long m = D / 4;
    long mm4 = ((m % 4) + 4) % 4;
    return squarefree(m) && (mm4 == 2 || mm4 == 3);
  }
  return false;
}

FundamentalDiscriminant make_fundamental(long D) {
  if (D >= 0) throw std::domain_error("make_fundamental: need D < 0");
  if ((D & 1) == 0) {
    throw std::domain_error("make_fundamental: need odd D (D = 1 mod 4)");
  }
  if (!is_fundamental(D)) {
    throw std::domain_error("make_fundamental: D is not fundamental");
  }
  FundamentalDiscriminant f;
  f.D = D;
  f.primes = prime_factors(-D);
  return f;
}

int chi_D(const FundamentalDiscriminant& disc, long n) {
  return kronecker(disc.D, n);
}

namespace {

long long checked_mul_add(long long x1, long long y1, long long x2,
                          long long y2) {
  __int128 r = static_cast<__int128>(x1) * y1 + static_cast<__int128>(x2) * y2;
  if (r > INT64_MAX || r < INT64_MIN) {
    throw std::overflow_error("ModularMatrix product overflows 64 bits");
  }
  return static_cast<long long>(r);
}

}  // namespace

long long ModularMatrix::det() const {
  return checked_mul_add(a, d, -b, c);
}

std::string ModularMatrix::str() const {
  return "[" + std::to_string(a) + " " + std::to_string(b) + "; " +
         std::to_string(c) + " " + std::to_string(d) + "]";
}

const ModularMatrix kIdentity{1, 0, 0, 1};
const ModularMatrix kS{0, -1, 1, 0};
const ModularMatrix kT{1, 1, 0, 1};

ModularMatrix mm_mul(const ModularMatrix& x, const ModularMatrix& y) {
  return {checked_mul_add(x.a, y.a, x.b, y.c),
          checked_mul_add(x.a, y.b, x.b, y.d),
          checked_mul_add(x.c, y.a, x.d, y.c),
          checked_mul_add(x.c, y.b, x.d, y.d)};
}

ModularMatrix mm_inv(const ModularMatrix& g) {
  // determinant 1, so the adjugate is the inverse
  return {g.d, -g.b, -g.c, g.a};
}

ModularMatrix mm_T_pow(long long n) { return {1, n, 0, 1}; }

Cplx apply_mobius(const ModularMatrix& g, const Cplx& tau) {
  Cplx num = Cplx(Real(g.a), Real(0)) * tau + Cplx(Real(g.b), Real(0));
  return num / j_factor(g, tau);
}

Cplx j_factor(const ModularMatrix& g, const Cplx& tau) {
  return Cplx(Real(g.c), Real(0)) * tau + Cplx(Real(g.d), Real(0));
}

STWord st_decompose(const ModularMatrix& g_in) {
  if (g_in.det() != 1) {
    throw std::domain_error("st_decompose: determinant must be 1");
  }
  STWord w;
  ModularMatrix g = g_in;
  // Euclidean descent on the lower-left entry: with n the nearest integer
  // to a/c we have g = T^n S g' where g' = S^{-1} T^{-n} g has strictly
  // smaller |c|.  Terminates at c = 0, i.e. g = +-T^b.
  while (g.c != 0) {
    long long n = std::llround(static_cast<double>(g.a) /
                               static_cast<double>(g.c));
    // Fix up the rounding exactly: want |a - n c| <= |c| / 2.
    while (std::llabs(g.a - (n + 1) * g.c) < std::llabs(g.a - n * g.c)) ++n;
    while (std::llabs(g.a - (n - 1) * g.c) < std::llabs(g.a - n * g.c)) --n;
    w.tokens.push_back({false, n});
    w.tokens.push_back({true, 0});
    // g' = S^{-1} T^{-n} g; S^{-1}(x y; z w) = (z w; -x -y).
    ModularMatrix gp{g.c, g.d, -(g.a - n * g.c), -(g.b - n * g.d)};
    g = gp;
  }
  if (g.a == 1) {
    if (g.b != 0 || w.tokens.empty()) w.tokens.push_back({false, g.b});
  } else {
    // g = -T^{-b'}: use -I = S^2.
    w.tokens.push_back({true, 0});
    w.tokens.push_back({true, 0});
    if (g.b != 0) w.tokens.push_back({false, -g.b});
  }
  return w;
}

ModularMatrix st_evaluate(const STWord& w) {
  ModularMatrix g = kIdentity;
  for (const auto& tok : w.tokens) {
    g = mm_mul(g, tok.is_S ? kS : mm_T_pow(tok.t_pow));
  }
  return g;
}

long gamma0_index(long N) {
  long idx = N;
  for (long p : prime_factors(N)) idx += idx / p;
  return idx;
}

std::vector<ModularMatrix> coset_reps_gamma0(long N) {
  if (N < 1) throw std::domain_error("coset_reps_gamma0: need N >= 1");
  if (N == 1) return {kIdentity};
  // Enumerate P^1(Z/N) = {(c:d) : gcd(c,d,N)=1} / (Z/N)^*; the canonical
  // label of a class is its lexicographically smallest member.
  std::vector<long> units;
  for (long u = 1; u < N; ++u) {
    if (std::gcd(u, N) == 1) units.push_back(u);
  }
  if (N == 1) units.push_back(0);  // Z/1: the single residue

  std::map<std::pair<long, long>, bool> seen;
  std::vector<std::pair<long, long>> labels;
  for (long c = 0; c < N; ++c) {
    for (long d = 0; d < N; ++d) {
      if (std::gcd(std::gcd(c, d), N) != 1 && N > 1) continue;
      std::pair<long, long> best{N, N};
      for (long u : units) {
        std::pair<long, long> cand{(u * c) % N, (u * d) % N};
        best = std::min(best, cand);
      }
      if (!seen[best]) {
        seen[best] = true;
        labels.push_back(best);
      }
    }
  }
  if (N == 1) labels = {{0, 0}};
  std::sort(labels.begin(), labels.end());

  std::vector<ModularMatrix> reps;
  reps.reserve(labels.size());
  for (auto [c, d] : labels) {
    // Lift (c,d) mod N to a coprime pair with small entries; scan the whole
    // box and keep the smallest |c0| + |d0| (small c keeps Im(g tau) usable
    // for downstream evaluation at transformed points).
    long long c0 = 0, d0 = 0;
    bool found = false;
    long best_score = 0;
    for (long i = -2; i <= 2; ++i) {
      for (long j = -2; j <= 2; ++j) {
        long long cc = c + static_cast<long long>(N) * i;
        long long dd = d + static_cast<long long>(N) * j;
        if (cc == 0 && dd == 0) continue;
        if (std::gcd(std::llabs(cc), std::llabs(dd)) == 1) {
          long score = static_cast<long>(std::llabs(cc) + std::llabs(dd));
          if (!found || score < best_score) {
            c0 = cc;
            d0 = dd;
            best_score = score;
            found = true;
          }
        }
      }
    }
    if (!found) throw std::logic_error("coset_reps_gamma0: no coprime lift");
    // Complete to det 1: a*d0 - b*c0 = 1 via the extended Euclid algorithm,
    // computing x, y with x*d0 + y*c0 = gcd(d0, c0) = 1.
    long long x = 1, y = 0;
    {
      long long r0 = d0, r1 = c0;
      long long x0 = 1, x1 = 0, y0 = 0, y1 = 1;
      while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long x2 = x0 - q * x1;
        long long y2 = y0 - q * y1;
        r0 = r1; r1 = r2;
        x0 = x1; x1 = x2;
        y0 = y1; y1 = y2;
      }
      if (r0 < 0) { r0 = -r0; x0 = -x0; y0 = -y0; }
      if (r0 != 1) throw std::logic_error("coset_reps_gamma0: lift not coprime");
      x = x0;
      y = y0;
    }
    ModularMatrix m{x, -y, c0, d0};
    if (m.det() != 1) throw std::logic_error("coset_reps_gamma0: bad lift");
    reps.push_back(m);
  }
  return reps;
}

FDReduction reduce_to_fundamental_domain(const Cplx& tau, double boundary_tol) {
  if (tau.im <= 0) {
    throw std::domain_error("reduce_to_fundamental_domain: Im(tau) <= 0");
  }
  FDReduction out;
  out.tau = tau;
  out.gamma = kIdentity;
  const Real tol(boundary_tol);
  for (int iter = 0; iter < 100000; ++iter) {
    // Center the real part in [-1/2, 1/2].
    Real nre = floor(out.tau.re + Real(1) / 2);
    if (nre != 0) {
      long long n = nre.convert_to<long long>();
      out.tau.re -= nre;
      out.gamma = mm_mul(mm_T_pow(-n), out.gamma);
      ++out.translations;
    }
    if (norm_sq(out.tau) < 1 - tol) {
      out.tau = apply_mobius(kS, out.tau);
      out.gamma = mm_mul(kS, out.gamma);
      ++out.inversions;
      continue;
    }
    break;
  }
  // Canonical boundary choices: Re = +1/2 -> -1/2, and on the unit circle
  // prefer Re <= 0.
  if (out.tau.re > Real(1) / 2 - tol) {
    out.tau.re -= 1;
    out.gamma = mm_mul(mm_T_pow(-1), out.gamma);
  }
  if (abs(norm_sq(out.tau) - 1) < tol && out.tau.re > tol) {
    out.tau = apply_mobius(kS, out.tau);
    out.gamma = mm_mul(kS, out.gamma);
    ++out.inversions;
  }
  return out;
}

}  // namespace tl
