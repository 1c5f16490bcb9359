// numerics.hpp -- arbitrary-precision real/complex arithmetic and the
// analytic building blocks shared by all modules: e(x) = exp(2*pi*i*x),
// the Dedekind eta function, Fourier coefficient extraction from samples,
// and Gauss-Legendre quadrature over the modular fundamental domain.
#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tl {

using Real = boost::multiprecision::mpfr_float;    // variable precision
using Int = boost::multiprecision::mpz_int;        // exact integers
using Rat = boost::multiprecision::mpq_rational;   // exact rationals

// Precision and evaluation parameters threaded through every numeric routine.
// `bits` is the *target* accuracy; internally we work with guard bits on top.
struct PrecisionContext {
  unsigned bits = 128;
  unsigned quad_nodes = 24;  // Gauss-Legendre nodes per panel and direction
  double height_T = 12.0;    // minimum truncation height for cusp integrals
  bool parallel = true;      // use OpenMP kernels; false = serial reference

  unsigned working_bits() const { return bits + 64; }
  unsigned digits10() const {
    return static_cast<unsigned>(working_bits() * 0.30103) + 4;
  }
  // Sets the thread-local default mpfr precision.  Must be called on every
  // thread (the OpenMP kernels do this themselves on entry).
  void activate() const;
  Real eps() const;  // 2^(-bits)
};

// Complex numbers over Real.  boost's complex adaptors interact poorly with
// the variable-precision mpfr backend, so we keep an explicit pair.
struct Cplx {
  Real re, im;
  Cplx() : re(0), im(0) {}
  Cplx(Real r) : re(std::move(r)), im(0) {}
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Cplx(int r) : re(r), im(0) {}
  Cplx(long r) : re(r), im(0) {}
  Cplx(double r) : re(r), im(0) {}
};

Cplx operator+(const Cplx& a, const Cplx& b);
Cplx operator-(const Cplx& a, const Cplx& b);
Cplx operator-(const Cplx& a);
Cplx operator*(const Cplx& a, const Cplx& b);
Cplx operator*(const Real& a, const Cplx& b);
Cplx operator*(const Cplx& a, const Real& b);
Cplx operator/(const Cplx& a, const Cplx& b);
Cplx operator/(const Cplx& a, const Real& b);
Cplx& operator+=(Cplx& a, const Cplx& b);
Cplx& operator-=(Cplx& a, const Cplx& b);
Cplx& operator*=(Cplx& a, const Cplx& b);
Cplx conj(const Cplx& z);
Real abs(const Cplx& z);
Real norm_sq(const Cplx& z);

// Mathematical constants at the currently active precision.
Real pi_const();
Real euler_gamma();  // Euler-Mascheroni constant = -Gamma'(1)

// e(x) = exp(2*pi*i*x).  The real-argument overload reduces x mod 1 first.
Cplx e_of(const Real& x);
Cplx e_of(const Cplx& z);
// Exact rational angle e(num/den), reduced before evaluation.
Cplx e_of_rational(const Int& num, const Int& den);
Cplx e_of_rational(const Rat& x);

// Exact-to-float conversions at the active working precision.
Real to_real(const Int& n);
Real to_real(const Rat& q);

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration at
// the active working precision and cached per (n, precision).
struct GaussLegendre {
  std::vector<Real> nodes, weights;
};
const GaussLegendre& gauss_legendre(unsigned n);

// Dedekind eta(tau) = e(tau/24) * prod_{n>=1} (1 - e(n*tau)).
// Only valid well inside the upper half plane; callers are expected to move
// tau into (a neighbourhood of) the fundamental domain first, so we require
// Im(tau) >= 1/2 and throw std::domain_error otherwise.  `tail_bound` is a
// rigorous bound on the absolute truncation error of `value`, and
// `log_abs_tail_bound` bounds the truncation error of `log_abs`.
struct EtaValue {
  Cplx value;
  Real log_abs;
  Real tail_bound;
  Real log_abs_tail_bound;
};
EtaValue dedekind_eta(const Cplx& tau, const PrecisionContext& ctx);

// Recovers Fourier coefficients a_0..a_nmax of F(tau) = sum_n a_n e(n*tau/N)
// (n >= 0) from equispaced samples on the horizontal segment Im(tau) = v0.
// Uses M = 4*n_max + 16 samples across one period [0, N); exact for
// exponential polynomials of degree <= n_max up to roundoff, with the
// aliasing error (from frequencies >= M distance away) estimated into
// *alias_estimate when non-null.
std::vector<Cplx> extract_coefficients(
    const std::function<Cplx(const Cplx&)>& F, long N, long n_max,
    const Real& v0, const PrecisionContext& ctx, Real* alias_estimate = nullptr);

// Vector-valued variant: F returns `dim` components per sample and the
// result is one coefficient row per component.  Shares the sampling (the
// expensive part when each sample is a lift evaluation) across components.
std::vector<std::vector<Cplx>> extract_coefficients_multi(
    const std::function<std::vector<Cplx>(const Cplx&)>& F, long dim, long N,
    long n_max, const Real& v0, const PrecisionContext& ctx,
    Real* alias_estimate = nullptr);

// Integrates `h` over the standard fundamental domain of SL(2,Z), i.e.
// computes  int_F h(u + i v) du dv  where F = {|tau| >= 1, |u| <= 1/2}.
// The integrand must already contain every weight and measure factor.
// `decay_c`/`decay_C` certify |h(u+iv)| <= decay_C * exp(-decay_c * v) for
// v >= 1; they control the truncation height and the reported tail bound.
// The error estimate combines a node-refinement difference with the tail.
struct QuadratureResult {
  Cplx value;
  Real error;
  double height_used = 0.0;
  long evaluations = 0;
};
QuadratureResult petersson_quadrature(
    const std::function<Cplx(const Cplx&)>& h, const Real& decay_c,
    const Real& decay_C, const PrecisionContext& ctx);

// Deterministic fixed-order sum (used by both the serial and OpenMP kernels
// so that their results agree bit for bit).
Cplx fixed_order_sum(const std::vector<Cplx>& terms);

// Formats a Real as a decimal string with ctx-appropriate digits.
std::string real_to_string(const Real& x, const PrecisionContext& ctx);

}  // namespace tl
