// numerics.cpp -- implementation of the arbitrary-precision analytic kernel.
#include "thetalift/numerics.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tl {

void PrecisionContext::activate() const {
  Real::default_precision(digits10());
}

Real PrecisionContext::eps() const {
  return pow(Real(2), -static_cast<int>(bits));
}

Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
Cplx operator*(const Cplx& a, const Cplx& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Cplx operator*(const Real& a, const Cplx& b) { return {a * b.re, a * b.im}; }
Cplx operator*(const Cplx& a, const Real& b) { return {a.re * b, a.im * b}; }
Cplx operator/(const Cplx& a, const Cplx& b) {
  Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Cplx operator/(const Cplx& a, const Real& b) { return {a.re / b, a.im / b}; }
Cplx& operator+=(Cplx& a, const Cplx& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}
Cplx& operator-=(Cplx& a, const Cplx& b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}
Cplx& operator*=(Cplx& a, const Cplx& b) {
  a = a * b;
  return a;
}
Cplx conj(const Cplx& z) { return {z.re, -z.im}; }
Real abs(const Cplx& z) { return hypot(z.re, z.im); }
Real norm_sq(const Cplx& z) { return z.re * z.re + z.im * z.im; }

Real pi_const() {
  // mpfr caches the constant internally, so repeated calls are cheap.
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real euler_gamma() {
  Real r;
  mpfr_const_euler(r.backend().data(), MPFR_RNDN);
  return r;
}

Cplx e_of(const Real& x) {
  Real xr = x - floor(x);  // reduce mod 1 before multiplying by 2*pi
  Real ang = 2 * pi_const() * xr;
  Real s, c;
  mpfr_sin_cos(s.backend().data(), c.backend().data(), ang.backend().data(),
               MPFR_RNDN);
  return {c, s};
}

Cplx e_of(const Cplx& z) {
  Real mag = exp(-2 * pi_const() * z.im);
  Cplx phase = e_of(z.re);
  return {mag * phase.re, mag * phase.im};
}

Cplx e_of_rational(const Int& num, const Int& den) {
  if (den == 0) throw std::domain_error("e_of_rational: zero denominator");
  Int d = den < 0 ? -den : den;
  Int n = den < 0 ? -num : num;
  n %= d;
  if (n < 0) n += d;
  return e_of(Real(n.str()) / Real(d.str()));
}

Cplx e_of_rational(const Rat& x) {
  return e_of_rational(numerator(x), denominator(x));
}

Real to_real(const Int& n) { return Real(n.str()); }

Real to_real(const Rat& q) {
  return Real(numerator(q).str()) / Real(denominator(q).str());
}

namespace {

// Legendre polynomial value and derivative at x, by the three-term recurrence.
void legendre_pd(unsigned n, const Real& x, Real& p, Real& dp) {
  Real p0 = 1, p1 = x;
  for (unsigned j = 2; j <= n; ++j) {
    Real p2 = ((2 * j - 1) * x * p1 - Real(j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1);
}

std::mutex g_gl_mutex;
std::map<std::pair<unsigned, unsigned>, GaussLegendre> g_gl_cache;

}  // namespace

const GaussLegendre& gauss_legendre(unsigned n) {
  if (n < 2) throw std::domain_error("gauss_legendre: need n >= 2");
  unsigned digits = Real::default_precision();
  std::lock_guard<std::mutex> lock(g_gl_mutex);
  auto key = std::make_pair(n, digits);
  auto it = g_gl_cache.find(key);
  if (it != g_gl_cache.end()) return it->second;

  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  const Real pi = pi_const();
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-style initial guess, then Newton at full precision.
    Real x = cos(pi * (Real(i) + Real(3) / 4) / (Real(n) + Real(1) / 2));
    Real p, dp;
    for (int iter = 0; iter < 9; ++iter) {
      legendre_pd(n, x, p, dp);
      x -= p / dp;
    }
    legendre_pd(n, x, p, dp);
    Real w = 2 / ((1 - x * x) * dp * dp);
    gl.nodes[i] = -x;  // ascending order
    gl.weights[i] = w;
    gl.nodes[n - 1 - i] = x;
    gl.weights[n - 1 - i] = w;
  }
  return g_gl_cache.emplace(key, std::move(gl)).first->second;
}

EtaValue dedekind_eta(const Cplx& tau, const PrecisionContext& ctx) {
  ctx.activate();
  if (tau.im < Real(1) / 2) {
    throw std::domain_error(
        "dedekind_eta: Im(tau) < 1/2; reduce tau towards the fundamental "
        "domain first");
  }
  const unsigned wb = ctx.working_bits();
  const double v = tau.im.convert_to<double>();
  // Terms needed so the neglected product factors perturb eta by < 2^-wb.
  const long M = static_cast<long>(wb * 0.6931471805599453 / (2 * M_PI * v)) + 4;

  const Cplx q = e_of(tau);
  Cplx prod(Real(1), Real(0));
  Cplx qn(Real(1), Real(0));
  for (long nidx = 1; nidx <= M; ++nidx) {
    qn *= q;
    prod *= (Cplx(Real(1), Real(0)) - qn);
  }
  Cplx lead = e_of(tau / Real(24));
  EtaValue out;
  out.value = lead * prod;
  out.log_abs = log(abs(out.value));
  // |log prod_{n>M} (1-q^n)| <= sum_{n>M} |q|^n / (1-|q|) = |q|^{M+1}/(1-|q|)^2.
  Real aq = abs(q);
  Real tb_log = pow(aq, static_cast<unsigned>(M + 1)) / ((1 - aq) * (1 - aq));
  out.log_abs_tail_bound = 2 * tb_log;
  out.tail_bound = 2 * tb_log * abs(out.value);
  return out;
}

std::vector<Cplx> extract_coefficients(
    const std::function<Cplx(const Cplx&)>& F, long N, long n_max,
    const Real& v0, const PrecisionContext& ctx, Real* alias_estimate) {
  ctx.activate();
  if (N < 1 || n_max < 0) {
    throw std::domain_error("extract_coefficients: need N >= 1, n_max >= 0");
  }
  if (v0 <= 0) throw std::domain_error("extract_coefficients: need v0 > 0");
  const long M = 4 * n_max + 16;

  // Sample one full period u in [0, N).  The samples are the expensive part
  // (each one may be a lift or theta evaluation), hence the parallel kernel.
  std::vector<Cplx> s(M);
  const Real Nr(N);
  if (ctx.parallel) {
#ifdef _OPENMP
    // An exception escaping an OpenMP region terminates the process, so
    // capture it and rethrow on the calling thread.
    std::exception_ptr err;
#pragma omp parallel
    {
      ctx.activate();
#pragma omp for schedule(static)
      for (long j = 0; j < M; ++j) {
        try {
          s[j] = F(Cplx(Nr * j / M, v0));
        } catch (...) {
#pragma omp critical(tl_extract_err)
          if (!err) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
#else
    for (long j = 0; j < M; ++j) s[j] = F(Cplx(Nr * j / M, v0));
#endif
  } else {
    for (long j = 0; j < M; ++j) s[j] = F(Cplx(Nr * j / M, v0));
  }

  // Roots of unity e(-j/M); then e(-n u_j / N) = e(-n j / M).
  std::vector<Cplx> omega(M);
  for (long j = 0; j < M; ++j) omega[j] = e_of_rational(Int(-j), Int(M));

  std::vector<Cplx> coeffs(n_max + 1);
  const Real two_pi_v0_over_N = 2 * pi_const() * v0 / Nr;
  for (long n = 0; n <= n_max; ++n) {
    Cplx acc;
    for (long j = 0; j < M; ++j) {
      acc += s[j] * omega[(n * j) % M];
    }
    coeffs[n] = acc * (exp(n * two_pi_v0_over_N) / M);
  }

  if (alias_estimate) {
    Real smax(0);
    for (const Cplx& sj : s) smax = max(smax, abs(sj));
    // Nearest aliased frequency sits M slots away; its weight at height v0
    // is suppressed by exp(-2*pi*(M - n_max)*v0/N) relative to the samples.
    *alias_estimate = smax * exp(-(two_pi_v0_over_N * (M - n_max))) * 4;
  }
  return coeffs;
}

std::vector<std::vector<Cplx>> extract_coefficients_multi(
    const std::function<std::vector<Cplx>(const Cplx&)>& F, long dim, long N,
    long n_max, const Real& v0, const PrecisionContext& ctx,
    Real* alias_estimate) {
  ctx.activate();
  if (dim < 1) throw std::domain_error("extract_coefficients_multi: dim < 1");
  if (N < 1 || n_max < 0) {
    throw std::domain_error("extract_coefficients_multi: need N >= 1, n_max >= 0");
  }
  if (v0 <= 0) throw std::domain_error("extract_coefficients_multi: need v0 > 0");
  const long M = 4 * n_max + 16;

  std::vector<std::vector<Cplx>> s(M);
  const Real Nr(N);
  if (ctx.parallel) {
#ifdef _OPENMP
    std::exception_ptr err;
#pragma omp parallel
    {
      ctx.activate();
#pragma omp for schedule(static)
      for (long j = 0; j < M; ++j) {
        try {
          s[j] = F(Cplx(Nr * j / M, v0));
        } catch (...) {
#pragma omp critical(tl_extract_err)
          if (!err) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
#else
    for (long j = 0; j < M; ++j) s[j] = F(Cplx(Nr * j / M, v0));
#endif
  } else {
    for (long j = 0; j < M; ++j) s[j] = F(Cplx(Nr * j / M, v0));
  }
  for (const auto& row : s) {
    if (static_cast<long>(row.size()) != dim) {
      throw std::logic_error("extract_coefficients_multi: sample size != dim");
    }
  }

  std::vector<Cplx> omega(M);
  for (long j = 0; j < M; ++j) omega[j] = e_of_rational(Int(-j), Int(M));

  std::vector<std::vector<Cplx>> coeffs(dim,
                                        std::vector<Cplx>(n_max + 1, Cplx{}));
  const Real two_pi_v0_over_N = 2 * pi_const() * v0 / Nr;
  for (long n = 0; n <= n_max; ++n) {
    Real growth = exp(n * two_pi_v0_over_N) / M;
    for (long k = 0; k < dim; ++k) {
      Cplx acc;
      for (long j = 0; j < M; ++j) {
        acc += s[j][k] * omega[(n * j) % M];
      }
      coeffs[k][n] = acc * growth;
    }
  }

  if (alias_estimate) {
    Real smax(0);
    for (const auto& row : s) {
      for (const Cplx& sj : row) smax = max(smax, abs(sj));
    }
    *alias_estimate = smax * exp(-(two_pi_v0_over_N * (M - n_max))) * 4;
  }
  return coeffs;
}

namespace {

// One u-column of the fundamental-domain integral: integrates h along the
// vertical segment {u} x [sqrt(1-u^2), 2^m] in geometric panels.
Cplx integrate_column(const std::function<Cplx(const Cplx&)>& h, const Real& u,
                      double top, unsigned nv, long* evals) {
  const GaussLegendre& gl = gauss_legendre(nv);
  Real vlow = sqrt(1 - u * u);
  std::vector<Real> bounds;
  bounds.push_back(vlow);
  for (double b = 2.0; b < top * 0.9999; b *= 2.0) bounds.push_back(Real(b));
  bounds.push_back(Real(top));
  Cplx col;
  for (size_t p = 0; p + 1 < bounds.size(); ++p) {
    const Real mid = (bounds[p] + bounds[p + 1]) / 2;
    const Real half = (bounds[p + 1] - bounds[p]) / 2;
    Cplx panel;
    for (unsigned l = 0; l < nv; ++l) {
      Real v = mid + half * gl.nodes[l];
      panel += gl.weights[l] * h(Cplx(u, v));
      if (evals) ++*evals;
    }
    col += panel * half;
  }
  return col;
}

Cplx quadrature_pass(const std::function<Cplx(const Cplx&)>& h, unsigned nu,
                     unsigned nv, double top, bool parallel,
                     const PrecisionContext& ctx, long* evals) {
  const GaussLegendre& glu = gauss_legendre(nu);
  std::vector<Cplx> cols(nu);
  std::vector<long> counts(nu, 0);
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
      ctx.activate();
#pragma omp for schedule(static)
      for (unsigned i = 0; i < nu; ++i) {
        Real u = glu.nodes[i] / 2;  // map [-1,1] -> [-1/2, 1/2]
        cols[i] = glu.weights[i] * integrate_column(h, u, top, nv, &counts[i]);
      }
    }
#else
    for (unsigned i = 0; i < nu; ++i) {
      Real u = glu.nodes[i] / 2;
      cols[i] = glu.weights[i] * integrate_column(h, u, top, nv, &counts[i]);
    }
#endif
  } else {
    for (unsigned i = 0; i < nu; ++i) {
      Real u = glu.nodes[i] / 2;
      cols[i] = glu.weights[i] * integrate_column(h, u, top, nv, &counts[i]);
    }
  }
  Cplx total = fixed_order_sum(cols);
  if (evals) {
    for (long c : counts) *evals += c;
  }
  return total / Real(2);  // du jacobian of the [-1,1] -> [-1/2,1/2] map
}

}  // namespace

QuadratureResult petersson_quadrature(const std::function<Cplx(const Cplx&)>& h,
                                      const Real& decay_c, const Real& decay_C,
                                      const PrecisionContext& ctx) {
  ctx.activate();
  if (decay_c <= 0) {
    throw std::domain_error(
        "petersson_quadrature: integrand must decay (decay_c > 0); the "
        "Petersson integral diverges otherwise");
  }
  // Choose the truncation height so the certified tail is far below the
  // quadrature error target, then round up to the panel grid.
  const Real tail_tol = pow(Real(2), -static_cast<int>(ctx.bits / 2));
  Real Tneed = log(max(decay_C, Real(1)) / (decay_c * tail_tol)) / decay_c;
  double T = std::max({ctx.height_T, 2.0, Tneed.convert_to<double>()});
  double top = 2.0;
  while (top < T) top *= 2.0;

  const unsigned nu = 2 * ctx.quad_nodes;
  const unsigned nv = ctx.quad_nodes;
  const unsigned nu2 = std::max(8u, (2 * nu) / 3) + 1;
  const unsigned nv2 = std::max(6u, (2 * nv) / 3) + 1;

  QuadratureResult out;
  long evals = 0;
  Cplx main_pass = quadrature_pass(h, nu, nv, top, ctx.parallel, ctx, &evals);
  Cplx check_pass = quadrature_pass(h, nu2, nv2, top, ctx.parallel, ctx, &evals);
  Real tail = decay_C * exp(-decay_c * Real(top)) / decay_c;
  out.value = main_pass;
  out.error = abs(main_pass - check_pass) + tail;
  out.height_used = top;
  out.evaluations = evals;
  return out;
}

Cplx fixed_order_sum(const std::vector<Cplx>& terms) {
  Cplx acc;
  for (const Cplx& t : terms) acc += t;
  return acc;
}

std::string real_to_string(const Real& x, const PrecisionContext& ctx) {
  // digits10() + 3 >= max_digits10 of the working precision, so the decimal
  // string reparses to the identical floating value (lossless round-trip)
  return x.str(ctx.digits10() + 3);
}

}  // namespace tl
