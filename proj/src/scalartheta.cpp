#include "thetalift/scalartheta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tl {

QExpansion qexp_add(const QExpansion& f, const QExpansion& g) {
  QExpansion out;
  out.N = std::lcm(f.N, g.N);
  out.weight = f.weight;
  long sf = out.N / f.N, sg = out.N / g.N;
  // Keep only the range both summands cover.
  long reach = std::min(f.n_max() * sf, g.n_max() * sg);
  out.coeffs.assign(reach + 1, Cplx{});
  for (long n = 0; n <= f.n_max(); ++n) {
    if (n * sf <= reach) out.coeffs[n * sf] = out.coeffs[n * sf] + f.coeffs[n];
  }
  for (long n = 0; n <= g.n_max(); ++n) {
    if (n * sg <= reach) out.coeffs[n * sg] = out.coeffs[n * sg] + g.coeffs[n];
  }
  return out;
}

QExpansion qexp_scale(const QExpansion& f, const Cplx& s) {
  QExpansion out = f;
  for (auto& c : out.coeffs) c = c * s;
  return out;
}

namespace {

// Shared enumeration core.  For a reduced (or any positive definite) form,
// 4a Q = (2ax + by)^2 + |D| y^2 and 4c Q = (bx + 2cy)^2 + |D| x^2 bound the
// coefficient box for Q <= n_max.
void rep_bounds(const QuadForm& f, long n_max, long long& X, long long& Y) {
  long long absD = -f.disc();
  if (absD <= 0 || f.a <= 0) throw std::domain_error("rep_numbers: not definite");
  X = static_cast<long long>(
      std::floor(std::sqrt((4.0 * f.c * n_max) / absD))) + 1;
  Y = static_cast<long long>(
      std::floor(std::sqrt((4.0 * f.a * n_max) / absD))) + 1;
}

}  // namespace

std::vector<long long> rep_numbers_reference(const QuadForm& f, long n_max) {
  long long X, Y;
  rep_bounds(f, n_max, X, Y);
  std::vector<long long> rho(n_max + 1, 0);
  for (long long y = -Y; y <= Y; ++y) {
    for (long long x = -X; x <= X; ++x) {
      long long q = f.eval(x, y);
      if (q <= n_max) ++rho[q];
    }
  }
  return rho;
}

RepNumbers rep_numbers(const QuadForm& f, long n_max, bool parallel) {
  long long X, Y;
  rep_bounds(f, n_max, X, Y);
  std::vector<long long> rho(n_max + 1, 0);
#ifdef _OPENMP
#pragma omp parallel if (parallel)
  {
    std::vector<long long> local(n_max + 1, 0);
#pragma omp for schedule(static)
    for (long long y = -Y; y <= Y; ++y) {
      for (long long x = -X; x <= X; ++x) {
        long long q = f.eval(x, y);
        if (q <= n_max) ++local[q];
      }
    }
#pragma omp critical
    for (long n = 0; n <= n_max; ++n) rho[n] += local[n];
  }
#else
  (void)parallel;
  rho = rep_numbers_reference(f, n_max);
#endif
  RepNumbers out;
  out.form = f;
  out.rho.reserve(rho.size());
  for (long long r : rho) out.rho.push_back(Int(r));
  return out;
}

QExpansion theta_ideal(const ClassGroup& G, int cls, long n_max,
                       const PrecisionContext& ctx) {
  ctx.activate();
  RepNumbers rn = rep_numbers(G.classes().at(cls), n_max, ctx.parallel);
  QExpansion out;
  out.N = 1;
  out.weight = Rat(1);
  out.meta = "theta_ideal " + rn.form.str();
  out.coeffs.reserve(n_max + 1);
  for (const Int& r : rn.rho) out.coeffs.push_back(Cplx{to_real(r), Real(0)});
  return out;
}

std::vector<CycQ> theta_psi_exact(const ClassGroup& G,
                                  const ClassCharacter& psi, long n_max) {
  long m = psi.m;
  std::vector<CycQ> coeffs(n_max + 1, CycQ::zero(m));
  Rat inv_w = Rat(1) / G.disc().w_k();
  for (int cls = 0; cls < G.h(); ++cls) {
    CycQ val = inv_w * char_value_cyc(G, psi, cls);
    RepNumbers rn = rep_numbers(G.classes()[cls], n_max);
    for (long n = 0; n <= n_max; ++n) {
      coeffs[n] += Rat(rn.rho[n]) * val;
    }
  }
  return coeffs;
}

QExpansion theta_psi(const ClassGroup& G, const ClassCharacter& psi,
                     long n_max, const PrecisionContext& ctx) {
  ctx.activate();
  auto exact = theta_psi_exact(G, psi, n_max);
  QExpansion out;
  out.N = 1;
  out.weight = Rat(1);
  out.meta = "theta_psi";
  out.coeffs.reserve(exact.size());
  for (const CycQ& c : exact) out.coeffs.push_back(to_cplx(c));
  return out;
}

std::vector<Rat> genus_eisenstein_exact(const ClassGroup& G, int cls,
                                        long n_max) {
  std::vector<Rat> coeffs(n_max + 1, Rat(0));
  for (int b = 0; b < G.h(); ++b) {
    int acted = G.class_action(b, cls);
    RepNumbers rn = rep_numbers(G.classes()[acted], n_max);
    for (long n = 0; n <= n_max; ++n) coeffs[n] += Rat(rn.rho[n]);
  }
  for (auto& c : coeffs) c /= G.h();
  return coeffs;
}

QExpansion genus_eisenstein(const ClassGroup& G, int cls, long n_max,
                            const PrecisionContext& ctx) {
  ctx.activate();
  auto exact = genus_eisenstein_exact(G, cls, n_max);
  QExpansion out;
  out.N = 1;
  out.weight = Rat(1);
  out.meta = "genus_eisenstein";
  out.coeffs.reserve(exact.size());
  for (const Rat& c : exact) out.coeffs.push_back(Cplx{to_real(c), Real(0)});
  return out;
}

EvalResult evaluate(const QExpansion& f, const Cplx& tau,
                    const PrecisionContext& ctx) {
  ctx.activate();
  if (!(tau.im > 0)) throw std::domain_error("evaluate: Im tau <= 0");
  Cplx q1 = e_of(tau / Real(f.N));  // e(tau / N)
  // Horner in e(tau/N) from the top coefficient down.
  Cplx acc{};
  for (long n = f.n_max(); n >= 0; --n) {
    acc = acc * q1 + f.coeffs[n];
  }
  // Tail bound: |c_n| <= C n for the stored coefficients extrapolates to
  //   sum_{n > n_max} C n r^n = C r^{M+1} ((M+1)(1-r) + r) / (1-r)^2,
  // with r = |e(tau/N)| and M = n_max.
  Real C(0);
  for (long n = 0; n <= f.n_max(); ++n) {
    Real scale(std::max(n, 1L));
    Real candidate = abs(f.coeffs[n]) / scale;
    if (candidate > C) C = candidate;
  }
  Real r = abs(q1);
  Real M1 = Real(f.n_max() + 1);
  Real tail = C * pow(r, M1) * (M1 * (1 - r) + r) / ((1 - r) * (1 - r));
  EvalResult out;
  out.value = acc;
  out.tail_bound = tail;
  return out;
}

}  // namespace tl
