#include "thetalift/weilrep.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace tl {

namespace {

long mod_n(long long x, long n) {
  long r = static_cast<long>(x % n);
  return r < 0 ? r + n : r;
}

}  // namespace

Rat DiscriminantForm::q_of(long r) const {
  long num = mod_n(static_cast<long long>(A) * r % n * r, n);
  return Rat(num, static_cast<unsigned long>(n));
}

Rat DiscriminantForm::bilinear(long r, long s) const {
  long num = mod_n(2LL * A * mod_n(static_cast<long long>(r) * s, n), n);
  return Rat(num, static_cast<unsigned long>(n));
}

long DiscriminantForm::nq_num(long r) const {
  return mod_n(static_cast<long long>(A) * r % n * r, n);
}

DiscriminantForm build_discform(long D, long A) {
  DiscriminantForm df;
  df.disc = make_fundamental(D);
  df.n = df.disc.abs_D();
  if (A <= 0 || std::gcd(A, df.n) != 1) {
    throw std::domain_error("build_discform: need A > 0 coprime to |D|");
  }
  df.A = A;
  return df;
}

CMat mat_identity(long n) {
  CMat m(n, CVec(n, Cplx{}));
  for (long i = 0; i < n; ++i) m[i][i] = Cplx(1);
  return m;
}

CMat mat_mul(const CMat& a, const CMat& b) {
  long n = static_cast<long>(a.size());
  CMat out(n, CVec(n, Cplx{}));
  for (long i = 0; i < n; ++i) {
    for (long k = 0; k < n; ++k) {
      const Cplx& aik = a[i][k];
      for (long j = 0; j < n; ++j) {
        out[i][j] += aik * b[k][j];
      }
    }
  }
  return out;
}

CVec mat_vec(const CMat& a, const CVec& v) {
  long n = static_cast<long>(a.size());
  CVec out(n, Cplx{});
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) out[i] += a[i][j] * v[j];
  }
  return out;
}

CMat rho_T(const DiscriminantForm& df, const PrecisionContext& ctx) {
  ctx.activate();
  CMat m(df.n, CVec(df.n, Cplx{}));
  for (long r = 0; r < df.n; ++r) m[r][r] = e_of_rational(df.q_of(r));
  return m;
}

CMat rho_S(const DiscriminantForm& df, const PrecisionContext& ctx) {
  ctx.activate();
  long n = df.n;
  // Root-of-unity table e(k/n) and the phase e(-1/4)/sqrt(n) = -i/sqrt(n).
  std::vector<Cplx> zeta(n);
  for (long k = 0; k < n; ++k) zeta[k] = e_of_rational(Int(k), Int(n));
  Real inv_sqrt = 1 / sqrt(Real(n));
  Cplx phase{Real(0), -inv_sqrt};
  CMat m(n, CVec(n));
  for (long r = 0; r < n; ++r) {
    for (long s = 0; s < n; ++s) {
      // e(-(r,s)) = e(-2 A r s / n)
      long k = mod_n(-2LL * df.A * mod_n(static_cast<long long>(r) * s, n), n);
      m[r][s] = phase * zeta[k];
    }
  }
  return m;
}

namespace {

// Apply rho(T^p) (diagonal) in place.
void apply_T_pow(const DiscriminantForm& df, long long p, CVec& v) {
  for (long r = 0; r < df.n; ++r) {
    Rat angle = Rat(Int(p) * Int(df.nq_num(r)), Int(df.n));
    v[r] = v[r] * e_of_rational(angle);
  }
}

// Apply rho(S) (symmetric dense) out of place.
void apply_S(const DiscriminantForm& df, const std::vector<Cplx>& zeta,
             CVec& v) {
  long n = df.n;
  CVec out(n, Cplx{});
  for (long r = 0; r < n; ++r) {
    for (long s = 0; s < n; ++s) {
      long k = mod_n(-2LL * df.A * mod_n(static_cast<long long>(r) * s, n), n);
      out[r] += zeta[k] * v[s];
    }
  }
  Real inv_sqrt = 1 / sqrt(Real(n));
  Cplx phase{Real(0), -inv_sqrt};
  for (long r = 0; r < n; ++r) v[r] = phase * out[r];
}

CVec rho_word_apply_e0(const DiscriminantForm& df, const ModularMatrix& g,
                       const PrecisionContext& ctx, bool reversed) {
  ctx.activate();
  STWord w = st_decompose(g);
  std::vector<Cplx> zeta(df.n);
  for (long k = 0; k < df.n; ++k) zeta[k] = e_of_rational(Int(k), Int(df.n));
  CVec v(df.n, Cplx{});
  v[0] = Cplx(1);
  auto apply = [&](const STWord::Token& tok) {
    if (tok.is_S) {
      apply_S(df, zeta, v);
    } else {
      apply_T_pow(df, tok.t_pow, v);
    }
  };
  if (reversed) {
    for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) apply(*it);
  } else {
    for (const auto& tok : w.tokens) apply(tok);
  }
  return v;
}

}  // namespace

CMat rho(const DiscriminantForm& df, const ModularMatrix& g,
         const PrecisionContext& ctx) {
  ctx.activate();
  STWord w = st_decompose(g);
  CMat S = rho_S(df, ctx);
  CMat m = mat_identity(df.n);
  for (const auto& tok : w.tokens) {
    if (tok.is_S) {
      m = mat_mul(m, S);
    } else {
      // Right-multiplication by the diagonal rho(T)^p scales columns.
      for (long r = 0; r < df.n; ++r) {
        Rat angle = Rat(Int(tok.t_pow) * Int(df.nq_num(r)), Int(df.n));
        Cplx ph = e_of_rational(angle);
        for (long i = 0; i < df.n; ++i) m[i][r] = m[i][r] * ph;
      }
    }
  }
  return m;
}

CVec rho_apply_e0(const DiscriminantForm& df, const ModularMatrix& g,
                  const PrecisionContext& ctx) {
  // rho(g) e_0 = [rho(t_1) ... rho(t_k)] e_0: apply factors right to left.
  return rho_word_apply_e0(df, g, ctx, /*reversed=*/true);
}

CVec rho_row0(const DiscriminantForm& df, const ModularMatrix& g,
              const PrecisionContext& ctx) {
  // Row 0 of rho(g) is rho(g)^T e_0; the factors are symmetric, so the
  // transpose is the reversed product and we apply factors left to right.
  return rho_word_apply_e0(df, g, ctx, /*reversed=*/false);
}

int chi_L(const DiscriminantForm& df, const ModularMatrix& g) {
  if (g.c % df.n != 0) {
    throw std::domain_error("chi_L: matrix not in Gamma_0(N)");
  }
  return kronecker(df.disc.D, static_cast<long>(g.d));
}

std::vector<long> orthogonal_group(const DiscriminantForm& df) {
  std::vector<long> out;
  for (long u = 1; u < df.n; ++u) {
    if ((static_cast<long long>(u) * u) % df.n == 1) out.push_back(u);
  }
  return out;
}

std::vector<int> epsilon_signs(const DiscriminantForm& df) {
  std::vector<int> eps;
  for (long p : df.disc.primes) {
    // The p-part of P'/P is generated by n/p; collect N Q on it mod p.
    std::set<long> vals;
    long gen = df.n / p;
    for (long x = 0; x < p; ++x) {
      vals.insert(mod_n(df.nq_num(mod_n(static_cast<long long>(x) * gen, df.n)), p));
    }
    bool all_squares = true;
    for (long y = 1; y < p; ++y) {
      long sq = mod_n(static_cast<long long>(y) * y, p);
      if (!vals.count(sq)) all_squares = false;
    }
    eps.push_back(all_squares ? 1 : -1);
  }
  return eps;
}

long nu_count(const DiscriminantForm& df, long m) {
  long target = mod_n(m, df.n);
  long count = 0;
  for (long r = 0; r < df.n; ++r) {
    if (df.nq_num(r) == target) ++count;
  }
  return count;
}

VectorValuedForm symmetrize(const DiscriminantForm& df,
                            const VectorValuedForm& F) {
  if (static_cast<long>(F.components.size()) != df.n) {
    throw std::domain_error("symmetrize: component count != |D|");
  }
  auto units = orthogonal_group(df);
  VectorValuedForm out;
  out.D = F.D;
  out.weight = F.weight;
  out.components.resize(df.n);
  for (long nu = 0; nu < df.n; ++nu) {
    // sigma_u moves component mu to u mu; u is an involution, so component
    // nu of the sum collects F_{u nu}.
    QExpansion acc = F.components[mod_n(units[0] * nu, df.n)];
    for (size_t i = 1; i < units.size(); ++i) {
      acc = qexp_add(acc, F.components[mod_n(units[i] * nu, df.n)]);
    }
    out.components[nu] = acc;
  }
  return out;
}

Real support_violation(const DiscriminantForm& df, const VectorValuedForm& F) {
  Real worst(0);
  for (long mu = 0; mu < static_cast<long>(F.components.size()); ++mu) {
    long allowed = df.nq_num(mu);
    const QExpansion& f = F.components[mu];
    for (long n = 0; n <= f.n_max(); ++n) {
      if (mod_n(n, df.n) != allowed) {
        Real a = abs(f.coeffs[n]);
        if (a > worst) worst = a;
      }
    }
  }
  return worst;
}

QExpansionSlash::QExpansionSlash(QExpansion f_, Real max_tail_)
    : f(std::move(f_)), max_tail(std::move(max_tail_)), abs_sum_(0),
      growth_(0) {
  nz_.reserve(f.coeffs.size());
  for (long n = 0; n <= f.n_max(); ++n) {
    const Real a = abs(f.coeffs[n]);
    if (!(a > 0)) continue;
    nz_.emplace_back(n, f.coeffs[n]);
    abs_sum_ += a;
    Real candidate = a / Real(std::max(n, 1L));
    if (candidate > growth_) growth_ = candidate;
  }
}

namespace {

Cplx cplx_power(Cplx base, long e) {
  Cplx out{Real(1), Real(0)};
  while (e > 0) {
    if (e & 1) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

}  // namespace

Cplx QExpansionSlash::slash_value(const ModularMatrix& gamma, const Cplx& tau,
                                  const PrecisionContext& ctx) const {
  ctx.activate();
  const Cplx gt = apply_mobius(gamma, tau);
  if (!(gt.im > 0)) {
    throw std::domain_error("QExpansionSlash: Im gamma tau <= 0");
  }
  const Cplx q1 = e_of(gt / Real(f.N));
  const Real r = abs(q1);
  // Ascending sum over nonzero terms with incrementally maintained powers;
  // stop as soon as the remaining stored terms are certified below
  // max_tail/4.  |q1^n| = r^n, so |cur| * r bounds r^{n+1} cheaply.
  Cplx acc{};
  Cplx cur{Real(1), Real(0)};
  long prev_exp = 0;
  Real prefix(0);
  Real cut_tail(0);
  const Real target = max_tail / 4;
  for (std::size_t i = 0; i < nz_.size(); ++i) {
    const long gap = nz_[i].first - prev_exp;
    if (gap > 0 && gap <= 16) {
      for (long s = 0; s < gap; ++s) cur = cur * q1;
    } else if (gap > 0) {
      cur = cur * cplx_power(q1, gap);
    }
    prev_exp = nz_[i].first;
    acc += nz_[i].second * cur;
    prefix += abs(nz_[i].second);
    if ((i & 15u) == 15u && i + 1 < nz_.size()) {
      const Real remaining = abs_sum_ - prefix;
      const Real bound = remaining * abs(cur) * r;
      if (bound <= target) {
        cut_tail = bound;
        break;
      }
    }
  }
  // Extrapolated tail beyond the stored n_max, assuming |c_n| <= growth * n:
  //   sum_{n > M} growth * n * r^n
  //     = growth * r^{M+1} ((M+1)(1-r) + r) / (1-r)^2.
  const Real M1 = Real(f.n_max() + 1);
  const Real beyond =
      growth_ * pow(r, M1) * (M1 * (1 - r) + r) / ((1 - r) * (1 - r));
  if (cut_tail + beyond > max_tail) {
    throw std::domain_error("QExpansionSlash: truncation tail too large at "
                            "the transformed point");
  }
  const Cplx j = j_factor(gamma, tau);
  Cplx out = acc;
  for (long k = 0; k < weight(); ++k) out = out / j;
  return out;
}

long QExpansionSlash::weight() const {
  if (denominator(f.weight) != 1) {
    throw std::logic_error("QExpansionSlash: integral weight required");
  }
  return static_cast<long>(numerator(f.weight));
}

LiftContext make_lift_context(const DiscriminantForm& df,
                              const PrecisionContext& ctx,
                              const std::vector<ModularMatrix>* reps) {
  LiftContext lc;
  lc.reps = reps ? *reps : coset_reps_gamma0(df.n);
  lc.rho_inv_e0.reserve(lc.reps.size());
  for (const auto& g : lc.reps) {
    lc.rho_inv_e0.push_back(rho_apply_e0(df, mm_inv(g), ctx));
  }
  return lc;
}

CVec lift_eval(const SlashEvaluable& f, const DiscriminantForm& df,
               const LiftContext& lc, const Cplx& tau,
               const PrecisionContext& ctx) {
  ctx.activate();
  CVec out(df.n, Cplx{});
  for (size_t i = 0; i < lc.reps.size(); ++i) {
    Cplx fv = f.slash_value(lc.reps[i], tau, ctx);
    const CVec& col = lc.rho_inv_e0[i];
    for (long mu = 0; mu < df.n; ++mu) out[mu] += fv * col[mu];
  }
  return out;
}

CVec lift_eval(const SlashEvaluable& f, const DiscriminantForm& df,
               const Cplx& tau, const PrecisionContext& ctx) {
  LiftContext lc = make_lift_context(df, ctx);
  return lift_eval(f, df, lc, tau, ctx);
}

VectorValuedForm lift_coefficients(const SlashEvaluable& f,
                                   const DiscriminantForm& df, long n_max,
                                   const PrecisionContext& ctx,
                                   Real* alias_estimate, const Real& v0) {
  LiftContext lc = make_lift_context(df, ctx);
  auto sample = [&](const Cplx& tau) { return lift_eval(f, df, lc, tau, ctx); };
  auto rows = extract_coefficients_multi(sample, df.n, df.n, n_max, v0, ctx,
                                         alias_estimate);
  VectorValuedForm F;
  F.D = df.disc.D;
  F.weight = Rat(f.weight());
  F.components.resize(df.n);
  for (long mu = 0; mu < df.n; ++mu) {
    F.components[mu].N = df.n;
    F.components[mu].weight = F.weight;
    F.components[mu].coeffs = std::move(rows[mu]);
    F.components[mu].meta = "lift component " + std::to_string(mu);
  }
  return F;
}

}  // namespace tl
