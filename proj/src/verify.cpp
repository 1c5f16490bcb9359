// verify.cpp -- the acceptance criteria and the per-discriminant CLI
// verification suite.  Every configuration constant that appears here
// (discriminants, series lengths, precision bits, quadrature nodes, random
// seeds, tolerances) is pinned deliberately: the acceptance checks must be
// reproducible bit-for-bit across runs.
//
// Conventions used throughout:
//  * "comp units" are exponents n of e(n tau / |D|) in vector-valued
//    expansions; "scalar units" are integer exponents of q = e(tau) in the
//    Gamma_0(|D|) theta series.  The two meet at comp = |D| * scalar.
//  * Quadrature checks run at 128 bits / 20 Gauss-Legendre nodes; lifting
//    and Gamma_0(N) unfolding run at 96 bits / 16 nodes (their tolerances
//    are 1e-5..1e-8, far above either noise floor).
//  * Scalar theta series entering slashed evaluation are built to 9000
//    scalar terms (16000 for |D| > 30): the slash positions gamma tau drop
//    to heights ~1e-3, where shorter series fail the certified tail bound
//    of QExpansionSlash.

#include "thetalift/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace tl {

namespace {

// ---------------------------------------------------------------------------
// small helpers

std::string fr(const Real& x, unsigned digits = 3) { return x.str(digits); }

std::string fc(const Cplx& z, unsigned digits = 18) {
  return "(" + z.re.str(digits) + ", " + z.im.str(digits) + ")";
}

void note(CheckResult& r, const std::string& s) {
  if (!r.details.empty()) r.details += "; ";
  r.details += s;
}

void keep_max(Real& worst, const Real& candidate) {
  if (candidate > worst) worst = candidate;
}

PrecisionContext quad_context() {
  PrecisionContext ctx;
  ctx.bits = 128;
  ctx.quad_nodes = 20;
  return ctx;
}

PrecisionContext lift_context() {
  PrecisionContext ctx;
  ctx.bits = 96;
  ctx.quad_nodes = 16;
  return ctx;
}

// Converts exceptions thrown inside a check into a failing (not aborting)
// result, keeping whatever notes were appended before the throw.
CheckResult run_check(int id, const char* name,
                      const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.id = id;
  r.name = name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    note(r, std::string("exception: ") + e.what());
  }
  return r;
}

// Scalar theta length that keeps QExpansionSlash's certified tail below
// max_tail at the lowest transformed heights a check visits (~1e-3 for
// |D| <= 30, ~5e-4 for the larger test discriminants).
long slash_theta_len(long N) { return N <= 30 ? 9000 : 16000; }

// Conservative series reach the slashed expansion must have for the tail
// certificate to hold at the lowest transformed point visited when sampling
// on Re(tau) in [-u_max, u_max], Im(tau) = v0 through the given cosets.
long required_slash_reach(const std::vector<ModularMatrix>& reps, double u_max,
                          double v0, const Real& abs_sum, double max_tail) {
  double min_h = v0;  // identity coset
  for (const ModularMatrix& g : reps) {
    const double c = std::abs(static_cast<double>(g.c));
    if (c == 0) continue;
    const double d = std::abs(static_cast<double>(g.d));
    const double denom =
        (c * u_max + d) * (c * u_max + d) + c * c * v0 * v0;
    min_h = std::min(min_h, v0 / denom);
  }
  const double la = std::log(std::max(1.0, abs_sum.convert_to<double>()));
  const double need = (la + std::log(4.0 / max_tail)) / (2 * M_PI * min_h);
  return static_cast<long>(need) + 64;
}

// Component-exponent reach of theta expansions entering vv quadrature; at
// these lengths the series-truncation contribution sits far below every
// quadrature error estimate (measured: 3e-15 offset at 5|D| comp units,
// < 1e-24 from 15|D| on).
long quad_theta_len(long N) { return std::max(600L, 25 * (N + 1)); }

// ---------------------------------------------------------------------------
// criterion workers, parameterized by class group so the CLI verify command
// can run them for a single discriminant

// Criterion 1 core: reduced-form enumeration vs the Dirichlet class number
// formula (exact integers).
bool class_number_worker(CheckResult& r, long D, long expected) {
  const long enumerated = static_cast<long>(enumerate_reduced(D).size());
  const long formula = class_number_formula(D);
  const bool ok = enumerated == formula && (expected < 0 || enumerated == expected);
  std::string line = "D=" + std::to_string(D) + ": enumerated " +
                     std::to_string(enumerated) + ", formula " +
                     std::to_string(formula);
  if (expected >= 0) line += ", expected " + std::to_string(expected);
  if (!ok) line += " MISMATCH";
  note(r, line);
  return ok;
}

// Criterion 2 core: coefficient-matrix rank of {Theta_P(., h)} with the
// stability re-check at half the truncation (Thm 1.1(iv)).
bool rank_worker(CheckResult& r, const ClassGroup& G, long expected,
                 long n_max) {
  const ThetaSpace ts = theta_space(G, 0, n_max);
  const long want = expected >= 0 ? expected : ts.dim_formula;
  const bool ok = ts.rank == want && ts.rank_half == ts.rank &&
                  ts.dim_formula == want;
  note(r, "D=" + std::to_string(G.disc().D) + ": rank(n<=" +
              std::to_string(n_max) + ")=" + std::to_string(ts.rank) +
              ", rank(n<=" + std::to_string(n_max / 2) + ")=" +
              std::to_string(ts.rank_half) + ", (h+2^{t-1})/2=" +
              std::to_string(ts.dim_formula) +
              (ok ? "" : " MISMATCH"));
  return ok;
}

// Criterion 3 core: every component constant term of Theta_P(tau, psi) for
// psi != 1 vanishes exactly in Q(zeta_h).  Returns (#terms checked, all
// zero?).
std::pair<long, bool> cuspidality_worker(const ClassGroup& G) {
  long checked = 0;
  bool all_zero = true;
  const long h = G.h();
  for (int a = 0; a < h; ++a) {
    for (int psi = 1; psi < h; ++psi) {
      const auto rows = vv_theta_psi_exact(G, a, psi, 0);
      for (const auto& row : rows) {
        all_zero = all_zero && is_zero(row[0]);
        ++checked;
      }
    }
  }
  return {checked, all_zero};
}

// Criterion 4 core: |(Theta(psi), Theta(chi))| for basis pairs with chi not
// in {psi, conj(psi)}.  Returns the number of pairs tested (0 means the
// caller should mark the check skipped).
int orthogonality_worker(CheckResult& r, const ClassGroup& G, long len,
                         const PrecisionContext& ctx, bool& pass) {
  ctx.activate();
  const ThetaSpace ts = theta_space(G, 0, std::max(50L, G.disc().abs_D()));
  const Real tol(1e-6);
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < ts.basis_characters.size(); ++i) {
    for (size_t j = i + 1; j < ts.basis_characters.size(); ++j) {
      const int pi = ts.basis_characters[i];
      const int pj = ts.basis_characters[j];
      if (pj == pi || pj == char_conj_index(G, pi)) continue;
      pairs.emplace_back(pi, pj);
    }
  }
  if (pairs.empty()) return 0;
  std::vector<VectorValuedForm> forms(G.h());
  std::vector<bool> built(static_cast<size_t>(G.h()), false);
  auto form_of = [&](int psi) -> const VectorValuedForm& {
    if (!built[static_cast<size_t>(psi)]) {
      forms[static_cast<size_t>(psi)] = vv_theta_psi(G, 0, psi, len, ctx);
      built[static_cast<size_t>(psi)] = true;
    }
    return forms[static_cast<size_t>(psi)];
  };
  for (const auto& [pi, pj] : pairs) {
    const PeterssonValue p = petersson_vv(form_of(pi), form_of(pj), 1, ctx);
    const Real mag = abs(p.value);
    const bool ok = mag < tol;
    pass = pass && ok;
    note(r, "(psi=" + std::to_string(pi) + ", chi=" + std::to_string(pj) +
                "): |<Theta(psi), Theta(chi)>| = " + fr(mag) + " (est " +
                fr(p.error_estimate) + ")" + (ok ? "" : " FAIL"));
  }
  return static_cast<int>(pairs.size());
}

// One Prop 1.4 case: closed form vs quadrature.  tag "(i)" means the closed
// form is exactly zero and the quadrature magnitude is checked absolutely;
// the other cases compare relatively and report the measured ratio.  For
// "(ii)" the paper's printed prefactor -psi(a) is evaluated alongside the
// implemented -conj(psi(a)) (see petersson.hpp for the erratum discussion).
bool prop14_case(CheckResult& r, const ClassGroup& G, int psi, int chi,
                 int base, const char* tag, long len,
                 const PrecisionContext& ctx) {
  ctx.activate();
  const auto chars = characters(G);
  const PeterssonValue closed =
      closed_form_vv(G, chars[static_cast<size_t>(psi)],
                     chars[static_cast<size_t>(chi)], base, ctx);
  const VectorValuedForm F = vv_theta_psi(G, base, psi, len, ctx);
  const VectorValuedForm H = vv_theta_psi(G, base, chi, len, ctx);
  const PeterssonValue quad = petersson_vv(F, H, 1, ctx);
  std::string line = std::string(tag) + " D=" + std::to_string(G.disc().D) +
                     " psi=" + std::to_string(psi) + " chi=" +
                     std::to_string(chi) + " base=" + std::to_string(base);
  bool ok = false;
  if (!(abs(closed.value) > 0)) {
    const Real mag = abs(quad.value);
    ok = mag < Real(1e-6);
    line += ": closed exactly 0, |quad| = " + fr(mag) + ", tol 1e-6 abs";
  } else {
    const Real rel = abs(quad.value - closed.value) / abs(closed.value);
    const Cplx ratio = quad.value / closed.value;
    ok = rel < Real(1e-5);
    line += ": closed " + fc(closed.value) + ", quad " + fc(quad.value) +
            ", ratio " + fc(ratio, 6) + ", rel err " + fr(rel) +
            ", tol 1e-5 rel";
  }
  if (!ok) line += " FAIL";
  note(r, line);
  if (std::string(tag) == "(ii)") {
    const Cplx psi_a = char_value(G, chars[static_cast<size_t>(psi)], base);
    const Cplx printed = closed.value * psi_a * psi_a;
    const Real dev = abs(quad.value - printed) / abs(closed.value);
    note(r, std::string("    erratum report: implemented prefactor "
                        "-conj(psi(a)); the paper-printed -psi(a) would give ") +
                fc(printed, 6) + ", rel dev " + fr(dev) +
                " from quadrature (psi(a) = " + fc(psi_a, 6) + ")");
  }
  return ok;
}

// Criterion 6 core (Prop 6.2): S_P(theta_{ab^2}) = Theta_P^sym(., h), with
// no constant factor.  Evaluation agreement at n_taus pseudo-random points
// for every (a, h), plus coefficient agreement for exponents n <= 30 in
// e(n tau / |D|): by horizontal-line extraction for |D| <= 23, and through
// the coset functional R[kappa][nu] = sum_i rho(g_i^{-1})e0[kappa] *
// conj(rho(g_i^{-1})e0[nu]) applied to the exact theta counts for larger
// |D| (where extraction sampling would need impractically deep series); the
// per-coset carrier identity behind the functional route is itself checked
// numerically at the first sample point.
void prop62_worker(CheckResult& r, const ClassGroup& G, int n_taus,
                   const PrecisionContext& sctx) {
  sctx.activate();
  const long N = G.disc().abs_D();
  const long h = G.h();
  const long theta_len = slash_theta_len(N);
  const bool extraction = N <= 23;
  std::mt19937 rng(20260815u);
  auto unit = [&rng] { return static_cast<double>(rng()) / 4294967296.0; };
  std::vector<Cplx> taus;
  for (int i = 0; i < n_taus; ++i) {
    const double re = unit() - 0.5;
    const double im = 0.6 + 1.4 * unit();
    taus.push_back(Cplx{Real(re), Real(im)});
  }
  const Real tol(1e-8);
  Real worst_eval(0), worst_coeff(0), worst_alias(0), worst_id(0);
  for (int a = 0; a < h; ++a) {
    const DiscriminantForm df = discform_of_base(G, a);
    const LiftContext lc = make_lift_context(df, sctx);
    // functional-route matrix (only needed when extraction is off)
    std::vector<CVec> R;
    if (!extraction) {
      R.assign(static_cast<size_t>(N), CVec(static_cast<size_t>(N), Cplx{}));
      for (size_t i = 0; i < lc.reps.size(); ++i) {
        for (long k = 0; k < N; ++k) {
          for (long nu = 0; nu < N; ++nu) {
            R[static_cast<size_t>(k)][static_cast<size_t>(nu)] +=
                lc.rho_inv_e0[i][static_cast<size_t>(k)] *
                conj(lc.rho_inv_e0[i][static_cast<size_t>(nu)]);
          }
        }
      }
    }
    for (int hc = 0; hc < h; ++hc) {
      const QExpansion th =
          theta_ideal(G, G.class_action(hc, a), theta_len, sctx);
      const QExpansionSlash fs(th, Real(extraction ? 1e-14 : 1e-12));
      const VectorValuedForm SY = vv_theta_sym(G, a, hc, 1200, sctx);
      for (const Cplx& tau : taus) {
        const CVec lift = lift_eval(fs, df, lc, tau, sctx);
        for (long mu = 0; mu < N; ++mu) {
          keep_max(worst_eval,
                   abs(lift[static_cast<size_t>(mu)] -
                       evaluate(SY.components[static_cast<size_t>(mu)], tau,
                                sctx)
                           .value));
        }
      }
      if (extraction) {
        Real alias(0);
        const VectorValuedForm SF = lift_coefficients(fs, df, 30, sctx, &alias);
        keep_max(worst_alias, alias);
        for (long mu = 0; mu < N; ++mu) {
          for (long m = 0; m <= 30; ++m) {
            keep_max(worst_coeff,
                     abs(SF.components[static_cast<size_t>(mu)]
                             .coeffs[static_cast<size_t>(m)] -
                         SY.components[static_cast<size_t>(mu)]
                             .coeffs[static_cast<size_t>(m)]));
          }
        }
      } else {
        const VVTheta V = vv_theta(G, a, hc, 30);
        for (long k = 0; k < N; ++k) {
          for (long m = 0; m <= 30; ++m) {
            Cplx lhs{};
            for (long nu = 0; nu < N; ++nu) {
              lhs += R[static_cast<size_t>(k)][static_cast<size_t>(nu)] *
                     Cplx{to_real(V.counts[static_cast<size_t>(nu)]
                                          [static_cast<size_t>(m)]),
                          Real(0)};
            }
            keep_max(worst_coeff,
                     abs(lhs - SY.components[static_cast<size_t>(k)]
                                   .coeffs[static_cast<size_t>(m)]));
          }
        }
        // per-coset carrier identity at the first sample point
        const VVTheta V12 = vv_theta(G, a, hc, 1200);
        std::vector<Cplx> Fv(static_cast<size_t>(N));
        for (long nu = 0; nu < N; ++nu) {
          QExpansion comp;
          comp.N = N;
          comp.coeffs.assign(1201, Cplx{});
          for (long m = 0; m <= 1200; ++m) {
            comp.coeffs[static_cast<size_t>(m)] =
                Cplx{to_real(V12.counts[static_cast<size_t>(nu)]
                                        [static_cast<size_t>(m)]),
                     Real(0)};
          }
          Fv[static_cast<size_t>(nu)] = evaluate(comp, taus[0], sctx).value;
        }
        for (size_t i = 0; i < lc.reps.size(); ++i) {
          const Cplx left = fs.slash_value(lc.reps[i], taus[0], sctx);
          Cplx right{};
          for (long nu = 0; nu < N; ++nu) {
            right += conj(lc.rho_inv_e0[i][static_cast<size_t>(nu)]) *
                     Fv[static_cast<size_t>(nu)];
          }
          keep_max(worst_id, abs(left - right));
        }
      }
    }
  }
  r.pass = worst_eval < tol && worst_coeff < tol &&
           (extraction || worst_id < tol);
  note(r, "worst |S_P(theta_{ab^2})(tau) - Theta^sym(tau, h)| over " +
              std::to_string(h * h) + " (a,h) pairs x " +
              std::to_string(n_taus) + " taus x " + std::to_string(N) +
              " components = " + fr(worst_eval));
  if (extraction) {
    note(r, "worst coefficient deviation (extraction at Im tau = 1, "
            "exponents n <= 30 in e(n tau/" +
                std::to_string(N) + ")) = " + fr(worst_coeff) +
                ", alias est " + fr(worst_alias));
  } else {
    note(r, "worst coefficient deviation (coset functional on exact counts, "
            "n <= 30) = " +
                fr(worst_coeff) + ", per-coset carrier identity residual " +
                fr(worst_id));
  }
  note(r, "tol 1e-8 absolute, no constant factor applied");
}

// Criterion 7 core (Thm Lift0): the component-0 functional of the lift.
// R0[nu] = sum_i rho(g_i^{-1})e0[0] conj(rho(g_i^{-1})e0[nu]) collapses the
// coset sum; the theorem is equivalent to R0 = nu * delta_0, which is
// enumerated here and then applied to exact theta counts for the
// coefficient comparison n <= 50 (scalar units).  The carrier identity
// behind that collapse is checked per coset at a test point, and the
// theorem statement itself is evaluated directly at three points.
void lift0_worker(CheckResult& r, const ClassGroup& G, long expect_nu,
                  const PrecisionContext& ctx) {
  ctx.activate();
  const long N = G.disc().abs_D();
  const long h = G.h();
  const DiscriminantForm df = discform_of_base(G, 0);
  const LiftContext lc = make_lift_context(df, ctx);
  CVec R0(static_cast<size_t>(N), Cplx{});
  for (size_t i = 0; i < lc.reps.size(); ++i) {
    for (long nu = 0; nu < N; ++nu) {
      R0[static_cast<size_t>(nu)] +=
          lc.rho_inv_e0[i][0] * conj(lc.rho_inv_e0[i][static_cast<size_t>(nu)]);
    }
  }
  Real off(0);
  for (long nu = 1; nu < N; ++nu) keep_max(off, abs(R0[static_cast<size_t>(nu)]));
  const long nu_enum = std::lround(R0[0].re.convert_to<double>());
  const Real dev0 = abs(R0[0] - Cplx{Real(nu_enum), Real(0)});
  const long orth = static_cast<long>(orthogonal_group(df).size());
  const int t = G.disc().t();
  const long two_t = 1L << t;
  const long paper_remark = 1L << (t - 1);

  // f = g_{ab^2} = theta_{ab^2} - E_A with a principal, b the first
  // nonprincipal class (for h = 1 the function is identically zero and the
  // coefficient identity is vacuous; nu is still enumerated).
  const int hc = h > 1 ? 1 : 0;
  const int acted = G.class_action(hc, 0);
  const auto fam = vv_theta_family(G, 0, 50 * N);
  const QExpansion thf = theta_ideal(G, acted, 50, ctx);
  const QExpansion EA = genus_eisenstein(G, acted, 50, ctx);
  Real worst_support(0), worst_off_support(0);
  for (long m = 0; m <= 50 * N; ++m) {
    Cplx lift0{};
    for (long nu = 0; nu < N; ++nu) {
      Int num = fam[static_cast<size_t>(hc)]
                    .counts[static_cast<size_t>(nu)][static_cast<size_t>(m)] *
                h;
      for (int h2 = 0; h2 < h; ++h2) {
        num -= fam[static_cast<size_t>(h2)]
                   .counts[static_cast<size_t>(nu)][static_cast<size_t>(m)];
      }
      lift0 += R0[static_cast<size_t>(nu)] *
               Cplx{to_real(num) / Real(h), Real(0)};
    }
    if (m % N == 0) {
      const size_t n = static_cast<size_t>(m / N);
      const Cplx expect =
          Cplx{Real(nu_enum), Real(0)} * (thf.coeffs[n] - EA.coeffs[n]);
      keep_max(worst_support, abs(lift0 - expect));
    } else {
      keep_max(worst_off_support, abs(lift0));
    }
  }

  // per-coset carrier identity and direct evaluations of the theorem
  const long theta_len = slash_theta_len(N);
  const QExpansion thf9 = theta_ideal(G, acted, theta_len, ctx);
  const QExpansion EA9 = genus_eisenstein(G, acted, theta_len, ctx);
  const QExpansion g9 = qexp_add(thf9, qexp_scale(EA9, Cplx{Real(-1), Real(0)}));
  const QExpansionSlash gs(g9, Real(1e-12));
  const auto fam12 = vv_theta_family(G, 0, 1200);
  const Cplx tau0{Real(0.31), Real(0.83)};
  std::vector<Cplx> Fv(static_cast<size_t>(N));
  for (long nu = 0; nu < N; ++nu) {
    QExpansion comp;
    comp.N = N;
    comp.coeffs.assign(1201, Cplx{});
    for (long m = 0; m <= 1200; ++m) {
      Int num = fam12[static_cast<size_t>(hc)]
                    .counts[static_cast<size_t>(nu)][static_cast<size_t>(m)] *
                h;
      for (int h2 = 0; h2 < h; ++h2) {
        num -= fam12[static_cast<size_t>(h2)]
                   .counts[static_cast<size_t>(nu)][static_cast<size_t>(m)];
      }
      comp.coeffs[static_cast<size_t>(m)] =
          Cplx{to_real(num) / Real(h), Real(0)};
    }
    Fv[static_cast<size_t>(nu)] = evaluate(comp, tau0, ctx).value;
  }
  Real worst_id(0);
  for (size_t i = 0; i < lc.reps.size(); ++i) {
    const Cplx left = gs.slash_value(lc.reps[i], tau0, ctx);
    Cplx right{};
    for (long nu = 0; nu < N; ++nu) {
      right += conj(lc.rho_inv_e0[i][static_cast<size_t>(nu)]) *
               Fv[static_cast<size_t>(nu)];
    }
    keep_max(worst_id, abs(left - right));
  }
  Real worst_direct(0);
  const Cplx test_taus[3] = {Cplx{Real(0.31), Real(0.83)},
                             Cplx{Real(-0.18), Real(1.24)},
                             Cplx{Real(0.05), Real(0.71)}};
  for (const Cplx& tau : test_taus) {
    const CVec lv = lift_eval(gs, df, lc, tau, ctx);
    const Cplx fv = evaluate(g9, tau, ctx).value;
    keep_max(worst_direct, abs(lv[0] - Cplx{Real(nu_enum), Real(0)} * fv));
  }

  const Real tol(1e-8);
  const Real struct_tol(1e-25);
  r.pass = dev0 < struct_tol && off < struct_tol && nu_enum == orth &&
           (expect_nu < 0 || nu_enum == expect_nu) && worst_support < tol &&
           worst_off_support < tol && worst_id < tol && worst_direct < tol;
  note(r, "nu enumerated = " + std::to_string(nu_enum) + " = |O(L'/L)| = " +
              std::to_string(orth) + " = 2^t (t=" + std::to_string(t) +
              "); the paper's 2^{t-1} remark gives " +
              std::to_string(paper_remark) +
              (paper_remark == nu_enum
                   ? " (matches)"
                   : " -- tested, does NOT match (reported, not assumed)") +
              "; theorem constant N/|L'/L| = " + std::to_string(N) + "/" +
              std::to_string(N) + " = 1");
  (void)two_t;
  note(r, "R0 = nu*delta_0 to " + fr(dev0 > off ? dev0 : off) +
              " (structural tol 1e-25)");
  note(r, "coefficients n <= 50: worst |lift_0(" + std::to_string(N) +
              "n) - nu*g(n)| = " + fr(worst_support) + ", off-support max " +
              fr(worst_off_support) + (h == 1 ? " (g = 0 for h = 1: vacuous)"
                                              : ""));
  note(r, "per-coset carrier identity residual " + fr(worst_id) +
              ", direct lift evaluations (3 taus) residual " +
              fr(worst_direct) + "; tol 1e-8");
}

// Criterion 8 core (Prop 5.3 adjointness): (S_L(f), F) = (f, F_0) with
// f = w_k theta_chi and F = Theta_P(., psi), psi = chi = the first
// character.  Left side: lift coefficients extracted on Im tau = 1 paired
// by vv quadrature; right side: Gamma_0(N) coset-unfolded quadrature
// against the long component-0 expansion of F.
void adjoint_worker(CheckResult& r, const ClassGroup& G,
                    const PrecisionContext& sctx) {
  sctx.activate();
  const long N = G.disc().abs_D();
  const auto chars = characters(G);
  const int w = G.disc().w_k();
  const QExpansion f = qexp_scale(theta_psi(G, chars[1], slash_theta_len(N), sctx),
                                  Cplx{Real(w), Real(0)});
  const QExpansionSlash fs(f, Real(1e-12));
  const DiscriminantForm df = discform_of_base(G, 0);
  // Extraction depth 5|D|: the recovery of coefficient m amplifies sample
  // noise by exp(2 pi m / |D|), so the depth must stay well below
  // |D| * (working bits) * log(2) / (2 pi); at 5|D| the lifted coefficients
  // are clean to ~1e-34 while the pairing's own truncation error from the
  // finite expansion is ~3e-15 relative, far below the 1e-5 tolerance.
  const VectorValuedForm SF = lift_coefficients(fs, df, 5 * N, sctx);
  const VectorValuedForm F = vv_theta_psi(G, 0, 1, quad_theta_len(N), sctx);
  const PeterssonValue lhs = petersson_vv(SF, F, 1, sctx);
  const QExpansion F0 = vv_theta_psi(G, 0, 1, 600 * N, sctx).components[0];
  const PeterssonValue rhs = petersson_scalar_gamma0(f, F0, N, 1, sctx);
  const Real rel = abs(lhs.value - rhs.value) / abs(rhs.value);
  r.pass = rel < Real(1e-5);
  note(r, "(S_L(f), F) = " + fc(lhs.value) + " (est " +
              fr(lhs.error_estimate) + ")");
  note(r, "(f, F_0) = " + fc(rhs.value) + " (est " + fr(rhs.error_estimate) +
              ")");
  note(r, "rel diff " + fr(rel) + ", tol 1e-5; f = w_k theta_chi, chi = "
          "character 1 (order " +
              std::to_string(char_order(G, 1)) + "), F = Theta_P(., chi)");
}

// Criterion 9 core: (theta_chi, theta_chi) via Cor 6.5's closed form, via
// Gamma_0(N) quadrature, and via Cor 6.4 from the symmetrized vv norm with
// the bookkeeping factor w_k^2 sum_{chi'^2 = psi} (1 + conj(chi'^2)(a)).
void three_ways_worker(CheckResult& r, const ClassGroup& G,
                       const PrecisionContext& ctx,
                       const PrecisionContext& sctx, long gamma0_len) {
  ctx.activate();
  const long N = G.disc().abs_D();
  const auto chars = characters(G);
  const PeterssonValue A = closed_form_scalar(G, chars[1], ctx);
  sctx.activate();
  const QExpansion th = theta_psi(G, chars[1], gamma0_len, sctx);
  const PeterssonValue B = petersson_scalar_gamma0(th, th, N, 1, sctx);
  ctx.activate();
  const int psi = char_square_index(G, 1);
  const DiscriminantForm df = discform_of_base(G, 0);
  const VectorValuedForm Tp = vv_theta_psi(G, 0, psi, quad_theta_len(N), ctx);
  const VectorValuedForm Ts = symmetrize(df, Tp);
  const PeterssonValue vvn = petersson_vv(Ts, Ts, 1, ctx);
  Cplx denom{};
  int solutions = 0;
  for (int j = 0; j < G.h(); ++j) {
    if (char_square_index(G, j) == psi) {
      denom += Cplx{Real(1), Real(0)} + conj(char_value(G, chars[static_cast<size_t>(psi)], 0));
      ++solutions;
    }
  }
  const int w = G.disc().w_k();
  const Cplx C = vvn.value / (Cplx{Real(w * w), Real(0)} * denom);
  const Real relAB = abs(A.value - B.value) / abs(A.value);
  const Real relAC = abs(A.value - C) / abs(A.value);
  const Real relBC = abs(B.value - C) / abs(B.value);
  Real worst = relAB;
  keep_max(worst, relAC);
  keep_max(worst, relBC);
  r.pass = worst < Real(1e-5);
  note(r, "closed form (Cor 6.5):      " + fc(A.value));
  note(r, "Gamma_0(" + std::to_string(N) + ") quadrature:   " + fc(B.value) +
              " (est " + fr(B.error_estimate) + ")");
  note(r, "vv norm / " + fc(Cplx{Real(w * w), Real(0)} * denom, 3) +
              " (Cor 6.4, " + std::to_string(solutions) +
              " solution(s) of chi'^2 = psi): " + fc(C));
  note(r, "pairwise rel diffs " + fr(relAB) + ", " + fr(relAC) + ", " +
              fr(relBC) + ", tol 1e-5");
}

// Criterion 10 core: the Weil representation relations for one
// discriminant form.
bool weil_worker(CheckResult& r, long D, const PrecisionContext& ctx) {
  ctx.activate();
  const DiscriminantForm df = build_discform(D, 1);
  const long n = df.n;
  const CMat S = rho_S(df, ctx);
  const CMat T = rho_T(df, ctx);
  auto dev_mat = [n](const CMat& A, const CMat& B) {
    Real worst(0);
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        keep_max(worst, abs(A[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                            B[static_cast<size_t>(i)][static_cast<size_t>(j)]));
      }
    }
    return worst;
  };
  const CMat I = mat_identity(n);
  const CMat S2 = mat_mul(S, S);
  const Real d_s4 = dev_mat(mat_mul(S2, S2), I);
  const CMat ST = mat_mul(S, T);
  const Real d_braid = dev_mat(mat_mul(mat_mul(ST, ST), ST), S2);
  CMat Sd(static_cast<size_t>(n), CVec(static_cast<size_t>(n)));
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      Sd[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          conj(S[static_cast<size_t>(j)][static_cast<size_t>(i)]);
    }
  }
  const Real d_unit = dev_mat(mat_mul(S, Sd), I);
  Real d_tdiag(0);
  for (long i = 0; i < n; ++i) {
    keep_max(d_tdiag,
             abs(abs(T[static_cast<size_t>(i)][static_cast<size_t>(i)]) - 1));
  }
  // homomorphism on 20 pseudo-random pairs (fixed seed per discriminant)
  std::mt19937 rng(73911u);
  auto word = [&rng]() {
    ModularMatrix g = mm_T_pow(static_cast<long long>(rng() % 9) - 4);
    g = mm_mul(g, kS);
    g = mm_mul(g, mm_T_pow(static_cast<long long>(rng() % 9) - 4));
    g = mm_mul(g, kS);
    g = mm_mul(g, mm_T_pow(static_cast<long long>(rng() % 9) - 4));
    return g;
  };
  Real d_hom(0);
  for (int k = 0; k < 20; ++k) {
    const ModularMatrix g1 = word();
    const ModularMatrix g2 = word();
    keep_max(d_hom, dev_mat(rho(df, mm_mul(g1, g2), ctx),
                            mat_mul(rho(df, g1, ctx), rho(df, g2, ctx))));
  }
  Real worst = d_s4;
  keep_max(worst, d_braid);
  keep_max(worst, d_unit);
  keep_max(worst, d_tdiag);
  keep_max(worst, d_hom);
  const bool ok = worst < Real(1e-20);
  note(r, "D=" + std::to_string(D) + ": S^4=I " + fr(d_s4) +
              ", (ST)^3=S^2 " + fr(d_braid) + ", S unitary " + fr(d_unit) +
              ", |T_mumu|=1 " + fr(d_tdiag) + ", homomorphism (20 pairs) " +
              fr(d_hom) + (ok ? "" : " FAIL"));
  return ok;
}

// Criterion 11 core: eta special values, periodicity, CM tail bounds.
void eta_worker(CheckResult& r, const std::vector<long>& discs,
                const PrecisionContext& ctx) {
  ctx.activate();
  const EtaValue e2i = dedekind_eta(Cplx{Real(0), Real(2)}, ctx);
  const EtaValue ei2 = dedekind_eta(Cplx{Real(0), Real(1) / Real(2)}, ctx);
  const Real d1 = abs(abs(e2i.value) - abs(ei2.value) / sqrt(Real(2)));
  Real d2(0);
  const Cplx pts[2] = {Cplx{Real(0.37), Real(0.9)},
                       Cplx{Real(-0.23), Real(1.7)}};
  for (const Cplx& tau : pts) {
    const Cplx shifted{tau.re + Real(1), tau.im};
    const Cplx lhs = dedekind_eta(shifted, ctx).value;
    const Cplx rhs = e_of(Real(1) / Real(24)) * dedekind_eta(tau, ctx).value;
    keep_max(d2, abs(lhs - rhs));
  }
  Real d3(0);
  long classes = 0;
  for (long D : discs) {
    const ClassGroup G(make_fundamental(D));
    for (int c = 0; c < G.h(); ++c) {
      const EtaValue ev = dedekind_eta(G.cm_point(c, ctx), ctx);
      keep_max(d3, ev.tail_bound);
      keep_max(d3, ev.log_abs_tail_bound);
      ++classes;
    }
  }
  const Real tol(1e-30);
  r.pass = d1 < tol && d2 < tol && d3 < tol;
  note(r, "| |eta(2i)| - |eta(i/2)|/sqrt(2) | = " + fr(d1));
  note(r, "max |eta(tau+1) - e(1/24) eta(tau)| = " + fr(d2) +
              " (2 sample points)");
  note(r, "max CM-point eta tail bound over " + std::to_string(classes) +
              " classes = " + fr(d3));
  note(r, "tol 1e-30 at 128 bits");
}

// Criterion 12 core: component 0 of Theta_P(., h) equals the scalar theta
// series of the acted class [h^2 a], exact integers, scalar n <= 50.
std::pair<long, bool> exactness_worker(CheckResult& r, const ClassGroup& G) {
  const long N = G.disc().abs_D();
  const long h = G.h();
  long pairs = 0;
  bool all_ok = true;
  for (int a = 0; a < h; ++a) {
    const auto fam = vv_theta_family(G, a, 50 * N);
    for (int hc = 0; hc < h; ++hc) {
      const RepNumbers rn =
          rep_numbers(G.classes()[static_cast<size_t>(G.class_action(hc, a))], 50);
      bool ok = true;
      for (long m = 0; m <= 50 * N; ++m) {
        const Int& c = fam[static_cast<size_t>(hc)].counts[0][static_cast<size_t>(m)];
        if (m % N == 0) {
          ok = ok && (c == rn.rho[static_cast<size_t>(m / N)]);
        } else {
          ok = ok && (c == 0);
        }
      }
      all_ok = all_ok && ok;
      ++pairs;
      if (!ok) {
        note(r, "MISMATCH at D=" + std::to_string(G.disc().D) + " a=" +
                    std::to_string(a) + " h=" + std::to_string(hc));
      }
    }
  }
  return {pairs, all_ok};
}

}  // namespace

// ---------------------------------------------------------------------------
// the twelve pinned acceptance criteria

CheckResult check_class_numbers() {
  return run_check(
      1, "class numbers h(D) vs Dirichlet formula oracle", [](CheckResult& r) {
        const long discs[] = {-7, -15, -23, -47, -71};
        const long expected[] = {1, 2, 3, 5, 7};
        r.pass = true;
        for (int i = 0; i < 5; ++i) {
          r.pass = class_number_worker(r, discs[i], expected[i]) && r.pass;
        }
        note(r, "exact integer equality");
      });
}

CheckResult check_dimension_formula() {
  return run_check(
      2, "dimension formula: rank of {Theta_P(., h)} (Thm 1.1(iv))",
      [](CheckResult& r) {
        const long discs[] = {-23, -15, -47};
        const long expected[] = {2, 2, 3};
        r.pass = true;
        for (int i = 0; i < 3; ++i) {
          const ClassGroup G(make_fundamental(discs[i]));
          r.pass = rank_worker(r, G, expected[i], 50) && r.pass;
        }
        note(r, "exact rational rank; stability between n_max 25 and 50");
      });
}

CheckResult check_cuspidality() {
  return run_check(
      3, "cuspidality: constant terms of Theta_P(tau, psi), psi != 1",
      [](CheckResult& r) {
        long checked = 0;
        bool all_zero = true;
        for (long D : {-7L, -15L, -23L, -47L, -71L}) {
          const ClassGroup G(make_fundamental(D));
          const auto [c, ok] = cuspidality_worker(G);
          checked += c;
          all_zero = all_zero && ok;
        }
        r.pass = all_zero;
        note(r, std::to_string(checked) +
                    " component constant terms over all bases and nontrivial "
                    "characters of D in {-7,-15,-23,-47,-71}");
        note(r, all_zero ? "all exactly zero in Q(zeta_h) (cyclotomic "
                           "arithmetic, no tolerance)"
                         : "NONZERO constant term found");
      });
}

CheckResult check_orthogonality() {
  return run_check(
      4, "orthogonal basis (Thm 1.1(iii)): D=-47 off-diagonal pairings",
      [](CheckResult& r) {
        const PrecisionContext ctx = quad_context();
        const ClassGroup G(make_fundamental(-47));
        r.pass = true;
        const int pairs = orthogonality_worker(r, G, 1200, ctx, r.pass);
        note(r, std::to_string(pairs) +
                    " basis pairs with chi not in {psi, conj(psi)}; tol 1e-6 "
                    "abs, 128-bit quadrature, 20 nodes, theta reach 1200 comp "
                    "units");
      });
}

CheckResult check_prop14() {
  return run_check(
      5, "Prop 1.4: closed forms vs quadrature, cases (i)-(iv)",
      [](CheckResult& r) {
        const PrecisionContext ctx = quad_context();
        struct Case {
          long D;
          int psi, chi, base;
          long len;
          const char* tag;
        };
        // (iv) needs a real nontrivial character, which only exists for
        // even class number; the spec's discriminant pair {-23, -47} is
        // supplemented by D = -15 to reach it.
        const Case cases[] = {
            {-23, 1, 0, 0, 600, "(i)"},
            {-23, 1, 2, 1, 600, "(ii)"},
            {-23, 1, 1, 0, 600, "(iii)"},
            {-47, 1, 4, 1, 1200, "(ii)"},
            {-47, 1, 1, 0, 1200, "(iii)"},
            {-15, 1, 1, 0, 600, "(iv)"},
        };
        r.pass = true;
        for (const Case& c : cases) {
          const ClassGroup G(make_fundamental(c.D));
          r.pass =
              prop14_case(r, G, c.psi, c.chi, c.base, c.tag, c.len, ctx) &&
              r.pass;
        }
        note(r, "the case (ii) prefactor follows quadrature "
                "(-conj(psi(a))), not the paper's printed -psi(a); no other "
                "constant-factor discrepancy observed");
      });
}

CheckResult check_prop62() {
  return run_check(
      6, "Prop 6.2: S_P(theta_{ab^2}) = Theta_P^sym(., h) at D=-23",
      [](CheckResult& r) {
        const ClassGroup G(make_fundamental(-23));
        prop62_worker(r, G, 10, lift_context());
      });
}

CheckResult check_lift0() {
  return run_check(
      7, "Thm Lift0: <S_L(g_{ab^2}), e_0> = nu g at D=-23",
      [](CheckResult& r) {
        const ClassGroup G(make_fundamental(-23));
        lift0_worker(r, G, 2, quad_context());
      });
}

CheckResult check_adjointness() {
  return run_check(
      8, "adjointness (Prop 5.3): (S_L(f), F) = (f, F_0) at D=-23",
      [](CheckResult& r) {
        const ClassGroup G(make_fundamental(-23));
        adjoint_worker(r, G, lift_context());
      });
}

CheckResult check_norm_three_ways() {
  return run_check(
      9, "(theta_chi, theta_chi) three ways (Cor 6.4 + Cor 6.5) at D=-23",
      [](CheckResult& r) {
        const ClassGroup G(make_fundamental(-23));
        three_ways_worker(r, G, quad_context(), lift_context(), 2500);
      });
}

CheckResult check_weil_relations() {
  return run_check(
      10, "Weil representation: relations, unitarity, homomorphism",
      [](CheckResult& r) {
        const PrecisionContext ctx = quad_context();
        r.pass = true;
        for (long D : {-7L, -15L, -23L}) {
          r.pass = weil_worker(r, D, ctx) && r.pass;
        }
        note(r, "tol 1e-20 at 128 bits");
      });
}

CheckResult check_eta_consistency() {
  return run_check(
      11, "Dedekind eta: special values, periodicity, CM tail bounds",
      [](CheckResult& r) {
        eta_worker(r, {-7L, -15L, -23L, -47L, -71L}, quad_context());
      });
}

CheckResult check_exactness_spine() {
  return run_check(
      12, "exactness spine: vv component 0 equals scalar theta of acted class",
      [](CheckResult& r) {
        long pairs = 0;
        r.pass = true;
        for (long D : {-7L, -15L, -23L, -47L, -71L}) {
          const ClassGroup G(make_fundamental(D));
          const auto [p, ok] = exactness_worker(r, G);
          pairs += p;
          r.pass = r.pass && ok;
        }
        note(r, std::to_string(pairs) +
                    " (a,h) pairs over 5 discriminants, scalar n <= 50, "
                    "exact integer equality");
      });
}

std::vector<CheckResult> run_acceptance() {
  return {check_class_numbers(),   check_dimension_formula(),
          check_cuspidality(),     check_orthogonality(),
          check_prop14(),          check_prop62(),
          check_lift0(),           check_adjointness(),
          check_norm_three_ways(), check_weil_relations(),
          check_eta_consistency(), check_exactness_spine()};
}

bool all_pass(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks) {
    if (!c.ok()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// per-discriminant suite for the CLI

std::vector<CheckResult> verify_disc(long D, const PrecisionContext& ctx) {
  const ClassGroup G(make_fundamental(D));  // invalid_argument for bad D
  const long N = G.disc().abs_D();
  const long h = G.h();
  PrecisionContext qctx = ctx;
  const PrecisionContext sctx = lift_context();
  const long rank_n = std::max(50L, N);
  // Gamma_0(N) unfolding visits heights ~3.4/N^2; the scalar series length
  // has to grow like N^2 to keep the certified tails small there.
  const long gamma0_len = std::max(2500L, 5 * N * N);

  std::vector<CheckResult> out;
  out.push_back(run_check(1, "class number vs Dirichlet formula",
                          [&](CheckResult& r) {
                            r.pass = class_number_worker(r, D, -1);
                            note(r, "exact integer equality");
                          }));
  out.push_back(run_check(2, "dimension formula (Thm 1.1(iv))",
                          [&](CheckResult& r) {
                            r.pass = rank_worker(r, G, -1, rank_n);
                          }));
  out.push_back(run_check(
      3, "cuspidality: exact constant terms (Thm 1.1(ii))",
      [&](CheckResult& r) {
        if (h == 1) {
          r.pass = true;
          note(r, "no nontrivial characters for h = 1; vacuously true");
          return;
        }
        const auto [checked, ok] = cuspidality_worker(G);
        r.pass = ok;
        note(r, std::to_string(checked) +
                    " component constant terms, all bases and nontrivial "
                    "characters" +
                    (ok ? ", all exactly zero" : ": NONZERO term found"));
      }));
  out.push_back(run_check(
      4, "orthogonality of the character basis (Thm 1.1(iii))",
      [&](CheckResult& r) {
        r.pass = true;
        const int pairs =
            orthogonality_worker(r, G, quad_theta_len(N), qctx, r.pass);
        if (pairs == 0) {
          r.pass = false;
          r.skipped = true;
          note(r, "no basis pair with chi not in {psi, conj(psi)} exists "
                  "for this class group");
        } else {
          note(r, "tol 1e-6 abs");
        }
      }));
  out.push_back(run_check(
      5, "Prop 1.4 closed forms vs quadrature", [&](CheckResult& r) {
        if (h == 1) {
          r.pass = false;
          r.skipped = true;
          note(r, "Prop 1.4 requires a nontrivial character (h > 1)");
          return;
        }
        int cplx_chr = -1, real_chr = -1;
        for (int j = 1; j < h; ++j) {
          if (!char_is_real(G, j)) {
            if (cplx_chr < 0) cplx_chr = j;
          } else if (real_chr < 0) {
            real_chr = j;
          }
        }
        const long len = quad_theta_len(N);
        r.pass = true;
        if (cplx_chr >= 0) {
          r.pass = prop14_case(r, G, cplx_chr, 0, 0, "(i)", len, qctx) && r.pass;
          r.pass = prop14_case(r, G, cplx_chr, char_conj_index(G, cplx_chr),
                               h > 1 ? 1 : 0, "(ii)", len, qctx) &&
                   r.pass;
          r.pass = prop14_case(r, G, cplx_chr, cplx_chr, 0, "(iii)", len,
                               qctx) &&
                   r.pass;
        }
        if (real_chr >= 0) {
          if (cplx_chr < 0 && h > 2) {
            // a second nontrivial real character furnishes case (i)
            int other = -1;
            for (int j = 1; j < h; ++j) {
              if (j != real_chr) { other = j; break; }
            }
            if (other >= 0) {
              r.pass = prop14_case(r, G, real_chr, other, 0, "(i)", len,
                                   qctx) &&
                       r.pass;
            }
          }
          r.pass =
              prop14_case(r, G, real_chr, real_chr, 0, "(iv)", len, qctx) &&
              r.pass;
        }
      }));
  out.push_back(run_check(
      6, "Prop 6.2: S_P(theta_{ab^2}) = Theta_P^sym(., h)",
      [&](CheckResult& r) { prop62_worker(r, G, N <= 30 ? 10 : 3, sctx); }));
  out.push_back(run_check(7, "Thm Lift0: <S_L(g_{ab^2}), e_0> = nu g",
                          [&](CheckResult& r) {
                            lift0_worker(r, G, -1, qctx);
                          }));
  out.push_back(run_check(
      8, "adjointness (Prop 5.3): (S_L(f), F) = (f, F_0)",
      [&](CheckResult& r) {
        if (h == 1) {
          r.pass = false;
          r.skipped = true;
          note(r, "needs a nontrivial character (h > 1)");
          return;
        }
        if (N > 30) {
          r.pass = false;
          r.skipped = true;
          note(r, "lift extraction at |D| > 30 exceeds the CLI runtime "
                  "envelope; covered at D = -23 by the acceptance suite");
          return;
        }
        adjoint_worker(r, G, sctx);
      }));
  out.push_back(run_check(
      9, "(theta_chi, theta_chi) three ways (Cor 6.4 + Cor 6.5)",
      [&](CheckResult& r) {
        if (h == 1) {
          r.pass = false;
          r.skipped = true;
          note(r, "needs a nontrivial character (h > 1)");
          return;
        }
        if (G.disc().t() != 1) {
          r.pass = false;
          r.skipped = true;
          note(r, "Cor 6.5's closed form is proved for prime |D| only");
          return;
        }
        three_ways_worker(r, G, qctx, sctx, gamma0_len);
      }));
  out.push_back(run_check(10, "Weil representation integrity",
                          [&](CheckResult& r) {
                            r.pass = weil_worker(r, D, qctx);
                            note(r, "tol 1e-20");
                          }));
  out.push_back(run_check(11, "Dedekind eta self-consistency",
                          [&](CheckResult& r) { eta_worker(r, {D}, qctx); }));
  out.push_back(run_check(
      12, "exactness spine: vv component 0 vs scalar theta",
      [&](CheckResult& r) {
        const auto [pairs, ok] = exactness_worker(r, G);
        r.pass = ok;
        note(r, std::to_string(pairs) +
                    " (a,h) pairs, scalar n <= 50, exact integer equality");
      }));
  return out;
}

}  // namespace tl
