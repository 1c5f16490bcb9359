// thetalift -- command-line front end.
//
// Subcommands: classgroup, theta, vvtheta, lift, petersson, verify.  All
// output is JSON (compact by default, indented with --pretty); every
// non-integer numeric value is a decimal string.  Characters are addressed
// by index: 0 is the trivial character, the rest follow in lexicographic
// order of their exponent vectors (as listed by `classgroup`).
//
// Exit codes: 0 success, 1 verification failure (verify, or petersson
// --method both when the two values disagree beyond combined error),
// 2 usage or input error.

#include "thetalift/json_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

namespace {

struct Opts {
  long disc = 0;
  unsigned prec_bits = 128;
  long nmax = 50;
  int quad_nodes = 0;
  double height_T = 0.0;
  bool json = false;   // accepted for explicitness; JSON is the only format
  bool pretty = false;
};

void add_common(CLI::App* cmd, Opts& o, bool needs_nmax) {
  // the spec's --h (acting class) clashes with CLI11's default -h short
  // help flag, so help is --help only
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--disc", o.disc, "fundamental discriminant D < 0 (odd)")
      ->required();
  cmd->add_option("--prec-bits", o.prec_bits,
                  "working precision in bits (default 128)");
  if (needs_nmax) {
    cmd->add_option("--nmax", o.nmax, "expansion truncation (default 50)");
  }
  cmd->add_option("--quad-nodes", o.quad_nodes,
                  "Gauss-Legendre nodes per quadrature panel");
  cmd->add_option("--height-T", o.height_T,
                  "truncation height for Petersson quadrature");
  cmd->add_flag("--json", o.json, "emit JSON (the default and only format)");
  cmd->add_flag("--pretty", o.pretty, "indent the JSON output");
}

tl::PrecisionContext context_of(const Opts& o) {
  tl::PrecisionContext ctx;
  ctx.bits = o.prec_bits;
  if (o.quad_nodes > 0) ctx.quad_nodes = o.quad_nodes;
  if (o.height_T > 0) ctx.height_T = o.height_T;
  ctx.activate();
  return ctx;
}

void emit(const tl::json& j, const Opts& o) {
  std::printf("%s\n", tl::dump_json(j, o.pretty).c_str());
}

// scalar theta reach needed by the slashed evaluations inside the lift
long lift_theta_len(long N) { return N <= 30 ? 9000 : 16000; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "thetalift: class groups, vector-valued theta functions and the "
      "scalar-to-vector theta lift for odd fundamental discriminants D < 0"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  Opts o;
  int cls = 0, base_a = 0, comp_h = 0, psi = -1, chi = -1;
  std::string method = "both";

  CLI::App* c_group = app.add_subcommand(
      "classgroup", "reduced forms, group structure, characters, CM points");
  add_common(c_group, o, false);

  CLI::App* c_theta = app.add_subcommand(
      "theta", "scalar theta series of an ideal class (integer q-powers)");
  add_common(c_theta, o, true);
  c_theta->add_option("--class", cls, "ideal class index (default 0)");

  CLI::App* c_vv = app.add_subcommand(
      "vvtheta",
      "vector-valued theta Theta_P(tau, h) for base class a (exponents are "
      "n in e(n tau/|D|)); with --psi, the character form Theta_P(tau, psi)");
  add_common(c_vv, o, true);
  c_vv->add_option("--a", base_a, "base ideal class index (default 0)");
  c_vv->add_option("--h", comp_h, "acting ideal class index (default 0)");
  c_vv->add_option("--psi", psi, "character index (overrides --h)");

  CLI::App* c_lift = app.add_subcommand(
      "lift",
      "theta lift S_L(theta_class) against the base-0 lattice; --nmax in "
      "exponents of e(n tau/|D|)");
  add_common(c_lift, o, true);
  c_lift->add_option("--class", cls, "ideal class index (default 0)");

  CLI::App* c_pet = app.add_subcommand(
      "petersson",
      "Petersson product (Theta(psi), Theta(chi)) at base class --a");
  add_common(c_pet, o, false);
  c_pet->add_option("--psi", psi, "character index of the first form")
      ->required();
  c_pet->add_option("--chi", chi, "character index of the second form")
      ->required();
  c_pet->add_option("--a", base_a, "base ideal class index (default 0)");
  c_pet->add_option("--method", method,
                    "quadrature | closed_form | both (default both)")
      ->check(CLI::IsMember({"quadrature", "closed_form", "both"}));

  CLI::App* c_verify = app.add_subcommand(
      "verify", "run the structural-theorem suite for one discriminant");
  add_common(c_verify, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help and friends exit 0, real errors 2
  }

  try {
    const tl::PrecisionContext ctx = context_of(o);

    if (c_group->parsed()) {
      const tl::ClassGroup G(tl::make_fundamental(o.disc));
      emit(tl::classgroup_to_json(G, ctx), o);
      return 0;
    }

    if (c_theta->parsed()) {
      const tl::ClassGroup G(tl::make_fundamental(o.disc));
      if (cls < 0 || cls >= G.h())
        throw std::invalid_argument("class index out of range");
      const tl::QExpansion f = tl::theta_ideal(G, cls, o.nmax, ctx);
      emit(tl::qexpansion_to_json(f, o.disc, ctx), o);
      return 0;
    }

    if (c_vv->parsed()) {
      const tl::ClassGroup G(tl::make_fundamental(o.disc));
      if (base_a < 0 || base_a >= G.h())
        throw std::invalid_argument("base class index out of range");
      tl::VectorValuedForm F;
      if (psi >= 0) {
        if (psi >= G.h())
          throw std::invalid_argument("character index out of range");
        F = tl::vv_theta_psi(G, base_a, psi, o.nmax, ctx);
      } else {
        if (comp_h < 0 || comp_h >= G.h())
          throw std::invalid_argument("acting class index out of range");
        const tl::VVTheta V = tl::vv_theta(G, base_a, comp_h, o.nmax);
        F = V.to_form(ctx);
      }
      emit(tl::vvform_to_json(F, base_a, ctx), o);
      return 0;
    }

    if (c_lift->parsed()) {
      const tl::ClassGroup G(tl::make_fundamental(o.disc));
      if (cls < 0 || cls >= G.h())
        throw std::invalid_argument("class index out of range");
      const long N = G.disc().abs_D();
      if (o.nmax > 8 * N)
        throw std::invalid_argument(
            "lift --nmax is capped at 8*|D|: coefficient extraction "
            "amplifies noise by exp(2*pi*n/|D|), so deeper coefficients "
            "are numerically meaningless at these precisions");
      const tl::QExpansion f = tl::theta_ideal(G, cls, lift_theta_len(N), ctx);
      ctx.activate();
      const tl::QExpansionSlash fs(f, tl::Real(1e-12));
      const tl::DiscriminantForm df = tl::discform_of_base(G, 0);
      const tl::VectorValuedForm SF =
          tl::lift_coefficients(fs, df, o.nmax, ctx);
      emit(tl::vvform_to_json(SF, 0, ctx), o);
      return 0;
    }

    if (c_pet->parsed()) {
      const tl::ClassGroup G(tl::make_fundamental(o.disc));
      const auto chars = tl::characters(G);
      if (psi < 0 || psi >= G.h() || chi < 0 || chi >= G.h())
        throw std::invalid_argument("character index out of range");
      if (base_a < 0 || base_a >= G.h())
        throw std::invalid_argument("base class index out of range");
      if (chars[psi].is_trivial() && chars[chi].is_trivial())
        throw std::invalid_argument(
            "psi and chi must not both be trivial (Prop 1.4 excludes the "
            "Eisenstein pairing)");
      const long N = G.disc().abs_D();
      const long len = std::max(600L, 25 * (N + 1));
      auto quadrature = [&] {
        const tl::VectorValuedForm F =
            tl::vv_theta_psi(G, base_a, psi, len, ctx);
        const tl::VectorValuedForm H =
            tl::vv_theta_psi(G, base_a, chi, len, ctx);
        return tl::petersson_vv(F, H, 1, ctx);
      };
      auto closed = [&] {
        return tl::closed_form_vv(G, chars[psi], chars[chi], base_a, ctx);
      };
      if (method == "quadrature") {
        emit(tl::petersson_to_json(psi, chi, quadrature(), ctx), o);
        return 0;
      }
      if (method == "closed_form") {
        emit(tl::petersson_to_json(psi, chi, closed(), ctx), o);
        return 0;
      }
      const tl::PeterssonValue q = quadrature();
      const tl::PeterssonValue c = closed();
      const tl::Real diff = tl::abs(q.value - c.value);
      const tl::Real scale =
          tl::abs(c.value) > tl::Real(1) ? tl::abs(c.value) : tl::Real(1);
      const tl::Real combined = tl::Real(1e-5) * scale +
                                tl::Real(10) * (q.error_estimate +
                                                c.error_estimate);
      const bool agree = diff < combined;
      tl::json j;
      j["pair"] = tl::json::array({psi, chi});
      j["quadrature"] = tl::petersson_to_json(psi, chi, q, ctx);
      j["closed_form"] = tl::petersson_to_json(psi, chi, c, ctx);
      j["difference"] = tl::real_to_string(diff, ctx);
      j["combined_error"] = tl::real_to_string(combined, ctx);
      j["agree"] = agree;
      emit(j, o);
      if (!agree) {
        std::fprintf(stderr,
                     "verification failure: quadrature and closed form "
                     "disagree beyond combined error\n");
        return 1;
      }
      return 0;
    }

    if (c_verify->parsed()) {
      const std::vector<tl::CheckResult> checks = tl::verify_disc(o.disc, ctx);
      emit(tl::report_to_json(o.disc, checks), o);
      if (!tl::all_pass(checks)) {
        for (const tl::CheckResult& c : checks) {
          if (!c.ok()) {
            std::fprintf(stderr, "verification failure: check %d (%s)\n",
                         c.id, c.name.c_str());
          }
        }
        return 1;
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
