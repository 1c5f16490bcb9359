// Tests for scalar theta series.  Representation numbers are checked against
// an independent brute-force loop, the classical divisor-sum identity
// sum_a rho(n, a) = w_k sum_{d | n} (D|d), and the ideal-lattice enumerator;
// character combinations and the genus Eisenstein series are verified with
// exact cyclotomic arithmetic.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thetalift/scalartheta.hpp"

#include <map>
#include <numeric>

using namespace tl;

namespace {

// Independent oracle: walk a coefficient box chosen by completing the square
// (different bound logic from the library kernel) and count exactly.
std::map<long, long> brute_rho(const QuadForm& f, long n_max) {
  std::map<long, long> rho;
  for (long n = 0; n <= n_max; ++n) rho[n] = 0;
  long absD = static_cast<long>(-f.disc());
  long Y = 1;
  while (Y * Y * absD <= 4 * f.a * n_max) ++Y;
  for (long y = -Y; y <= Y; ++y) {
    // a x^2 + (b y) x + (c y^2 - n) = 0 has integer roots only within
    // x in [-(|b|Y + s)/(2a), ...]; just scan a safe symmetric window.
    long X = 1;
    while (X * X * absD <= 4 * f.c * n_max) ++X;
    for (long x = -X; x <= X; ++x) {
      long q = static_cast<long>(f.eval(x, y));
      if (q >= 0 && q <= n_max) ++rho[q];
    }
  }
  return rho;
}

}  // namespace

TEST_CASE("spec examples and rho(0) = 1") {
  for (long Dl : {-7L, -15L, -23L, -47L, -71L}) {
    ClassGroup G(make_fundamental(Dl));
    for (int i = 0; i < G.h(); ++i) {
      auto rn = rep_numbers(G.classes()[i], 12);
      CHECK(rn.rho[0] == 1);
    }
  }
  CHECK(rep_numbers(QuadForm{1, 1, 2}, 4).rho[1] == 2);  // D = -7 principal
  CHECK(rep_numbers(QuadForm{2, 1, 3}, 4).rho[2] == 2);  // D = -23
}

TEST_CASE("kernel vs brute force, serial reference, and conjugate classes") {
  for (long Dl : {-23L, -47L, -255L}) {
    CAPTURE(Dl);
    ClassGroup G(make_fundamental(Dl));
    for (int i = 0; i < G.h(); ++i) {
      const QuadForm& f = G.classes()[i];
      auto rn = rep_numbers(f, 60, true);
      auto ref = rep_numbers_reference(f, 60);
      auto oracle = brute_rho(f, 60);
      for (long n = 0; n <= 60; ++n) {
        CAPTURE(n);
        CHECK(rn.rho[n] == Int(oracle[n]));
        CHECK(ref[n] == oracle[n]);
      }
      // rho(n, a) = rho(n, abar).
      auto rn_conj = rep_numbers(G.classes()[G.inv(i)], 60);
      CHECK(rn.rho == rn_conj.rho);
    }
  }
}

TEST_CASE("representation numbers agree with the ideal-lattice enumerator") {
  const long D = -47;
  for (const auto& f : enumerate_reduced(D)) {
    IdealLattice I = ideal_from_form(f);
    auto pts = enumerate_by_norm(I, fe(0, 0), I.covolume(), Rat(25));
    std::map<Rat, long> counts;
    for (const auto& lam : pts) ++counts[q_value(I, lam)];
    auto rn = rep_numbers(f, 25);
    for (long n = 0; n <= 25; ++n) {
      CHECK(Int(counts[Rat(n)]) == rn.rho[n]);
    }
  }
}

TEST_CASE("divisor-sum identity: sum_a rho(n,a) = w_k sum_{d|n} (D|d)") {
  for (long Dl : {-7L, -15L, -23L, -47L, -71L}) {
    CAPTURE(Dl);
    ClassGroup G(make_fundamental(Dl));
    std::vector<RepNumbers> all;
    for (int i = 0; i < G.h(); ++i) all.push_back(rep_numbers(G.classes()[i], 80));
    for (long n = 1; n <= 80; ++n) {
      Int total(0);
      for (const auto& rn : all) total += rn.rho[n];
      long dsum = 0;
      for (long d = 1; d <= n; ++d) {
        if (n % d == 0) dsum += kronecker(Dl, d);
      }
      CHECK(total == Int(G.disc().w_k() * dsum));
    }
  }
}

TEST_CASE("theta_psi: constant terms, conjugation, inversion identity") {
  const long n_max = 40;
  for (long Dl : {-23L, -47L}) {
    CAPTURE(Dl);
    ClassGroup G(make_fundamental(Dl));
    auto chars = characters(G);
    long m = G.exponent();
    long w = G.disc().w_k();

    std::vector<std::vector<CycQ>> thetas;
    for (const auto& psi : chars) thetas.push_back(theta_psi_exact(G, psi, n_max));

    // Constant term h/w for the trivial character, 0 otherwise.
    CHECK(equal(thetas[0][0], CycQ::rational(m, Rat(G.h(), w))));
    for (size_t k = 1; k < chars.size(); ++k) {
      CHECK(is_zero(thetas[k][0]));
    }

    // theta_psibar has conjugate coefficients.
    for (size_t k = 0; k < chars.size(); ++k) {
      size_t kc = static_cast<size_t>(char_conj_index(G, static_cast<int>(k)));
      for (long n = 0; n <= n_max; ++n) {
        CHECK(equal(thetas[kc][n], conj_cyc(thetas[k][n])));
      }
    }

    // Inversion: theta_a = (w/h) sum_chi chibar([a]) theta_chi, exactly.
    for (int cls = 0; cls < G.h(); ++cls) {
      auto rn = rep_numbers(G.classes()[cls], n_max);
      for (long n = 0; n <= n_max; ++n) {
        CycQ acc = CycQ::zero(m);
        for (size_t k = 0; k < chars.size(); ++k) {
          acc += conj_cyc(char_value_cyc(G, chars[k], cls)) * thetas[k][n];
        }
        acc = Rat(w, static_cast<unsigned long>(G.h())) * acc;
        CHECK(equal(acc, CycQ::rational(m, Rat(rn.rho[n]))));
      }
    }
  }
}

TEST_CASE("genus Eisenstein series") {
  SUBCASE("single-genus closed form and the D=-23 example") {
    for (long Dl : {-23L, -47L}) {
      CAPTURE(Dl);
      ClassGroup G(make_fundamental(Dl));
      auto E = genus_eisenstein_exact(G, G.identity(), 50);
      CHECK(E[0] == 1);
      for (long n = 1; n <= 50; ++n) {
        long dsum = 0;
        for (long d = 1; d <= n; ++d) {
          if (n % d == 0) dsum += kronecker(Dl, d);
        }
        CHECK(E[n] == Rat(G.disc().w_k() * dsum, static_cast<unsigned long>(G.h())));
      }
      // E_A is the same for every class (h odd: one genus).
      for (int cls = 0; cls < G.h(); ++cls) {
        CHECK(genus_eisenstein_exact(G, cls, 20) == genus_eisenstein_exact(G, 0, 20));
      }
    }
    ClassGroup G23(make_fundamental(-23));
    auto E = genus_eisenstein_exact(G23, 0, 30);
    auto r1 = rep_numbers(QuadForm{1, 1, 6}, 30);
    auto r2 = rep_numbers(QuadForm{2, 1, 3}, 30);
    for (long n = 0; n <= 30; ++n) {
      CHECK(E[n] == (Rat(r1.rho[n]) + 2 * Rat(r2.rho[n])) / 3);
    }
  }

  SUBCASE("genus support at D=-255: coefficients live on one character box") {
    const long D = -255;  // -3 * 5 * 17, four genera
    ClassGroup G(make_fundamental(D));
    std::vector<long> primes{3, 5, 17};
    std::vector<std::vector<int>> eps;  // per prime, per class
    for (long p : primes) eps.push_back(genus_character_values(G, p));
    for (int cls = 0; cls < G.h(); ++cls) {
      auto E = genus_eisenstein_exact(G, cls, 60);
      for (long n = 1; n <= 60; ++n) {
        if (std::gcd(n, 255L) != 1) continue;
        bool compatible = true;
        for (size_t i = 0; i < primes.size(); ++i) {
          long p = primes[i];
          long pstar = (p % 4 == 1) ? p : -p;
          if (kronecker(pstar, n) != eps[i][cls]) compatible = false;
        }
        if (!compatible) {
          CHECK(E[n] == 0);
          // Every class in the genus misses n as well.
          for (int b = 0; b < G.h(); ++b) {
            auto rn = rep_numbers(G.classes()[G.class_action(b, cls)], n);
            CHECK(rn.rho[n] == 0);
          }
        }
      }
      // E_A depends only on the genus.
      CHECK(genus_eisenstein_exact(G, G.class_action(1, cls), 40) ==
            genus_eisenstein_exact(G, cls, 40));
    }
  }
}

TEST_CASE("evaluate: direct sum cross-check, linearity, tail bound") {
  PrecisionContext ctx;
  ctx.activate();
  ClassGroup G(make_fundamental(-7));
  QExpansion th = theta_ideal(G, 0, 60, ctx);

  SUBCASE("matches the direct lattice sum with identical truncation") {
    Cplx tau{Real(0), Real(1)};
    auto ev = evaluate(th, tau, ctx);
    Cplx direct{};
    for (long x = -30; x <= 30; ++x) {
      for (long y = -30; y <= 30; ++y) {
        long q = x * x + x * y + 2 * y * y;
        if (q <= 60) direct = direct + e_of(tau * Real(q));
      }
    }
    CHECK(abs(ev.value - direct) < Real("1e-35"));
  }

  SUBCASE("linearity and constant expansions") {
    QExpansion c;
    c.coeffs = {Cplx{Real(3), Real(-2)}};
    Cplx tau{Real("0.3"), Real("0.9")};
    CHECK(abs(evaluate(c, tau, ctx).value - c.coeffs[0]) == 0);
    QExpansion s = qexp_add(th, qexp_scale(th, Cplx{Real(2), Real(1)}));
    Cplx lhs = evaluate(s, tau, ctx).value;
    Cplx rhs = evaluate(th, tau, ctx).value * Cplx{Real(3), Real(1)};
    CHECK(abs(lhs - rhs) < Real("1e-30"));
  }

  SUBCASE("tail bound dominates the truncation error") {
    QExpansion th40 = theta_ideal(G, 0, 40, ctx);
    for (const char* im : {"0.8", "1.5"}) {
      Cplx tau{Real("0.3"), Real(im)};
      auto e40 = evaluate(th40, tau, ctx);
      auto e60 = evaluate(th, tau, ctx);
      CHECK(abs(e60.value - e40.value) <= e40.tail_bound);
      CHECK(e40.tail_bound < Real("1e-3"));
    }
    CHECK_THROWS_AS(evaluate(th40, Cplx{Real(0), Real(-1)}, ctx),
                    std::domain_error);
  }

  SUBCASE("lcm merge of exponent denominators") {
    QExpansion a, b;
    a.N = 1;
    a.coeffs = {Cplx{Real(1), Real(0)}, Cplx{Real(5), Real(0)}};  // 1 + 5 q
    b.N = 3;
    b.coeffs.assign(7, Cplx{});
    b.coeffs[2] = Cplx{Real(7), Real(0)};  // 7 e(2 tau / 3)
    QExpansion s = qexp_add(a, b);
    CHECK(s.N == 3);
    CHECK(s.n_max() == 3);  // min(1*3, 6*1)
    CHECK(abs(s.coeffs[0] - Cplx{Real(1), Real(0)}) == 0);
    CHECK(abs(s.coeffs[2] - Cplx{Real(7), Real(0)}) == 0);
    CHECK(abs(s.coeffs[3] - Cplx{Real(5), Real(0)}) == 0);
  }
}
