// Unit tests for form reduction, composition, class group structure,
// characters (checked exactly in cyclotomic arithmetic) and genus theory.
// The analytic class number formula provides the independent class count.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thetalift/classgroup.hpp"

#include <random>
#include <set>

using namespace tl;

namespace {

QuadForm F(long long a, long long b, long long c) { return {a, b, c}; }

}  // namespace

TEST_CASE("Gauss reduction") {
  // Worked example of a single normalize+swap pass.
  CHECK(reduce(F(2, 3, 4)) == F(2, -1, 3));
  // Reduction is idempotent and lands in the reduced set.
  CHECK(reduce(F(2, -1, 3)) == F(2, -1, 3));
  CHECK(is_reduced(F(2, -1, 3)));
  CHECK(!is_reduced(F(2, 3, 4)));
  // Principal forms are born reduced.
  for (long D : {-7L, -15L, -23L, -47L, -71L}) {
    CHECK(principal_form(D) == F(1, 1, (1 - D) / 4));
    CHECK(is_reduced(principal_form(D)));
  }
  // A long translation orbit collapses correctly.
  CHECK(reduce(F(1, 101, 2556)) == principal_form(-23));  // 101^2-4*2556 = -23
  CHECK_THROWS_AS(reduce(F(-1, 1, 6)), std::domain_error);
}

TEST_CASE("reduced enumeration matches the analytic class number formula") {
  // Frozen small tables first.
  CHECK(enumerate_reduced(-23) ==
        std::vector<QuadForm>{F(1, 1, 6), F(2, -1, 3), F(2, 1, 3)});
  CHECK(enumerate_reduced(-15) == std::vector<QuadForm>{F(1, 1, 4), F(2, 1, 2)});
  CHECK(enumerate_reduced(-47) ==
        std::vector<QuadForm>{F(1, 1, 12), F(2, -1, 6), F(2, 1, 6), F(3, -1, 4),
                              F(3, 1, 4)});

  // h(D) from Dirichlet's formula (independent oracle) vs the enumeration.
  const std::vector<std::pair<long, long>> table = {
      {-7, 1}, {-15, 2}, {-23, 3}, {-47, 5}, {-71, 7}, {-3, 1}, {-255, 12}};
  for (auto [D, h] : table) {
    CAPTURE(D);
    CHECK(class_number_formula(D) == h);
    CHECK(static_cast<long>(enumerate_reduced(D).size()) == h);
  }
  CHECK_THROWS_AS(class_number_formula(-9), std::domain_error);
}

TEST_CASE("composition: group axioms and known products") {
  // [2,1,3] has order 3 in Cl(-23); its square is its inverse [2,-1,3].
  CHECK(compose(F(2, 1, 3), F(2, 1, 3)) == F(2, -1, 3));
  CHECK(compose(F(2, 1, 3), F(2, -1, 3)) == F(1, 1, 6));
  // Ambiguous class of Cl(-15).
  CHECK(compose(F(2, 1, 2), F(2, 1, 2)) == F(1, 1, 4));

  for (long D : {-23L, -47L, -71L, -255L}) {
    CAPTURE(D);
    auto cls = enumerate_reduced(D);
    QuadForm e = principal_form(D);
    std::mt19937_64 rng(100 + D);
    std::uniform_int_distribution<size_t> pick(0, cls.size() - 1);
    for (int it = 0; it < 30; ++it) {
      QuadForm x = cls[pick(rng)], y = cls[pick(rng)], z = cls[pick(rng)];
      // identity, commutativity, associativity, inverse
      CHECK(compose(x, e) == reduce(x));
      CHECK(compose(x, y) == compose(y, x));
      CHECK(compose(compose(x, y), z) == compose(x, compose(y, z)));
      CHECK(compose(x, F(x.a, -x.b, x.c)) == e);
    }
  }
  CHECK_THROWS_AS(compose(F(1, 1, 6), F(1, 1, 4)), std::domain_error);
}

TEST_CASE("class group structure") {
  struct Expect {
    long D;
    std::vector<long> factors;
  };
  const std::vector<Expect> table = {
      {-7, {}}, {-15, {2}}, {-23, {3}}, {-47, {5}}, {-71, {7}}, {-255, {2, 6}}};
  for (const auto& ex : table) {
    CAPTURE(ex.D);
    ClassGroup G(make_fundamental(ex.D));
    CHECK(G.h() == class_number_formula(ex.D));
    CHECK(G.invariant_factors() == ex.factors);
    CHECK(G.classes()[G.identity()] == principal_form(ex.D));

    // dlog reconstructs every class from the generators.
    for (int x = 0; x < G.h(); ++x) {
      int y = G.identity();
      const auto& e = G.dlog()[x];
      for (size_t i = 0; i < e.size(); ++i) {
        for (long k = 0; k < e[i]; ++k) y = G.mul(y, G.generators()[i]);
      }
      CHECK(y == x);
      CHECK(G.mul(x, G.inv(x)) == G.identity());
      CHECK(G.pow(x, G.order_of(x)) == G.identity());
    }
  }

  // Cl(-47) is cyclic of order 5: every non-identity element has order 5.
  ClassGroup G47(make_fundamental(-47));
  for (int i = 0; i < G47.h(); ++i) {
    CHECK(G47.order_of(i) == (i == G47.identity() ? 1 : 5));
  }
}

TEST_CASE("characters: canonical order and exact orthogonality") {
  for (long D : {-7L, -15L, -23L, -47L, -71L, -255L}) {
    CAPTURE(D);
    ClassGroup G(make_fundamental(D));
    auto chars = characters(G);
    REQUIRE(static_cast<long>(chars.size()) == G.h());
    CHECK(chars[0].is_trivial());
    for (size_t i = 0; i + 1 < chars.size(); ++i) {
      CHECK(chars[i].exps < chars[i + 1].exps);  // canonical order
    }

    const long m = G.exponent();
    for (size_t ci = 0; ci < chars.size(); ++ci) {
      // Trivial character is identically 1; all rows sum to 0 otherwise
      // (exact, in Q(zeta_m)).
      CycQ row = CycQ::zero(m);
      for (int x = 0; x < G.h(); ++x) row += char_value_cyc(G, chars[ci], x);
      if (ci == 0) {
        CHECK(equal(row, CycQ::rational(m, Rat(G.h()))));
      } else {
        CHECK(is_zero(row));
      }
      // Multiplicativity, exactly.
      for (int x = 0; x < G.h(); ++x) {
        for (int y = 0; y < G.h(); ++y) {
          CHECK(equal(char_value_cyc(G, chars[ci], G.mul(x, y)),
                      char_value_cyc(G, chars[ci], x) *
                          char_value_cyc(G, chars[ci], y)));
        }
        // Unitarity: chi(x) * conj(chi(x)) = 1.
        CycQ v = char_value_cyc(G, chars[ci], x);
        CHECK(equal(v * conj_cyc(v), CycQ::one(m)));
        // Conjugate character index really conjugates values.
        CHECK(equal(char_value_cyc(G, chars[char_conj_index(G, ci)], x),
                    conj_cyc(v)));
      }
    }

    // Column orthogonality: sum over characters vanishes off the identity.
    for (int x = 0; x < G.h(); ++x) {
      CycQ col = CycQ::zero(m);
      for (const auto& chi : chars) col += char_value_cyc(G, chi, x);
      if (x == G.identity()) {
        CHECK(equal(col, CycQ::rational(m, Rat(G.h()))));
      } else {
        CHECK(is_zero(col));
      }
    }

    // Real characters are exactly the ones fixed by conjugation, and the
    // number of them equals the number of ambiguous (2-torsion) classes.
    long n_real = 0;
    for (size_t ci = 0; ci < chars.size(); ++ci) {
      if (char_is_real(G, static_cast<int>(ci))) ++n_real;
    }
    CHECK(n_real == static_cast<long>(G.ambiguous_classes().size()));
  }
}

TEST_CASE("genus theory") {
  for (long D : {-15L, -23L, -255L}) {
    CAPTURE(D);
    ClassGroup G(make_fundamental(D));
    const int t = G.disc().t();
    CHECK(static_cast<long>(G.ambiguous_classes().size()) == (1L << (t - 1)));
    CHECK(G.genus_count() == (1L << (t - 1)));
    CHECK(static_cast<long>(G.principal_genus().size()) * G.genus_count() ==
          G.h());

    // Genus characters: multiplicative, trivial on the principal genus, and
    // their product over all p | D is trivial.
    std::vector<std::vector<int>> gchars;
    for (long p : G.disc().primes) {
      auto vals = genus_character_values(G, p);
      gchars.push_back(vals);
      for (int x = 0; x < G.h(); ++x) {
        CHECK((vals[x] == 1 || vals[x] == -1));
        for (int y = 0; y < G.h(); ++y) {
          CHECK(vals[G.mul(x, y)] == vals[x] * vals[y]);
        }
      }
      for (int s : G.principal_genus()) CHECK(vals[s] == 1);
    }
    for (int x = 0; x < G.h(); ++x) {
      int prod = 1;
      for (const auto& v : gchars) prod *= v[x];
      CHECK(prod == 1);
    }
    // The genus characters jointly separate genera: the number of distinct
    // sign vectors equals the genus count.
    std::set<std::vector<int>> sigs;
    for (int x = 0; x < G.h(); ++x) {
      std::vector<int> sig;
      for (const auto& v : gchars) sig.push_back(v[x]);
      sigs.insert(sig);
    }
    CHECK(static_cast<long>(sigs.size()) == G.genus_count());
  }
}

TEST_CASE("coprime representatives and the class action") {
  ClassGroup G(make_fundamental(-15));
  for (int cls = 0; cls < G.h(); ++cls) {
    for (long M : {15L, 30L, 2310L}) {
      QuadForm g = coprime_representative(G, cls, Int(M));
      CHECK(gcd(Int(g.a), Int(M)) == 1);
      CHECK(g.disc() == -15);
      CHECK(G.index_of(g) == cls);  // proper equivalence preserved
    }
  }

  // class_action(h, a) = [h]^2 [a]; orbits are principal-genus cosets.
  for (long D : {-15L, -23L, -47L}) {
    ClassGroup H(make_fundamental(D));
    for (int a = 0; a < H.h(); ++a) {
      CHECK(H.class_action(H.identity(), a) == a);
      std::set<int> orbit;
      for (int hc = 0; hc < H.h(); ++hc) orbit.insert(H.class_action(hc, a));
      std::set<int> coset;
      for (int s : H.principal_genus()) coset.insert(H.mul(s, a));
      CHECK(orbit == coset);
    }
  }
}

TEST_CASE("CM points") {
  PrecisionContext ctx;
  ctx.activate();
  ClassGroup G(make_fundamental(-23));
  for (int i = 0; i < G.h(); ++i) {
    Cplx tau = G.cm_point(i, ctx);
    const QuadForm& f = G.classes()[i];
    // a tau^2 + b tau + c = 0 and tau is in the upper half plane, inside the
    // closed fundamental domain (so eta evaluation is safe).
    Cplx val = Real(f.a) * (tau * tau) + Real(f.b) * tau + Cplx(Real(f.c));
    CHECK(abs(val) < Real("1e-30"));
    CHECK(tau.im >= sqrt(Real(3)) / 2 - Real("1e-30"));
    CHECK(abs(tau.re) <= Real(1) / 2 + Real("1e-30"));
    CHECK(norm_sq(tau) >= Real(1) - Real("1e-30"));
  }
  Cplx t0 = G.cm_point(G.identity(), ctx);
  CHECK(abs(t0.re + Real(1) / 2) < Real("1e-30"));
  CHECK(abs(t0.im - sqrt(Real(23)) / 2) < Real("1e-30"));
}
