// Unit tests for exact ideal-lattice arithmetic: module operations, duals,
// coset machinery, norm enumeration (against a brute-force oracle), and the
// coset transport between ideals that agree at the ramified primes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thetalift/ideallat.hpp"

#include <random>
#include <set>

using namespace tl;

TEST_CASE("field element algebra") {
  const long D = -23;
  FieldElement om = fe(0, 1);
  CHECK(fe_norm(om, D) == Rat((1 - D) / 4));
  CHECK(fe_trace(om) == 2 * Rat(0) + 1);
  FieldElement sd = fe_sqrtD();
  CHECK(fe_norm(sd, D) == Rat(-D));          // N(sqrt(D)) = -D
  CHECK(fe_conj(sd) == fe_neg(sd));          // sqrt(D) is antifixed
  CHECK(fe_trace(sd) == 0);
  // sqrt(D)^2 = D.
  CHECK(fe_mul(sd, sd, D) == fe(D, 0));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> pick(-9, 9);
  for (int i = 0; i < 50; ++i) {
    FieldElement a = fe(pick(rng), pick(rng)), b = fe(pick(rng), pick(rng));
    CHECK(fe_norm(fe_mul(a, b, D), D) == fe_norm(a, D) * fe_norm(b, D));
    CHECK(fe_norm(a, D) == fe_mul(a, fe_conj(a), D).x);  // N = a abar
    CHECK(fe_mul(a, fe_conj(a), D).y == 0);
    if (fe_norm(b, D) != 0) {
      CHECK(fe_mul(fe_div(a, b, D), b, D) == a);
    }
  }

  PrecisionContext ctx;
  ctx.activate();
  // Numeric embedding is a ring hom into C.
  FieldElement a = fe(3, -2), b = fe(-1, 5);
  Cplx lhs = fe_embed(fe_mul(a, b, D), D, ctx);
  Cplx rhs = fe_embed(a, D, ctx) * fe_embed(b, D, ctx);
  CHECK(abs(lhs - rhs) < Real("1e-30"));
}

TEST_CASE("ideal_from_form and basic lattice invariants") {
  for (long Dl : {-15L, -23L, -47L}) {
    auto cls = enumerate_reduced(Dl);
    IdealLattice O = ring_of_integers(Dl);
    CHECK(O.covolume() == 1);
    CHECK(ideal_from_form(principal_form(Dl)) == O);
    for (const auto& f : cls) {
      IdealLattice I = ideal_from_form(f);
      CHECK(I.covolume() == Rat(f.a));          // N(a) = a
      CHECK(contains(I, fe(f.a, 0)));
      CHECK(contains(I, fe_rat(Rat(-f.b - 1) / 2, Rat(1))));
      // An ideal is closed under multiplication by omega.
      CHECK(multiply(O, I) == I);
      CHECK(contains(I, fe_mul(I.v2(), fe(0, 1), Dl)));
      // Round trip back to the (reduced) form.
      CHECK(reduce(form_of_ideal(I)) == f);
      CHECK(index_in(O, I) == Int(f.a));
    }
  }
}

TEST_CASE("products: norms multiply, conjugate gives N(a) O, classes compose") {
  for (long Dl : {-15L, -23L, -47L}) {
    CAPTURE(Dl);
    ClassGroup G(make_fundamental(Dl));
    IdealLattice O = ring_of_integers(Dl);
    for (int i = 0; i < G.h(); ++i) {
      IdealLattice A = ideal_from_form(G.classes()[i]);
      CHECK(multiply(A, conj_lattice(A)) ==
            scale_by_rat(O, A.covolume()));  // a abar = N(a) O
      for (int j = 0; j < G.h(); ++j) {
        IdealLattice B = ideal_from_form(G.classes()[j]);
        IdealLattice AB = multiply(A, B);
        CHECK(AB.covolume() == A.covolume() * B.covolume());
        CHECK(multiply(B, A) == AB);
        // The product lattice lies in the composed class: independent check
        // of Gauss composition through the rational-HNF path.
        CHECK(class_of_ideal(G, AB) == G.mul(i, j));
      }
    }
    // Associativity on a few triples.
    IdealLattice A = ideal_from_form(G.classes()[G.h() - 1]);
    IdealLattice B = ideal_from_form(G.classes()[0]);
    IdealLattice C = scale_by_element(A, fe(1, 1));
    CHECK(multiply(multiply(A, B), C) == multiply(A, multiply(B, C)));
  }
}

TEST_CASE("sum, intersection, and the index identity") {
  const long D = -23;
  ClassGroup G(make_fundamental(D));
  IdealLattice O = ring_of_integers(D);
  std::vector<IdealLattice> lats;
  for (const auto& f : G.classes()) lats.push_back(ideal_from_form(f));
  lats.push_back(scale_by_rat(lats[1], Rat(3, 2)));
  lats.push_back(scale_by_element(lats[2], fe(1, 2)));

  for (const auto& A : lats) {
    for (const auto& B : lats) {
      IdealLattice S = sum(A, B), I = intersect(A, B);
      // Containments.
      CHECK(contains(S, A.v1()));
      CHECK(contains(S, A.v2()));
      CHECK(contains(S, B.v1()));
      CHECK(contains(A, I.v1()));
      CHECK(contains(B, I.v1()));
      CHECK(contains(A, I.v2()));
      CHECK(contains(B, I.v2()));
      // covol(sum) covol(intersection) = covol(A) covol(B).
      CHECK(S.covolume() * I.covolume() == A.covolume() * B.covolume());
      CHECK(intersect(A, A) == A);
      CHECK(sum(A, A) == A);
    }
  }
  // Integral ideals sum with O to O.
  CHECK(sum(lats[1], O) == O);
  CHECK_THROWS_AS(index_in(lats[1], O), std::domain_error);  // O not inside
}

TEST_CASE("dual lattice via the inverse different") {
  for (long Dl : {-15L, -23L, -47L}) {
    CAPTURE(Dl);
    auto cls = enumerate_reduced(Dl);
    for (const auto& f : cls) {
      IdealLattice P = ideal_from_form(f);
      IdealLattice Pd = multiply(P, inv_different(Dl));
      // |P'/P| = |D|.
      CHECK(index_in(Pd, P) == Int(-Dl));
      // P' is the exact trace-form dual: B(w_i, v_j) = Tr(w_i conj(v_j))/N(P)
      // is an integer matrix of determinant +-1.
      auto B = [&](const FieldElement& u, const FieldElement& v) {
        return fe_trace(fe_mul(u, fe_conj(v), Dl)) / P.covolume();
      };
      Rat b11 = B(Pd.v1(), P.v1()), b12 = B(Pd.v1(), P.v2());
      Rat b21 = B(Pd.v2(), P.v1()), b22 = B(Pd.v2(), P.v2());
      for (const Rat& x : {b11, b12, b21, b22}) CHECK(denominator(x) == 1);
      Rat det = b11 * b22 - b12 * b21;
      CHECK((det == 1 || det == -1));
    }
  }
}

TEST_CASE("coset representatives of d^{-1}a / a") {
  const long D = -23;
  for (const auto& f : enumerate_reduced(D)) {
    IdealLattice P = ideal_from_form(f);
    IdealLattice Pd = multiply(P, inv_different(D));
    auto reps = coset_reps(Pd, P);
    REQUIRE(static_cast<long>(reps.size()) == -D);
    // All reps lie in the ambient and are pairwise incongruent mod P.
    for (size_t i = 0; i < reps.size(); ++i) {
      CHECK(contains(Pd, reps[i]));
      for (size_t j = i + 1; j < reps.size(); ++j) {
        CHECK(!contains(P, fe_sub(reps[i], reps[j])));
      }
    }
  }
}

TEST_CASE("enumerate_by_norm against a brute-force oracle") {
  const long D = -15;
  IdealLattice O = ring_of_integers(D);
  IdealLattice A = ideal_from_form(QuadForm{2, 1, 2});
  IdealLattice Ad = multiply(A, inv_different(D));
  auto reps = coset_reps(Ad, A);

  for (const IdealLattice& L : {O, A}) {
    for (const FieldElement& off :
         {fe(0, 0), reps[3], reps[7], fe_rat(Rat(1, 3), Rat(-2, 5))}) {
      for (long bnum : {0L, 1L, 7L, 30L}) {
        Rat bound(bnum, 2);
        auto got = enumerate_by_norm(L, off, Rat(1), bound);
        // Brute force over a generous coefficient window.
        std::set<std::pair<Rat, Rat>> expect;
        for (long m = -40; m <= 40; ++m) {
          for (long n = -40; n <= 40; ++n) {
            FieldElement lam =
                fe_add(off, fe_rat(Rat(m) * L.v1().x + Rat(n) * L.v2().x,
                                   Rat(m) * L.v1().y + Rat(n) * L.v2().y));
            if (fe_norm(lam, D) <= bound) expect.insert({lam.x, lam.y});
          }
        }
        std::set<std::pair<Rat, Rat>> got_set;
        for (const auto& g : got) got_set.insert({g.x, g.y});
        CHECK(got_set == expect);
        // Sorted by norm, deterministically.
        for (size_t i = 0; i + 1 < got.size(); ++i) {
          CHECK(fe_norm(got[i], D) <= fe_norm(got[i + 1], D));
        }
      }
    }
  }
}

TEST_CASE("coset transport: existence, uniqueness, theta invariance") {
  const long D = -23;
  ClassGroup G(make_fundamental(D));
  IdealLattice a_src = ideal_from_form(G.classes()[1]);
  IdealLattice d_src = multiply(a_src, inv_different(D));
  auto betas = coset_reps(d_src, a_src);

  SUBCASE("transport to itself is the identity on cosets") {
    for (const auto& beta : betas) {
      auto tc = coset_transport(a_src, a_src, beta);
      CHECK(contains(a_src, fe_sub(tc.offset, beta)));
    }
  }

  SUBCASE("transport along b^2/N(b) is a bijection with invariant thetas") {
    // Two different integral representatives of the same target class.
    QuadForm rep1 = coprime_representative(G, 2, Int(D));
    QuadForm rep2 = coprime_representative(G, 2, Int(4 * D * 7));
    REQUIRE(rep1 != rep2);
    std::vector<IdealLattice> dsts;
    for (const QuadForm& rf : {rep1, rep2}) {
      IdealLattice b = ideal_from_form(rf);
      IdealLattice num = multiply(a_src, multiply(b, b));
      dsts.push_back(scale_by_rat(num, Rat(1) / b.covolume()));
    }
    CHECK(dsts[0].covolume() == a_src.covolume());

    for (const auto& a_dst : dsts) {
      std::set<std::pair<Rat, Rat>> seen;
      for (const auto& beta : betas) {
        auto tc = coset_transport(a_src, a_dst, beta);
        IdealLattice dd = multiply(a_dst, inv_different(D));
        CHECK(contains(dd, tc.offset));
        seen.insert({tc.offset.x, tc.offset.y});
      }
      CHECK(seen.size() == betas.size());  // bijection on the 23 cosets
    }

    // Same class, different representative ideal b: the transported cosets
    // have identical norm statistics (the theta series are equal), even
    // though the target lattices differ.
    for (const auto& beta : betas) {
      auto t1 = coset_transport(a_src, dsts[0], beta);
      auto t2 = coset_transport(a_src, dsts[1], beta);
      std::vector<Rat> q1, q2;
      for (const auto& lam :
           enumerate_by_norm(dsts[0], t1.offset, dsts[0].covolume(), Rat(3))) {
        q1.push_back(q_value(dsts[0], lam));
      }
      for (const auto& lam :
           enumerate_by_norm(dsts[1], t2.offset, dsts[1].covolume(), Rat(3))) {
        q2.push_back(q_value(dsts[1], lam));
      }
      CHECK(q1 == q2);
    }
  }

  SUBCASE("beta outside d^{-1} a_src is rejected") {
    CHECK_THROWS_AS(coset_transport(a_src, a_src, fe_rat(Rat(1, 5), Rat(0))),
                    std::domain_error);
  }
}
