// ideallat.cpp -- exact fractional-ideal lattice arithmetic.
#include "thetalift/ideallat.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tl {

namespace {

void require_same_D(const IdealLattice& a, const IdealLattice& b) {
  if (a.D != b.D) {
    throw std::invalid_argument("IdealLattice: mixed discriminants");
  }
}

Rat quart(long D) { return Rat((1 - D) / 4); }

}  // namespace

FieldElement fe(long x, long y) { return {Rat(x), Rat(y)}; }
FieldElement fe_rat(const Rat& x, const Rat& y) { return {x, y}; }

FieldElement fe_add(const FieldElement& a, const FieldElement& b) {
  return {a.x + b.x, a.y + b.y};
}
FieldElement fe_sub(const FieldElement& a, const FieldElement& b) {
  return {a.x - b.x, a.y - b.y};
}
FieldElement fe_neg(const FieldElement& a) { return {-a.x, -a.y}; }

FieldElement fe_mul(const FieldElement& a, const FieldElement& b, long D) {
  // omega^2 = (D-1)/4 + omega
  Rat q((D - 1) / 4);
  return {a.x * b.x + a.y * b.y * q, a.x * b.y + a.y * b.x + a.y * b.y};
}

FieldElement fe_conj(const FieldElement& a) { return {a.x + a.y, -a.y}; }

FieldElement fe_div(const FieldElement& a, const FieldElement& b, long D) {
  Rat nb = fe_norm(b, D);
  if (nb == 0) throw std::domain_error("fe_div: division by zero");
  FieldElement num = fe_mul(a, fe_conj(b), D);
  return {num.x / nb, num.y / nb};
}

FieldElement fe_sqrtD() { return fe(-1, 2); }

Rat fe_norm(const FieldElement& a, long D) {
  return a.x * a.x + a.x * a.y + a.y * a.y * quart(D);
}

Rat fe_trace(const FieldElement& a) { return 2 * a.x + a.y; }

Cplx fe_embed(const FieldElement& a, long D, const PrecisionContext& ctx) {
  ctx.activate();
  auto to_real = [](const Rat& q) {
    return Real(numerator(q).str()) / Real(denominator(q).str());
  };
  // omega = 1/2 + i sqrt(|D|)/2.
  Real re = to_real(a.x) + to_real(a.y) / 2;
  Real im = to_real(a.y) * sqrt(Real(-D)) / 2;
  return {re, im};
}

FieldElement IdealLattice::v1() const {
  return {Rat(p) / Rat(den), Rat(0)};
}
FieldElement IdealLattice::v2() const {
  return {Rat(r) / Rat(den), Rat(s) / Rat(den)};
}
Rat IdealLattice::covolume() const { return Rat(p * s) / Rat(den * den); }

IdealLattice lattice_from_columns(long D,
                                  const std::vector<FieldElement>& cols_in) {
  // Clear denominators to integer columns over a common positive den.
  Int den(1);
  for (const auto& c : cols_in) {
    den = lcm(den, denominator(c.x));
    den = lcm(den, denominator(c.y));
  }
  if (den < 0) den = -den;
  std::vector<std::pair<Int, Int>> cols;
  cols.reserve(cols_in.size());
  for (const auto& c : cols_in) {
    Rat xs = c.x * den, ys = c.y * den;
    cols.emplace_back(numerator(xs), numerator(ys));
  }
  // Column-Euclid on the second coordinates until only one column keeps a
  // nonzero y; gcd the rest into the first coordinate.
  for (;;) {
    int i = -1, j = -1;
    for (int k = 0; k < static_cast<int>(cols.size()); ++k) {
      if (cols[k].second == 0) continue;
      if (i == -1) {
        i = k;
      } else {
        j = k;
        break;
      }
    }
    if (j == -1) break;
    if (abs(cols[i].second) > abs(cols[j].second)) std::swap(i, j);
    Int q = cols[j].second / cols[i].second;
    cols[j].first -= q * cols[i].first;
    cols[j].second -= q * cols[i].second;
  }
  IdealLattice L;
  L.D = D;
  L.p = 0;
  L.r = 0;
  L.s = 0;
  L.den = den;
  for (const auto& [x, y] : cols) {
    if (y != 0) {
      L.r = x;
      L.s = y;
    } else {
      L.p = gcd(L.p, x);
    }
  }
  if (L.p < 0) L.p = -L.p;
  if (L.s < 0) {
    L.s = -L.s;
    L.r = -L.r;
  }
  if (L.p == 0 || L.s == 0) {
    throw std::domain_error("lattice_from_columns: generators have rank < 2");
  }
  L.r %= L.p;
  if (L.r < 0) L.r += L.p;
  // Normalize the fraction (p, r, s, den) by its content.
  Int g = gcd(gcd(L.p, L.r), gcd(L.s, L.den));
  L.p /= g;
  L.r /= g;
  L.s /= g;
  L.den /= g;
  return L;
}

IdealLattice ring_of_integers(long D) {
  return lattice_from_columns(D, {fe(1, 0), fe(0, 1)});
}

IdealLattice ideal_from_form(const QuadForm& f) {
  const long D = static_cast<long>(f.disc());
  if (D >= 0 || ((D % 4) + 4) % 4 != 1) {
    throw std::domain_error("ideal_from_form: need D < 0, D = 1 mod 4");
  }
  // Z a + Z (-b + sqrt(D))/2; (-b + sqrt(D))/2 = (-b-1)/2 + omega.
  return lattice_from_columns(
      D, {fe(f.a, 0), fe_rat(Rat(-f.b - 1) / 2, Rat(1))});
}

IdealLattice principal_ideal(long D, const FieldElement& x) {
  return lattice_from_columns(D, {x, fe_mul(x, fe(0, 1), D)});
}

IdealLattice inv_different(long D) {
  // 1/sqrt(D) = (2 omega - 1)/D.
  // Careful: Rat(n, d) with a negative built-in denominator resolves to an
  // unsigned conversion in boost; divide instead.
  FieldElement inv_sqrt = fe_rat(Rat(-1) / D, Rat(2) / D);
  return principal_ideal(D, inv_sqrt);
}

IdealLattice multiply(const IdealLattice& a, const IdealLattice& b) {
  require_same_D(a, b);
  std::vector<FieldElement> cols = {
      fe_mul(a.v1(), b.v1(), a.D), fe_mul(a.v1(), b.v2(), a.D),
      fe_mul(a.v2(), b.v1(), a.D), fe_mul(a.v2(), b.v2(), a.D)};
  return lattice_from_columns(a.D, cols);
}

IdealLattice conj_lattice(const IdealLattice& a) {
  return lattice_from_columns(a.D, {fe_conj(a.v1()), fe_conj(a.v2())});
}

IdealLattice sum(const IdealLattice& a, const IdealLattice& b) {
  require_same_D(a, b);
  return lattice_from_columns(a.D, {a.v1(), a.v2(), b.v1(), b.v2()});
}

IdealLattice scale_by_rat(const IdealLattice& a, const Rat& q) {
  if (q == 0) throw std::domain_error("scale_by_rat: zero scalar");
  Rat aq = q < 0 ? -q : q;
  std::vector<FieldElement> cols = {
      fe_rat(a.v1().x * aq, a.v1().y * aq),
      fe_rat(a.v2().x * aq, a.v2().y * aq)};
  return lattice_from_columns(a.D, cols);
}

IdealLattice scale_by_element(const IdealLattice& a, const FieldElement& x) {
  return lattice_from_columns(
      a.D, {fe_mul(a.v1(), x, a.D), fe_mul(a.v2(), x, a.D)});
}

IdealLattice intersect(const IdealLattice& A, const IdealLattice& B) {
  require_same_D(A, B);
  // Common denominator L: columns of E = [MA | -MB] are integer vectors with
  // MA u / L in A.  The kernel of E (rank 2) yields the intersection.
  Int L = lcm(A.den, B.den);
  Int fa = L / A.den, fb = L / B.den;
  std::array<std::array<Int, 4>, 2> E = {{{A.p * fa, A.r * fa, -B.p * fb, -B.r * fb},
                                          {Int(0), A.s * fa, Int(0), -B.s * fb}}};
  // U tracks the column operations; kernel columns of E appear as columns
  // of U under the zeroed columns.
  std::array<std::array<Int, 4>, 4> U = {};
  for (int i = 0; i < 4; ++i) U[i][i] = 1;
  auto colop = [&](int dst, int src, const Int& q) {
    for (int row = 0; row < 2; ++row) E[row][dst] -= q * E[row][src];
    for (int row = 0; row < 4; ++row) U[row][dst] -= q * U[row][src];
  };
  std::vector<int> active = {0, 1, 2, 3};
  for (int row = 0; row < 2; ++row) {
    for (;;) {
      int i = -1, j = -1;
      for (int k : active) {
        if (E[row][k] == 0) continue;
        if (i == -1 || abs(E[row][k]) < abs(E[row][i])) i = k;
      }
      for (int k : active) {
        if (k != i && E[row][k] != 0) {
          j = k;
          break;
        }
      }
      if (i == -1 || j == -1) {
        if (i != -1) {
          active.erase(std::find(active.begin(), active.end(), i));
        }
        break;
      }
      colop(j, i, E[row][j] / E[row][i]);
    }
  }
  // `active` now indexes the kernel columns (both rows of E zero there).
  std::vector<FieldElement> gens;
  for (int k : active) {
    for (int row = 0; row < 2; ++row) {
      if (E[row][k] != 0) throw std::logic_error("intersect: kernel not zero");
    }
    // x = (MA u)/L with u = (U[0][k], U[1][k]).
    Int xi = A.p * fa * U[0][k] + A.r * fa * U[1][k];
    Int yi = A.s * fa * U[1][k];
    gens.push_back(fe_rat(Rat(xi) / Rat(L), Rat(yi) / Rat(L)));
  }
  return lattice_from_columns(A.D, gens);
}

bool contains(const IdealLattice& a, const FieldElement& x) {
  // x = m v1 + n v2 with integer m, n.
  Rat n = x.y * Rat(a.den) / Rat(a.s);
  if (denominator(n) != 1) return false;
  Rat m = (x.x * Rat(a.den) - n * Rat(a.r)) / Rat(a.p);
  return denominator(m) == 1;
}

Int index_in(const IdealLattice& big, const IdealLattice& small) {
  require_same_D(big, small);
  if (!contains(big, small.v1()) || !contains(big, small.v2())) {
    throw std::domain_error("index_in: not a sublattice");
  }
  Rat ratio = small.covolume() / big.covolume();
  if (denominator(ratio) != 1) {
    throw std::logic_error("index_in: non-integral covolume ratio");
  }
  return numerator(ratio);
}

Rat q_value(const IdealLattice& a, const FieldElement& x) {
  return fe_norm(x, a.D) / a.covolume();
}

QuadForm form_of_ideal(const IdealLattice& a) {
  // Oriented basis (v1, v2) has det > 0 by construction, so
  // (N(v1), -Tr(v1 conj v2), N(v2)) / covol is the attached form.
  Rat cv = a.covolume();
  Rat qa = fe_norm(a.v1(), a.D) / cv;
  Rat qc = fe_norm(a.v2(), a.D) / cv;
  Rat qb = -fe_trace(fe_mul(a.v1(), fe_conj(a.v2()), a.D)) / cv;
  if (denominator(qa) != 1 || denominator(qb) != 1 || denominator(qc) != 1) {
    throw std::domain_error("form_of_ideal: lattice is not an ideal");
  }
  QuadForm f{numerator(qa).convert_to<long long>(),
             numerator(qb).convert_to<long long>(),
             numerator(qc).convert_to<long long>()};
  if (f.disc() != a.D) {
    throw std::logic_error("form_of_ideal: discriminant mismatch");
  }
  return f;
}

int class_of_ideal(const ClassGroup& G, const IdealLattice& a) {
  return G.index_of(form_of_ideal(a));
}

std::vector<FieldElement> coset_reps(const IdealLattice& ambient,
                                     const IdealLattice& sub) {
  require_same_D(ambient, sub);
  // Integer coordinates of sub's basis against ambient's basis.
  auto coords = [&](const FieldElement& x) -> std::pair<Int, Int> {
    Rat n = x.y * Rat(ambient.den) / Rat(ambient.s);
    Rat m = (x.x * Rat(ambient.den) - n * Rat(ambient.r)) / Rat(ambient.p);
    if (denominator(n) != 1 || denominator(m) != 1) {
      throw std::domain_error("coset_reps: not a sublattice");
    }
    return {numerator(m), numerator(n)};
  };
  auto [m1, n1] = coords(sub.v1());
  auto [m2, n2] = coords(sub.v2());
  // Column HNF of ((m1 m2); (n1 n2)) -> ((e f); (0 g)).
  while (n1 != 0) {
    if (n2 == 0 || (n1 != 0 && abs(n1) < abs(n2))) {
      std::swap(m1, m2);
      std::swap(n1, n2);
      continue;
    }
    Int q = n1 / n2;
    m1 -= q * m2;
    n1 -= q * n2;
  }
  Int e = m1 < 0 ? -m1 : m1;
  Int g = n2 < 0 ? -n2 : n2;
  if (e == 0 || g == 0) throw std::logic_error("coset_reps: rank deficiency");
  std::vector<FieldElement> reps;
  for (Int i(0); i < e; ++i) {
    for (Int j(0); j < g; ++j) {
      FieldElement r1 = ambient.v1(), r2 = ambient.v2();
      reps.push_back(fe_rat(Rat(i) * r1.x + Rat(j) * r2.x,
                            Rat(i) * r1.y + Rat(j) * r2.y));
    }
  }
  return reps;
}

std::vector<FieldElement> enumerate_by_norm(const IdealLattice& L,
                                            const FieldElement& offset,
                                            const Rat& norm_divisor,
                                            const Rat& bound) {
  if (norm_divisor <= 0 || bound < 0) {
    throw std::domain_error("enumerate_by_norm: need norm_divisor > 0, bound >= 0");
  }
  const long D = L.D;
  const Rat R = bound * norm_divisor;  // enumerate N(lambda) <= R
  const FieldElement w1 = L.v1(), w2 = L.v2();

  auto bilin = [&](const FieldElement& u, const FieldElement& v) {
    return fe_norm(fe_add(u, v), D) - fe_norm(u, D) - fe_norm(v, D);
  };
  const Rat A = fe_norm(w1, D), C = fe_norm(w2, D), B = bilin(w1, w2);
  const Rat Dm = bilin(offset, w1), En = bilin(offset, w2), F0 = fe_norm(offset, D);
  const Rat det4 = 4 * A * C - B * B;  // > 0 (definite)

  // Center of the ellipse: solve (2A B; B 2C) (m n)^T = -(Dm En)^T.
  const Rat m0 = (En * B - 2 * C * Dm) / det4;
  const Rat n0 = (Dm * B - 2 * A * En) / det4;
  const Rat qmin =
      A * m0 * m0 + B * m0 * n0 + C * n0 * n0 + Dm * m0 + En * n0 + F0;
  const Rat Reff = R - qmin;
  std::vector<FieldElement> out;
  if (Reff < 0) return out;

  auto to_d = [](const Rat& q) {
    return numerator(q).convert_to<double>() /
           denominator(q).convert_to<double>();
  };
  const double em = std::sqrt(std::max(0.0, to_d(4 * C * Reff / det4))) + 2;
  const double en = std::sqrt(std::max(0.0, to_d(4 * A * Reff / det4))) + 2;
  const long mlo = static_cast<long>(std::floor(to_d(m0) - em));
  const long mhi = static_cast<long>(std::ceil(to_d(m0) + em));
  const long nlo = static_cast<long>(std::floor(to_d(n0) - en));
  const long nhi = static_cast<long>(std::ceil(to_d(n0) + en));

  for (long m = mlo; m <= mhi; ++m) {
    for (long n = nlo; n <= nhi; ++n) {
      FieldElement lam = fe_add(
          offset, fe_rat(Rat(m) * w1.x + Rat(n) * w2.x,
                         Rat(m) * w1.y + Rat(n) * w2.y));
      if (fe_norm(lam, D) <= R) out.push_back(lam);
    }
  }
  std::sort(out.begin(), out.end(),
            [&](const FieldElement& u, const FieldElement& v) {
              Rat nu = fe_norm(u, D), nv = fe_norm(v, D);
              if (nu != nv) return nu < nv;
              if (u.x != v.x) return u.x < v.x;
              return u.y < v.y;
            });
  return out;
}

TransportedCoset coset_transport(const IdealLattice& a_src,
                                 const IdealLattice& a_dst,
                                 const FieldElement& beta) {
  require_same_D(a_src, a_dst);
  const long D = a_src.D;
  const IdealLattice idiff = inv_different(D);
  const IdealLattice dual_src = multiply(a_src, idiff);
  const IdealLattice dual_dst = multiply(a_dst, idiff);
  if (!contains(dual_src, beta)) {
    throw std::domain_error("coset_transport: beta not in d^{-1} a_src");
  }
  // Congruence lattice Lambda: equals a_src + a_dst at ramified primes and
  // d^{-1}(a_src + a_dst) away from them.
  const IdealLattice S = sum(a_src, a_dst);
  const IdealLattice Lambda =
      sum(S, scale_by_rat(multiply(S, idiff), Rat(-D)));

  const std::vector<FieldElement> reps = coset_reps(dual_dst, a_dst);
  TransportedCoset out;
  out.lattice = a_dst;
  int hits = 0;
  for (const auto& rep : reps) {
    if (contains(Lambda, fe_sub(rep, beta))) {
      out.offset = rep;
      ++hits;
    }
  }
  if (hits != 1) {
    throw std::logic_error(
        "coset_transport: expected exactly one matching coset (ideals not "
        "locally equal at the ramified primes?)");
  }
  return out;
}

}  // namespace tl
