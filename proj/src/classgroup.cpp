// classgroup.cpp -- forms, composition, class group structure, characters.
#include "thetalift/classgroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace tl {

namespace {

long long floordiv(long long x, long long y) {  // y > 0
  return x >= 0 ? x / y : -((-x + y - 1) / y);
}

void require_form(const QuadForm& f) {
  if (f.a <= 0 || f.disc() >= 0) {
    throw std::domain_error("QuadForm must be positive definite (a > 0, D < 0)");
  }
}

}  // namespace

std::string QuadForm::str() const {
  return "[" + std::to_string(a) + "," + std::to_string(b) + "," +
         std::to_string(c) + "]";
}

QuadForm principal_form(long D) {
  if (D >= 0 || ((D % 4) + 4) % 4 != 1) {
    throw std::domain_error("principal_form: need D < 0, D = 1 mod 4");
  }
  return {1, 1, (1 - D) / 4};
}

bool is_reduced(const QuadForm& f) {
  if (std::llabs(f.b) > f.a || f.a > f.c) return false;
  if ((std::llabs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

QuadForm reduce(const QuadForm& f_in) {
  require_form(f_in);
  QuadForm f = f_in;
  for (int iter = 0; iter < 100000; ++iter) {
    // Translate b into (-a, a]:  b -> b + 2am,  c -> c + m(b + am).
    long long m = floordiv(f.a - f.b, 2 * f.a);
    if (m != 0) {
      f.c += m * (f.b + f.a * m);
      f.b += 2 * f.a * m;
    }
    if (f.a > f.c) {
      f = QuadForm{f.c, -f.b, f.a};  // apply S
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    if (is_reduced(f)) return f;
  }
  throw std::logic_error("reduce: did not terminate");
}

std::vector<QuadForm> enumerate_reduced(long D) {
  if (D >= 0 || ((D % 4) + 4) % 4 != 1) {
    throw std::domain_error("enumerate_reduced: need D < 0, D = 1 mod 4");
  }
  std::vector<QuadForm> out;
  const long long aD = -static_cast<long long>(D);
  for (long long a = 1; 3 * a * a <= aD; ++a) {
    for (long long b = -a + 1; b <= a; b += 1) {
      if (((b * b - D) % (4 * a)) != 0) continue;
      long long c = (b * b - D) / (4 * a);
      if (c < a) continue;
      if ((std::llabs(b) == a || a == c) && b < 0) continue;
      if (std::gcd(a, std::gcd(std::llabs(b), c)) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// --- exact ideal-lattice composition ---------------------------------------
// Ideals are Z-modules in coordinates relative to (1, omega) with
// omega = (1 + sqrt(D))/2, omega^2 = (D-1)/4 + omega.  The form [a,b,c]
// corresponds to  Z a + Z (-b + sqrt(D))/2 = Z (a,0) + Z ((-b-1)/2, 1).

struct Lat2 {  // HNF basis v1 = (p, 0), v2 = (r, s); det = p s > 0
  Int p, r, s;
};

std::pair<Int, Int> mul_coords(const std::pair<Int, Int>& u,
                               const std::pair<Int, Int>& v, long D) {
  const Int quart((D - 1) / 4);
  return {u.first * v.first + u.second * v.second * quart,
          u.first * v.second + u.second * v.first + u.second * v.second};
}

Lat2 hnf_from_columns(std::vector<std::pair<Int, Int>> cols) {
  // Elementary column operations: Euclid on the second coordinates until a
  // single column carries y != 0.
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
    if (j == -1) break;  // at most one nonzero y remains
    // Reduce the larger |y| by the smaller.
    if (abs(cols[i].second) > abs(cols[j].second)) std::swap(i, j);
    Int q = cols[j].second / cols[i].second;  // truncated division is fine
    cols[j].first -= q * cols[i].first;
    cols[j].second -= q * cols[i].second;
  }
  Lat2 L;
  L.p = 0;
  L.r = 0;
  L.s = 0;
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
    throw std::logic_error("hnf_from_columns: rank < 2");
  }
  L.r %= L.p;
  if (L.r < 0) L.r += L.p;
  return L;
}

QuadForm form_from_lattice(const Lat2& L, long D) {
  // With v1 = p, v2 = r + s omega and N the field norm:
  //   a = N(v1)/det, b = -Tr(v1 conj(v2))/det, c = N(v2)/det, det = p s.
  const Int det = L.p * L.s;
  const Int quart((1 - D) / 4);  // N(x + y omega) = x^2 + x y + y^2 (1-D)/4
  Int a_num = L.p * L.p;
  Int b_num = -(2 * L.p * (L.r + L.s) - L.p * L.s);
  Int c_num = L.r * L.r + L.r * L.s + L.s * L.s * quart;
  if (a_num % det != 0 || b_num % det != 0 || c_num % det != 0) {
    throw std::logic_error("form_from_lattice: lattice is not an ideal");
  }
  Int a = a_num / det, b = b_num / det, c = c_num / det;
  if (b * b - 4 * a * c != D) {
    throw std::logic_error("form_from_lattice: discriminant mismatch");
  }
  return {a.convert_to<long long>(), b.convert_to<long long>(),
          c.convert_to<long long>()};
}

}  // namespace

QuadForm compose(const QuadForm& f, const QuadForm& g) {
  require_form(f);
  require_form(g);
  if (f.disc() != g.disc()) {
    throw std::domain_error("compose: discriminants differ");
  }
  const long D = static_cast<long>(f.disc());
  const std::pair<Int, Int> fb1{Int(f.a), Int(0)}, fb2{Int((-f.b - 1) / 2), Int(1)};
  const std::pair<Int, Int> gb1{Int(g.a), Int(0)}, gb2{Int((-g.b - 1) / 2), Int(1)};
  std::vector<std::pair<Int, Int>> cols = {
      mul_coords(fb1, gb1, D), mul_coords(fb1, gb2, D),
      mul_coords(fb2, gb1, D), mul_coords(fb2, gb2, D)};
  Lat2 L = hnf_from_columns(cols);
  if (L.p * L.s != Int(f.a) * Int(g.a)) {
    throw std::logic_error("compose: norm is not multiplicative");
  }
  return reduce(form_from_lattice(L, D));
}

long class_number_formula(long D) {
  if (D >= 0 || !is_fundamental(D)) {
    throw std::domain_error("class_number_formula: need fundamental D < 0");
  }
  const long w = D == -3 ? 6 : (D == -4 ? 4 : 2);
  Int sum(0);
  for (long n = 1; n < -D; ++n) sum += Int(kronecker(D, n)) * n;
  Int h = -Int(w) * sum;
  if (h % Int(2 * (-D)) != 0) {
    throw std::logic_error("class_number_formula: non-integral result");
  }
  h /= Int(2 * (-D));
  return h.convert_to<long>();
}

// --- ClassGroup -------------------------------------------------------------

ClassGroup::ClassGroup(const FundamentalDiscriminant& disc) : disc_(disc) {
  classes_ = enumerate_reduced(disc.D);
  const int h = static_cast<int>(classes_.size());

  std::map<QuadForm, int> index;
  for (int i = 0; i < h; ++i) index[classes_[i]] = i;
  identity_ = index.at(reduce(principal_form(disc.D)));

  mul_.assign(h, std::vector<int>(h, 0));
  for (int i = 0; i < h; ++i) {
    for (int j = i; j < h; ++j) {
      int k = index.at(compose(classes_[i], classes_[j]));
      mul_[i][j] = k;
      mul_[j][i] = k;
    }
  }
  inv_.assign(h, 0);
  for (int i = 0; i < h; ++i) {
    QuadForm f = classes_[i];
    inv_[i] = index.at(reduce(QuadForm{f.a, -f.b, f.c}));
    if (mul_[i][inv_[i]] != identity_) {
      throw std::logic_error("ClassGroup: inverse is not [a,-b,c]");
    }
  }

  // Abelian structure.  Decompose each Sylow subgroup greedily (pick an
  // element of maximal order whose cyclic span meets the chosen span
  // trivially), then CRT-combine into invariant factors d_1 | d_2 | ...
  if (h > 1) {
    auto order_of_idx = [&](int x) {
      int ord = 1, y = x;
      while (y != identity_) {
        y = mul_[y][x];
        ++ord;
      }
      return ord;
    };
    std::vector<long> primes;
    for (long q = 2, n = h; n > 1; ++q) {
      if (n % q == 0) {
        primes.push_back(q);
        while (n % q == 0) n /= q;
      }
    }
    // per prime: list of (order, generator), orders descending
    std::vector<std::vector<std::pair<long, int>>> per_prime;
    for (long q : primes) {
      std::vector<int> sylow;
      for (int x = 0; x < h; ++x) {
        int ord = order_of_idx(x);
        long o = ord;
        while (o % q == 0) o /= q;
        if (o == 1) sylow.push_back(x);  // q-power order
      }
      std::set<int> span{identity_};
      std::vector<std::pair<long, int>> basis;
      while (static_cast<long>(span.size()) < static_cast<long>(sylow.size())) {
        int best = -1;
        long best_ord = 0;
        for (int x : sylow) {
          if (x == identity_) continue;
          // cyclic span of x must meet the current span only in identity
          bool indep = true;
          int y = x;
          while (y != identity_) {
            if (span.count(y)) {
              indep = false;
              break;
            }
            y = mul_[y][x];
          }
          if (!indep) continue;
          long ord = order_of_idx(x);
          if (ord > best_ord) {
            best_ord = ord;
            best = x;
          }
        }
        if (best == -1) {
          throw std::logic_error("ClassGroup: Sylow decomposition failed");
        }
        basis.emplace_back(best_ord, best);
        // grow the span
        std::set<int> grown;
        for (int s : span) {
          int y = identity_;
          for (long e = 0; e < best_ord; ++e) {
            grown.insert(mul_[s][y]);
            y = mul_[y][best];
          }
        }
        span = std::move(grown);
      }
      std::sort(basis.rbegin(), basis.rend());
      per_prime.push_back(std::move(basis));
    }
    size_t rank = 0;
    for (const auto& b : per_prime) rank = std::max(rank, b.size());
    // Combine slot i across primes (orders coprime => product of the
    // generators has the product order).
    std::vector<std::pair<long, int>> combined;  // descending
    for (size_t i = 0; i < rank; ++i) {
      long d = 1;
      int g = identity_;
      for (const auto& b : per_prime) {
        if (i < b.size()) {
          d *= b[i].first;
          g = mul_[g][b[i].second];
        }
      }
      combined.emplace_back(d, g);
    }
    std::reverse(combined.begin(), combined.end());  // ascending: d_1 | d_2 ...
    for (auto& [d, g] : combined) {
      factors_.push_back(d);
      gens_.push_back(g);
    }
    // Discrete logs by enumerating all exponent tuples; also validates that
    // the decomposition really is a direct product.
    long total = 1;
    for (long d : factors_) total *= d;
    if (total != h) throw std::logic_error("ClassGroup: factor product != h");
    dlog_.assign(h, {});
    std::vector<long> e(factors_.size(), 0);
    std::vector<bool> seen(h, false);
    for (long cnt = 0; cnt < total; ++cnt) {
      int x = identity_;
      for (size_t i = 0; i < e.size(); ++i) {
        for (long k = 0; k < e[i]; ++k) x = mul_[x][gens_[i]];
      }
      if (seen[x]) throw std::logic_error("ClassGroup: not a direct product");
      seen[x] = true;
      dlog_[x] = e;
      // odometer increment
      for (size_t i = 0; i < e.size(); ++i) {
        if (++e[i] < factors_[i]) break;
        e[i] = 0;
      }
    }
  } else {
    dlog_.assign(1, {});
  }
}

int ClassGroup::index_of(const QuadForm& f) const {
  QuadForm r = reduce(f);
  if (r.disc() != disc_.D) {
    throw std::domain_error("index_of: form has the wrong discriminant");
  }
  auto it = std::lower_bound(classes_.begin(), classes_.end(), r);
  if (it == classes_.end() || !(*it == r)) {
    throw std::domain_error("index_of: form is not primitive of this disc");
  }
  return static_cast<int>(it - classes_.begin());
}

int ClassGroup::pow(int i, long e) const {
  long ord = order_of(i);
  e %= ord;
  if (e < 0) e += ord;
  int r = identity_;
  for (long k = 0; k < e; ++k) r = mul_[r][i];
  return r;
}

int ClassGroup::order_of(int i) const {
  int ord = 1, y = i;
  while (y != identity_) {
    y = mul_[y][i];
    ++ord;
  }
  return ord;
}

std::vector<int> ClassGroup::ambiguous_classes() const {
  std::vector<int> out;
  for (int i = 0; i < h(); ++i) {
    if (mul_[i][i] == identity_) out.push_back(i);
  }
  return out;
}

std::vector<int> ClassGroup::principal_genus() const {
  std::set<int> sq;
  for (int i = 0; i < h(); ++i) sq.insert(mul_[i][i]);
  return {sq.begin(), sq.end()};
}

long ClassGroup::genus_count() const {
  return h() / static_cast<long>(principal_genus().size());
}

Cplx ClassGroup::cm_point(int i, const PrecisionContext& ctx) const {
  ctx.activate();
  const QuadForm& f = classes_.at(i);
  Real sq = sqrt(Real(-disc_.D));
  return {Real(-f.b) / (2 * f.a), sq / (2 * f.a)};
}

// --- characters -------------------------------------------------------------

bool ClassCharacter::is_trivial() const {
  for (long e : exps) {
    if (e != 0) return false;
  }
  return true;
}

std::vector<ClassCharacter> characters(const ClassGroup& G) {
  const auto& d = G.invariant_factors();
  std::vector<ClassCharacter> out;
  ClassCharacter chi;
  chi.m = G.exponent();
  chi.exps.assign(d.size(), 0);
  const long h = G.h();
  for (long cnt = 0; cnt < h; ++cnt) {
    out.push_back(chi);
    // lexicographic odometer: most significant digit first
    for (size_t i = chi.exps.size(); i-- > 0;) {
      if (++chi.exps[i] < d[i]) break;
      chi.exps[i] = 0;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ClassCharacter& x, const ClassCharacter& y) {
              return x.exps < y.exps;
            });
  return out;
}

long char_value_num(const ClassGroup& G, const ClassCharacter& chi, int cls) {
  const auto& d = G.invariant_factors();
  const auto& e = G.dlog().at(cls);
  long k = 0;
  const long m = chi.m;
  for (size_t i = 0; i < d.size(); ++i) {
    k = (k + chi.exps[i] * e[i] % m * (m / d[i])) % m;
  }
  return ((k % m) + m) % m;
}

CycQ char_value_cyc(const ClassGroup& G, const ClassCharacter& chi, int cls) {
  return CycQ::zeta_pow(chi.m, char_value_num(G, chi, cls));
}

Cplx char_value(const ClassGroup& G, const ClassCharacter& chi, int cls) {
  return e_of_rational(Int(char_value_num(G, chi, cls)), Int(chi.m));
}

namespace {

int char_index_from_exps(const ClassGroup& G, std::vector<long> exps) {
  const auto& d = G.invariant_factors();
  long idx = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    long e = ((exps[i] % d[i]) + d[i]) % d[i];
    idx = idx * d[i] + e;
  }
  return static_cast<int>(idx);
}

}  // namespace

int char_mul_index(const ClassGroup& G, int i, int j) {
  auto chars = characters(G);
  std::vector<long> e(chars[i].exps);
  for (size_t k = 0; k < e.size(); ++k) e[k] += chars[j].exps[k];
  return char_index_from_exps(G, e);
}

int char_conj_index(const ClassGroup& G, int i) {
  auto chars = characters(G);
  std::vector<long> e(chars[i].exps);
  for (long& x : e) x = -x;
  return char_index_from_exps(G, e);
}

int char_square_index(const ClassGroup& G, int i) {
  return char_mul_index(G, i, i);
}

int char_order(const ClassGroup& G, int i) {
  auto chars = characters(G);
  const auto& d = G.invariant_factors();
  long ord = 1;
  for (size_t k = 0; k < d.size(); ++k) {
    long e = chars[i].exps[k];
    ord = std::lcm(ord, d[k] / std::gcd(d[k], e == 0 ? d[k] : e));
  }
  return static_cast<int>(ord);
}

bool char_is_real(const ClassGroup& G, int i) {
  return char_conj_index(G, i) == i;
}

std::vector<int> genus_character_values(const ClassGroup& G, long p) {
  const long D = G.disc().D;
  bool divides = false;
  for (long q : G.disc().primes) divides |= (q == p);
  if (!divides) {
    throw std::domain_error("genus_character_values: p does not divide D");
  }
  const long p_star = (p % 4 == 1) ? p : -p;
  std::vector<int> vals;
  for (int i = 0; i < G.h(); ++i) {
    QuadForm f = coprime_representative(G, i, Int(-D));
    vals.push_back(kronecker(p_star, f.a));
  }
  return vals;
}

QuadForm coprime_representative(const ClassGroup& G, int cls, const Int& M) {
  const QuadForm f = G.classes().at(cls);
  for (long long L = 1; L <= 64; ++L) {
    for (long long x = -L; x <= L; ++x) {
      for (long long y = -L; y <= L; ++y) {
        if (std::max(std::llabs(x), std::llabs(y)) != L && L > 1) continue;
        if (std::gcd(std::llabs(x), std::llabs(y)) != 1) continue;
        Int n(f.eval(x, y));
        if (gcd(n, M) != 1) continue;
        // complete (x, y) to a unimodular matrix (x u; y w)
        long long u = 0, w = 0;
        long long r0 = x, r1 = y, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
        while (r1 != 0) {
          long long q = r0 / r1;
          long long r2 = r0 - q * r1, x2 = x0 - q * x1, y2 = y0 - q * y1;
          r0 = r1; r1 = r2;
          x0 = x1; x1 = x2;
          y0 = y1; y1 = y2;
        }
        if (r0 < 0) { r0 = -r0; x0 = -x0; y0 = -y0; }
        // x0*x + y0*y = 1; take w = x0, u = -y0 so that x w - y u = 1.
        w = x0;
        u = -y0;
        QuadForm g{f.eval(x, y),
                   2 * f.a * x * u + f.b * (x * w + y * u) + 2 * f.c * y * w,
                   f.eval(u, w)};
        if (g.disc() != f.disc()) {
          throw std::logic_error("coprime_representative: disc changed");
        }
        return g;
      }
    }
  }
  throw std::logic_error("coprime_representative: search exhausted");
}

}  // namespace tl
