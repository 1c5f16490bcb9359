// cyclotomic.cpp -- exact Q(zeta_m) arithmetic.
#include "thetalift/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace tl {

namespace {

void require_same(const CycQ& a, const CycQ& b) {
  if (a.m != b.m) {
    throw std::invalid_argument("CycQ: mixed cyclotomic orders; embed first");
  }
}

std::mutex g_phi_mutex;
std::map<long, std::vector<Int>> g_phi_cache;

// Divides the integer polynomial `num` by the monic integer polynomial
// `den`, asserting exactness.  Both are constant-term-first.
std::vector<Int> exact_div(std::vector<Int> num, const std::vector<Int>& den) {
  if (den.empty() || den.back() != 1) {
    throw std::logic_error("exact_div: denominator must be monic");
  }
  std::vector<Int> quot(num.size() - den.size() + 1, Int(0));
  for (long i = static_cast<long>(quot.size()) - 1; i >= 0; --i) {
    Int q = num[i + den.size() - 1];
    quot[i] = q;
    if (q == 0) continue;
    for (size_t j = 0; j < den.size(); ++j) num[i + j] -= q * den[j];
  }
  for (const Int& r : num) {
    if (r != 0) throw std::logic_error("exact_div: division not exact");
  }
  return quot;
}

}  // namespace

std::vector<Int> cyclotomic_poly(long m) {
  if (m < 1) throw std::domain_error("cyclotomic_poly: need m >= 1");
  {
    std::lock_guard<std::mutex> lock(g_phi_mutex);
    auto it = g_phi_cache.find(m);
    if (it != g_phi_cache.end()) return it->second;
  }
  // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, computed recursively.
  std::vector<Int> num(static_cast<size_t>(m) + 1, Int(0));
  num[0] = -1;
  num[static_cast<size_t>(m)] = 1;
  std::vector<Int> phi = num;
  for (long d = 1; d < m; ++d) {
    if (m % d == 0) phi = exact_div(phi, cyclotomic_poly(d));
  }
  std::lock_guard<std::mutex> lock(g_phi_mutex);
  return g_phi_cache.emplace(m, phi).first->second;
}

CycQ CycQ::zero(long m) { return CycQ(m); }

CycQ CycQ::one(long m) {
  CycQ r(m);
  r.c[0] = 1;
  return r;
}

CycQ CycQ::rational(long m, const Rat& x) {
  CycQ r(m);
  r.c[0] = x;
  return r;
}

CycQ CycQ::zeta_pow(long m, long k) {
  CycQ r(m);
  k %= m;
  if (k < 0) k += m;
  r.c[static_cast<size_t>(k)] = 1;
  return r;
}

CycQ operator+(const CycQ& a, const CycQ& b) {
  require_same(a, b);
  CycQ r(a.m);
  for (long i = 0; i < a.m; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

CycQ operator-(const CycQ& a, const CycQ& b) {
  require_same(a, b);
  CycQ r(a.m);
  for (long i = 0; i < a.m; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

CycQ operator-(const CycQ& a) {
  CycQ r(a.m);
  for (long i = 0; i < a.m; ++i) r.c[i] = -a.c[i];
  return r;
}

CycQ operator*(const CycQ& a, const CycQ& b) {
  require_same(a, b);
  CycQ r(a.m);
  for (long i = 0; i < a.m; ++i) {
    if (a.c[i] == 0) continue;
    for (long j = 0; j < a.m; ++j) {
      if (b.c[j] == 0) continue;
      r.c[(i + j) % a.m] += a.c[i] * b.c[j];
    }
  }
  return r;
}

CycQ operator*(const Rat& a, const CycQ& b) {
  CycQ r(b.m);
  for (long i = 0; i < b.m; ++i) r.c[i] = a * b.c[i];
  return r;
}

CycQ& operator+=(CycQ& a, const CycQ& b) {
  require_same(a, b);
  for (long i = 0; i < a.m; ++i) a.c[i] += b.c[i];
  return a;
}

CycQ conj_cyc(const CycQ& a) {
  CycQ r(a.m);
  for (long i = 0; i < a.m; ++i) r.c[((a.m - i) % a.m)] += a.c[i];
  return r;
}

bool is_zero(const CycQ& a) {
  // Reduce modulo Phi_m over Q, then check the remainder vanishes.
  std::vector<Int> phi = cyclotomic_poly(a.m);
  std::vector<Rat> rem(a.c);
  const size_t dp = phi.size() - 1;  // degree of Phi_m (monic)
  for (long i = static_cast<long>(rem.size()) - 1;
       i >= static_cast<long>(dp); --i) {
    Rat q = rem[i];
    if (q == 0) continue;
    for (size_t j = 0; j <= dp; ++j) {
      rem[i - dp + j] -= q * Rat(phi[j]);
    }
  }
  for (size_t i = 0; i < dp && i < rem.size(); ++i) {
    if (rem[i] != 0) return false;
  }
  return true;
}

bool equal(const CycQ& a, const CycQ& b) { return is_zero(a - b); }

CycQ embed(const CycQ& a, long M) {
  if (M % a.m != 0) throw std::invalid_argument("CycQ embed: need m | M");
  long k = M / a.m;
  CycQ r(M);
  for (long i = 0; i < a.m; ++i) r.c[(i * k) % M] += a.c[i];
  return r;
}

Cplx to_cplx(const CycQ& a) {
  Cplx acc;
  for (long i = 0; i < a.m; ++i) {
    if (a.c[i] == 0) continue;
    Real coeff(numerator(a.c[i]).str());
    coeff /= Real(denominator(a.c[i]).str());
    acc += coeff * e_of_rational(Int(i), Int(a.m));
  }
  return acc;
}

}  // namespace tl
