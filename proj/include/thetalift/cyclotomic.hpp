// cyclotomic.hpp -- exact arithmetic in Q(zeta_m).  Elements are stored as
// rational polynomials in zeta_m modulo x^m - 1; equality (and in particular
// exact vanishing) is decided by reducing modulo the m-th cyclotomic
// polynomial.  This is the spine for the "exactly zero" verification of
// character sums, where floating point would only ever give "small".
#pragma once

#include "thetalift/numerics.hpp"

#include <vector>

namespace tl {

struct CycQ {
  long m = 1;          // we work in Q(zeta_m)
  std::vector<Rat> c;  // coefficients of 1, zeta, ..., zeta^{m-1}

  CycQ() : m(1), c(1, Rat(0)) {}
  explicit CycQ(long m_) : m(m_), c(static_cast<size_t>(m_), Rat(0)) {}

  static CycQ zero(long m);
  static CycQ one(long m);
  static CycQ rational(long m, const Rat& r);
  static CycQ zeta_pow(long m, long k);  // zeta_m^k, any integer k
};

CycQ operator+(const CycQ& a, const CycQ& b);
CycQ operator-(const CycQ& a, const CycQ& b);
CycQ operator-(const CycQ& a);
CycQ operator*(const CycQ& a, const CycQ& b);
CycQ operator*(const Rat& a, const CycQ& b);
CycQ& operator+=(CycQ& a, const CycQ& b);

// Galois conjugation zeta -> zeta^{-1} (complex conjugation).
CycQ conj_cyc(const CycQ& a);

// Exact zero test / equality modulo Phi_m.
bool is_zero(const CycQ& a);
bool equal(const CycQ& a, const CycQ& b);

// Embeds Q(zeta_m) into Q(zeta_M) via zeta_m -> zeta_M^{M/m}; requires m | M.
CycQ embed(const CycQ& a, long M);

// Numeric evaluation (for cross-checks against the floating-point path).
Cplx to_cplx(const CycQ& a);

// Coefficients of the m-th cyclotomic polynomial, constant term first.
std::vector<Int> cyclotomic_poly(long m);

}  // namespace tl
