// classgroup.hpp -- binary quadratic forms of odd fundamental discriminant
// D < 0: Gauss reduction, composition (computed through exact ideal-lattice
// products in the ring of integers), the class group with its abelian
// structure, class group characters with exact root-of-unity values, genus
// theory, CM points, and the Dirichlet class number formula used as an
// independent cross-check.
#pragma once

#include "thetalift/arith.hpp"
#include "thetalift/cyclotomic.hpp"

#include <string>
#include <vector>

namespace tl {

// The form a x^2 + b x y + c y^2, always positive definite here (a > 0).
struct QuadForm {
  long long a = 0, b = 0, c = 0;
  long long disc() const { return b * b - 4 * a * c; }
  long long eval(long long x, long long y) const {
    return a * x * x + b * x * y + c * y * y;
  }
  std::string str() const;
  bool operator==(const QuadForm&) const = default;
  auto operator<=>(const QuadForm&) const = default;  // lex on (a, b, c)
};

QuadForm principal_form(long D);
bool is_reduced(const QuadForm& f);
QuadForm reduce(const QuadForm& f);
// All Gauss-reduced primitive forms of discriminant D, sorted by (a, b, c).
std::vector<QuadForm> enumerate_reduced(long D);
// Gauss composition of two forms of the same discriminant; returns the
// reduced representative.
QuadForm compose(const QuadForm& f, const QuadForm& g);

// Dirichlet's analytic class number formula
//   h(D) = - w_k / (2 |D|) * sum_{n=1}^{|D|-1} (D|n) n,
// exact in integer arithmetic.  Serves as the independent oracle for the
// enumerative class count.
long class_number_formula(long D);

class ClassGroup {
 public:
  explicit ClassGroup(const FundamentalDiscriminant& disc);

  const FundamentalDiscriminant& disc() const { return disc_; }
  long h() const { return static_cast<long>(classes_.size()); }
  const std::vector<QuadForm>& classes() const { return classes_; }
  int identity() const { return identity_; }

  int index_of(const QuadForm& f) const;  // reduces f first
  int mul(int i, int j) const { return mul_[i][j]; }
  int inv(int i) const { return inv_[i]; }
  int pow(int i, long e) const;
  int order_of(int i) const;
  // The action of an idele class [h] on [a] coming from GSpin: [h]^2 [a].
  int class_action(int h_cls, int a_cls) const {
    return mul(mul(h_cls, h_cls), a_cls);
  }

  // Abelian structure: invariant factors d_1 | d_2 | ... with generators
  // gen_[i] of order d_i, and discrete logarithms for every class.
  const std::vector<long>& invariant_factors() const { return factors_; }
  const std::vector<int>& generators() const { return gens_; }
  const std::vector<std::vector<long>>& dlog() const { return dlog_; }
  long exponent() const { return factors_.empty() ? 1 : factors_.back(); }

  // Genus theory.
  std::vector<int> ambiguous_classes() const;  // the 2-torsion
  std::vector<int> principal_genus() const;    // the subgroup of squares
  long genus_count() const;                    // 2^(t-1)

  // CM point of the i-th reduced form: the root of a tau^2 + b tau + c in
  // the upper half plane, (-b + i sqrt|D|) / (2a).  Reduced forms land in
  // the standard fundamental domain, with Im >= sqrt(3)/2.
  Cplx cm_point(int i, const PrecisionContext& ctx) const;

 private:
  FundamentalDiscriminant disc_;
  std::vector<QuadForm> classes_;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  int identity_ = 0;
  std::vector<long> factors_;
  std::vector<int> gens_;
  std::vector<std::vector<long>> dlog_;
};

// A character of the class group, stored by its exponents against the
// generators of the invariant-factor decomposition.  Values are exact roots
// of unity e(value_num / m) with m the group exponent.
struct ClassCharacter {
  long m = 1;               // group exponent
  std::vector<long> exps;   // exponent against generator i, mod d_i

  bool is_trivial() const;
};

// All h characters in canonical order: the trivial character first, then
// ascending lexicographically by exponent vector.
std::vector<ClassCharacter> characters(const ClassGroup& G);

// chi(class) = e(k/m): the integer k mod m, the exact value, numerically.
long char_value_num(const ClassGroup& G, const ClassCharacter& chi, int cls);
CycQ char_value_cyc(const ClassGroup& G, const ClassCharacter& chi, int cls);
Cplx char_value(const ClassGroup& G, const ClassCharacter& chi, int cls);

// Index arithmetic in the dual group (indices into characters(G)).
int char_mul_index(const ClassGroup& G, int i, int j);
int char_conj_index(const ClassGroup& G, int i);
int char_square_index(const ClassGroup& G, int i);
int char_order(const ClassGroup& G, int i);
bool char_is_real(const ClassGroup& G, int i);

// Genus character attached to the prime p | D: the value +-1 of
// (p* | n), p* = (-1)^((p-1)/2) p, on numbers n coprime to D represented by
// the class.  Returned per class index.
std::vector<int> genus_character_values(const ClassGroup& G, long p);

// A form in the given class whose first coefficient is coprime to M.
QuadForm coprime_representative(const ClassGroup& G, int cls, const Int& M);

}  // namespace tl
