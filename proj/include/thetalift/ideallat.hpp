// ideallat.hpp -- fractional ideals of Q(sqrt(D)) as exact rank-2 lattices.
// Elements are written against the integral basis (1, omega) with
// omega = (1 + sqrt(D))/2.  A lattice is stored by its canonical
// Hermite-normal-form basis v1 = (p, 0)/den, v2 = (r, s)/den with p, s > 0
// and 0 <= r < p, so equality of lattices is equality of the stored data.
// On top of the module arithmetic this provides the discriminant-group
// machinery: duals via the inverse different, coset representatives of
// d^{-1}a / a, norm-bounded enumeration of coset elements, and the
// transport of cosets between ideals in the same genus-orbit (the adelic
// comparison underlying the vector-valued theta functions).
#pragma once

#include "thetalift/classgroup.hpp"

#include <vector>

namespace tl {

// x + y*omega with exact rational coordinates.
struct FieldElement {
  Rat x, y;
  bool operator==(const FieldElement&) const = default;
};

FieldElement fe(long x, long y);
FieldElement fe_rat(const Rat& x, const Rat& y);
FieldElement fe_add(const FieldElement& a, const FieldElement& b);
FieldElement fe_sub(const FieldElement& a, const FieldElement& b);
FieldElement fe_neg(const FieldElement& a);
FieldElement fe_mul(const FieldElement& a, const FieldElement& b, long D);
FieldElement fe_div(const FieldElement& a, const FieldElement& b, long D);
FieldElement fe_conj(const FieldElement& a);  // omega -> 1 - omega
FieldElement fe_sqrtD();                      // sqrt(D) = 2*omega - 1
Rat fe_norm(const FieldElement& a, long D);   // x^2 + xy + y^2 (1-D)/4
Rat fe_trace(const FieldElement& a);          // 2x + y
Cplx fe_embed(const FieldElement& a, long D, const PrecisionContext& ctx);

struct IdealLattice {
  long D = 0;
  Int p, r, s, den;  // canonical HNF data as described above

  FieldElement v1() const;  // (p, 0) / den
  FieldElement v2() const;  // (r, s) / den
  Rat covolume() const;     // p s / den^2 = N(a) when a is an ideal
  bool operator==(const IdealLattice&) const = default;
};

// Canonicalizes the span of arbitrary generators (throws if rank < 2).
IdealLattice lattice_from_columns(long D, const std::vector<FieldElement>& cols);

IdealLattice ring_of_integers(long D);
// The module Z a + Z (-b + sqrt(D))/2 attached to [a, b, c].
IdealLattice ideal_from_form(const QuadForm& f);
// Principal fractional ideal x O.
IdealLattice principal_ideal(long D, const FieldElement& x);
// The inverse different d^{-1} = (1/sqrt(D)) O.
IdealLattice inv_different(long D);

IdealLattice multiply(const IdealLattice& a, const IdealLattice& b);
IdealLattice conj_lattice(const IdealLattice& a);
IdealLattice sum(const IdealLattice& a, const IdealLattice& b);
IdealLattice intersect(const IdealLattice& a, const IdealLattice& b);
IdealLattice scale_by_rat(const IdealLattice& a, const Rat& q);
IdealLattice scale_by_element(const IdealLattice& a, const FieldElement& x);

bool contains(const IdealLattice& a, const FieldElement& x);
/// [big : small] for small a sublattice of big; throws otherwise.
Int index_in(const IdealLattice& big, const IdealLattice& small);

/// Q(x) = N(x) / N(a): the rational quadratic form on d^{-1}a / a.
Rat q_value(const IdealLattice& a, const FieldElement& x);

// The form attached to the oriented canonical basis; reduces to the class
// representative of [a].  Exact (throws if the lattice is not an ideal).
QuadForm form_of_ideal(const IdealLattice& a);
int class_of_ideal(const ClassGroup& G, const IdealLattice& a);

// Representatives of ambient/sub (sub contained in ambient), in a fixed
// deterministic order of length [ambient : sub].
std::vector<FieldElement> coset_reps(const IdealLattice& ambient,
                                     const IdealLattice& sub);

// All lambda in offset + L with N(lambda)/norm_divisor <= bound, sorted by
// (norm, x, y).  Exact: double-precision boxes with slack select candidates,
// rational arithmetic filters them.
std::vector<FieldElement> enumerate_by_norm(const IdealLattice& L,
                                            const FieldElement& offset,
                                            const Rat& norm_divisor,
                                            const Rat& bound);

// Transports the coset beta + a_src of d^{-1}a_src to the ideal a_dst,
// which must agree with a_src locally at every prime dividing D (as happens
// for a_dst = a_src b^2 / N(b) with N(b) coprime to D).  The result is the
// unique coset offset + a_dst of d^{-1}a_dst whose elements are congruent
// to beta modulo a_p at all ramified p; concretely the congruence lattice
// is  Lambda = (a_src + a_dst) + |D| d^{-1}(a_src + a_dst).
struct TransportedCoset {
  IdealLattice lattice;  // a_dst
  FieldElement offset;
};
TransportedCoset coset_transport(const IdealLattice& a_src,
                                 const IdealLattice& a_dst,
                                 const FieldElement& beta);

}  // namespace tl
