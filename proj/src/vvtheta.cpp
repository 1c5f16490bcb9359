#include "thetalift/vvtheta.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tl {

namespace {

// A / sqrt(D) = A (2 omega - 1) / D, the generator of d^{-1}P / P used to
// identify the discriminant group with Z/|D|.
FieldElement disc_group_generator(long D, long A) {
  return fe_rat(Rat(-A) / D, Rat(2 * A) / D);
}

}  // namespace

DiscriminantForm discform_of_base(const ClassGroup& G, int a_class) {
  QuadForm fa = coprime_representative(G, a_class, Int(G.disc().abs_D()));
  return build_discform(G.disc().D, static_cast<long>(fa.a));
}

VVTheta vv_theta(const ClassGroup& G, int a_class, int h_class, long n_max,
                 bool parallel) {
  if (n_max < 0) throw std::domain_error("vv_theta: need n_max >= 0");
  const long D = G.disc().D;
  const long n = -D;

  VVTheta out;
  out.a_class = a_class;
  out.h_class = h_class;
  out.a_form = coprime_representative(G, a_class, Int(n));
  out.h_form = coprime_representative(G, h_class, Int(n));
  out.A = static_cast<long>(out.a_form.a);
  out.n_max = n_max;

  IdealLattice P = ideal_from_form(out.a_form);
  IdealLattice B = ideal_from_form(out.h_form);
  // a_dst = P b^2 / N(b): class [h]^2 [a], norm N(P), locally identical to
  // P at every prime dividing D (N(b) is coprime to D).
  IdealLattice a_dst =
      scale_by_rat(multiply(multiply(P, B), B), Rat(1) / B.covolume());
  if (!(a_dst.covolume() == P.covolume())) {
    throw std::logic_error("vv_theta: transported lattice norm mismatch");
  }
  const FieldElement gen = disc_group_generator(D, out.A);
  const Rat norm_div = a_dst.covolume();  // Q(lambda) = N(lambda) / N(P)
  const Rat bound = Rat(n_max) / n;

  out.counts.assign(n, std::vector<Int>(n_max + 1, Int(0)));
  std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long r = 0; r < n; ++r) {
    try {
      FieldElement beta{Rat(r) * gen.x, Rat(r) * gen.y};
      TransportedCoset tc = coset_transport(P, a_dst, beta);
      std::vector<Int>& row = out.counts[r];
      const long rr = ((r * r) % n) * (out.A % n) % n;
      for (const FieldElement& lam :
           enumerate_by_norm(tc.lattice, tc.offset, norm_div, bound)) {
        Rat q = q_value(a_dst, lam) * n;  // |D| Q(lambda)
        if (denominator(q) != 1) {
          std::ostringstream os;
          os << "vv_theta: non-integral exponent " << q << " at component "
             << r << " (D=" << D << ", a=" << a_class << ", h=" << h_class
             << ")";
          throw std::logic_error(os.str());
        }
        Int e = numerator(q);
        if (e < 0 || e > n_max) continue;  // enumerate bound is exact; guard
        if (static_cast<long>(e % n) != rr % n) {
          std::ostringstream os;
          os << "vv_theta: support rule violated: exponent " << e
             << " != A r^2 = " << rr << " mod " << n << " at component " << r;
          throw std::logic_error(os.str());
        }
        row[static_cast<long>(e)] += 1;
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(tl_vvtheta_err)
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

VectorValuedForm VVTheta::to_form(const PrecisionContext& ctx) const {
  ctx.activate();
  VectorValuedForm F;
  const long n = static_cast<long>(counts.size());
  F.D = -n;
  F.weight = Rat(1);
  F.components.resize(n);
  for (long r = 0; r < n; ++r) {
    QExpansion& c = F.components[r];
    c.N = n;
    c.weight = Rat(1);
    c.coeffs.resize(n_max + 1);
    for (long m = 0; m <= n_max; ++m) c.coeffs[m] = Cplx(to_real(counts[r][m]));
    std::ostringstream os;
    os << "Theta_P(tau," << h_class << ") component " << r << " (a=" << a_class
       << ")";
    c.meta = os.str();
  }
  return F;
}

std::vector<VVTheta> vv_theta_family(const ClassGroup& G, int a_class,
                                     long n_max, bool parallel) {
  std::vector<VVTheta> fam;
  fam.reserve(G.h());
  for (int h = 0; h < G.h(); ++h) {
    fam.push_back(vv_theta(G, a_class, h, n_max, parallel));
  }
  return fam;
}

std::vector<std::vector<CycQ>> vv_theta_psi_exact(const ClassGroup& G,
                                                  int a_class, int psi,
                                                  long n_max) {
  auto chars = characters(G);
  if (psi < 0 || psi >= static_cast<int>(chars.size())) {
    throw std::domain_error("vv_theta_psi: character index out of range");
  }
  const long n = G.disc().abs_D();
  std::vector<std::vector<CycQ>> acc(
      n, std::vector<CycQ>(n_max + 1, CycQ::zero(G.exponent())));
  for (int h = 0; h < G.h(); ++h) {
    VVTheta th = vv_theta(G, a_class, h, n_max);
    CycQ val = char_value_cyc(G, chars[psi], h);
    for (long r = 0; r < n; ++r) {
      for (long m = 0; m <= n_max; ++m) {
        if (th.counts[r][m] == 0) continue;
        acc[r][m] += Rat(th.counts[r][m]) * val;
      }
    }
  }
  return acc;
}

VectorValuedForm vv_theta_psi(const ClassGroup& G, int a_class, int psi,
                              long n_max, const PrecisionContext& ctx) {
  ctx.activate();
  auto exact = vv_theta_psi_exact(G, a_class, psi, n_max);
  const long n = G.disc().abs_D();
  VectorValuedForm F;
  F.D = G.disc().D;
  F.weight = Rat(1);
  F.components.resize(n);
  for (long r = 0; r < n; ++r) {
    QExpansion& c = F.components[r];
    c.N = n;
    c.weight = Rat(1);
    c.coeffs.resize(n_max + 1);
    for (long m = 0; m <= n_max; ++m) c.coeffs[m] = to_cplx(exact[r][m]);
    std::ostringstream os;
    os << "Theta_P(tau,psi_" << psi << ") component " << r << " (a=" << a_class
       << ")";
    c.meta = os.str();
  }
  return F;
}

VectorValuedForm vv_theta_sym(const ClassGroup& G, int a_class, int h_class,
                              long n_max, const PrecisionContext& ctx) {
  DiscriminantForm df = discform_of_base(G, a_class);
  return symmetrize(df, vv_theta(G, a_class, h_class, n_max).to_form(ctx));
}

long rat_matrix_rank(std::vector<std::vector<Rat>>& rows) {
  long rank = 0;
  const long nrows = static_cast<long>(rows.size());
  if (nrows == 0) return 0;
  const long ncols = static_cast<long>(rows[0].size());
  long pivot_row = 0;
  for (long col = 0; col < ncols && pivot_row < nrows; ++col) {
    long sel = -1;
    for (long i = pivot_row; i < nrows; ++i) {
      if (!(rows[i][col] == 0)) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(rows[pivot_row], rows[sel]);
    const Rat inv_p = Rat(1) / rows[pivot_row][col];
    for (long i = pivot_row + 1; i < nrows; ++i) {
      if (rows[i][col] == 0) continue;
      Rat f = rows[i][col] * inv_p;
      for (long j = col; j < ncols; ++j) {
        rows[i][j] -= f * rows[pivot_row][j];
      }
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

ThetaSpace theta_space(const ClassGroup& G, int a_class, long n_max) {
  const long n = G.disc().abs_D();
  auto fam = vv_theta_family(G, a_class, n_max);

  auto rank_at = [&](long bound) {
    std::vector<std::vector<Rat>> rows;
    rows.reserve(fam.size());
    for (const VVTheta& th : fam) {
      std::vector<Rat> row;
      row.reserve(n * (bound + 1));
      for (long r = 0; r < n; ++r) {
        for (long m = 0; m <= bound; ++m) row.emplace_back(th.counts[r][m]);
      }
      rows.push_back(std::move(row));
    }
    return rat_matrix_rank(rows);
  };

  ThetaSpace out;
  out.rank = rank_at(n_max);
  out.rank_half = rank_at(n_max / 2);
  out.dim_formula = (G.h() + (1L << (G.disc().t() - 1))) / 2;
  if (out.rank != out.rank_half) {
    throw std::domain_error(
        "theta_space: rank not stabilized between n_max/2 and n_max; "
        "increase n_max");
  }
  for (int psi = 0; psi < G.h(); ++psi) {
    if (char_conj_index(G, psi) >= psi) out.basis_characters.push_back(psi);
  }
  return out;
}

}  // namespace tl
