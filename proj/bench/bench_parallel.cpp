// bench_parallel.cpp -- timing comparison of the OpenMP kernels against the
// serial reference implementations.  Run with OMP_NUM_THREADS set to taste;
// on a single-core host the parallel figures simply show the (small)
// scheduling overhead.

#include "thetalift/petersson.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds(const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-38s serial %8.3fs   openmp %8.3fs   speedup %.2fx\n", name,
              serial, parallel, parallel > 0 ? serial / parallel : 0.0);
  std::fflush(stdout);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run the serial path\n");
#endif

  const tl::ClassGroup G(tl::make_fundamental(-47));

  {
    const tl::QuadForm& f = G.classes()[1];
    const long n_max = 200000;
    tl::RepNumbers out;
    const double ts = seconds([&] { out = tl::rep_numbers(f, n_max, false); });
    const double tp = seconds([&] { out = tl::rep_numbers(f, n_max, true); });
    report("rep_numbers(-47, n<=200000)", ts, tp);
  }

  {
    tl::VVTheta out;
    const double ts = seconds([&] { out = tl::vv_theta(G, 0, 1, 40000, false); });
    const double tp = seconds([&] { out = tl::vv_theta(G, 0, 1, 40000, true); });
    report("vv_theta(-47, comp n<=40000)", ts, tp);
  }

  {
    tl::PrecisionContext ser;
    ser.bits = 128;
    ser.quad_nodes = 16;
    ser.parallel = false;
    tl::PrecisionContext par = ser;
    par.parallel = true;
    ser.activate();
    const tl::ClassGroup G23(tl::make_fundamental(-23));
    const tl::VectorValuedForm F = tl::vv_theta_psi(G23, 0, 1, 600, ser);
    tl::PeterssonValue out;
    const double ts = seconds([&] { out = tl::petersson_vv(F, F, 1, ser); });
    const double tp = seconds([&] { out = tl::petersson_vv(F, F, 1, par); });
    report("petersson_vv(-23, reach 600)", ts, tp);
  }

  {
    tl::PrecisionContext ser;
    ser.bits = 96;
    ser.parallel = false;
    tl::PrecisionContext par = ser;
    par.parallel = true;
    ser.activate();
    const tl::ClassGroup G23(tl::make_fundamental(-23));
    const tl::QExpansion th = tl::theta_ideal(G23, 1, 9000, ser);
    const tl::QExpansionSlash fs(th, tl::Real(1e-12));
    const tl::DiscriminantForm df = tl::discform_of_base(G23, 0);
    tl::VectorValuedForm out;
    const double ts =
        seconds([&] { out = tl::lift_coefficients(fs, df, 40, ser); });
    const double tp =
        seconds([&] { out = tl::lift_coefficients(fs, df, 40, par); });
    report("lift_coefficients(-23, n<=40)", ts, tp);
  }

  return 0;
}
