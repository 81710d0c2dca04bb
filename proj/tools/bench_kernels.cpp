// bench_kernels: timing comparison of the serial reference kernels against
// the OpenMP versions on synthetic trig data, with a bit-identity check.
//
// Usage: bench_kernels [terms] [grid_per_axis] [axes] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "folrho/kernels.hpp"
#include "folrho/trig.hpp"

#ifdef FOLRHO_HAVE_OPENMP
#include <omp.h>
#endif

using namespace folrho;
using namespace folrho::kernels;
using Clock = std::chrono::steady_clock;

namespace {

TermArray random_terms(int naxes, int nterms, int bandwidth,
                       std::mt19937_64& rng, bool keep_away_from_zero) {
  std::uniform_int_distribution<int> freq(-bandwidth, bandwidth);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  TermArray t;
  t.naxes = naxes;
  if (keep_away_from_zero) {
    // Large constant term so |p| stays bounded away from 0 (ratio kernels).
    for (int a = 0; a < naxes; ++a) t.freqs.push_back(0);
    t.coeffs.push_back(Cplx(4.0 * nterms, 0.0));
  }
  for (int i = 0; i < nterms; ++i) {
    for (int a = 0; a < naxes; ++a) t.freqs.push_back(freq(rng));
    t.coeffs.push_back(Cplx(amp(rng), amp(rng)));
  }
  return t;
}

template <typename F>
double time_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    const auto t1 = Clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int nterms = argc > 1 ? std::atoi(argv[1]) : 64;
  const int npts = argc > 2 ? std::atoi(argv[2]) : 48;
  const int naxes = argc > 3 ? std::atoi(argv[3]) : 3;
  const int reps = argc > 4 ? std::atoi(argv[4]) : 3;

  std::mt19937_64 rng(20260825);
  const TermArray num = random_terms(naxes, nterms, 3, rng, false);
  const TermArray den = random_terms(naxes, nterms / 2 + 1, 2, rng, true);
  GridSpec g;
  g.npts.assign(naxes, npts);

#ifdef FOLRHO_HAVE_OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; parallel entry points run serially\n");
#endif
  std::printf("terms=%d  grid=%d^%d (%lld points)  reps=%d (best-of)\n\n",
              nterms, npts, naxes, static_cast<long long>(g.total()), reps);

  int mismatches = 0;
  const auto report = [&](const char* name, double serial_ms, double par_ms,
                          bool identical) {
    std::printf("%-22s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n",
                name, serial_ms, par_ms,
                par_ms > 0 ? serial_ms / par_ms : 0.0,
                identical ? "bit-identical" : "MISMATCH");
    if (!identical) ++mismatches;
  };

  {
    double rs = 0, rp = 0;
    const double ts = time_ms([&] { rs = grid_min_abs_serial(den, g); }, reps);
    const double tp = time_ms([&] { rp = grid_min_abs(den, g); }, reps);
    report("grid_min_abs", ts, tp, rs == rp);
  }
  {
    double rs = 0, rp = 0;
    const double ts = time_ms([&] { rs = grid_max_abs_serial(num, g); }, reps);
    const double tp = time_ms([&] { rp = grid_max_abs(num, g); }, reps);
    report("grid_max_abs", ts, tp, rs == rp);
  }
  {
    double rs = 0, rp = 0;
    const double ts =
        time_ms([&] { rs = grid_max_abs_ratio_serial(num, den, g); }, reps);
    const double tp =
        time_ms([&] { rp = grid_max_abs_ratio(num, den, g); }, reps);
    report("grid_max_abs_ratio", ts, tp, rs == rp);
  }
  {
    Cplx rs, rp;
    const double ts =
        time_ms([&] { rs = grid_mean_ratio_serial(num, den, g); }, reps);
    const double tp = time_ms([&] { rp = grid_mean_ratio(num, den, g); }, reps);
    report("grid_mean_ratio", ts, tp,
           rs.real() == rp.real() && rs.imag() == rp.imag());
  }

  if (mismatches) {
    std::printf("\n%d kernel(s) disagreed with the serial reference\n",
                mismatches);
    return 1;
  }
  std::printf("\nall parallel kernels bit-identical to the serial reference\n");
  return 0;
}
