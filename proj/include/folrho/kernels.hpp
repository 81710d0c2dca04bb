#pragma once
// Grid-evaluation kernels: the data-parallel layer under certification,
// sup-norm checks, and periodic-trapezoid quadrature.
//
// Every kernel comes in a serial reference version (`*_serial`) and an OpenMP
// version; the parallel versions are written so their results are bit-identical
// to the serial ones for any thread count (min/max reductions are exact, and
// quadrature sums are accumulated over fixed index chunks that are combined in
// chunk order).  tools/bench_kernels.cpp compares the two.

#include <cstdint>
#include <vector>

#include "folrho/trig.hpp"

namespace folrho::kernels {

// A flattened view of a TrigPoly restricted to a set of active axes: term t has
// frequencies freqs[t*naxes .. t*naxes+naxes-1] and coefficient coeffs[t].
struct TermArray {
  int naxes = 0;
  std::vector<int> freqs;
  std::vector<Cplx> coeffs;
  std::size_t terms() const { return coeffs.size(); }
};

// Uniform product grid on the active axes: npts[a] equally spaced points on
// axis a (periodic, so trapezoid == mean of samples).
struct GridSpec {
  std::vector<int> npts;
  std::int64_t total() const {
    std::int64_t n = 1;
    for (int m : npts) n *= m;
    return n;
  }
};

// Flatten `p` onto `axes` (every term of p must be supported on those axes).
TermArray flatten(const TrigPoly& p, const std::vector<int>& axes);

// min over the grid of |p(x)|
double grid_min_abs_serial(const TermArray& p, const GridSpec& g);
double grid_min_abs(const TermArray& p, const GridSpec& g);

// max over the grid of |p(x)| or |num(x)/den(x)| (den nonvanishing).
double grid_max_abs_serial(const TermArray& p, const GridSpec& g);
double grid_max_abs(const TermArray& p, const GridSpec& g);
double grid_max_abs_ratio_serial(const TermArray& num, const TermArray& den,
                                 const GridSpec& g);
double grid_max_abs_ratio(const TermArray& num, const TermArray& den,
                          const GridSpec& g);

// Mean of num(x)/den(x) over the grid (periodic trapezoid).  den may be empty
// (interpreted as 1).  Deterministic fixed-chunk accumulation.
Cplx grid_mean_ratio_serial(const TermArray& num, const TermArray& den,
                            const GridSpec& g);
Cplx grid_mean_ratio(const TermArray& num, const TermArray& den,
                     const GridSpec& g);

// Verification grid for certification/sup checks: 4 * (2B+1) points per active
// axis (B = per-axis bandwidth), clamped to max_grid_per_axis().
GridSpec verification_grid(const std::vector<int>& axes,
                           const std::vector<int>& bandwidths);

}  // namespace folrho::kernels
