#include "folrho/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#ifdef FOLRHO_HAVE_OPENMP
#include <omp.h>
#endif

namespace folrho::kernels {
namespace {

constexpr std::int64_t kChunk = 4096;  // fixed accumulation chunk (determinism)

// Per-axis tables of e^{2 pi i j / N}, j = 0..N-1.
std::vector<std::vector<Cplx>> axis_tables(const GridSpec& g) {
  std::vector<std::vector<Cplx>> tabs(g.npts.size());
  for (std::size_t a = 0; a < g.npts.size(); ++a) {
    const int n = g.npts[a];
    tabs[a].resize(n);
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n;
      tabs[a][j] = Cplx(std::cos(th), std::sin(th));
    }
  }
  return tabs;
}

// Decode flat point index -> per-axis indices (row-major over axes).
inline void decode(std::int64_t idx, const GridSpec& g, std::vector<int>& out) {
  for (int a = static_cast<int>(g.npts.size()) - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % g.npts[a]);
    idx /= g.npts[a];
  }
}

inline Cplx eval_point(const TermArray& p,
                       const std::vector<std::vector<Cplx>>& tabs,
                       const GridSpec& g, const std::vector<int>& ji) {
  Cplx acc(0.0, 0.0);
  const int na = p.naxes;
  for (std::size_t t = 0; t < p.terms(); ++t) {
    Cplx w = p.coeffs[t];
    for (int a = 0; a < na; ++a) {
      const int k = p.freqs[t * na + a];
      if (k == 0) continue;
      const int n = g.npts[a];
      int e = static_cast<int>((static_cast<std::int64_t>(k) * ji[a]) % n);
      if (e < 0) e += n;
      w *= tabs[a][e];
    }
    acc += w;
  }
  return acc;
}

template <class PerPoint, class Reduce>
double reduce_grid_serial(const GridSpec& g, double init, PerPoint&& f,
                          Reduce&& red) {
  const std::int64_t total = g.total();
  std::vector<int> ji(g.npts.size(), 0);
  double acc = init;
  for (std::int64_t i = 0; i < total; ++i) {
    decode(i, g, ji);
    acc = red(acc, f(ji));
  }
  return acc;
}

template <class PerPoint, class Reduce>
double reduce_grid_parallel(const GridSpec& g, double init, PerPoint&& f,
                            Reduce&& red) {
#ifdef FOLRHO_HAVE_OPENMP
  const std::int64_t total = g.total();
  const std::int64_t nchunks = (total + kChunk - 1) / kChunk;
  std::vector<double> part(static_cast<std::size_t>(nchunks), init);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nchunks; ++c) {
    std::vector<int> ji(g.npts.size(), 0);
    double acc = init;
    const std::int64_t hi = std::min(total, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < hi; ++i) {
      decode(i, g, ji);
      acc = red(acc, f(ji));
    }
    part[static_cast<std::size_t>(c)] = acc;
  }
  double acc = init;
  for (double v : part) acc = red(acc, v);  // chunk order, thread-count free
  return acc;
#else
  return reduce_grid_serial(g, init, f, red);
#endif
}

}  // namespace

TermArray flatten(const TrigPoly& p, const std::vector<int>& axes) {
  TermArray out;
  out.naxes = static_cast<int>(axes.size());
  out.freqs.reserve(p.term_count() * axes.size());
  out.coeffs.reserve(p.term_count());
  for (const auto& [k, c] : p.terms()) {
    for (int a : axes) out.freqs.push_back(k[a]);
    out.coeffs.push_back(c);
  }
  return out;
}

double grid_min_abs_serial(const TermArray& p, const GridSpec& g) {
  const auto tabs = axis_tables(g);
  return reduce_grid_serial(
      g, std::numeric_limits<double>::infinity(),
      [&](const std::vector<int>& ji) { return std::abs(eval_point(p, tabs, g, ji)); },
      [](double a, double b) { return std::min(a, b); });
}

double grid_min_abs(const TermArray& p, const GridSpec& g) {
  const auto tabs = axis_tables(g);
  return reduce_grid_parallel(
      g, std::numeric_limits<double>::infinity(),
      [&](const std::vector<int>& ji) { return std::abs(eval_point(p, tabs, g, ji)); },
      [](double a, double b) { return std::min(a, b); });
}

double grid_max_abs_serial(const TermArray& p, const GridSpec& g) {
  const auto tabs = axis_tables(g);
  return reduce_grid_serial(
      g, 0.0,
      [&](const std::vector<int>& ji) { return std::abs(eval_point(p, tabs, g, ji)); },
      [](double a, double b) { return std::max(a, b); });
}

double grid_max_abs(const TermArray& p, const GridSpec& g) {
  const auto tabs = axis_tables(g);
  return reduce_grid_parallel(
      g, 0.0,
      [&](const std::vector<int>& ji) { return std::abs(eval_point(p, tabs, g, ji)); },
      [](double a, double b) { return std::max(a, b); });
}

double grid_max_abs_ratio_serial(const TermArray& num, const TermArray& den,
                                 const GridSpec& g) {
  const auto tabs = axis_tables(g);
  return reduce_grid_serial(
      g, 0.0,
      [&](const std::vector<int>& ji) {
        return std::abs(eval_point(num, tabs, g, ji)) /
               std::abs(eval_point(den, tabs, g, ji));
      },
      [](double a, double b) { return std::max(a, b); });
}

double grid_max_abs_ratio(const TermArray& num, const TermArray& den,
                          const GridSpec& g) {
  const auto tabs = axis_tables(g);
  return reduce_grid_parallel(
      g, 0.0,
      [&](const std::vector<int>& ji) {
        return std::abs(eval_point(num, tabs, g, ji)) /
               std::abs(eval_point(den, tabs, g, ji));
      },
      [](double a, double b) { return std::max(a, b); });
}

namespace {

template <bool Parallel>
Cplx mean_ratio_impl(const TermArray& num, const TermArray& den,
                     const GridSpec& g) {
  const auto tabs = axis_tables(g);
  const std::int64_t total = g.total();
  const std::int64_t nchunks = (total + kChunk - 1) / kChunk;
  std::vector<Cplx> part(static_cast<std::size_t>(nchunks), Cplx(0, 0));
  const bool has_den = den.terms() > 0;

  auto chunk_sum = [&](std::int64_t c) {
    std::vector<int> ji(g.npts.size(), 0);
    Cplx acc(0, 0);
    const std::int64_t hi = std::min(total, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < hi; ++i) {
      decode(i, g, ji);
      Cplx v = eval_point(num, tabs, g, ji);
      if (has_den) v /= eval_point(den, tabs, g, ji);
      acc += v;
    }
    part[static_cast<std::size_t>(c)] = acc;
  };

  if constexpr (Parallel) {
#ifdef FOLRHO_HAVE_OPENMP
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) chunk_sum(c);
#else
    for (std::int64_t c = 0; c < nchunks; ++c) chunk_sum(c);
#endif
  } else {
    for (std::int64_t c = 0; c < nchunks; ++c) chunk_sum(c);
  }

  Cplx acc(0, 0);
  for (const Cplx& v : part) acc += v;  // fixed chunk order
  return acc / static_cast<double>(total);
}

}  // namespace

Cplx grid_mean_ratio_serial(const TermArray& num, const TermArray& den,
                            const GridSpec& g) {
  return mean_ratio_impl<false>(num, den, g);
}

Cplx grid_mean_ratio(const TermArray& num, const TermArray& den,
                     const GridSpec& g) {
  return mean_ratio_impl<true>(num, den, g);
}

GridSpec verification_grid(const std::vector<int>& axes,
                           const std::vector<int>& bandwidths) {
  GridSpec g;
  g.npts.reserve(axes.size());
  const int cap = max_grid_per_axis();
  for (std::size_t a = 0; a < axes.size(); ++a) {
    int n = 4 * (2 * bandwidths[a] + 1);
    g.npts.push_back(std::min(n, cap));
  }
  return g;
}

}  // namespace folrho::kernels
