#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "folrho/kernels.hpp"
#include "folrho/trig.hpp"
#include "helpers.hpp"

using namespace folrho;
using namespace folrho::kernels;
using folrho::testing::Rng;

namespace {

TermArray random_terms(int naxes, int nterms, int bw, Rng& rng,
                       double constant = 0.0) {
  std::uniform_int_distribution<int> freq(-bw, bw);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  TermArray t;
  t.naxes = naxes;
  if (constant != 0.0) {
    for (int a = 0; a < naxes; ++a) t.freqs.push_back(0);
    t.coeffs.push_back(Cplx(constant, 0.0));
  }
  for (int i = 0; i < nterms; ++i) {
    for (int a = 0; a < naxes; ++a) t.freqs.push_back(freq(rng));
    t.coeffs.push_back(Cplx(amp(rng), amp(rng)));
  }
  return t;
}

Cplx eval_terms(const TermArray& t, const std::vector<double>& x) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  Cplx acc = 0.0;
  for (std::size_t i = 0; i < t.terms(); ++i) {
    double phase = 0.0;
    for (int a = 0; a < t.naxes; ++a)
      phase += t.freqs[i * t.naxes + a] * x[a];
    acc += t.coeffs[i] * std::polar(1.0, kTwoPi * phase);
  }
  return acc;
}

}  // namespace

TEST_CASE("grid extrema match a direct evaluation loop") {
  Rng rng(5);
  const TermArray p = random_terms(2, 6, 2, rng);
  GridSpec g;
  g.npts = {9, 7};

  double mn = 1e300, mx = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 7; ++j) {
      const double v = std::abs(eval_terms(p, {i / 9.0, j / 7.0}));
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  CHECK(grid_min_abs_serial(p, g) == doctest::Approx(mn).epsilon(1e-12));
  CHECK(grid_max_abs_serial(p, g) == doctest::Approx(mx).epsilon(1e-12));
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  Rng rng(9);
  const TermArray num = random_terms(3, 12, 2, rng);
  const TermArray den = random_terms(3, 5, 1, rng, /*constant=*/8.0);
  GridSpec g;
  g.npts = {12, 10, 8};

  CHECK(grid_min_abs(den, g) == grid_min_abs_serial(den, g));
  CHECK(grid_max_abs(num, g) == grid_max_abs_serial(num, g));
  CHECK(grid_max_abs_ratio(num, den, g) ==
        grid_max_abs_ratio_serial(num, den, g));
  const Cplx a = grid_mean_ratio(num, den, g);
  const Cplx b = grid_mean_ratio_serial(num, den, g);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
}

TEST_CASE("grid mean of a pure polynomial is the k=0 coefficient") {
  Rng rng(21);
  const TrigPoly p = folrho::testing::random_poly(2, rng, 3, 2, false);
  const TermArray t = flatten(p, {0, 1});
  GridSpec g = verification_grid({0, 1}, {p.bandwidth(0), p.bandwidth(1)});
  const Cplx mean = grid_mean_ratio_serial(t, TermArray{}, g);
  CHECK(std::abs(mean - p.mean()) < 1e-12);
}

TEST_CASE("quotient mean agrees with the adaptive quadrature") {
  const TrigPoly num = TrigPoly::constant(1, 1.0);
  const TrigPoly den = TrigPoly::constant(1, 2.0) - TrigPoly::cosine(1, 0);
  const TrigScalar f(num, den);
  const Cplx reference = f.integrate_torus();  // adaptive path

  TermArray tn = flatten(num, {0});
  TermArray td = flatten(den, {0});
  GridSpec g;
  g.npts = {512};
  const Cplx direct = grid_mean_ratio_serial(tn, td, g);
  CHECK(std::abs(direct - reference) < 1e-9);
}

TEST_CASE("verification grid respects the environment cap") {
  const GridSpec g = verification_grid({0, 1}, {2, 3});
  REQUIRE(g.npts.size() == 2);
  CHECK(g.npts[0] <= std::max(4 * (2 * 2 + 1), 1));
  CHECK(g.npts[1] <= std::max(4 * (2 * 3 + 1), 1));
  CHECK(g.npts[0] >= 1);
  CHECK(g.total() == static_cast<std::int64_t>(g.npts[0]) * g.npts[1]);
}

TEST_CASE("flatten rejects terms outside the active axes") {
  const TrigPoly p = TrigPoly::cosine(3, 2);
  CHECK_THROWS_AS(flatten(p, {0, 1}), ValidationError);
  CHECK_NOTHROW(flatten(p, {2}));
}
