#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "folrho/genus.hpp"

using namespace folrho;

namespace {

// Evaluate a RatPoly on double values (index 0 unused).
double eval_d(const RatPoly& p, const std::vector<double>& vals) {
  return p.eval<double>(vals, 1.0, [](double a, double b) { return a * b; });
}

double f_ahat(double z, int terms) {
  // (sqrt z / 2) / sinh(sqrt z / 2) as a truncated series in z.
  const std::vector<Rat> s = ahat_series(terms);
  double acc = 0, zp = 1;
  for (int k = 0; k <= terms; ++k, zp *= z) acc += static_cast<double>(s[k]) * zp;
  return acc;
}

}  // namespace

TEST_CASE("series coefficients are the classical exact rationals") {
  const std::vector<Rat> s = ahat_series(4);
  REQUIRE(s.size() == 5);
  CHECK(s[0] == Rat(1));
  CHECK(s[1] == Rat(-1, 24));
  CHECK(s[2] == Rat(7, 5760));
  CHECK(s[3] == Rat(-31, 967680));
  CHECK(s[4] == Rat(127, 154828800));

  // Numeric sanity: partial sums approach (sqrt z/2)/sinh(sqrt z/2).
  const double z = 0.49;
  const double exact = (std::sqrt(z) / 2) / std::sinh(std::sqrt(z) / 2);
  CHECK(std::abs(f_ahat(z, 4) - exact) < 1e-6);
}

TEST_CASE("Pontryagin polynomials of the genus") {
  const auto& table = ahat_table(3);
  const RatPoly p1 = RatPoly::var(1);
  const RatPoly p2 = RatPoly::var(2);
  const RatPoly p3 = RatPoly::var(3);

  CHECK(table.at(0) == RatPoly::constant(1));
  CHECK(table.at(1) == p1 * Rat(-1, 24));
  CHECK(table.at(2) == (p1 * p1 * Rat(7) - p2 * Rat(4)) * Rat(1, 5760));
  CHECK(table.at(3) ==
        (p1 * p1 * p1 * Rat(-31) + p1 * p2 * Rat(44) - p3 * Rat(16)) *
            Rat(1, 967680));
}

TEST_CASE("RatPoly grading, truncation and components") {
  const std::vector<int> w = {0, 1, 2, 3};
  const RatPoly q =
      RatPoly::var(1, 2) + RatPoly::var(2) * Rat(5) + RatPoly::var(3);
  CHECK(RatPoly::weighted_degree({0, 2}, w) == 2);
  CHECK(RatPoly::weighted_degree({0, 0, 0, 1}, w) == 3);
  CHECK(q.truncate_weight(w, 2) == RatPoly::var(1, 2) + RatPoly::var(2) * Rat(5));
  // Strict truncation drops weight == max as well; everything here has
  // weight >= 2, so nothing survives.
  CHECK(q.truncate_weight(w, 2, /*strict=*/true).is_zero());
  CHECK(q.component_weight(w, 3) == RatPoly::var(3));
  CHECK(q.coeff({0, 0, 1}) == Rat(5));
}

TEST_CASE("Chern-character rewrite at low weight") {
  // Weight <= 2: 1 - v2/24 + v1^2/48.
  const RatPoly got = ahat_in_ch(2);
  const RatPoly expected = RatPoly::constant(1) +
                           RatPoly::var(2) * Rat(-1, 24) +
                           RatPoly::var(1, 2) * Rat(1, 48);
  CHECK(got == expected);
  // Strict mode drops the top weight, leaving the constant term.
  CHECK(ahat_in_ch(2, false) == RatPoly::constant(1));

  // Odd-weight components vanish identically.
  std::vector<int> w(5);
  for (int i = 0; i < 5; ++i) w[i] = i;
  CHECK(ahat_in_ch(4).component_weight(w, 1).is_zero());
  CHECK(ahat_in_ch(4).component_weight(w, 3).is_zero());
}

TEST_CASE("rewrite agrees with the genus on split Chern roots") {
  // A real bundle with complexification roots {x_j, -x_j}: substituting
  // v_k = sum_j (x_j^k + (-x_j)^k)/k! must reproduce prod_j f(x_j^2)
  // through total weight q (an exact polynomial identity in the roots).
  const std::vector<double> roots = {0.3, 0.7};
  const int q = 4;

  std::vector<double> v(q + 1, 0.0);
  double fact = 1;
  for (int k = 1; k <= q; ++k) {
    fact *= k;
    double s = 0;
    for (double x : roots) s += std::pow(x, k) + std::pow(-x, k);
    v[k] = s / fact;
  }

  const double lhs = eval_d(ahat_in_ch(q), v);

  // Pontryagin values: elementary symmetric functions of x_j^2.
  const double p1 = roots[0] * roots[0] + roots[1] * roots[1];
  const double p2 = roots[0] * roots[0] * roots[1] * roots[1];
  const auto& table = ahat_table(q / 2);
  const std::vector<double> pv = {0.0, p1, p2};
  double rhs = 0;
  for (const auto& [k, poly] : table) rhs += eval_d(poly, pv);

  CHECK(std::abs(lhs - rhs) < 1e-12);

  // Odd truncation order only sees the lower Pontryagin part.
  const double lhs3 = eval_d(ahat_in_ch(3), v);
  const double rhs3 = 1.0 + eval_d(table.at(1), pv);
  CHECK(std::abs(lhs3 - rhs3) < 1e-12);
}

TEST_CASE("RatPoly string form is stable") {
  const RatPoly p = RatPoly::var(1, 2) * Rat(1, 48) + RatPoly::constant(1);
  const std::string s = p.to_string("c");
  CHECK(s.find("c1^2") != std::string::npos);
  CHECK(s.find("1/48") != std::string::npos);
}
