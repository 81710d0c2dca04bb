#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "folrho/wo.hpp"
#include "helpers.hpp"

using namespace folrho;
using folrho::testing::Rng;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A deterministic pseudo-random homogeneous-by-parts element of WO_q.
WOElement random_element(int q, bool inclusive, Rng& rng) {
  std::uniform_int_distribution<int> coin(0, 2);
  WOElement e = WOElement::zero(q, inclusive);
  for (int i = 1; i <= q; i += 2) {
    WOElement t = WOElement::ctilde(q, i, inclusive);
    if (coin(rng)) t = wo_mul(t, WOElement::c(q, 1, inclusive));
    e = e + t * Rat(coin(rng) + 1, 3);
  }
  for (int i = 1; i <= q; ++i)
    e = e + WOElement::c(q, i, inclusive) * Rat(coin(rng), 2);
  return e;
}

}  // namespace

TEST_CASE("generator cutoff") {
  CHECK(wo_qprime(1) == 1);
  CHECK(wo_qprime(2) == 1);
  CHECK(wo_qprime(3) == 3);
  CHECK(wo_qprime(4) == 3);
  CHECK(wo_qprime(5) == 5);
  CHECK(wo_qprime(5, /*smallest=*/true) == 1);
  CHECK_THROWS_AS(wo_qprime(0), ValidationError);
}

TEST_CASE("generator degrees and truncation") {
  CHECK(WOElement::ctilde(3, 1).degree() == 1);
  CHECK(WOElement::ctilde(3, 3).degree() == 5);
  CHECK(WOElement::c(3, 2).degree() == 4);
  CHECK_THROWS_AS(WOElement::ctilde(3, 2), ValidationError);  // even index
  CHECK_THROWS_AS(WOElement::ctilde(2, 3), ValidationError);  // above q'
  CHECK_THROWS_AS(WOElement::c(2, 3), ValidationError);

  // Inclusive q=1 keeps c1 (degree 2 = 2q) but kills c1^2.
  const WOElement c1 = WOElement::c(1, 1);
  CHECK_FALSE(c1.is_zero());
  CHECK(wo_mul(c1, c1).is_zero());
  // Strict q=1 kills c1 itself.
  CHECK(WOElement::c(1, 1, false).is_zero());
}

TEST_CASE("graded commutativity and squares of odd generators") {
  const WOElement t1 = WOElement::ctilde(3, 1);
  const WOElement t3 = WOElement::ctilde(3, 3);
  CHECK(wo_mul(t1, t3) == wo_mul(t3, t1) * Rat(-1));
  CHECK(wo_mul(t1, t1).is_zero());

  const WOElement c2 = WOElement::c(3, 2);
  CHECK(wo_mul(t1, c2) == wo_mul(c2, t1));  // even commutes
}

TEST_CASE("differential: generators, Leibniz, d squared") {
  const WOElement t1 = WOElement::ctilde(2, 1);
  const WOElement c1 = WOElement::c(2, 1);
  CHECK(wo_d(t1) == c1);
  CHECK(wo_d(c1).is_zero());

  // Leibniz on an odd x even product: d(t1 c2) = c1 c2.
  const WOElement c2 = WOElement::c(2, 2);
  CHECK(wo_d(wo_mul(t1, c2)) == wo_mul(c1, c2));

  Rng rng(91);
  for (int q : {1, 2, 3}) {
    for (bool inclusive : {true, false}) {
      for (int trial = 0; trial < 8; ++trial) {
        const WOElement e = random_element(q, inclusive, rng);
        CHECK(wo_d(wo_d(e)).is_zero());
      }
    }
  }
}

TEST_CASE("cohomology of WO_1 in both truncation modes") {
  const CohomologyReport inc = wo_cohomology(1, 3, true);
  CHECK(inc.betti.at(0) == 1);
  CHECK(inc.betti.at(1) == 0);
  CHECK(inc.betti.at(2) == 0);
  CHECK(inc.betti.at(3) == 1);
  // The degree-3 class is represented by c~1 c1.
  REQUIRE(inc.representatives.at(3).size() == 1);
  const WOElement rep = inc.representatives.at(3)[0];
  const WOElement expected =
      wo_mul(WOElement::ctilde(1, 1), WOElement::c(1, 1));
  CHECK((rep - expected).is_zero());

  const CohomologyReport strict = wo_cohomology(1, 3, false);
  CHECK(strict.betti.at(0) == 1);
  CHECK(strict.betti.at(1) == 1);  // c~1 becomes a cycle
  CHECK(strict.betti.at(2) == 0);
  CHECK(strict.betti.at(3) == 0);
}

TEST_CASE("universal class in WO_2 on a five-torus") {
  const WOElement u = universal_class(2, 5);
  const WOElement t1 = WOElement::ctilde(2, 1);
  const WOElement expected =
      wo_mul(t1, WOElement::c(2, 2)) * Rat(1, 24) -
      wo_mul(wo_mul(t1, WOElement::c(2, 1)), WOElement::c(2, 1)) * Rat(1, 48);
  CHECK(u == expected);
  CHECK(u.is_homogeneous());
  CHECK(u.degree() == 5);
  CHECK(wo_d(u).is_zero());

  CHECK_THROWS_AS(universal_class(2, 4), ValidationError);  // even dim
  CHECK_THROWS_AS(universal_class(3, 5), ValidationError);  // 2q >= dim
}

TEST_CASE("evaluation of generators into forms") {
  // cF = d + omega on a line bundle, omega = sin(2 pi x0) dx2 on T^3.
  const Form omega =
      Form::monomial(TrigScalar(TrigPoly::sine(3, 0)), {2});
  const Connection cF = Connection::make(omega, true);
  const HermMetric h = HermMetric::identity(1);

  // Delta(c~1) = omega / 2 pi.
  const Form dt1 = delta_map(WOElement::ctilde(2, 1), cF, h);
  CHECK((dt1 - omega * (1.0 / kTwoPi)).sup_bound() < 1e-12);

  // Delta(c1) = d omega / 2 pi.
  const Form dc1 = delta_map(WOElement::c(2, 1), cF, h);
  CHECK((dc1 - omega.d() * (1.0 / kTwoPi)).sup_bound() < 1e-12);

  // Scalars and products evaluate multiplicatively.
  const Form prod = delta_map(
      wo_mul(WOElement::ctilde(2, 1), WOElement::c(2, 1)) * Rat(3, 2), cF, h);
  CHECK((prod - dt1.wedge(dc1) * 1.5).sup_bound() < 1e-12);

  CHECK_THROWS_AS(delta_map(WOElement::ctilde(3, 3), cF, h),
                  ValidationError);  // degree 5 > dim 3
  CHECK_THROWS_AS(delta_map(WOElement::ctilde(2, 1),
                            Connection::make(omega * Cplx(0, 1)), h),
                  ValidationError);  // cF not real
}

TEST_CASE("evaluation is a chain map") {
  const Form omega =
      Form::monomial(TrigScalar(TrigPoly::sine(5, 0)), {2}) +
      Form::monomial(TrigScalar(TrigPoly::cosine(5, 3)), {4});
  const Connection cF = Connection::make(omega, true);
  const HermMetric h = HermMetric::identity(1);

  const WOElement t1c1 = wo_mul(WOElement::ctilde(2, 1), WOElement::c(2, 1));
  const Form lhs = delta_map(t1c1, cF, h).d();
  const Form rhs = delta_map(wo_d(t1c1), cF, h);
  CHECK((lhs - rhs).sup_bound() < 1e-11);

  const Form l1 = delta_map(WOElement::ctilde(2, 1), cF, h).d();
  const Form r1 = delta_map(wo_d(WOElement::ctilde(2, 1)), cF, h);
  CHECK((l1 - r1).sup_bound() < 1e-12);
}

TEST_CASE("Kamber-Tondeur classes match the evaluated generators") {
  const Form omega =
      Form::monomial(TrigScalar(TrigPoly::sine(3, 0)), {2});
  const Connection cF = Connection::make(omega, true);
  CHECK(kt_class_relation(1, cF, HermMetric::identity(1)) < 1e-12);

  // Rank 2, constant antisymmetric potential.
  MatScalar m(3, 2, 2);
  m.at(0, 1) = TrigScalar::constant(3, 0.5);
  m.at(1, 0) = TrigScalar::constant(3, -0.5);
  Form A(3, 1, 2);
  A.add_term({0}, m);
  const Connection c2 = Connection::make(A, true);
  CHECK(kt_class_relation(1, c2, HermMetric::identity(2)) < 1e-12);

  CHECK_THROWS_AS(kt_class_relation(2, cF, HermMetric::identity(1)),
                  ValidationError);
}

TEST_CASE("element strings and JSON are stable") {
  const WOElement u = universal_class(2, 5);
  const std::string s = u.to_string();
  CHECK(s.find("c~1") != std::string::npos);
  CHECK(s.find("c2") != std::string::npos);
  CHECK(s.find("1/24") != std::string::npos);
  const nlohmann::json j = u.to_json();
  CHECK(j.contains("terms"));
  CHECK(j.at("q") == 2);
}
