#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "folrho/form.hpp"
#include "helpers.hpp"

using namespace folrho;
using folrho::testing::Rng;
using folrho::testing::random_form;
using folrho::testing::random_scalar;

TEST_CASE("merge_sign counts transpositions") {
  IndexTuple merged;
  CHECK(merge_sign({0}, {1}, &merged) == 1);
  CHECK(merged == IndexTuple{0, 1});
  CHECK(merge_sign({1}, {0}, &merged) == -1);
  CHECK(merge_sign({0, 2}, {1}, &merged) == -1);
  CHECK(merge_sign({0, 1}, {1}, &merged) == 0);  // overlap
}

TEST_CASE("wedge is graded-commutative on scalar forms") {
  Rng rng(3);
  const Form a = random_form(3, 1, rng);
  const Form b = random_form(3, 1, rng);
  const Form c = random_form(3, 2, rng);
  CHECK((a.wedge(b) + b.wedge(a)).sup_bound() < 1e-12);   // odd * odd
  CHECK((a.wedge(c) - c.wedge(a)).sup_bound() < 1e-12);   // odd * even
  CHECK((a.wedge(b).wedge(c) - a.wedge(b.wedge(c))).sup_bound() < 1e-12);
}

TEST_CASE("d squares to zero") {
  Rng rng(5);
  for (int deg = 0; deg <= 2; ++deg) {
    const Form f = random_form(4, deg, rng, 3, 2, false);
    CHECK(f.d().d().sup_bound() < 1e-10);
  }
}

TEST_CASE("Leibniz rule") {
  Rng rng(7);
  const Form a = random_form(3, 1, rng, 2, 1, false);
  const Form b = random_form(3, 1, rng, 2, 1, false);
  const Form lhs = a.wedge(b).d();
  const Form rhs = a.d().wedge(b) - a.wedge(b.d());
  CHECK((lhs - rhs).sup_bound() < 1e-11);
}

TEST_CASE("top integral kills exact forms") {
  Rng rng(9);
  const Form f = random_form(3, 2, rng, 3, 2, false);
  CHECK(std::abs(f.d().integrate_top()) < 1e-12);
}

TEST_CASE("integrate_top picks the mean of the top coefficient") {
  Form f(2, 2, 1);
  const TrigScalar s =
      TrigScalar(TrigPoly::constant(2, Cplx(2.0, -1.0)) +
                 TrigPoly::cosine(2, 0));
  f.add_term({0, 1}, MatScalar::scalar(s));
  CHECK(std::abs(f.integrate_top() - Cplx(2.0, -1.0)) < 1e-13);
  Rng rng(1);
  CHECK_THROWS_AS(random_form(2, 1, rng).integrate_top(), ValidationError);
}

TEST_CASE("contract is the interior product") {
  // iota_X (f dx0 /\ dx1) with X = partial_0 gives f dx1.
  const TrigScalar f = TrigScalar(TrigPoly::cosine(2, 1));
  Form w(2, 2, 1);
  w.add_term({0, 1}, MatScalar::scalar(f));
  const std::vector<TrigScalar> X = {TrigScalar::one(2), TrigScalar::zero(2)};
  const Form got = w.contract(X);
  Form expected(2, 1, 1);
  expected.add_term({1}, MatScalar::scalar(f));
  CHECK((got - expected).sup_bound() < 1e-13);
}

TEST_CASE("pullback along unimodular maps preserves the top integral") {
  Rng rng(11);
  Form f(2, 2, 1);
  f.add_term({0, 1}, MatScalar::scalar(random_scalar(2, rng, 3, 2, false)));
  const std::vector<std::vector<int>> U = {{1, 1}, {0, 1}};  // det 1
  CHECK(std::abs(f.pullback_linear(U).integrate_top() - f.integrate_top()) <
        1e-12);
}

TEST_CASE("pullback along a degree-k cover scales the top integral") {
  Form f(1, 1, 1);
  f.add_term({0}, MatScalar::scalar(TrigScalar(
                      TrigPoly::constant(1, 3.0) + TrigPoly::sine(1, 0))));
  const Cplx base = f.integrate_top();
  const Cplx cover = f.pullback_linear({{2}}).integrate_top();
  CHECK(std::abs(cover - 2.0 * base) < 1e-12);
}

TEST_CASE("closed pairings vanish on exact forms and see constants") {
  Rng rng(13);
  const Form exact = random_form(3, 1, rng, 2, 1, false).d();
  for (const Cplx& v : closed_pairings(exact)) CHECK(std::abs(v) < 1e-12);

  // dx0 pairs to 1 against dx1 /\ dx2 and to 0 against the others;
  // complementary tuples come in lexicographic order {01, 02, 12}.
  const std::vector<Cplx> p = closed_pairings(Form::dx(3, 0));
  REQUIRE(p.size() == 3);
  CHECK(std::abs(p[0]) < 1e-13);
  CHECK(std::abs(p[1]) < 1e-13);
  CHECK(std::abs(p[2] - Cplx(1, 0)) < 1e-13);
}

TEST_CASE("form JSON round trip") {
  Rng rng(15);
  const Form f = random_form(3, 2, rng, 2, 1, false);
  const Form back = Form::from_json(f.to_json(), 3);
  CHECK((f - back).sup_bound() < 1e-12);
  CHECK(back.degree() == 2);
}

TEST_CASE("TForm Stokes relation on the cylinder") {
  // d(fiber_integral) + fiber_integral(d .) = restrict(1) - restrict(0).
  Rng rng(17);
  const Form a0 = random_form(3, 1, rng, 2, 1, false);
  const Form a1 = random_form(3, 1, rng, 2, 1, false);
  const Form b = random_form(3, 0, rng, 2, 1, false);
  // X = (a0 + t a1) + dt /\ (t b)
  const TForm X(3, 1, 1,
                TPoly<Form>(std::vector<Form>{a0, a1}),
                TPoly<Form>(std::vector<Form>{Form(3, 0, 1), b}));
  const Form lhs = X.fiber_integrate().d() + X.d().fiber_integrate();
  const Form rhs = X.restrict_t(1.0) - X.restrict_t(0.0);
  CHECK((lhs - rhs).sup_bound() < 1e-11);
}

TEST_CASE("TForm wedge matches slicewise wedge") {
  Rng rng(19);
  const Form a = random_form(3, 1, rng, 2, 1, false);
  const Form b = random_form(3, 1, rng, 2, 1, false);
  const TForm ta = TForm::monomial_t(a, 1);  // t * a
  const TForm tb = TForm::pullback(b);
  const Form slice = ta.wedge(tb).restrict_t(0.5);
  const Form direct = (a * Cplx(0.5, 0)).wedge(b);
  CHECK((slice - direct).sup_bound() < 1e-12);
}

TEST_CASE("foliations: span_axes is integrable, twisted frames are not") {
  CHECK_NOTHROW(Foliation::span_axes(3, {0, 1}));
  CHECK(Foliation::span_axes(3, {0, 1}).codim() == 1);

  // X = d0 + cos(2 pi x2) d1, Y = d2: [X,Y] is proportional to d1,
  // pointwise outside span{X,Y}.
  std::vector<std::vector<TrigScalar>> frame(2,
      std::vector<TrigScalar>(3, TrigScalar::zero(3)));
  frame[0][0] = TrigScalar::one(3);
  frame[0][1] = TrigScalar(TrigPoly::cosine(3, 2));
  frame[1][2] = TrigScalar::one(3);
  CHECK_THROWS_AS(Foliation(3, 2, frame, 1e-9), ValidationError);
}

TEST_CASE("filtration degree on a coordinate foliation") {
  const Foliation F = Foliation::span_axes(3, {0});  // leaf rank 1, codim 2
  CHECK(filtration_degree(Form::dx(3, 1).wedge(Form::dx(3, 2)), F) == 2);
  CHECK(filtration_degree(Form::dx(3, 0).wedge(Form::dx(3, 1)), F) == 1);
  CHECK(filtration_degree(Form::dx(3, 1), F) == 1);
  CHECK(filtration_degree(Form(3, 2, 1), F) == 3);  // zero form: codim + 1
  CHECK(filtration_degree(Form::constant(3, 1.0), F) == 0);
}

TEST_CASE("filtration is multiplicative and d-stable") {
  Rng rng(23);
  const Foliation F = Foliation::span_axes(4, {0, 1});  // codim 2
  // a = dx2 /\ (random 1-form): guaranteed F^1.
  const Form a = Form::dx(4, 2).wedge(random_form(4, 1, rng, 2, 1, false));
  const Form b = Form::dx(4, 3).wedge(random_form(4, 0, rng, 2, 1, false));
  const int pa = filtration_degree(a, F);
  const int pb = filtration_degree(b, F);
  REQUIRE(pa >= 1);
  REQUIRE(pb >= 1);
  CHECK(filtration_degree(a.wedge(b), F) >= std::min(pa + pb, F.codim() + 1));
  CHECK(filtration_degree(a.d(), F) >= pa);
  CHECK(filtration_degree(b.d(), F) >= pb);
}

TEST_CASE("graded sequences: flavors, wedge, filtration checks") {
  const Foliation F = Foliation::span_axes(3, {0, 1});  // codim 1
  GradedFormSequence s(Flavor::DD_MINUS, 3, 0);
  s.set_foliation(F);
  s.set_entry(0, Form::constant(3, 2.0));
  s.set_entry(1, Form::dx(3, 2).wedge(Form::dx(3, 0)));  // F^1: has dx2
  CHECK_NOTHROW(s.verify_filtration(1e-10));

  GradedFormSequence bad(Flavor::DD_MINUS, 3, 0);
  bad.set_foliation(F);
  bad.set_entry(1, Form::dx(3, 0).wedge(Form::dx(3, 1)));  // no dx2: not F^1
  CHECK_THROWS_AS(bad.verify_filtration(1e-10), NumericalError);

  GradedFormSequence per(Flavor::DD_PER, 3, 0);
  per.set_entry(1, Form::dx(3, 0).wedge(Form::dx(3, 1)));
  CHECK(s.dd_wedge(s).flavor() == Flavor::DD_MINUS);
  CHECK(s.dd_wedge(per).flavor() == Flavor::DD_PER);

  // Convolution grading: (s * s) entry 1 = 2 * (entry0 wedge entry1).
  const Form conv = s.dd_wedge(s).entry(1);
  const Form expected = s.entry(0).wedge(s.entry(1)) * 2.0;
  CHECK((conv - expected).sup_bound() < 1e-12);

  // Degree bookkeeping: offset -1 sequences hold odd degrees.
  GradedFormSequence t(Flavor::DD_PER, 3, -1);
  t.set_entry(1, Form::dx(3, 0));
  CHECK(t.component_of_degree(1).degree() == 1);
  CHECK(t.dd_wedge(s).offset() == -1);
}
