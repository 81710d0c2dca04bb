#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "folrho/rho.hpp"
#include "helpers.hpp"

using namespace folrho;
using doctest::Approx;
using folrho::testing::Rng;
using folrho::testing::random_form;

namespace {

constexpr double kPi = std::numbers::pi;

// The reference scene on T^3 with a nonzero imaginary part: leaves along
// axis 0, twisted line bundle A = sin(2 pi x0) dx2 + i cos(2 pi x0) dx1,
// trivial real normal bundle of rank 2.
struct Scene3 {
  PartialConnection pc;
  Connection c;
  HermMetric h;
  Connection cF;

  Scene3()
      : pc(Foliation::span_axes(3, {0}), Connection::trivial(3, 1)),
        c(Connection::make(
            Form::monomial(TrigScalar(TrigPoly::sine(3, 0)), {2}) +
            Form::monomial(TrigScalar(TrigPoly::cosine(3, 0)), {1}) *
                Cplx(0, 1))),
        h(HermMetric::identity(1)),
        cF(Connection::trivial(3, 2)) {}
};

}  // namespace

TEST_CASE("rho on the circle: closed form across the holonomy family") {
  const FramingData framing = FramingData::trivial(1, 2);
  for (double r : {0.0, 0.1, 0.25, 0.3, 0.5, 0.9}) {
    const RhoResult res = rho_s1(r, framing);
    CHECK(res.real_part == Approx(frac_mod1(-r)).epsilon(1e-12));
    CHECK(std::abs(res.imag_part) < 1e-13);
    CHECK(std::abs(res.correction_framing) < 1e-12);
    CHECK(std::abs(res.correction_unitarization) < 1e-12);
    CHECK(res.ahat_lc_factor == Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("rho on the circle: numeric spectral path agrees") {
  const FramingData framing = FramingData::trivial(1, 2);
  for (double r : {0.1, 0.3}) {
    const RhoResult closed = rho_s1(r, framing, false);
    const RhoResult numeric = rho_s1(r, framing, true);
    CHECK(std::abs(closed.real_part - numeric.real_part) < 1e-7);
    CHECK(numeric.method.find("numeric") != std::string::npos);
  }
}

TEST_CASE("rho on the circle: nontrivial flat framings change nothing") {
  // A = c J dx0 with constant antisymmetric J is flat (J^2 dx0 ^ dx0 = 0).
  MatScalar m(1, 2, 2);
  m.at(0, 1) = TrigScalar::constant(1, 0.7);
  m.at(1, 0) = TrigScalar::constant(1, -0.7);
  Form A(1, 1, 2);
  A.add_term({0}, m);
  const FramingData framing{Connection::make(A, true)};
  const RhoResult res = rho_s1(0.3, framing);
  CHECK(res.real_part == Approx(frac_mod1(-0.3)).epsilon(1e-12));
  CHECK(std::abs(res.correction_framing) < 1e-12);
}

TEST_CASE("imaginary rho of the twisted line bundle on T^3") {
  // Along the interpolation from c* to c the rank-1 transgression is
  // ch~_2 = (i/2pi)^2 d((A+A*)/2) /\ (A - A*), giving + i/(4 pi) here.
  const Scene3 s;
  const Cplx v = rho_imag(s.pc, s.c, s.h, s.cF);
  CHECK(std::abs(v.real()) < 1e-12);
  CHECK(v.imag() == Approx(1.0 / (4 * kPi)).epsilon(1e-10));
}

TEST_CASE("imaginary rho scales bilinearly in the twist amplitudes") {
  const double beta = 0.6, gamma = -1.3;
  const Connection c = Connection::make(
      Form::monomial(TrigScalar(TrigPoly::sine(3, 0)), {2}) * beta +
      Form::monomial(TrigScalar(TrigPoly::cosine(3, 0)), {1}) *
          Cplx(0, gamma));
  const PartialConnection pc(Foliation::span_axes(3, {0}),
                             Connection::trivial(3, 1));
  const Cplx v =
      rho_imag(pc, c, HermMetric::identity(1), Connection::trivial(3, 2));
  CHECK(v.imag() == Approx(beta * gamma / (4 * kPi)).epsilon(1e-10));
}

TEST_CASE("imaginary rho vanishes for self-adjoint extensions") {
  // Purely imaginary abelian potential: A* = A for the identity metric.
  const Connection c = Connection::make(
      (Form::monomial(TrigScalar(TrigPoly::cosine(3, 0)), {1}) +
       Form::monomial(TrigScalar(TrigPoly::sine(3, 2)), {2})) *
      Cplx(0, 1));
  const PartialConnection pc(Foliation::span_axes(3, {0}),
                             Connection::trivial(3, 1));
  const Cplx v =
      rho_imag(pc, c, HermMetric::identity(1), Connection::trivial(3, 2));
  CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("imaginary rho is multiplicative under coverings") {
  const Scene3 s;
  const Cplx base = rho_imag(s.pc, s.c, s.h, s.cF);
  for (int k : {2, 3}) {
    const std::vector<std::vector<int>> U = {{k, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const PartialConnection pck(Foliation::span_axes(3, {0}),
                                s.pc.base.pullback_linear(U));
    const Cplx cover = rho_imag(pck, s.c.pullback_linear(U), s.h,
                                s.cF.pullback_linear(U));
    CHECK(std::abs(cover - double(k) * base) < 1e-10);
  }
}

TEST_CASE("Godbillon-Vey identity as forms on low-dimensional tori") {
  Rng rng(81);
  // n = 0 on the circle and n = 2 on T^5, randomized omega.
  for (int trial = 0; trial < 5; ++trial) {
    const Form w1 = random_form(1, 1, rng, 1, 2, true);
    CHECK(gv_chernweil_identity(w1, 0) < 1e-12);
    const Form w5 = random_form(5, 1, rng, 3, 2, true);
    CHECK(gv_chernweil_identity(w5, 2) < 1e-10);
  }
}

TEST_CASE("rho_imag_gv on the circle against the mean formula") {
  // kappa = dx0, omega = g(x0) dx0, N = d0: the invariant is
  // i * mean(g) / (2 pi).
  const TrigScalar g =
      TrigScalar(TrigPoly::constant(1, 0.8) + TrigPoly::cosine(1, 0));
  const CodimOneData cd(Form::dx(1, 0), Form::monomial(g, {0}),
                        {TrigScalar::one(1)});
  const Cplx v = rho_imag_gv(cd, 0);
  CHECK(std::abs(v - Cplx(0, 0.8 / (2 * kPi))) < 1e-12);
}

TEST_CASE("rho_imag_gv in codimension one on T^5 is structurally zero") {
  // omega = f'(x0) dx1 as in the Bott package of kappa = dx0 + f(x0) dx1:
  // omega /\ (d omega)^2 repeats legs, so both sides vanish.
  const TrigScalar f = TrigScalar(TrigPoly::sine(5, 0) * Cplx(0.5, 0));
  const TrigScalar fp = TrigScalar(TrigPoly::cosine(5, 0) * Cplx(kPi, 0));
  const Form kappa = Form::dx(5, 0) + Form::monomial(f, {1});
  const Form omega = Form::monomial(fp, {1});
  std::vector<TrigScalar> N(5, TrigScalar::zero(5));
  N[0] = TrigScalar::one(5);
  const CodimOneData cd(kappa, omega, N);
  CHECK(gv_form(cd, 2).vanishes(1e-13));
  CHECK(std::abs(rho_imag_gv(cd, 2)) < 1e-12);
}

TEST_CASE("relative e-invariant basics") {
  const FramingData s0 = FramingData::trivial(3, 2);
  MatScalar m(3, 2, 2);
  m.at(0, 1) = TrigScalar::constant(3, 0.4);
  m.at(1, 0) = TrigScalar::constant(3, -0.4);
  Form A(3, 1, 2);
  A.add_term({0}, m);
  const FramingData s1{Connection::make(A, true)};

  const CharForm u = chern_character(Connection::trivial(3, 1));
  // e(s, s) = 0 and the value is reparametrization independent.
  CHECK(std::abs(e_relative(s0, s0, u)) < 1e-13);
  const Cplx a = e_relative(s1, s0, u);
  const Cplx b = e_relative(s1, s0, u, {0.0, 3.0, -2.0});
  CHECK(std::abs(a - b) < 1e-10);
  // Antisymmetry modulo Z on the real part.
  const Cplx c = e_relative(s0, s1, u);
  CHECK(std::min(frac_mod1((a + c).real()), 1 - frac_mod1((a + c).real())) <
        1e-10);
  CHECK(std::abs((a + c).imag()) < 1e-10);
}

TEST_CASE("relative e-invariant vanishes on the circle") {
  // Degree reasons: the transgressed genus has no degree-1 entries beyond
  // the normalization, so the pairing is zero for every framing pair.
  MatScalar m(1, 2, 2);
  m.at(0, 1) = TrigScalar::constant(1, 1.1);
  m.at(1, 0) = TrigScalar::constant(1, -1.1);
  Form A(1, 1, 2);
  A.add_term({0}, m);
  const FramingData s1{Connection::make(A, true)};
  const FramingData s0 = FramingData::trivial(1, 2);
  const CharForm u = chern_character(Connection::trivial(1, 1));
  CHECK(std::abs(e_relative(s1, s0, u)) < 1e-13);
}

TEST_CASE("framings must be flat and real") {
  Rng rng(83);
  // sin(2 pi x1) dx0 has curvature: rejected.
  const Connection curved = Connection::make(
      Form::monomial(TrigScalar(TrigPoly::sine(3, 1)), {0}), true);
  CHECK_THROWS_AS(FramingData{curved}, ValidationError);
}

TEST_CASE("bordism integrand is the asserted zero above the cutoff") {
  // T^4 with a codimension-one foliation: 2 codim < dim, so the top entry
  // sits above the filtration cutoff and the exact zero is returned.  The
  // extension is genuinely curved (ch_2 != 0) to make the assertion earn
  // its keep.
  const Foliation F = Foliation::span_axes(4, {0, 1, 2});
  const PartialConnection pc(F, Connection::trivial(4, 1));
  const Connection c = Connection::make(
      Form::monomial(TrigScalar(TrigPoly::sine(4, 0)), {3}) * Cplx(0, 1));
  CHECK(chern_character(c).entry(1).sup_bound() > 0.01);
  const Cplx v = bordism_integrand(pc, c, Connection::trivial(4, 2));
  CHECK(v == Cplx(0, 0));

  const Scene3 s;
  CHECK_THROWS_AS(bordism_integrand(s.pc, s.c, s.cF), ValidationError);
}
