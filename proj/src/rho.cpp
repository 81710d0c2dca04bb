#include "folrho/rho.hpp"

#include <cmath>
#include <sstream>

namespace folrho {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Cplx ipow(int k) {
  static const Cplx table[4] = {Cplx(1, 0), Cplx(0, 1), Cplx(-1, 0),
                                Cplx(0, -1)};
  return table[((k % 4) + 4) % 4];
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// 2 (-1)^{n+1} / ((2 pi i)^{n+1} (n+1)!)
Cplx gv_constant_doubled(int n) {
  const double sgn = ((n + 1) % 2 == 0) ? 1.0 : -1.0;
  const Cplx denom = std::pow(kTwoPi, n + 1) * factorial(n + 1) * ipow(n + 1);
  return Cplx(2.0 * sgn, 0) / denom;
}

nlohmann::json cplx_json(const Cplx& z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

FramingData::FramingData(Connection c, double tol) : conn(std::move(c)) {
  if (!conn.real_flag)
    throw ValidationError("FramingData: framing connection must be real");
  if (!curvature(conn).vanishes(tol))
    throw ValidationError("FramingData: framing connection is not flat");
}

FramingData FramingData::trivial(int dim, int rank) {
  return FramingData(Connection::trivial(dim, rank));
}

FramingData FramingData::from_json(const nlohmann::json& j, int dim) {
  return FramingData(Connection::from_json(j, dim));
}

nlohmann::json RhoResult::to_json() const {
  return {{"value", cplx_json(value)},
          {"real_part", real_part},
          {"imag_part", imag_part},
          {"provenance",
           {{"xi", xi},
            {"correction_framing", cplx_json(correction_framing)},
            {"correction_unitarization", cplx_json(correction_unitarization)},
            {"ahat_lc_factor", ahat_lc_factor}}},
          {"method", method},
          {"error_estimate", error_estimate}};
}

RhoResult rho_s1(double r, const FramingData& framing, bool numeric) {
  if (framing.dim() != 1)
    throw ValidationError("rho_s1: framing must live on the circle");

  const SpectrumSpec spec = dirac_s1_spectrum(r, /*bounding=*/true);
  const EtaResult er = numeric ? eta_numeric(spec) : eta_arith(spec);

  // The flat bundle V(r): d - 2 pi i r dx.
  const Connection cV = Connection::make(Form::dx(1, 0) * Cplx(0, -kTwoPi * r));
  const CharForm chV = chern_character(cV);

  // Framing correction int A-hat~(s, trivial) /\ ch(V): on the circle the
  // transgression sequence has no entry of degree <= 1, so this is a
  // structural zero; it is still assembled and integrated.
  const Connection triv = Connection::trivial(1, framing.rank());
  const CharForm At = transgress_ahat(framing.conn, triv);
  const Cplx corr_framing =
      At.seq.dd_wedge(chV.seq).component_of_degree(1).integrate_top();

  // Unitarization correction int A-hat(LC) /\ ch~(V, V^u) with the flat-metric
  // A-hat factor equal to 1.
  const Connection cU = unitarize(cV, HermMetric::identity(1));
  const CharForm Tu = transgress_ch(cV, cU);
  const Cplx corr_unit = Tu.seq.component_of_degree(1).integrate_top();

  if (std::abs(corr_framing) >= 1e-12 || std::abs(corr_unit) >= 1e-12) {
    std::ostringstream os;
    os << "rho_s1: correction integrals did not vanish (framing "
       << std::abs(corr_framing) << ", unitarization " << std::abs(corr_unit)
       << ")";
    throw NumericalError(os.str());
  }

  RhoResult out;
  out.xi = er.xi;
  out.correction_framing = corr_framing;
  out.correction_unitarization = corr_unit;
  out.ahat_lc_factor = 1.0;
  out.method = er.method;
  out.error_estimate = er.error_estimate;
  const double re =
      frac_mod1(er.xi - corr_framing.real() + corr_unit.real());
  const double im = -corr_framing.imag() + corr_unit.imag();
  out.value = Cplx(re, im);
  out.real_part = re;
  out.imag_part = im;
  return out;
}

Cplx rho_imag(const PartialConnection& pc, const Connection& c,
              const HermMetric& h, const Connection& cF, double tol) {
  const int dim = c.A.dim();
  if (pc.F.dim() != dim || cF.A.dim() != dim)
    throw ValidationError("rho_imag: dimension mismatch");
  if (dim % 2 == 0)
    throw ValidationError("rho_imag: the torus dimension must be odd");
  if (h.rank() != c.rank)
    throw ValidationError("rho_imag: metric rank mismatch");
  if (!cF.real_flag)
    throw ValidationError("rho_imag: the normal-bundle connection must be real");
  if (!is_extension(pc, c, tol))
    throw ValidationError(
        "rho_imag: connection does not extend the partial connection");

  const CharForm ahat = ahat_form(cF);
  const CharForm tch = transgress_ch(c, adjoint(c, h));
  const Form top = ahat.seq.dd_wedge(tch.seq).component_of_degree(dim);
  const Cplx v = top.integrate_top() * Cplx(0.5, 0);
  if (std::abs(v.real()) >= tol) {
    std::ostringstream os;
    os << "rho_imag: real part " << v.real() << " did not vanish (tol " << tol
       << ")";
    throw NumericalError(os.str());
  }
  return Cplx(0.0, v.imag());
}

double gv_chernweil_identity(const Form& omega, int n) {
  if (omega.degree() != 1 || omega.rank() != 1)
    throw ValidationError("gv_chernweil_identity: omega must be a scalar 1-form");
  if (!omega.is_real())
    throw ValidationError("gv_chernweil_identity: omega must be real");
  if (n < 0 || n % 2 != 0)
    throw ValidationError("gv_chernweil_identity: n must be even and >= 0");
  const int dim = omega.dim();
  if (dim < 2 * n + 1)
    throw ValidationError("gv_chernweil_identity: ambient dimension too small");

  const Connection cp = Connection::make(omega, /*real_flag=*/true);
  const Connection cm =
      Connection::make(omega * Cplx(-1, 0), /*real_flag=*/true);
  const Form lhs = transgress_ch(cp, cm).entry(n + 1);

  Form rhs = omega;
  const Form dw = omega.d();
  for (int i = 0; i < n; ++i) rhs = rhs.wedge(dw);
  rhs = rhs * gv_constant_doubled(n);

  return (lhs - rhs).sup_bound();
}

Form gv_form(const CodimOneData& cd, int n) {
  if (n < 0 || n % 2 != 0)
    throw ValidationError("gv_form: n must be even and >= 0");
  if (cd.dim() != 2 * n + 1)
    throw ValidationError("gv_form: ambient dimension must equal 2n+1");
  Form out = cd.omega;
  const Form dw = cd.omega.d();
  for (int i = 0; i < n; ++i) out = out.wedge(dw);
  return out;
}

Cplx rho_imag_gv(const CodimOneData& cd, int n) {
  const Form gv = gv_form(cd, n);
  const Connection bott = bott_connection(cd);
  const PartialConnection pcB = bott_partial(cd);
  const Cplx val = rho_imag(pcB, bott, HermMetric::identity(1), bott);

  const Cplx expected =
      gv.integrate_top() * (gv_constant_doubled(n) * Cplx(0.5, 0));
  if (std::abs(val - expected) >= 1e-8) {
    std::ostringstream os;
    os << "rho_imag_gv: Godbillon-Vey cross-check failed (|"
       << val.imag() << "i - expected| = " << std::abs(val - expected) << ")";
    throw NumericalError(os.str());
  }
  return val;
}

Cplx e_relative(const FramingData& s1, const FramingData& s0,
                const CharForm& u_ch, const std::vector<double>& reparam) {
  const int dim = s1.dim();
  if (s0.dim() != dim)
    throw ValidationError("e_relative: framing dimension mismatch");
  if (s1.rank() != s0.rank())
    throw ValidationError("e_relative: framing rank mismatch");

  const CharForm At = transgress_ahat(s1.conn, s0.conn, reparam);
  const Cplx v =
      At.seq.dd_wedge(u_ch.seq).component_of_degree(dim).integrate_top();
  return Cplx(frac_mod1(v.real()), v.imag());
}

Cplx bordism_integrand(const PartialConnection& pc, const Connection& c,
                       const Connection& cF, double tol) {
  const int dim = c.A.dim();
  if (pc.F.dim() != dim || cF.A.dim() != dim)
    throw ValidationError("bordism_integrand: dimension mismatch");
  if (dim % 2 != 0)
    throw ValidationError("bordism_integrand: the torus dimension must be even");

  const CharForm chm = chern_character_filtered(c, pc, tol);

  // A-hat^-(cF): the plain sequence re-flavored against pc's foliation; the
  // filtration membership is verified directly (cF lives on the normal
  // bundle, not on pc's bundle, so no extension relation applies).
  const GradedFormSequence plain = ahat_form(cF).seq;
  GradedFormSequence am(Flavor::DD_MINUS, dim, 0);
  am.set_foliation(pc.F);
  for (const auto& [p, f] : plain.entries()) am.set_entry(p, f);
  am.verify_filtration(tol);

  const GradedFormSequence w = am.dd_wedge(chm.seq);
  const Form top = w.component_of_degree(dim);

  if (2 * pc.F.codim() < dim) {
    // F^p Omega^{2p} = 0 for p > codim: the top entry must vanish identically.
    if (!top.vanishes(tol)) {
      std::ostringstream os;
      os << "bordism_integrand: top component above the filtration cutoff did "
            "not vanish (sup bound "
         << top.sup_bound() << ")";
      throw NumericalError(os.str());
    }
    return Cplx(0, 0);
  }

  const Cplx v = top.integrate_top();
  return Cplx(frac_mod1(v.real()), v.imag());
}

}  // namespace folrho
