#pragma once
// The rho invariant and its relatives on foliated flat tori: the spectral
// formula on the circle, the purely imaginary part in higher (odd) dimensions,
// the Godbillon-Vey identity, the relative e-invariant of two framings, and
// the even-dimensional bordism integrand.

#include <string>
#include <vector>

#include <json.hpp>

#include "folrho/charforms.hpp"
#include "folrho/connection.hpp"
#include "folrho/spectral.hpp"

namespace folrho {

// A stabilized framing: a flat real connection on a trivialized rank-m
// bundle.  Flatness (and the real flag) are verified at construction.
struct FramingData {
  Connection conn;

  explicit FramingData(Connection c, double tol = 1e-9);
  int rank() const { return conn.rank; }
  int dim() const { return conn.A.dim(); }

  static FramingData trivial(int dim, int rank);
  static FramingData from_json(const nlohmann::json& j, int dim);
};

// A representative of the invariant in C/Z (real part reduced to [0,1)),
// together with the provenance breakdown
//   value = xi - correction_framing + correction_unitarization  (mod Z).
struct RhoResult {
  Cplx value;
  double real_part = 0.0;  // = value.real(), in [0,1)
  double imag_part = 0.0;  // = value.imag()
  double xi = 0.0;
  Cplx correction_framing;
  Cplx correction_unitarization;
  double ahat_lc_factor = 1.0;  // the flat-metric A-hat factor, kept explicit
  std::string method;
  double error_estimate = 0.0;

  nlohmann::json to_json() const;
};

// rho of the circle with holonomy exp(2 pi i r) against the given framing:
// xi of the twisted Dirac operator (bounding spin structure) minus the
// framing correction plus the unitarization correction.  Both corrections
// are evaluated and must vanish (|.| < 1e-12).  `numeric` switches the
// spectral term from the closed form to the extrapolated eta path.
RhoResult rho_s1(double r, const FramingData& framing, bool numeric = false);

// The purely imaginary part on an odd-dimensional torus:
//   (1/2) * top-degree pairing of A-hat(cF) with ch~(c, c*) ,
// where c must extend pc and cF is a real connection on the normal bundle.
// The real part of the pairing must vanish (|Re| < tol); the value returned
// is purely imaginary.
Cplx rho_imag(const PartialConnection& pc, const Connection& c,
              const HermMetric& h, const Connection& cF, double tol = 1e-9);

// Sup-residual of the identity
//   ch~_{2n+2}(d + omega, d - omega)
//     = 2 (-1)^{n+1} / ((2 pi i)^{n+1} (n+1)!) * omega /\ (d omega)^n
// for a real 1-form omega and even n.
double gv_chernweil_identity(const Form& omega, int n);

// The Godbillon-Vey form omega /\ (d omega)^n of codimension-one data on a
// (2n+1)-torus (n even).
Form gv_form(const CodimOneData& cd, int n);

// rho_imag of the Bott connection package of cd, cross-checked against
//   (-1)^{n+1} / ((2 pi i)^{n+1} (n+1)!) * integrate_top(gv_form(cd, n)).
Cplx rho_imag_gv(const CodimOneData& cd, int n);

// Relative e-invariant of two framings against a closed Chern character:
//   [ integrate_top( A-hat~(s1, s0) /\ u_ch ) ]  in C/Z.
// `reparam` selects the interpolation path (the value is path-independent
// for flat endpoints).
Cplx e_relative(const FramingData& s1, const FramingData& s0,
                const CharForm& u_ch,
                const std::vector<double>& reparam = {0.0, 1.0});

// Even-dimensional integrand [ integrate_top( A-hat^-(cF) /\ ch^-(c) ) ] in
// C/Z, computed with DD_MINUS sequences against pc's foliation.  Whenever
// 2 codim(F) < dim the top component lies above the filtration cutoff; its
// vanishing is asserted and the exact zero is returned.
Cplx bordism_integrand(const PartialConnection& pc, const Connection& c,
                       const Connection& cF, double tol = 1e-9);

}  // namespace folrho
