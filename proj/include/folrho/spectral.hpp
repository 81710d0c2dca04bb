#pragma once
// Eta functions and reduced eta (xi) invariants for explicitly parameterized
// spectra: arithmetic progressions sigma (n + a), n in Z, with optional finite
// perturbations, including the twisted Dirac spectra on the circle.

#include <string>
#include <vector>

#include <json.hpp>

#include "folrho/trig.hpp"

namespace folrho {

// Spectrum { sigma (n + a) : n in Z } with offset a in (0, 1] and scale
// sigma > 0.  a = 1 puts 0 into the spectrum (kernel dimension 1).
struct ArithmeticProgression {
  double a = 0.5;
  double sigma = 1.0;
};

// Replace one eigenvalue `old_lambda` of the base progression by
// `new_lambda` (0 moves it into the kernel).
struct Replacement {
  double old_lambda = 0.0;
  double new_lambda = 0.0;
};

struct SpectrumSpec {
  ArithmeticProgression base;
  std::vector<Replacement> perturbations;

  nlohmann::json to_json() const;
  static SpectrumSpec from_json(const nlohmann::json& j);
};

struct EtaResult {
  double eta0 = 0.0;
  int kernel_dim = 0;
  double xi = 0.0;  // frac((eta0 + kernel_dim)/2), representative in [0,1)
  std::string method;
  double error_estimate = 0.0;

  nlohmann::json to_json() const;
};

// x mod 1 normalized into [0, 1).
double frac_mod1(double x);

// Hurwitz zeta by Euler-Maclaurin (head of 40 terms, 8 Bernoulli corrections);
// valid for s > -1, s != 1, a > 0.
double hurwitz_zeta(double s, double a);

// Closed form: eta(0) = 1 - 2a for 0 < a < 1 (zero for the symmetric case
// a = 1, which carries the kernel instead), then finite sign corrections.
EtaResult eta_arith(double a, double sigma = 1.0);
EtaResult eta_arith(const SpectrumSpec& spec);

// eta(s) = sigma^{-s} (zeta_H(s,a) - zeta_H(s,1-a)) + finite corrections,
// evaluated by the Euler-Maclaurin path; needs s > 0 here.
double eta_series_value(const SpectrumSpec& spec, double s);

// Brute-force partial sum over |lambda| < lambda_cap (deterministic order).
double eta_direct_sum(const SpectrumSpec& spec, double s, double lambda_cap);

// Numerical continuation to s = 0: Neville extrapolation of eta(s) on the
// ladder s_k = 0.5 / 2^k, with the diagonal difference as error estimate.
// Throws NumericalError when the estimate exceeds 1e-8.
EtaResult eta_numeric(const SpectrumSpec& spec);

// Twisted Dirac operator on the circle with holonomy exp(2 pi i r):
// bounding framing -> offsets n + 1/2 + r, non-bounding -> n + r (sigma=2pi).
SpectrumSpec dirac_s1_spectrum(double r, bool bounding);

}  // namespace folrho
