#include "folrho/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace folrho {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

void validate_base(const ArithmeticProgression& b) {
  if (!(b.a > 0.0) || !(b.a <= 1.0))
    throw ValidationError("spectrum: offset a must lie in (0, 1]");
  if (!(b.sigma > 0.0))
    throw ValidationError("spectrum: scale sigma must be positive");
}

// Is `lambda` an element sigma (n + a) of the base progression?
bool in_progression(const ArithmeticProgression& b, double lambda) {
  const double n = lambda / b.sigma - b.a;
  return std::abs(n - std::round(n)) < 1e-9;
}

// eta(0) and kernel shift contributed by the perturbation list.
void apply_perturbations_at_zero(const SpectrumSpec& spec, double* eta0,
                                 int* kernel) {
  for (const auto& r : spec.perturbations) {
    if (!in_progression(spec.base, r.old_lambda))
      throw ValidationError(
          "spectrum: replaced eigenvalue is not in the base progression");
    *eta0 += sign_of(r.new_lambda) - sign_of(r.old_lambda);
    if (r.new_lambda == 0.0) *kernel += 1;
    if (r.old_lambda == 0.0) *kernel -= 1;
  }
  if (*kernel < 0)
    throw ValidationError("spectrum: kernel dimension made negative");
}

}  // namespace

double frac_mod1(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;  // guard against floor rounding at integers
  if (f < 0.0) f += 1.0;
  // collapse values within float fuzz of 1 back to 0
  if (1.0 - f < 1e-12) f = 0.0;
  return f;
}

double hurwitz_zeta(double s, double a) {
  if (!(a > 0.0)) throw ValidationError("hurwitz_zeta: a > 0 required");
  if (s == 1.0) throw ValidationError("hurwitz_zeta: pole at s = 1");
  // Euler-Maclaurin: head sum to N, integral + midpoint + Bernoulli tail.
  constexpr int N = 40;
  // B_{2j} / (2j)! for j = 1..8
  static const double kBernFact[] = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -1.691806562056320e-11,  // B_12/12! = -691/(2730*479001600)
      6.4469502843844736e-13,  // B_14/14! = 7/(6*87178291200)
      -2.5518218909353359e-14  // B_16/16!
  };
  double head = 0.0;
  for (int n = 0; n < N; ++n) head += std::pow(n + a, -s);
  const double x = N + a;
  double acc = head + std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double poch = s;                       // (s)_{2j-1}
  double xpow = std::pow(x, -s - 1.0);   // x^{-s-2j+1}
  for (int j = 1; j <= 8; ++j) {
    acc += kBernFact[j - 1] * poch * xpow;
    poch *= (s + 2 * j - 1) * (s + 2 * j);
    xpow /= x * x;
  }
  return acc;
}

nlohmann::json SpectrumSpec::to_json() const {
  nlohmann::ordered_json j;
  j["a"] = base.a;
  j["sigma"] = base.sigma;
  nlohmann::ordered_json reps = nlohmann::ordered_json::array();
  for (const auto& r : perturbations)
    reps.push_back({{"old", r.old_lambda}, {"new", r.new_lambda}});
  j["perturbations"] = reps;
  return j;
}

SpectrumSpec SpectrumSpec::from_json(const nlohmann::json& j) {
  SpectrumSpec spec;
  spec.base.a = j.value("a", 0.5);
  spec.base.sigma = j.value("sigma", 1.0);
  if (j.contains("perturbations")) {
    for (const auto& r : j.at("perturbations")) {
      Replacement rep;
      rep.old_lambda = r.at("old").get<double>();
      rep.new_lambda = r.at("new").get<double>();
      spec.perturbations.push_back(rep);
    }
  }
  validate_base(spec.base);
  return spec;
}

nlohmann::json EtaResult::to_json() const {
  nlohmann::ordered_json j;
  j["eta0"] = eta0;
  j["kernel_dim"] = kernel_dim;
  j["xi"] = xi;
  j["method"] = method;
  j["error_estimate"] = error_estimate;
  return j;
}

EtaResult eta_arith(double a, double sigma) {
  SpectrumSpec spec;
  spec.base.a = a;
  spec.base.sigma = sigma;
  return eta_arith(spec);
}

EtaResult eta_arith(const SpectrumSpec& spec) {
  validate_base(spec.base);
  const double a = spec.base.a;
  EtaResult out;
  out.method = "closed-form";
  out.eta0 = (a == 1.0) ? 0.0 : 1.0 - 2.0 * a;
  out.kernel_dim = (a == 1.0) ? 1 : 0;
  apply_perturbations_at_zero(spec, &out.eta0, &out.kernel_dim);
  out.xi = frac_mod1((out.eta0 + out.kernel_dim) / 2.0);
  out.error_estimate = 0.0;
  return out;
}

double eta_series_value(const SpectrumSpec& spec, double s) {
  validate_base(spec.base);
  if (!(s > 0.0))
    throw ValidationError("eta_series_value: s > 0 required");
  const double a = spec.base.a;
  const double sigma = spec.base.sigma;
  double eta = 0.0;
  if (a != 1.0)
    eta = std::pow(sigma, -s) * (hurwitz_zeta(s, a) - hurwitz_zeta(s, 1.0 - a));
  for (const auto& r : spec.perturbations) {
    if (!in_progression(spec.base, r.old_lambda))
      throw ValidationError(
          "spectrum: replaced eigenvalue is not in the base progression");
    if (r.old_lambda != 0.0)
      eta -= sign_of(r.old_lambda) * std::pow(std::abs(r.old_lambda), -s);
    if (r.new_lambda != 0.0)
      eta += sign_of(r.new_lambda) * std::pow(std::abs(r.new_lambda), -s);
  }
  return eta;
}

double eta_direct_sum(const SpectrumSpec& spec, double s, double lambda_cap) {
  validate_base(spec.base);
  const double a = spec.base.a;
  const double sigma = spec.base.sigma;
  double acc = 0.0;
  // Ascending |lambda|, positive/negative branches interleaved pairwise.
  for (int n = 0;; ++n) {
    const double pos = sigma * (n + a);
    const double neg = sigma * (n + 1.0 - a);
    bool alive = false;
    if (pos != 0.0 && pos < lambda_cap) {
      acc += std::pow(pos, -s);
      alive = true;
    }
    if (neg != 0.0 && neg < lambda_cap) {
      acc -= std::pow(neg, -s);
      alive = true;
    }
    if (!alive) break;
  }
  for (const auto& r : spec.perturbations) {
    if (r.old_lambda != 0.0 && std::abs(r.old_lambda) < lambda_cap)
      acc -= sign_of(r.old_lambda) * std::pow(std::abs(r.old_lambda), -s);
    if (r.new_lambda != 0.0 && std::abs(r.new_lambda) < lambda_cap)
      acc += sign_of(r.new_lambda) * std::pow(std::abs(r.new_lambda), -s);
  }
  return acc;
}

EtaResult eta_numeric(const SpectrumSpec& spec) {
  validate_base(spec.base);
  // Neville extrapolation of the entire function eta(s) to s = 0 along
  // s_k = 0.5 / 2^k.
  constexpr int K = 7;
  double sk[K], fk[K];
  for (int k = 0; k < K; ++k) {
    sk[k] = 0.5 / static_cast<double>(1 << k);
    fk[k] = eta_series_value(spec, sk[k]);
  }
  double prev_diag = fk[0];
  double diag = fk[0];
  double table[K];
  table[0] = fk[0];
  for (int k = 1; k < K; ++k) {
    table[k] = fk[k];
    for (int m = k - 1; m >= 0; --m)
      table[m] = (sk[m] * table[m + 1] - sk[k] * table[m]) / (sk[m] - sk[k]);
    prev_diag = diag;
    diag = table[0];
  }
  EtaResult out;
  out.method = "zeta-numeric";
  out.eta0 = diag;
  out.error_estimate = std::abs(diag - prev_diag);
  if (!(out.error_estimate < 1e-8))
    throw NumericalError("eta_numeric: extrapolation did not converge");
  out.kernel_dim = (spec.base.a == 1.0) ? 1 : 0;
  double dummy_eta = 0.0;
  apply_perturbations_at_zero(spec, &dummy_eta, &out.kernel_dim);
  // The finite corrections at s = 0 are already inside eta_series_value.
  out.xi = frac_mod1((out.eta0 + out.kernel_dim) / 2.0);
  return out;
}

SpectrumSpec dirac_s1_spectrum(double r, bool bounding) {
  if (!(r >= 0.0) || !(r < 1.0))
    throw ValidationError("dirac_s1_spectrum: r in [0,1) required");
  SpectrumSpec spec;
  const double off = bounding ? frac_mod1(0.5 + r) : frac_mod1(r);
  spec.base.a = (off == 0.0) ? 1.0 : off;
  spec.base.sigma = kTwoPi;
  return spec;
}

}  // namespace folrho
