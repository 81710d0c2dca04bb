#include "folrho/charforms.hpp"

#include <cmath>
#include <vector>

namespace folrho {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// -R / 2 pi i as a matrix-valued 2-form.
Form curvature_x(const Connection& c) {
  return curvature(c) * (Cplx(0.0, 1.0) / kTwoPi);
}

// Power sums s_p = Tr(x^p) for p = 1..pmax (s_p has degree 2p).
std::vector<Form> power_sums(const Connection& c, int pmax) {
  const int dim = c.A.dim();
  const Form x = curvature_x(c);
  std::vector<Form> s;
  s.reserve(pmax + 1);
  s.push_back(Form::constant(dim, Cplx(c.rank, 0.0)));  // s_0 = rank
  Form xp = Form::from_matrix(MatScalar::identity(dim, c.rank));
  for (int p = 1; p <= pmax; ++p) {
    xp = xp.wedge(x);
    s.push_back(xp.trace());
  }
  return s;
}

// Elementary symmetric polynomials (Chern forms) from power sums by Newton:
// k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} /\ s_i.
std::vector<Form> newton_elementary(const std::vector<Form>& s, int dim,
                                    int kmax) {
  std::vector<Form> e;
  e.reserve(kmax + 1);
  e.push_back(Form::constant(dim, 1.0));
  for (int k = 1; k <= kmax; ++k) {
    Form acc(dim, 2 * k, 1);
    for (int i = 1; i <= k; ++i) {
      Form t = e[k - i].wedge(s[i]);
      acc = (i % 2) ? acc + t : acc - t;
    }
    e.push_back(acc * (1.0 / k));
  }
  return e;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

GradedFormSequence ch_sequence(const Connection& c) {
  const int dim = c.A.dim();
  const int pmax = dim / 2;
  GradedFormSequence seq(Flavor::DD_PER, dim, 0);
  const std::vector<Form> s = power_sums(c, pmax);
  for (int p = 0; p <= pmax; ++p) seq.set_entry(p, s[p] * (1.0 / factorial(p)));
  return seq;
}

void check_closed(const GradedFormSequence& seq, const char* what,
                  double tol) {
  for (const auto& [p, f] : seq.entries()) {
    if (p == 0) continue;
    if (!f.d().vanishes(tol))
      throw NumericalError(std::string(what) +
                           ": entry failed the closedness check");
  }
}

// Pontryagin entries (index 2i -> p_i) from a real connection.
GradedFormSequence pontryagin_sequence(const Connection& c, int degree_cap) {
  if (!c.real_flag)
    throw ValidationError("pontryagin_forms: connection must be real");
  const int dim = c.A.dim();
  const int kmax = std::min(degree_cap, dim) / 2;  // e_k up to degree 2kmax
  const std::vector<Form> s = power_sums(c, kmax);
  const std::vector<Form> e = newton_elementary(s, dim, kmax);
  GradedFormSequence seq(Flavor::DD_PER, dim, 0);
  seq.set_entry(0, Form::constant(dim, 1.0));
  for (int i = 1; 2 * i <= kmax; ++i)
    seq.set_entry(2 * i, (i % 2) ? -e[2 * i] : e[2 * i]);
  return seq;
}

GradedFormSequence ahat_sequence(const Connection& c) {
  const int dim = c.A.dim();
  const GradedFormSequence p = pontryagin_sequence(c, dim);
  const int kmax = dim / 4;  // A-hat_{4k} supported on T^dim
  const Form one = Form::constant(dim, 1.0);
  std::vector<Form> values(kmax + 1, one);
  for (int i = 1; i <= kmax; ++i) values[i] = p.entry(2 * i);
  GradedFormSequence seq(Flavor::DD_PER, dim, 0);
  seq.set_entry(0, one);
  const auto& table = ahat_table(kmax);
  for (const auto& [k, poly] : table) {
    if (k == 0) continue;
    Form v = poly.eval(values, one,
                       [](const Form& a, const Form& b) { return a.wedge(b); });
    seq.set_entry(2 * k, v);
  }
  return seq;
}

}  // namespace

nlohmann::json CharForm::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["sequence"] = seq.to_json();
  return j;
}

CharForm chern_character(const Connection& c, double closed_tol) {
  CharForm out{"ch", ch_sequence(c)};
  check_closed(out.seq, "chern_character", closed_tol);
  return out;
}

CharForm chern_character_filtered(const Connection& c,
                                  const PartialConnection& pc, double tol) {
  if (!is_extension(pc, c, tol))
    throw ValidationError(
        "chern_character_filtered: connection does not extend the partial "
        "connection");
  GradedFormSequence seq = ch_sequence(c);
  GradedFormSequence out(Flavor::DD_MINUS, seq.dim(), 0);
  out.set_foliation(pc.F);
  for (const auto& [p, f] : seq.entries()) out.set_entry(p, f);
  out.verify_filtration(tol);
  return CharForm{"ch", out};
}

CharForm chern_forms(const Connection& c) {
  const int dim = c.A.dim();
  const int kmax = dim / 2;
  const std::vector<Form> s = power_sums(c, kmax);
  const std::vector<Form> e = newton_elementary(s, dim, kmax);
  GradedFormSequence seq(Flavor::DD_PER, dim, 0);
  for (int k = 0; k <= kmax; ++k) seq.set_entry(k, e[k]);
  return CharForm{"c", seq};
}

CharForm pontryagin_forms(const Connection& c) {
  return CharForm{"p", pontryagin_sequence(c, c.A.dim())};
}

CharForm ahat_form(const Connection& c, double closed_tol) {
  CharForm out{"ahat", ahat_sequence(c)};
  check_closed(out.seq, "ahat_form", closed_tol);
  return out;
}

CharForm ahat_form_filtered(const Connection& c, const PartialConnection& pc,
                            double tol) {
  if (!is_extension(pc, c, tol))
    throw ValidationError(
        "ahat_form_filtered: connection does not extend the partial "
        "connection");
  GradedFormSequence plain = ahat_sequence(c);
  GradedFormSequence out(Flavor::DD_MINUS, plain.dim(), 0);
  out.set_foliation(pc.F);
  for (const auto& [p, f] : plain.entries()) out.set_entry(p, f);
  out.verify_filtration(tol);
  return CharForm{"ahat", out};
}

CharForm transgress_ch(const Connection& c1, const Connection& c0,
                       const std::vector<double>& reparam) {
  if (c0.rank != c1.rank || c0.A.dim() != c1.A.dim())
    throw ValidationError("transgress_ch: rank/torus mismatch");
  const int dim = c0.A.dim();
  const TConnection path = interpolate(c0, c1, reparam);
  const TForm x = path.curvature_t() * (Cplx(0.0, 1.0) / kTwoPi);
  TForm xp = TForm::pullback(
      Form::from_matrix(MatScalar::identity(dim, path.rank)));
  const int pmax = (dim + 1) / 2;
  GradedFormSequence seq(Flavor::DD_PER, dim, -1);
  for (int p = 1; p <= pmax; ++p) {
    xp = xp.wedge(x);
    if (2 * p - 1 <= dim)
      seq.set_entry(p, xp.trace().fiber_integrate() * (1.0 / factorial(p)));
  }
  return CharForm{"ch-tilde", seq};
}

CharForm transgress_ahat(const Connection& c1, const Connection& c0,
                         const std::vector<double>& reparam) {
  if (c0.rank != c1.rank || c0.A.dim() != c1.A.dim())
    throw ValidationError("transgress_ahat: rank/torus mismatch");
  if (!c0.real_flag || !c1.real_flag)
    throw ValidationError("transgress_ahat: connections must be real");
  const int dim = c0.A.dim();
  const TConnection path = interpolate(c0, c1, reparam);
  const TForm x = path.curvature_t() * (Cplx(0.0, 1.0) / kTwoPi);

  // Newton on the cylinder: power sums, elementary symmetric, Pontryagin.
  const int kmax2 = (dim + 1) / 2;  // c_k on I x M up to degree 2k <= dim+1
  std::vector<TForm> s;
  s.reserve(kmax2 + 1);
  s.push_back(TForm::pullback(Form::constant(dim, Cplx(path.rank, 0.0))));
  TForm xp = TForm::pullback(
      Form::from_matrix(MatScalar::identity(dim, path.rank)));
  for (int p = 1; p <= kmax2; ++p) {
    xp = xp.wedge(x);
    s.push_back(xp.trace());
  }
  const TForm one = TForm::pullback(Form::constant(dim, 1.0));
  std::vector<TForm> e;
  e.reserve(kmax2 + 1);
  e.push_back(one);
  for (int k = 1; k <= kmax2; ++k) {
    TForm acc = one * 0.0;
    for (int i = 1; i <= k; ++i) {
      TForm t = e[k - i].wedge(s[i]);
      acc = (i % 2) ? acc + t : acc - t;
    }
    e.push_back(acc * Cplx(1.0 / k, 0.0));
  }
  const int kmax4 = (dim + 1) / 4;  // A-hat_{4k} on the cylinder
  std::vector<TForm> values(kmax4 + 1, one);
  for (int i = 1; i <= kmax4; ++i)
    values[i] = (i % 2) ? (one * 0.0) - e[2 * i] : e[2 * i];

  GradedFormSequence seq(Flavor::DD_PER, dim, -1);
  const auto& table = ahat_table(kmax4);
  for (const auto& [k, poly] : table) {
    if (k == 0) continue;
    TForm v = poly.eval(values, one, [](const TForm& a, const TForm& b) {
      return a.wedge(b);
    });
    if (4 * k - 1 <= dim) seq.set_entry(2 * k, v.fiber_integrate());
  }
  return CharForm{"ahat-tilde", seq};
}

Form kamber_tondeur(const Connection& c, const HermMetric& h, int p,
                    double imag_tol) {
  if (p < 1) throw ValidationError("kamber_tondeur: p >= 1 required");
  const CharForm t = transgress_ch(c, adjoint(c, h));
  Form f = t.entry(p);
  Form re = (f + f.conjugate()) * 0.5;
  if (!re.vanishes(imag_tol))
    throw NumericalError("kamber_tondeur: form is not purely imaginary");
  return f;
}

}  // namespace folrho
