#pragma once
// Matrix-valued differential forms on T^n, forms on the cylinder I x T^n,
// foliations given by frame fields, and the associated filtration.

#include <map>
#include <optional>
#include <vector>

#include "folrho/trig.hpp"

namespace folrho {

using IndexTuple = std::vector<int>;  // strictly increasing coordinate indices

// Sign of merging two strictly increasing tuples into one (0 if they overlap);
// on success `merged` receives the union.
int merge_sign(const IndexTuple& a, const IndexTuple& b, IndexTuple* merged);

// ---------------------------------------------------------------------------
// Form
// ---------------------------------------------------------------------------

class Form {
 public:
  Form() : dim_(0), degree_(0), rank_(1) {}
  Form(int dim, int degree, int rank = 1)
      : dim_(dim), degree_(degree), rank_(rank) {}

  // Degree-0 form from a matrix (or scalar) coefficient.
  static Form from_matrix(const MatScalar& m);
  static Form from_scalar(const TrigScalar& s) { return from_matrix(MatScalar::scalar(s)); }
  static Form constant(int dim, Cplx c, int rank = 1);
  // s * dx_{I}
  static Form monomial(const TrigScalar& s, const IndexTuple& I);
  static Form dx(int dim, int axis);
  static Form zero(int dim, int degree, int rank = 1) { return Form(dim, degree, rank); }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int rank() const { return rank_; }
  bool empty() const { return terms_.empty(); }
  const std::map<IndexTuple, MatScalar>& terms() const { return terms_; }
  MatScalar coeff(const IndexTuple& I) const;

  Form operator+(const Form& o) const;
  Form operator-(const Form& o) const;
  Form operator-() const;
  Form operator*(Cplx s) const;
  Form operator*(double s) const { return *this * Cplx(s, 0.0); }
  Form wedge(const Form& o) const;  // matrix product on coefficients; rank-1 broadcasts

  Form d() const;
  // Interior product with the vector field X (components in the coordinate frame).
  Form contract(const std::vector<TrigScalar>& X) const;
  Form conjugate() const;  // coefficients only; dx_i are real
  Form trace() const;      // rank r -> rank 1
  Form deriv_coeffs(int axis) const;  // coefficient-wise d/dx_axis (no new legs)

  // integral over T^n of a top-degree rank-1 form.
  Cplx integrate_top() const;

  // Pullback along the linear self-map x -> U x (integer matrix).
  Form pullback_linear(const std::vector<std::vector<int>>& U) const;

  double sup_bound() const;
  double grid_sup(double cheap_accept = 0.0) const;
  bool vanishes(double tol) const;
  bool is_real(double tol = 1e-11) const;

  void add_term(const IndexTuple& I, const MatScalar& m);

  nlohmann::json to_json() const;
  static Form from_json(const nlohmann::json& j, int dim);

 private:
  int dim_, degree_, rank_;
  std::map<IndexTuple, MatScalar> terms_;
};

inline Form operator*(Cplx s, const Form& f) { return f * s; }
Form wedge(const Form& a, const Form& b);

// Pairings of a rank-1 form with the constant closed forms dx_J of
// complementary degree: the list of integrals over T^n of f /\ dx_J, one per
// strictly increasing complementary tuple J.  Two closed forms agree modulo
// exact forms exactly when all pairings agree.
std::vector<Cplx> closed_pairings(const Form& f);

// ---------------------------------------------------------------------------
// TForm: alpha(t) + dt /\ beta(t) on I x T^n, with polynomial t-dependence
// ---------------------------------------------------------------------------

class TForm {
 public:
  TForm() : dim_(0), degree_(0), rank_(1) {}
  TForm(int dim, int degree, int rank, TPoly<Form> alpha, TPoly<Form> beta)
      : dim_(dim), degree_(degree), rank_(rank),
        alpha_(std::move(alpha)), beta_(std::move(beta)) {}

  // pi^* of a form on T^n (no dt part, constant in t).
  static TForm pullback(const Form& f);
  // t^m * pi^*(f)
  static TForm monomial_t(const Form& f, int m);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int rank() const { return rank_; }
  const TPoly<Form>& alpha() const { return alpha_; }
  const TPoly<Form>& beta() const { return beta_; }

  TForm operator+(const TForm& o) const;
  TForm operator-(const TForm& o) const;
  TForm operator*(Cplx s) const;
  TForm wedge(const TForm& o) const;
  TForm trace() const;

  // Exterior derivative on the cylinder: d alpha + dt /\ (d/dt alpha - d beta).
  TForm d() const;
  // integral over the I factor: int_0^1 beta(t) dt  (degree drops by one).
  Form fiber_integrate() const;
  // Restriction to a time slice (drops the dt part).
  Form restrict_t(double t) const;

 private:
  static TPoly<Form> add_tpoly(const TPoly<Form>& a, const TPoly<Form>& b);

  int dim_, degree_, rank_;
  TPoly<Form> alpha_;  // degree  `degree_`
  TPoly<Form> beta_;   // degree  `degree_ - 1`
};

// ---------------------------------------------------------------------------
// Foliation
// ---------------------------------------------------------------------------

// An integrable distribution F on T^n, given by spanning frame fields.  The
// constructor verifies constant pointwise rank and frame integrability (the
// commutator of any two frame fields lies pointwise in the span of the frame,
// least-squares residual below `tol` on the verification grid).
class Foliation {
 public:
  Foliation(int dim, int leaf_rank, std::vector<std::vector<TrigScalar>> frame,
            double tol = 1e-9);

  // span of coordinate directions (always integrable).
  static Foliation span_axes(int dim, const std::vector<int>& axes);

  int dim() const { return dim_; }
  int leaf_rank() const { return leaf_rank_; }
  int codim() const { return dim_ - leaf_rank_; }
  const std::vector<std::vector<TrigScalar>>& frame() const { return frame_; }
  double integrability_residual() const { return residual_; }

  bool operator==(const Foliation& o) const {
    return dim_ == o.dim_ && leaf_rank_ == o.leaf_rank_;
  }

 private:
  int dim_, leaf_rank_;
  std::vector<std::vector<TrigScalar>> frame_;
  double residual_;
};

// Largest p with a in F^p Omega (a vanishes after inserting deg - p + 1 frame
// fields of F), clipped to [0, codim+1]; the zero form reports codim+1.
int filtration_degree(const Form& a, const Foliation& F, double tol = 1e-9);

// ---------------------------------------------------------------------------
// GradedFormSequence
// ---------------------------------------------------------------------------

enum class Flavor { DD_MINUS, DD_PER };

// A finite sequence p -> Form of degree offset + 2p (offset 0 for characteristic
// forms, -1 for transgressions).  DD_MINUS additionally asserts entry p lies in
// F^p for the attached foliation.
class GradedFormSequence {
 public:
  GradedFormSequence() : flavor_(Flavor::DD_PER), dim_(0), offset_(0) {}
  GradedFormSequence(Flavor flavor, int dim, int offset)
      : flavor_(flavor), dim_(dim), offset_(offset) {}

  Flavor flavor() const { return flavor_; }
  int dim() const { return dim_; }
  int offset() const { return offset_; }
  const std::map<int, Form>& entries() const { return entries_; }
  const std::optional<Foliation>& foliation() const { return foliation_; }

  void set_foliation(const Foliation& F) { foliation_ = F; }
  void set_entry(int p, const Form& f);
  Form entry(int p) const;  // zero form when absent

  GradedFormSequence operator+(const GradedFormSequence& o) const;
  GradedFormSequence operator*(Cplx s) const;
  // Convolution wedge; DD_MINUS * DD_MINUS stays DD_MINUS (same foliation),
  // anything else degrades to DD_PER.
  GradedFormSequence dd_wedge(const GradedFormSequence& o) const;
  GradedFormSequence d() const;
  GradedFormSequence conjugate() const;

  // Sum of all entries as plain forms (mixed degree collapse is the caller's
  // responsibility; used for top-degree extraction).
  Form component_of_degree(int deg) const;

  // Verify DD_MINUS membership: filtration_degree(entry p) >= min(p, codim+1).
  void verify_filtration(double tol = 1e-9) const;

  nlohmann::json to_json() const;

 private:
  Flavor flavor_;
  int dim_, offset_;
  std::map<int, Form> entries_;
  std::optional<Foliation> foliation_;
};

}  // namespace folrho
