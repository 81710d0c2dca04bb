#pragma once
// Exact arithmetic on trigonometric polynomials and their quotients over T^n.
//
// A TrigPoly is a finite Fourier sum  sum_k c_k exp(2*pi*i <k,x>)  with integer
// frequency vectors k and complex coefficients; all ring operations are exact on
// the coefficient level (up to the absolute drop tolerance that clears rounding
// dust).  A TrigScalar is a quotient num/den of two TrigPolys whose denominator
// has been certified nonvanishing on a verification grid.  These are the scalar
// coefficients everything else (matrices, differential forms) is built from.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace folrho {

using Cplx = std::complex<double>;
using FreqVector = std::vector<int>;

// Absolute coefficient drop tolerance applied after every arithmetic operation.
inline constexpr double kDropTol = 1e-14;
// Certification margin for denominators: min modulus over the verification grid.
inline constexpr double kDenMargin = 1e-6;
// Quadrature: successive grid doublings must agree to this before we accept.
inline constexpr double kQuadTol = 1e-10;
// Hard cap on total quadrature points.
inline constexpr std::int64_t kQuadMaxPoints = 1 << 20;

// Input data that fails a structural or certification check.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical verification or convergence failure (post-conditions, quadrature).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Per-axis grid resolution cap, from the environment (FOLRHO_MAX_GRID), or a
// non-binding default.  Read once.
int max_grid_per_axis();

// ---------------------------------------------------------------------------
// TrigPoly
// ---------------------------------------------------------------------------

class TrigPoly {
 public:
  TrigPoly() : dim_(0) {}
  explicit TrigPoly(int dim) : dim_(dim) {}

  static TrigPoly constant(int dim, Cplx c);
  // c * exp(2 pi i <k,x>)
  static TrigPoly wave(int dim, FreqVector k, Cplx c);
  // cos(2 pi f x_axis) and sin(2 pi f x_axis) as exact two-term sums.
  static TrigPoly cosine(int dim, int axis, int freq = 1);
  static TrigPoly sine(int dim, int axis, int freq = 1);

  int dim() const { return dim_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<FreqVector, Cplx>& terms() const { return terms_; }

  Cplx coeff(const FreqVector& k) const;
  // Largest |k_j| over all terms and axes.
  int bandwidth() const;
  // Largest |k_axis| over all terms, for one axis.
  int bandwidth(int axis) const;
  // Axes on which the polynomial actually depends (some term has k_axis != 0).
  std::vector<int> active_axes() const;

  TrigPoly operator+(const TrigPoly& o) const;
  TrigPoly operator-(const TrigPoly& o) const;
  TrigPoly operator*(const TrigPoly& o) const;
  TrigPoly operator*(Cplx s) const;
  TrigPoly operator-() const;

  TrigPoly conjugate() const;     // coeff(k) -> conj(coeff(-k))
  TrigPoly deriv(int axis) const; // term k -> 2 pi i k_axis * term
  Cplx eval(const std::vector<double>& x) const;
  // Mean over the torus = coefficient of k = 0 (exact).
  Cplx mean() const { return coeff(FreqVector(dim_, 0)); }

  // sum_k |c_k|  >=  sup norm; cheap and certified.
  double sup_bound() const;
  double max_coeff_abs() const;
  bool is_real(double tol = 1e-11) const;

  // Pullback along the linear torus map x -> U x (U integer n x n):
  // frequencies map k -> U^T k.
  TrigPoly pullback(const std::vector<std::vector<int>>& U) const;

  bool operator==(const TrigPoly& o) const {
    return dim_ == o.dim_ && terms_ == o.terms_;
  }

  nlohmann::json to_json() const;
  static TrigPoly from_json(const nlohmann::json& j, int dim);

 private:
  void add_term(const FreqVector& k, Cplx c);
  void prune();

  int dim_;
  std::map<FreqVector, Cplx> terms_;  // lexicographic key order; no zero coeffs
};

inline TrigPoly operator*(Cplx s, const TrigPoly& p) { return p * s; }

// ---------------------------------------------------------------------------
// TrigScalar: num/den with grid-certified denominator
// ---------------------------------------------------------------------------

class TrigScalar {
 public:
  TrigScalar() : num_(0), den_(0), den_min_(1.0) {}
  // Pure trigonometric polynomial (den == 1).
  TrigScalar(const TrigPoly& num);  // NOLINT(google-explicit-constructor)
  // Quotient; the denominator is certified nonvanishing (min modulus over the
  // verification grid >= kDenMargin) or a ValidationError is thrown.  A constant
  // denominator is folded into the numerator.
  TrigScalar(const TrigPoly& num, const TrigPoly& den);

  static TrigScalar constant(int dim, Cplx c) {
    return TrigScalar(TrigPoly::constant(dim, c));
  }
  static TrigScalar zero(int dim) { return TrigScalar(TrigPoly(dim)); }
  static TrigScalar one(int dim) { return constant(dim, 1.0); }

  int dim() const { return num_.dim(); }
  const TrigPoly& num() const { return num_; }
  const TrigPoly& den() const { return den_; }
  bool den_is_one() const { return den_.empty(); }  // empty den sentinel == 1
  // Certified lower bound for min |den| (1 when den == 1).
  double den_min() const { return den_min_; }

  TrigScalar operator+(const TrigScalar& o) const;
  TrigScalar operator-(const TrigScalar& o) const;
  TrigScalar operator*(const TrigScalar& o) const;
  TrigScalar operator*(Cplx s) const;
  TrigScalar operator-() const;
  // Multiplicative inverse; requires num certified nonvanishing (fresh grid
  // certification) else ValidationError.
  TrigScalar reciprocal() const;
  TrigScalar operator/(const TrigScalar& o) const { return *this * o.reciprocal(); }

  TrigScalar conjugate() const;
  TrigScalar deriv(int axis) const;
  Cplx eval(const std::vector<double>& x) const;

  // Exact mean for pure polynomials; adaptive periodic-trapezoid quadrature for
  // genuine quotients (grid doubling until two successive levels agree to
  // kQuadTol, total points capped at kQuadMaxPoints; NumericalError on failure).
  Cplx integrate_torus() const;

  // Cheap certified upper bound for sup |num/den|.
  double sup_bound() const;
  // Honest sup over the verification grid (cheap bound short-circuit when it is
  // already below `cheap_accept`).
  double grid_sup(double cheap_accept = 0.0) const;
  bool vanishes(double tol) const;
  bool is_real(double tol = 1e-11) const;

  TrigScalar pullback(const std::vector<std::vector<int>>& U) const;

  std::vector<int> active_axes() const;
  int bandwidth(int axis) const;

  nlohmann::json to_json() const;
  static TrigScalar from_json(const nlohmann::json& j, int dim);

 private:
  void normalize();

  TrigPoly num_;
  TrigPoly den_;       // empty == constant 1
  double den_min_;     // certified lower bound for min |den| over T^n
};

inline TrigScalar operator*(Cplx s, const TrigScalar& p) { return p * s; }

// ---------------------------------------------------------------------------
// MatScalar: matrix with TrigScalar entries
// ---------------------------------------------------------------------------

class MatScalar {
 public:
  MatScalar() : dim_(0), rows_(0), cols_(0) {}
  MatScalar(int dim, int rows, int cols);

  static MatScalar identity(int dim, int n);
  static MatScalar scalar(const TrigScalar& s) {
    MatScalar m(s.dim(), 1, 1);
    m.at(0, 0) = s;
    return m;
  }
  // Constant matrix from complex entries (row-major).
  static MatScalar constant(int dim, int rows, int cols,
                            const std::vector<Cplx>& entries);

  int dim() const { return dim_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }

  TrigScalar& at(int r, int c) { return entries_[r * cols_ + c]; }
  const TrigScalar& at(int r, int c) const { return entries_[r * cols_ + c]; }

  MatScalar operator+(const MatScalar& o) const;
  MatScalar operator-(const MatScalar& o) const;
  MatScalar operator*(const MatScalar& o) const;  // matrix product (1x1 broadcasts)
  MatScalar operator*(Cplx s) const;
  MatScalar operator*(const TrigScalar& s) const;
  MatScalar operator-() const;

  MatScalar conjugate() const;           // entrywise
  MatScalar transpose() const;
  MatScalar hermitian_transpose() const; // conjugate + transpose
  MatScalar deriv(int axis) const;
  MatScalar kron(const MatScalar& o) const;
  TrigScalar trace() const;

  std::vector<std::vector<Cplx>> eval(const std::vector<double>& x) const;

  double sup_bound() const;
  double grid_sup(double cheap_accept = 0.0) const;
  bool vanishes(double tol) const;

  MatScalar pullback(const std::vector<std::vector<int>>& U) const;

  nlohmann::json to_json() const;
  static MatScalar from_json(const nlohmann::json& j, int dim);

 private:
  int dim_, rows_, cols_;
  std::vector<TrigScalar> entries_;  // row-major
};

inline MatScalar operator*(Cplx s, const MatScalar& m) { return m * s; }

// ---------------------------------------------------------------------------
// TPoly<X>: polynomial in the interval variable t with coefficients in X
// ---------------------------------------------------------------------------
//
// X must support +, scalar multiplication by double, and a well-defined "zero of
// matching shape" obtained from any coefficient via multiplication by 0.

template <class X>
class TPoly {
 public:
  TPoly() = default;
  explicit TPoly(std::vector<X> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  static TPoly constant(const X& x) { return TPoly(std::vector<X>{x}); }

  bool empty() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<X>& coeffs() const { return coeffs_; }

  TPoly operator+(const TPoly& o) const {
    const auto n = std::max(coeffs_.size(), o.coeffs_.size());
    std::vector<X> out;
    out.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
      if (m < coeffs_.size() && m < o.coeffs_.size())
        out.push_back(coeffs_[m] + o.coeffs_[m]);
      else if (m < coeffs_.size())
        out.push_back(coeffs_[m]);
      else
        out.push_back(o.coeffs_[m]);
    }
    return TPoly(std::move(out));
  }

  template <class Mul>
  TPoly mul(const TPoly& o, Mul&& prod) const {  // Cauchy product via `prod`
    TPoly out;
    if (empty() || o.empty()) return out;
    std::vector<std::optional<X>> acc(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t a = 0; a < coeffs_.size(); ++a)
      for (std::size_t b = 0; b < o.coeffs_.size(); ++b) {
        X term = prod(coeffs_[a], o.coeffs_[b]);
        if (acc[a + b])
          acc[a + b] = *acc[a + b] + term;
        else
          acc[a + b] = std::move(term);
      }
    std::vector<X> flat;
    flat.reserve(acc.size());
    for (auto& v : acc) flat.push_back(std::move(*v));
    return TPoly(std::move(flat));
  }

  TPoly scale(double s) const {
    std::vector<X> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c * s);
    return TPoly(std::move(out));
  }

  // d/dt
  TPoly deriv_t() const {
    if (coeffs_.size() <= 1) return TPoly();
    std::vector<X> out;
    out.reserve(coeffs_.size() - 1);
    for (std::size_t m = 1; m < coeffs_.size(); ++m)
      out.push_back(coeffs_[m] * static_cast<double>(m));
    return TPoly(std::move(out));
  }

  // Exact integral over [0,1]: sum coeffs[m] / (m+1).
  X integrate01() const {
    X acc = coeffs_.at(0) * (1.0);
    for (std::size_t m = 1; m < coeffs_.size(); ++m)
      acc = acc + coeffs_[m] * (1.0 / static_cast<double>(m + 1));
    return acc;
  }

  // Evaluation at a scalar t (Horner).
  X at(double t) const {
    X acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
      acc = acc * t + *it;
    return acc;
  }

 private:
  void trim() {}  // coefficient-level pruning happens inside X itself

  std::vector<X> coeffs_;  // low degree first
};

// JSON helpers shared by the whole library.
nlohmann::json cplx_to_json(Cplx z);
Cplx cplx_from_json(const nlohmann::json& j);

}  // namespace folrho
