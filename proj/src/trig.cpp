#include "folrho/trig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

#include "folrho/kernels.hpp"

namespace folrho {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int> merge_axes(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
}  // namespace

int max_grid_per_axis() {
  static const int cap = [] {
    if (const char* env = std::getenv("FOLRHO_MAX_GRID")) {
      const int v = std::atoi(env);
      if (v >= 4) return v;
    }
    return std::numeric_limits<int>::max();  // unset: only the formula caps bind
  }();
  return cap;
}

// ---------------------------------------------------------------------------
// TrigPoly
// ---------------------------------------------------------------------------

void TrigPoly::add_term(const FreqVector& k, Cplx c) {
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (std::abs(c) > kDropTol) terms_.emplace(k, c);
  } else {
    it->second += c;
    if (std::abs(it->second) <= kDropTol) terms_.erase(it);
  }
}

void TrigPoly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (std::abs(it->second) <= kDropTol) ? terms_.erase(it) : std::next(it);
}

TrigPoly TrigPoly::constant(int dim, Cplx c) {
  TrigPoly p(dim);
  p.add_term(FreqVector(dim, 0), c);
  return p;
}

TrigPoly TrigPoly::wave(int dim, FreqVector k, Cplx c) {
  if (static_cast<int>(k.size()) != dim)
    throw ValidationError("wave: frequency vector size != dim");
  TrigPoly p(dim);
  p.add_term(k, c);
  return p;
}

TrigPoly TrigPoly::cosine(int dim, int axis, int freq) {
  FreqVector k(dim, 0);
  k[axis] = freq;
  TrigPoly p = wave(dim, k, 0.5);
  k[axis] = -freq;
  return p + wave(dim, k, 0.5);
}

TrigPoly TrigPoly::sine(int dim, int axis, int freq) {
  FreqVector k(dim, 0);
  k[axis] = freq;
  TrigPoly p = wave(dim, k, Cplx(0, -0.5));
  k[axis] = -freq;
  return p + wave(dim, k, Cplx(0, 0.5));
}

Cplx TrigPoly::coeff(const FreqVector& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Cplx(0, 0) : it->second;
}

int TrigPoly::bandwidth() const {
  int b = 0;
  for (const auto& [k, c] : terms_)
    for (int kj : k) b = std::max(b, std::abs(kj));
  return b;
}

int TrigPoly::bandwidth(int axis) const {
  int b = 0;
  for (const auto& [k, c] : terms_) b = std::max(b, std::abs(k[axis]));
  return b;
}

std::vector<int> TrigPoly::active_axes() const {
  std::vector<int> axes;
  for (int a = 0; a < dim_; ++a)
    if (bandwidth(a) > 0) axes.push_back(a);
  return axes;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
  if (dim_ != o.dim_) throw ValidationError("TrigPoly::+: dimension mismatch");
  TrigPoly out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k, c);
  return out;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return *this + (-o); }

TrigPoly TrigPoly::operator-() const {
  TrigPoly out(dim_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
  if (dim_ != o.dim_) throw ValidationError("TrigPoly::*: dimension mismatch");
  TrigPoly out(dim_);
  FreqVector k(dim_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      for (int j = 0; j < dim_; ++j) k[j] = ka[j] + kb[j];
      out.add_term(k, ca * cb);
    }
  out.prune();
  return out;
}

TrigPoly TrigPoly::operator*(Cplx s) const {
  TrigPoly out(dim_);
  for (const auto& [k, c] : terms_) {
    const Cplx v = c * s;
    if (std::abs(v) > kDropTol) out.terms_.emplace(k, v);
  }
  return out;
}

TrigPoly TrigPoly::conjugate() const {
  TrigPoly out(dim_);
  FreqVector mk(dim_);
  for (const auto& [k, c] : terms_) {
    for (int j = 0; j < dim_; ++j) mk[j] = -k[j];
    out.terms_.emplace(mk, std::conj(c));
  }
  return out;
}

TrigPoly TrigPoly::deriv(int axis) const {
  TrigPoly out(dim_);
  for (const auto& [k, c] : terms_) {
    if (k[axis] == 0) continue;
    out.terms_.emplace(k, c * Cplx(0, kTwoPi * k[axis]));
  }
  return out;
}

Cplx TrigPoly::eval(const std::vector<double>& x) const {
  Cplx acc(0, 0);
  for (const auto& [k, c] : terms_) {
    double phase = 0;
    for (int j = 0; j < dim_; ++j) phase += k[j] * x[j];
    acc += c * Cplx(std::cos(kTwoPi * phase), std::sin(kTwoPi * phase));
  }
  return acc;
}

double TrigPoly::sup_bound() const {
  double s = 0;
  for (const auto& [k, c] : terms_) s += std::abs(c);
  return s;
}

double TrigPoly::max_coeff_abs() const {
  double s = 0;
  for (const auto& [k, c] : terms_) s = std::max(s, std::abs(c));
  return s;
}

bool TrigPoly::is_real(double tol) const {
  FreqVector mk(dim_);
  for (const auto& [k, c] : terms_) {
    for (int j = 0; j < dim_; ++j) mk[j] = -k[j];
    if (std::abs(c - std::conj(coeff(mk))) > tol) return false;
  }
  return true;
}

TrigPoly TrigPoly::pullback(const std::vector<std::vector<int>>& U) const {
  // x -> Ux pulls exp(2 pi i <k, Ux>) back to exp(2 pi i <U^T k, x>).
  TrigPoly out(dim_);
  FreqVector utk(dim_);
  for (const auto& [k, c] : terms_) {
    for (int j = 0; j < dim_; ++j) {
      int s = 0;
      for (int i = 0; i < dim_; ++i) s += U[i][j] * k[i];
      utk[j] = s;
    }
    out.add_term(utk, c);
  }
  out.prune();
  return out;
}

nlohmann::json TrigPoly::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : terms_)
    terms.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  return terms;
}

TrigPoly TrigPoly::from_json(const nlohmann::json& j, int dim) {
  TrigPoly p(dim);
  for (const auto& t : j) {
    FreqVector k = t.at("k").get<FreqVector>();
    if (static_cast<int>(k.size()) != dim)
      throw ValidationError("TrigPoly: frequency vector size != dim");
    p.add_term(k, Cplx(t.value("re", 0.0), t.value("im", 0.0)));
  }
  return p;
}

// ---------------------------------------------------------------------------
// TrigScalar
// ---------------------------------------------------------------------------

TrigScalar::TrigScalar(const TrigPoly& num)
    : num_(num), den_(num.dim()), den_min_(1.0) {}

TrigScalar::TrigScalar(const TrigPoly& num, const TrigPoly& den)
    : num_(num), den_(den), den_min_(1.0) {
  if (num.dim() != den.dim())
    throw ValidationError("TrigScalar: num/den dimension mismatch");
  normalize();
  if (!den_is_one()) {
    const auto axes = den_.active_axes();
    std::vector<int> bw;
    bw.reserve(axes.size());
    for (int a : axes) bw.push_back(den_.bandwidth(a));
    const auto grid = kernels::verification_grid(axes, bw);
    den_min_ = kernels::grid_min_abs(kernels::flatten(den_, axes), grid);
    if (!(den_min_ >= kDenMargin)) {
      std::ostringstream os;
      os << "TrigScalar: denominator not certified nonvanishing (grid min "
         << den_min_ << " < margin " << kDenMargin << ")";
      throw ValidationError(os.str());
    }
  }
}

void TrigScalar::normalize() {
  // Fold a constant denominator into the numerator (the only normalization the
  // representation performs; no symbolic gcd).
  if (den_.empty()) return;
  if (den_.term_count() == 1) {
    const auto& [k, c] = *den_.terms().begin();
    const bool constant = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
    if (constant) {
      if (std::abs(c) < kDenMargin)
        throw ValidationError("TrigScalar: constant denominator below margin");
      num_ = num_ * (1.0 / c);
      den_ = TrigPoly(num_.dim());
      den_min_ = 1.0;
    }
  }
}

TrigScalar TrigScalar::operator+(const TrigScalar& o) const {
  if (den_is_one() && o.den_is_one()) return TrigScalar(num_ + o.num_);
  if (den_is_one()) {
    TrigScalar out(o);
    out.num_ = num_ * o.den_ + o.num_;
    return out;
  }
  if (o.den_is_one()) {
    TrigScalar out(*this);
    out.num_ = num_ + o.num_ * den_;
    return out;
  }
  if (den_ == o.den_) {  // common in quotient-heavy pipelines; keeps bandwidth flat
    TrigScalar out(*this);
    out.num_ = num_ + o.num_;
    return out;
  }
  TrigScalar out(*this);
  out.num_ = num_ * o.den_ + o.num_ * den_;
  out.den_ = den_ * o.den_;
  out.den_min_ = den_min_ * o.den_min_;
  return out;
}

TrigScalar TrigScalar::operator-(const TrigScalar& o) const { return *this + (-o); }

TrigScalar TrigScalar::operator-() const {
  TrigScalar out(*this);
  out.num_ = -num_;
  return out;
}

TrigScalar TrigScalar::operator*(const TrigScalar& o) const {
  if (den_is_one() && o.den_is_one()) return TrigScalar(num_ * o.num_);
  TrigScalar out(*this);
  out.num_ = num_ * o.num_;
  if (o.den_is_one()) return out;
  if (den_is_one()) {
    out.den_ = o.den_;
    out.den_min_ = o.den_min_;
  } else {
    out.den_ = den_ * o.den_;
    out.den_min_ = den_min_ * o.den_min_;
  }
  return out;
}

TrigScalar TrigScalar::operator*(Cplx s) const {
  TrigScalar out(*this);
  out.num_ = num_ * s;
  return out;
}

TrigScalar TrigScalar::reciprocal() const {
  if (num_.empty()) throw ValidationError("TrigScalar: reciprocal of zero");
  if (den_is_one()) return TrigScalar(TrigPoly::constant(dim(), 1.0), num_);
  return TrigScalar(den_, num_);
}

TrigScalar TrigScalar::conjugate() const {
  if (den_is_one()) return TrigScalar(num_.conjugate());
  return TrigScalar(num_.conjugate(), den_.conjugate());
}

TrigScalar TrigScalar::deriv(int axis) const {
  if (den_is_one()) return TrigScalar(num_.deriv(axis));
  // (n/d)' = (n' d - n d') / d^2
  TrigScalar out(*this);
  out.num_ = num_.deriv(axis) * den_ - num_ * den_.deriv(axis);
  out.den_ = den_ * den_;
  out.den_min_ = den_min_ * den_min_;
  return out;
}

Cplx TrigScalar::eval(const std::vector<double>& x) const {
  Cplx v = num_.eval(x);
  if (!den_is_one()) v /= den_.eval(x);
  return v;
}

Cplx TrigScalar::integrate_torus() const {
  if (den_is_one()) return num_.mean();
  // Adaptive periodic trapezoid over the active axes (the integrand is constant
  // along the others).
  const auto axes = merge_axes(num_.active_axes(), den_.active_axes());
  if (axes.empty()) return eval(std::vector<double>(dim(), 0.0));
  int bw = 1;
  for (int a : axes)
    bw = std::max({bw, num_.bandwidth(a), den_.bandwidth(a)});
  const auto num_fl = kernels::flatten(num_, axes);
  const auto den_fl = kernels::flatten(den_, axes);

  int n = 16;
  while (n < 4 * (2 * bw + 1)) n *= 2;
  n = std::min(n, max_grid_per_axis());

  auto level = [&](int npts) {
    kernels::GridSpec g;
    g.npts.assign(axes.size(), npts);
    return kernels::grid_mean_ratio(num_fl, den_fl, g);
  };

  Cplx prev = level(n);
  while (true) {
    const std::int64_t next_total = [&] {
      std::int64_t t = 1;
      for (std::size_t a = 0; a < axes.size(); ++a) t *= 2 * n;
      return t;
    }();
    if (next_total > kQuadMaxPoints || 2 * n > max_grid_per_axis()) {
      std::ostringstream os;
      os << "integrate_torus: quadrature did not converge within the point cap "
         << "(last Richardson estimate unavailable at n=" << n << ")";
      throw NumericalError(os.str());
    }
    n *= 2;
    const Cplx cur = level(n);
    if (std::abs(cur - prev) < kQuadTol) return cur;
    prev = cur;
  }
}

double TrigScalar::sup_bound() const {
  return den_is_one() ? num_.sup_bound() : num_.sup_bound() / den_min_;
}

double TrigScalar::grid_sup(double cheap_accept) const {
  const double cheap = sup_bound();
  if (cheap <= cheap_accept) return cheap;
  const auto axes = merge_axes(num_.active_axes(), den_.active_axes());
  if (axes.empty()) return std::abs(eval(std::vector<double>(dim(), 0.0)));
  std::vector<int> bw;
  bw.reserve(axes.size());
  for (int a : axes)
    bw.push_back(std::max(num_.bandwidth(a), den_.bandwidth(a)));
  const auto grid = kernels::verification_grid(axes, bw);
  if (den_is_one())
    return kernels::grid_max_abs(kernels::flatten(num_, axes), grid);
  return kernels::grid_max_abs_ratio(kernels::flatten(num_, axes),
                                     kernels::flatten(den_, axes), grid);
}

bool TrigScalar::vanishes(double tol) const {
  if (sup_bound() < tol) return true;
  return grid_sup(tol) < tol;
}

bool TrigScalar::is_real(double tol) const {
  if (den_is_one()) return num_.is_real(tol);
  return (*this - conjugate()).vanishes(tol);
}

TrigScalar TrigScalar::pullback(const std::vector<std::vector<int>>& U) const {
  if (den_is_one()) return TrigScalar(num_.pullback(U));
  // Composition with a surjective torus self-map preserves the value range, so
  // the certification bound carries over.
  TrigScalar out(*this);
  out.num_ = num_.pullback(U);
  out.den_ = den_.pullback(U);
  return out;
}

std::vector<int> TrigScalar::active_axes() const {
  return merge_axes(num_.active_axes(), den_.active_axes());
}

int TrigScalar::bandwidth(int axis) const {
  return std::max(num_.bandwidth(axis), den_.bandwidth(axis));
}

nlohmann::json TrigScalar::to_json() const {
  nlohmann::json j;
  j["num"] = num_.to_json();
  if (!den_is_one()) j["den"] = den_.to_json();
  return j;
}

TrigScalar TrigScalar::from_json(const nlohmann::json& j, int dim) {
  if (j.is_array())  // bare polynomial term list
    return TrigScalar(TrigPoly::from_json(j, dim));
  TrigPoly num = TrigPoly::from_json(j.at("num"), dim);
  if (j.contains("den"))
    return TrigScalar(num, TrigPoly::from_json(j.at("den"), dim));
  return TrigScalar(num);
}

// ---------------------------------------------------------------------------
// MatScalar
// ---------------------------------------------------------------------------

MatScalar::MatScalar(int dim, int rows, int cols)
    : dim_(dim), rows_(rows), cols_(cols),
      entries_(static_cast<std::size_t>(rows) * cols, TrigScalar::zero(dim)) {}

MatScalar MatScalar::identity(int dim, int n) {
  MatScalar m(dim, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = TrigScalar::one(dim);
  return m;
}

MatScalar MatScalar::constant(int dim, int rows, int cols,
                              const std::vector<Cplx>& entries) {
  if (static_cast<int>(entries.size()) != rows * cols)
    throw ValidationError("MatScalar::constant: entry count mismatch");
  MatScalar m(dim, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m.at(r, c) = TrigScalar::constant(dim, entries[r * cols + c]);
  return m;
}

MatScalar MatScalar::operator+(const MatScalar& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw ValidationError("MatScalar::+: shape mismatch");
  MatScalar out(dim_, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i] + o.entries_[i];
  return out;
}

MatScalar MatScalar::operator-(const MatScalar& o) const { return *this + (-o); }

MatScalar MatScalar::operator-() const {
  MatScalar out(dim_, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = -entries_[i];
  return out;
}

MatScalar MatScalar::operator*(const MatScalar& o) const {
  if (is_scalar() && !o.is_scalar()) return o * entries_[0];
  if (o.is_scalar() && !is_scalar()) return *this * o.entries_[0];
  if (cols_ != o.rows_) throw ValidationError("MatScalar::*: shape mismatch");
  MatScalar out(dim_, rows_, o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < o.cols_; ++c) {
      TrigScalar acc = TrigScalar::zero(dim_);
      for (int k = 0; k < cols_; ++k) acc = acc + at(r, k) * o.at(k, c);
      out.at(r, c) = acc;
    }
  return out;
}

MatScalar MatScalar::operator*(Cplx s) const {
  MatScalar out(dim_, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] * s;
  return out;
}

MatScalar MatScalar::operator*(const TrigScalar& s) const {
  MatScalar out(dim_, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] * s;
  return out;
}

MatScalar MatScalar::conjugate() const {
  MatScalar out(dim_, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i].conjugate();
  return out;
}

MatScalar MatScalar::transpose() const {
  MatScalar out(dim_, cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
  return out;
}

MatScalar MatScalar::hermitian_transpose() const { return conjugate().transpose(); }

MatScalar MatScalar::deriv(int axis) const {
  MatScalar out(dim_, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i].deriv(axis);
  return out;
}

MatScalar MatScalar::kron(const MatScalar& o) const {
  MatScalar out(dim_, rows_ * o.rows_, cols_ * o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      for (int r2 = 0; r2 < o.rows_; ++r2)
        for (int c2 = 0; c2 < o.cols_; ++c2)
          out.at(r * o.rows_ + r2, c * o.cols_ + c2) = at(r, c) * o.at(r2, c2);
  return out;
}

TrigScalar MatScalar::trace() const {
  if (rows_ != cols_) throw ValidationError("MatScalar::trace: not square");
  TrigScalar acc = TrigScalar::zero(dim_);
  for (int i = 0; i < rows_; ++i) acc = acc + at(i, i);
  return acc;
}

std::vector<std::vector<Cplx>> MatScalar::eval(const std::vector<double>& x) const {
  std::vector<std::vector<Cplx>> out(rows_, std::vector<Cplx>(cols_));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out[r][c] = at(r, c).eval(x);
  return out;
}

double MatScalar::sup_bound() const {
  double s = 0;
  for (const auto& e : entries_) s = std::max(s, e.sup_bound());
  return s;
}

double MatScalar::grid_sup(double cheap_accept) const {
  double s = 0;
  for (const auto& e : entries_) s = std::max(s, e.grid_sup(cheap_accept));
  return s;
}

bool MatScalar::vanishes(double tol) const {
  for (const auto& e : entries_)
    if (!e.vanishes(tol)) return false;
  return true;
}

MatScalar MatScalar::pullback(const std::vector<std::vector<int>>& U) const {
  MatScalar out(dim_, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i].pullback(U);
  return out;
}

nlohmann::json MatScalar::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < rows_; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < cols_; ++c) row.push_back(at(r, c).to_json());
    rows.push_back(row);
  }
  return {{"rows", rows_}, {"cols", cols_}, {"entries", rows}};
}

MatScalar MatScalar::from_json(const nlohmann::json& j, int dim) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  MatScalar m(dim, rows, cols);
  const auto& entries = j.at("entries");
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m.at(r, c) = TrigScalar::from_json(entries.at(r).at(c), dim);
  return m;
}

nlohmann::json cplx_to_json(Cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Cplx cplx_from_json(const nlohmann::json& j) {
  return Cplx(j.value("re", 0.0), j.value("im", 0.0));
}

}  // namespace folrho
