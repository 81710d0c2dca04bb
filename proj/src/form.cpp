#include "folrho/form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

#include "folrho/kernels.hpp"

namespace folrho {

int merge_sign(const IndexTuple& a, const IndexTuple& b, IndexTuple* merged) {
  merged->clear();
  merged->reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  int inversions = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return 0;
    if (a[i] < b[j]) {
      merged->push_back(a[i++]);
    } else {
      // b[j] jumps over the remaining entries of a
      inversions += static_cast<int>(a.size() - i);
      merged->push_back(b[j++]);
    }
  }
  while (i < a.size()) merged->push_back(a[i++]);
  while (j < b.size()) merged->push_back(b[j++]);
  return (inversions % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Form
// ---------------------------------------------------------------------------

Form Form::from_matrix(const MatScalar& m) {
  if (m.rows() != m.cols())
    throw ValidationError("Form::from_matrix: matrix must be square");
  Form f(m.dim(), 0, m.rows());
  f.add_term({}, m);
  return f;
}

Form Form::constant(int dim, Cplx c, int rank) {
  return from_matrix(MatScalar::identity(dim, rank) * c);
}

Form Form::monomial(const TrigScalar& s, const IndexTuple& I) {
  for (std::size_t i = 1; i < I.size(); ++i)
    if (I[i - 1] >= I[i])
      throw ValidationError("Form::monomial: index tuple not strictly increasing");
  Form f(s.dim(), static_cast<int>(I.size()), 1);
  f.add_term(I, MatScalar::scalar(s));
  return f;
}

Form Form::dx(int dim, int axis) {
  return monomial(TrigScalar::one(dim), {axis});
}

MatScalar Form::coeff(const IndexTuple& I) const {
  auto it = terms_.find(I);
  if (it != terms_.end()) return it->second;
  return MatScalar(dim_, rank_, rank_);
}

void Form::add_term(const IndexTuple& I, const MatScalar& m) {
  if (static_cast<int>(I.size()) != degree_)
    throw ValidationError("Form::add_term: tuple size != degree");
  auto it = terms_.find(I);
  if (it == terms_.end()) {
    if (m.sup_bound() > 0) terms_.emplace(I, m);
  } else {
    it->second = it->second + m;
    if (it->second.sup_bound() == 0) terms_.erase(it);
  }
}

Form Form::operator+(const Form& o) const {
  if (dim_ != o.dim_ || rank_ != o.rank_)
    throw ValidationError("Form::+: shape mismatch");
  if (degree_ != o.degree_) {
    // The zero form is the neutral element in every degree.
    if (terms_.empty()) return o;
    if (o.terms_.empty()) return *this;
    throw ValidationError("Form::+: degree mismatch");
  }
  Form out = *this;
  for (const auto& [I, m] : o.terms_) out.add_term(I, m);
  return out;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::operator-() const {
  Form out(dim_, degree_, rank_);
  for (const auto& [I, m] : terms_) out.terms_.emplace(I, -m);
  return out;
}

Form Form::operator*(Cplx s) const {
  Form out(dim_, degree_, rank_);
  for (const auto& [I, m] : terms_) {
    MatScalar v = m * s;
    if (v.sup_bound() > 0) out.terms_.emplace(I, v);
  }
  return out;
}

Form Form::wedge(const Form& o) const {
  if (dim_ != o.dim_) throw ValidationError("Form::wedge: dimension mismatch");
  int rank = rank_;
  if (rank_ != o.rank_) {
    if (rank_ == 1)
      rank = o.rank_;
    else if (o.rank_ == 1)
      rank = rank_;
    else
      throw ValidationError("Form::wedge: rank mismatch");
  }
  Form out(dim_, degree_ + o.degree_, rank);
  IndexTuple merged;
  for (const auto& [I, m] : terms_)
    for (const auto& [J, n] : o.terms_) {
      const int sign = merge_sign(I, J, &merged);
      if (sign == 0) continue;
      out.add_term(merged, (m * n) * Cplx(sign, 0));
    }
  return out;
}

Form wedge(const Form& a, const Form& b) { return a.wedge(b); }

std::vector<Cplx> closed_pairings(const Form& f) {
  if (f.rank() != 1)
    throw ValidationError("closed_pairings: take trace first (rank > 1)");
  const int n = f.dim();
  const int k = f.degree();
  std::vector<Cplx> out;
  if (k > n) return out;
  // Strictly increasing complementary tuples J of size n-k, lexicographic.
  IndexTuple J;
  std::function<void(int)> gen = [&](int start) {
    if (static_cast<int>(J.size()) == n - k) {
      IndexTuple I;
      I.reserve(k);
      std::size_t jp = 0;
      for (int v = 0; v < n; ++v) {
        if (jp < J.size() && J[jp] == v) {
          ++jp;
          continue;
        }
        I.push_back(v);
      }
      IndexTuple merged;
      const int sign = merge_sign(I, J, &merged);
      const Cplx mean = f.coeff(I).at(0, 0).integrate_torus();
      out.push_back(mean * Cplx(static_cast<double>(sign), 0));
      return;
    }
    for (int v = start; v < n; ++v) {
      J.push_back(v);
      gen(v + 1);
      J.pop_back();
    }
  };
  gen(0);
  return out;
}

Form Form::d() const {
  Form out(dim_, degree_ + 1, rank_);
  IndexTuple merged;
  for (const auto& [I, m] : terms_)
    for (int j = 0; j < dim_; ++j) {
      const int sign = merge_sign({j}, I, &merged);
      if (sign == 0) continue;
      out.add_term(merged, m.deriv(j) * Cplx(sign, 0));
    }
  return out;
}

Form Form::contract(const std::vector<TrigScalar>& X) const {
  if (static_cast<int>(X.size()) != dim_)
    throw ValidationError("Form::contract: field component count != dim");
  if (degree_ == 0) return Form(dim_, 0, rank_) * Cplx(0, 0);
  Form out(dim_, degree_ - 1, rank_);
  for (const auto& [I, m] : terms_) {
    for (std::size_t pos = 0; pos < I.size(); ++pos) {
      IndexTuple J;
      J.reserve(I.size() - 1);
      for (std::size_t q = 0; q < I.size(); ++q)
        if (q != pos) J.push_back(I[q]);
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      out.add_term(J, (m * X[I[pos]]) * Cplx(sign, 0));
    }
  }
  return out;
}

Form Form::conjugate() const {
  Form out(dim_, degree_, rank_);
  for (const auto& [I, m] : terms_) out.terms_.emplace(I, m.conjugate());
  return out;
}

Form Form::trace() const {
  Form out(dim_, degree_, 1);
  for (const auto& [I, m] : terms_)
    out.add_term(I, MatScalar::scalar(m.trace()));
  return out;
}

Form Form::deriv_coeffs(int axis) const {
  Form out(dim_, degree_, rank_);
  for (const auto& [I, m] : terms_) {
    MatScalar v = m.deriv(axis);
    if (v.sup_bound() > 0) out.terms_.emplace(I, v);
  }
  return out;
}

Cplx Form::integrate_top() const {
  if (degree_ != dim_)
    throw ValidationError("Form::integrate_top: form is not top-degree");
  if (rank_ != 1)
    throw ValidationError("Form::integrate_top: take trace first (rank > 1)");
  if (terms_.empty()) return Cplx(0, 0);
  return terms_.begin()->second.at(0, 0).integrate_torus();
}

Form Form::pullback_linear(const std::vector<std::vector<int>>& U) const {
  // f(x) = Ux; coefficients pull back through frequencies, dx_I through minors.
  Form out(dim_, degree_, rank_);
  if (degree_ == 0) {
    for (const auto& [I, m] : terms_) out.add_term(I, m.pullback(U));
    return out;
  }
  // Enumerate strictly increasing target tuples J and accumulate det(U[I,J]).
  std::vector<IndexTuple> tuples;
  IndexTuple cur;
  std::function<void(int)> gen = [&](int start) {
    if (static_cast<int>(cur.size()) == degree_) {
      tuples.push_back(cur);
      return;
    }
    for (int v = start; v < dim_; ++v) {
      cur.push_back(v);
      gen(v + 1);
      cur.pop_back();
    }
  };
  gen(0);

  auto minor_det = [&](const IndexTuple& I, const IndexTuple& J) {
    const int k = degree_;
    Eigen::MatrixXd M(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) M(r, c) = U[I[r]][J[c]];
    const double det = M.determinant();
    return static_cast<long long>(std::llround(det));
  };

  for (const auto& [I, m] : terms_) {
    const MatScalar pm = m.pullback(U);
    for (const auto& J : tuples) {
      const long long det = minor_det(I, J);
      if (det == 0) continue;
      out.add_term(J, pm * Cplx(static_cast<double>(det), 0));
    }
  }
  return out;
}

double Form::sup_bound() const {
  double s = 0;
  for (const auto& [I, m] : terms_) s = std::max(s, m.sup_bound());
  return s;
}

double Form::grid_sup(double cheap_accept) const {
  double s = 0;
  for (const auto& [I, m] : terms_) s = std::max(s, m.grid_sup(cheap_accept));
  return s;
}

bool Form::vanishes(double tol) const {
  for (const auto& [I, m] : terms_)
    if (!m.vanishes(tol)) return false;
  return true;
}

bool Form::is_real(double tol) const {
  return (*this - conjugate()).vanishes(tol);
}

nlohmann::json Form::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [I, m] : terms_)
    terms.push_back({{"idx", I}, {"entry", m.to_json()}});
  return {{"degree", degree_}, {"rank", rank_}, {"terms", terms}};
}

Form Form::from_json(const nlohmann::json& j, int dim) {
  Form f(dim, j.at("degree").get<int>(), j.value("rank", 1));
  for (const auto& t : j.at("terms")) {
    IndexTuple I = t.at("idx").get<IndexTuple>();
    for (std::size_t i = 1; i < I.size(); ++i)
      if (I[i - 1] >= I[i])
        throw ValidationError("Form: index tuple not strictly increasing");
    f.add_term(I, MatScalar::from_json(t.at("entry"), dim));
  }
  return f;
}

// ---------------------------------------------------------------------------
// TForm
// ---------------------------------------------------------------------------

TForm TForm::pullback(const Form& f) {
  return TForm(f.dim(), f.degree(), f.rank(),
               TPoly<Form>(std::vector<Form>{f}), TPoly<Form>());
}

TForm TForm::monomial_t(const Form& f, int m) {
  std::vector<Form> coeffs(m + 1, Form::zero(f.dim(), f.degree(), f.rank()));
  coeffs[m] = f;
  return TForm(f.dim(), f.degree(), f.rank(), TPoly<Form>(std::move(coeffs)),
               TPoly<Form>());
}

TPoly<Form> TForm::add_tpoly(const TPoly<Form>& a, const TPoly<Form>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + b;
}

TForm TForm::operator+(const TForm& o) const {
  if (degree_ != o.degree_) {
    // The zero form is the neutral element in every degree.
    auto zero_like = [](const TForm& f) {
      for (const auto& c : f.alpha_.coeffs())
        if (!c.terms().empty()) return false;
      for (const auto& c : f.beta_.coeffs())
        if (!c.terms().empty()) return false;
      return true;
    };
    if (zero_like(*this)) return o;
    if (zero_like(o)) return *this;
    throw ValidationError("TForm::+: degree mismatch");
  }
  return TForm(dim_, degree_, rank_, add_tpoly(alpha_, o.alpha_),
               add_tpoly(beta_, o.beta_));
}

TForm TForm::operator-(const TForm& o) const { return *this + (o * Cplx(-1, 0)); }

TForm TForm::operator*(Cplx s) const {
  auto scale = [&](const TPoly<Form>& p) {
    std::vector<Form> out;
    out.reserve(p.coeffs().size());
    for (const auto& f : p.coeffs()) out.push_back(f * s);
    return TPoly<Form>(std::move(out));
  };
  return TForm(dim_, degree_, rank_, scale(alpha_), scale(beta_));
}

TForm TForm::wedge(const TForm& o) const {
  // (a1 + dt b1)(a2 + dt b2) = a1 a2 + dt (b1 a2 + (-1)^{|a1|} a1 b2)
  auto prod = [](const Form& x, const Form& y) { return x.wedge(y); };
  TPoly<Form> alpha, beta;
  if (!alpha_.empty() && !o.alpha_.empty()) alpha = alpha_.mul(o.alpha_, prod);
  const double sgn = (degree_ % 2 == 0) ? 1.0 : -1.0;
  TPoly<Form> b1a2, a1b2;
  if (!beta_.empty() && !o.alpha_.empty()) b1a2 = beta_.mul(o.alpha_, prod);
  if (!alpha_.empty() && !o.beta_.empty()) a1b2 = alpha_.mul(o.beta_, prod).scale(sgn);
  beta = add_tpoly(b1a2, a1b2);

  int rank = rank_ == 1 ? o.rank_ : rank_;
  return TForm(dim_, degree_ + o.degree_, rank, alpha, beta);
}

TForm TForm::trace() const {
  auto tr = [](const TPoly<Form>& p) {
    std::vector<Form> out;
    out.reserve(p.coeffs().size());
    for (const auto& f : p.coeffs()) out.push_back(f.trace());
    return TPoly<Form>(std::move(out));
  };
  return TForm(dim_, degree_, 1, tr(alpha_), tr(beta_));
}

TForm TForm::d() const {
  auto dM = [](const TPoly<Form>& p) {
    std::vector<Form> out;
    out.reserve(p.coeffs().size());
    for (const auto& f : p.coeffs()) out.push_back(f.d());
    return TPoly<Form>(std::move(out));
  };
  TPoly<Form> alpha = alpha_.empty() ? TPoly<Form>() : dM(alpha_);
  // dt part: d/dt alpha - d_M beta
  TPoly<Form> beta = alpha_.empty() ? TPoly<Form>() : alpha_.deriv_t();
  if (!beta_.empty()) {
    TPoly<Form> db = dM(beta_).scale(-1.0);
    beta = add_tpoly(beta, db);
  }
  return TForm(dim_, degree_ + 1, rank_, alpha, beta);
}

Form TForm::fiber_integrate() const {
  if (beta_.empty()) return Form::zero(dim_, degree_ - 1, rank_);
  return beta_.integrate01();
}

Form TForm::restrict_t(double t) const {
  if (alpha_.empty()) return Form::zero(dim_, degree_, rank_);
  return alpha_.at(t);
}

// ---------------------------------------------------------------------------
// Foliation
// ---------------------------------------------------------------------------

namespace {

// Product verification grid covering the active axes of a family of scalars.
struct PointGrid {
  std::vector<int> axes;
  std::vector<int> npts;
  std::int64_t total() const {
    std::int64_t t = 1;
    for (int n : npts) t *= n;
    return t;
  }
  std::vector<double> point(std::int64_t idx, int dim) const {
    std::vector<double> x(dim, 0.0);
    for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
      x[axes[a]] = static_cast<double>(idx % npts[a]) / npts[a];
      idx /= npts[a];
    }
    return x;
  }
};

PointGrid field_grid(const std::vector<std::vector<TrigScalar>>& fields) {
  std::vector<int> bw;
  std::vector<int> axes;
  const int dim = fields.empty() ? 0 : static_cast<int>(fields[0].size());
  for (int a = 0; a < dim; ++a) {
    int b = 0;
    for (const auto& f : fields)
      for (const auto& s : f) b = std::max(b, s.bandwidth(a));
    if (b > 0) {
      axes.push_back(a);
      bw.push_back(b);
    }
  }
  PointGrid g;
  g.axes = axes;
  for (std::size_t i = 0; i < axes.size(); ++i)
    g.npts.push_back(std::min(4 * (2 * bw[i] + 1), max_grid_per_axis()));
  if (axes.empty()) {  // constant data: a single point suffices
    g.axes = {};
    g.npts = {};
  }
  return g;
}

}  // namespace

Foliation::Foliation(int dim, int leaf_rank,
                     std::vector<std::vector<TrigScalar>> frame, double tol)
    : dim_(dim), leaf_rank_(leaf_rank), frame_(std::move(frame)), residual_(0) {
  if (leaf_rank_ < 0 || leaf_rank_ > dim_)
    throw ValidationError("Foliation: leaf rank out of range");
  for (const auto& f : frame_)
    if (static_cast<int>(f.size()) != dim_)
      throw ValidationError("Foliation: frame field component count != dim");
  if (static_cast<int>(frame_.size()) < leaf_rank_)
    throw ValidationError("Foliation: fewer frame fields than leaf rank");

  // Commutators [X_a, X_b], exact in TrigScalar arithmetic.
  const int nf = static_cast<int>(frame_.size());
  std::vector<std::vector<TrigScalar>> commutators;
  for (int a = 0; a < nf; ++a)
    for (int b = a + 1; b < nf; ++b) {
      std::vector<TrigScalar> c;
      c.reserve(dim_);
      for (int j = 0; j < dim_; ++j) {
        TrigScalar acc = TrigScalar::zero(dim_);
        for (int i = 0; i < dim_; ++i)
          acc = acc + frame_[a][i] * frame_[b][j].deriv(i) -
                frame_[b][i] * frame_[a][j].deriv(i);
        c.push_back(acc);
      }
      commutators.push_back(std::move(c));
    }

  // Pointwise rank and least-squares integrability residual on the grid.
  auto all_fields = frame_;
  for (const auto& c : commutators) all_fields.push_back(c);
  const PointGrid g = field_grid(all_fields);
  const std::int64_t total = std::max<std::int64_t>(g.total(), 1);

  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto x = g.point(idx, dim_);
    Eigen::MatrixXcd V(dim_, nf);
    for (int f = 0; f < nf; ++f)
      for (int j = 0; j < dim_; ++j) V(j, f) = frame_[f][j].eval(x);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
    qr.setThreshold(1e-7);
    if (qr.rank() != leaf_rank_) {
      std::ostringstream os;
      os << "Foliation: pointwise frame rank " << qr.rank() << " != leaf rank "
         << leaf_rank_;
      throw ValidationError(os.str());
    }
    for (const auto& c : commutators) {
      Eigen::VectorXcd cv(dim_);
      for (int j = 0; j < dim_; ++j) cv(j) = c[j].eval(x);
      const Eigen::VectorXcd w = qr.solve(cv);
      const double res = (V * w - cv).norm();
      residual_ = std::max(residual_, res);
    }
  }
  if (residual_ >= tol) {
    std::ostringstream os;
    os << "Foliation: integrability residual " << residual_ << " >= " << tol;
    throw ValidationError(os.str());
  }
}

Foliation Foliation::span_axes(int dim, const std::vector<int>& axes) {
  std::vector<std::vector<TrigScalar>> frame;
  for (int a : axes) {
    std::vector<TrigScalar> f(dim, TrigScalar::zero(dim));
    f[a] = TrigScalar::one(dim);
    frame.push_back(std::move(f));
  }
  return Foliation(dim, static_cast<int>(axes.size()), std::move(frame));
}

int filtration_degree(const Form& a, const Foliation& F, double tol) {
  const int codim = F.codim();
  if (a.vanishes(tol)) return codim + 1;
  const int deg = a.degree();
  const auto& frame = F.frame();
  const int nf = static_cast<int>(frame.size());

  // Test membership in F^p, from the top candidate down.  Contraction is
  // function-linear in the field, so frame combinations suffice.
  auto in_Fp = [&](int p) {
    const int m = deg - p + 1;  // insertions required to vanish
    if (m <= 0) return false;   // handled by the vanishing test above
    if (m > deg) return true;   // more insertions than legs: automatic
    std::vector<int> comb(m);
    std::function<bool(int, const Form&)> rec = [&](int level, const Form& cur) {
      if (level == m) return cur.vanishes(tol);
      const int start = (level == 0) ? 0 : comb[level - 1] + 1;
      for (int f = start; f < nf; ++f) {
        comb[level] = f;
        const Form next = cur.contract(frame[f]);
        if (!rec(level + 1, next)) return false;
      }
      return true;
    };
    return rec(0, a);
  };

  for (int p = std::min(deg, codim); p >= 1; --p)
    if (in_Fp(p)) return p;
  return 0;
}

// ---------------------------------------------------------------------------
// GradedFormSequence
// ---------------------------------------------------------------------------

void GradedFormSequence::set_entry(int p, const Form& f) {
  if (f.degree() != offset_ + 2 * p)
    throw ValidationError("GradedFormSequence: entry degree != offset + 2p");
  entries_[p] = f;
}

Form GradedFormSequence::entry(int p) const {
  auto it = entries_.find(p);
  if (it != entries_.end()) return it->second;
  return Form::zero(dim_, offset_ + 2 * p, 1);
}

GradedFormSequence GradedFormSequence::operator+(const GradedFormSequence& o) const {
  if (offset_ != o.offset_)
    throw ValidationError("GradedFormSequence::+: offset mismatch");
  GradedFormSequence out = *this;
  for (const auto& [p, f] : o.entries_) {
    if (out.entries_.count(p))
      out.entries_[p] = out.entries_[p] + f;
    else
      out.entries_[p] = f;
  }
  return out;
}

GradedFormSequence GradedFormSequence::operator*(Cplx s) const {
  GradedFormSequence out = *this;
  for (auto& [p, f] : out.entries_) f = f * s;
  return out;
}

GradedFormSequence GradedFormSequence::dd_wedge(const GradedFormSequence& o) const {
  Flavor flavor = Flavor::DD_PER;
  if (flavor_ == Flavor::DD_MINUS && o.flavor_ == Flavor::DD_MINUS &&
      foliation_ && o.foliation_ && *foliation_ == *o.foliation_)
    flavor = Flavor::DD_MINUS;
  GradedFormSequence out(flavor, dim_, offset_ + o.offset_);
  if (flavor == Flavor::DD_MINUS) out.foliation_ = foliation_;
  for (const auto& [p, f] : entries_)
    for (const auto& [q, g] : o.entries_) {
      const Form w = f.wedge(g);
      if (w.degree() > dim_) continue;
      if (out.entries_.count(p + q))
        out.entries_[p + q] = out.entries_[p + q] + w;
      else
        out.entries_[p + q] = w;
    }
  return out;
}

GradedFormSequence GradedFormSequence::d() const {
  GradedFormSequence out(flavor_, dim_, offset_ + 1);
  out.foliation_ = foliation_;
  for (const auto& [p, f] : entries_) out.entries_[p] = f.d();
  return out;
}

GradedFormSequence GradedFormSequence::conjugate() const {
  GradedFormSequence out = *this;
  for (auto& [p, f] : out.entries_) f = f.conjugate();
  return out;
}

Form GradedFormSequence::component_of_degree(int deg) const {
  Form acc = Form::zero(dim_, deg, 1);
  for (const auto& [p, f] : entries_)
    if (f.degree() == deg) acc = acc + f;
  return acc;
}

void GradedFormSequence::verify_filtration(double tol) const {
  if (flavor_ != Flavor::DD_MINUS) return;
  if (!foliation_)
    throw ValidationError("GradedFormSequence: DD_MINUS without foliation");
  for (const auto& [p, f] : entries_) {
    if (p <= 0) continue;
    const int fd = filtration_degree(f, *foliation_, tol);
    if (fd < std::min(p, foliation_->codim() + 1)) {
      std::ostringstream os;
      os << "GradedFormSequence: entry " << p << " has filtration degree " << fd
         << " < " << p;
      throw NumericalError(os.str());
    }
  }
}

nlohmann::json GradedFormSequence::to_json() const {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [p, f] : entries_) entries[std::to_string(p)] = f.to_json();
  return {{"flavor", flavor_ == Flavor::DD_MINUS ? "dd_minus" : "dd_per"},
          {"offset", offset_},
          {"entries", entries}};
}

}  // namespace folrho
