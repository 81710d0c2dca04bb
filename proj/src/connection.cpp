#include "folrho/connection.hpp"

#include <sstream>

namespace folrho {

Connection Connection::make(const Form& A, bool real_flag) {
  if (A.degree() != 1)
    throw ValidationError("Connection: A must be a 1-form");
  if (real_flag && !A.is_real())
    throw ValidationError("Connection: real_flag set but A is not real");
  return Connection{A.rank(), A, real_flag};
}

Connection Connection::trivial(int dim, int rank) {
  return Connection{rank, Form::zero(dim, 1, rank), true};
}

Connection Connection::pullback_linear(const std::vector<std::vector<int>>& U) const {
  return Connection{rank, A.pullback_linear(U), real_flag};
}

nlohmann::json Connection::to_json() const {
  return {{"rank", rank}, {"A", A.to_json()}, {"real", real_flag}};
}

Connection Connection::from_json(const nlohmann::json& j, int dim) {
  Form A = Form::from_json(j.at("A"), dim);
  return make(A, j.value("real", false));
}

Form curvature(const Connection& c) { return c.A.d() + c.A.wedge(c.A); }

// ---------------------------------------------------------------------------

HermMetric::HermMetric(Eigen::MatrixXcd H) : H_(std::move(H)) {
  if (H_.rows() != H_.cols())
    throw ValidationError("HermMetric: matrix not square");
  if ((H_ - H_.adjoint()).norm() > 1e-12 * (1.0 + H_.norm()))
    throw ValidationError("HermMetric: matrix not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H_);
  if (es.eigenvalues().minCoeff() <= 1e-9)
    throw ValidationError("HermMetric: matrix not positive definite");
  Hinv_ = H_.inverse();
}

HermMetric HermMetric::identity(int rank) {
  return HermMetric(Eigen::MatrixXcd::Identity(rank, rank));
}

MatScalar HermMetric::H_mat(int dim) const {
  std::vector<Cplx> e;
  for (int r = 0; r < H_.rows(); ++r)
    for (int c = 0; c < H_.cols(); ++c) e.push_back(H_(r, c));
  return MatScalar::constant(dim, rank(), rank(), e);
}

MatScalar HermMetric::Hinv_mat(int dim) const {
  std::vector<Cplx> e;
  for (int r = 0; r < Hinv_.rows(); ++r)
    for (int c = 0; c < Hinv_.cols(); ++c) e.push_back(Hinv_(r, c));
  return MatScalar::constant(dim, rank(), rank(), e);
}

nlohmann::json HermMetric::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < H_.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < H_.cols(); ++c) row.push_back(cplx_to_json(H_(r, c)));
    rows.push_back(row);
  }
  return rows;
}

HermMetric HermMetric::from_json(const nlohmann::json& j) {
  const int n = static_cast<int>(j.size());
  Eigen::MatrixXcd H(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) H(r, c) = cplx_from_json(j.at(r).at(c));
  return HermMetric(H);
}

// ---------------------------------------------------------------------------

PartialConnection::PartialConnection(Foliation f, Connection b, double tol)
    : F(std::move(f)), base(std::move(b)) {
  const Form R = curvature(base);
  const auto& frame = F.frame();
  for (std::size_t a = 0; a < frame.size(); ++a)
    for (std::size_t b2 = a + 1; b2 < frame.size(); ++b2) {
      const Form rr = R.contract(frame[a]).contract(frame[b2]);
      if (!rr.vanishes(tol)) {
        std::ostringstream os;
        os << "PartialConnection: base not flat along F (leaf curvature sup "
           << rr.grid_sup() << ")";
        throw ValidationError(os.str());
      }
    }
}

double extension_residual(const PartialConnection& pc, const Connection& c) {
  const Form diff = c.A - pc.base.A;
  double res = 0;
  for (const auto& X : pc.F.frame())
    res = std::max(res, diff.contract(X).grid_sup(1e-15));
  return res;
}

bool is_extension(const PartialConnection& pc, const Connection& c, double tol) {
  if (c.rank != pc.base.rank) return false;
  return extension_residual(pc, c) < tol;
}

Connection adjoint(const Connection& c, const HermMetric& h) {
  if (h.rank() != c.rank)
    throw ValidationError("adjoint: metric rank != connection rank");
  const int dim = c.A.dim();
  const MatScalar H = h.H_mat(dim);
  const MatScalar Hinv = h.Hinv_mat(dim);
  Form As(dim, 1, c.rank);
  for (const auto& [I, m] : c.A.terms())
    As.add_term(I, -(Hinv * m.hermitian_transpose() * H));
  return Connection{c.rank, As, false};
}

Connection unitarize(const Connection& c, const HermMetric& h) {
  const Connection a = adjoint(c, h);
  return Connection{c.rank, (c.A + a.A) * Cplx(0.5, 0), false};
}

bool is_self_adjoint(const Connection& c, const HermMetric& h, double tol) {
  return (c.A - adjoint(c, h).A).vanishes(tol);
}

// ---------------------------------------------------------------------------

CodimOneData::CodimOneData(Form kappa_, Form omega_, std::vector<TrigScalar> N_,
                           double tol)
    : kappa(std::move(kappa_)), omega(std::move(omega_)), N(std::move(N_)) {
  const int n = kappa.dim();
  if (kappa.degree() != 1 || omega.degree() != 1)
    throw ValidationError("CodimOneData: kappa and omega must be 1-forms");
  if (kappa.rank() != 1 || omega.rank() != 1)
    throw ValidationError("CodimOneData: kappa and omega must be scalar forms");
  if (static_cast<int>(N.size()) != n)
    throw ValidationError("CodimOneData: N component count != dim");
  if (!kappa.is_real() || !omega.is_real())
    throw ValidationError("CodimOneData: kappa/omega must be real");

  // kappa(N) = 1
  Form kN = kappa.contract(N) - Form::constant(n, 1.0);
  if (!kN.vanishes(tol))
    throw ValidationError("CodimOneData: kappa(N) != 1");
  // Frobenius: kappa /\ d kappa = 0
  if (!kappa.wedge(kappa.d()).vanishes(tol))
    throw ValidationError("CodimOneData: kappa /\\ d kappa != 0");
  // d kappa = kappa /\ omega
  if (!(kappa.d() - kappa.wedge(omega)).vanishes(tol))
    throw ValidationError("CodimOneData: d kappa != kappa /\\ omega");
}

std::vector<std::vector<TrigScalar>> CodimOneData::kernel_frame() const {
  const int n = dim();
  std::vector<std::vector<TrigScalar>> frame;
  // kappa = sum kappa_i dx_i; X_i = d_i - kappa_i N satisfies kappa(X_i) = 0 and
  // the X_i span ker kappa pointwise (n fields of rank n-1).
  for (int i = 0; i < n; ++i) {
    IndexTuple I{i};
    const TrigScalar ki = kappa.coeff(I).at(0, 0);
    std::vector<TrigScalar> X(n, TrigScalar::zero(n));
    X[i] = TrigScalar::one(n);
    for (int j = 0; j < n; ++j) X[j] = X[j] - ki * N[j];
    frame.push_back(std::move(X));
  }
  return frame;
}

Foliation CodimOneData::foliation() const {
  return Foliation(dim(), dim() - 1, kernel_frame());
}

Connection bott_connection(const CodimOneData& cd, double tol) {
  const int n = cd.dim();
  // Cartan check: omega(X) = kappa([X, N]) for the kernel frame.
  double res = 0;
  for (const auto& X : cd.kernel_frame()) {
    std::vector<TrigScalar> bracket(n, TrigScalar::zero(n));
    for (int j = 0; j < n; ++j) {
      TrigScalar acc = TrigScalar::zero(n);
      for (int i = 0; i < n; ++i)
        acc = acc + X[i] * cd.N[j].deriv(i) - cd.N[i] * X[j].deriv(i);
      bracket[j] = acc;
    }
    const Form diff = cd.kappa.contract(bracket) - cd.omega.contract(X);
    res = std::max(res, diff.grid_sup(tol * 0.5));
  }
  if (res >= tol) {
    std::ostringstream os;
    os << "bott_connection: Cartan identity residual " << res << " >= " << tol;
    throw NumericalError(os.str());
  }
  return Connection::make(cd.omega, /*real_flag=*/true);
}

PartialConnection bott_partial(const CodimOneData& cd, double tol) {
  return PartialConnection(cd.foliation(), bott_connection(cd, tol));
}

CodimOneData CodimOneData::from_json(const nlohmann::json& j, int dim) {
  Form kappa = Form::from_json(j.at("kappa"), dim);
  Form omega = Form::from_json(j.at("omega"), dim);
  std::vector<TrigScalar> N;
  for (const auto& e : j.at("N")) N.push_back(TrigScalar::from_json(e, dim));
  return CodimOneData(kappa, omega, N);
}

// ---------------------------------------------------------------------------

TForm TConnection::curvature_t() const {
  const int dim = A.coeffs().at(0).dim();
  auto prod = [](const Form& x, const Form& y) { return x.wedge(y); };
  TPoly<Form> dA([&] {
    std::vector<Form> out;
    for (const auto& f : A.coeffs()) out.push_back(f.d());
    return out;
  }());
  TPoly<Form> alpha = dA + A.mul(A, prod);
  TPoly<Form> beta = A.deriv_t();
  return TForm(dim, 2, rank, alpha, beta);
}

TConnection interpolate(const Connection& c0, const Connection& c1,
                        const std::vector<double>& reparam) {
  if (c0.rank != c1.rank)
    throw ValidationError("interpolate: rank mismatch");
  if (std::abs(reparam.at(0)) > 1e-15)
    throw ValidationError("interpolate: reparam must satisfy phi(0) = 0");
  double at1 = 0;
  for (double c : reparam) at1 += c;
  if (std::abs(at1 - 1.0) > 1e-12)
    throw ValidationError("interpolate: reparam must satisfy phi(1) = 1");

  const Form diff = c1.A - c0.A;
  std::vector<Form> coeffs;
  coeffs.push_back(c0.A);  // constant term: A0 (+ 0 * diff)
  for (std::size_t m = 1; m < reparam.size(); ++m)
    coeffs.push_back(diff * reparam[m]);
  return TConnection{c0.rank, TPoly<Form>(std::move(coeffs))};
}

}  // namespace folrho
