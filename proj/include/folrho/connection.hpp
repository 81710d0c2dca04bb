#pragma once
// Connections on trivialized bundles over T^n, partial connections along a
// foliation, hermitian adjoints, the Bott connection of a codimension-one
// foliation, and linear interpolation on the cylinder.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "folrho/form.hpp"

namespace folrho {

// d + A on a trivialized rank-r bundle; A is a degree-1 rank-r Form.
struct Connection {
  int rank = 1;
  Form A;             // degree 1, matrix rank `rank`
  bool real_flag = false;

  static Connection make(const Form& A, bool real_flag = false);
  static Connection trivial(int dim, int rank = 1);
  Connection pullback_linear(const std::vector<std::vector<int>>& U) const;
  nlohmann::json to_json() const;
  static Connection from_json(const nlohmann::json& j, int dim);
};

// Curvature R = dA + A /\ A (degree-2 Form).
Form curvature(const Connection& c);

// Constant hermitian positive-definite metric on the fiber.
class HermMetric {
 public:
  explicit HermMetric(Eigen::MatrixXcd H);
  static HermMetric identity(int rank);

  int rank() const { return static_cast<int>(H_.rows()); }
  const Eigen::MatrixXcd& H() const { return H_; }
  const Eigen::MatrixXcd& Hinv() const { return Hinv_; }
  MatScalar H_mat(int dim) const;
  MatScalar Hinv_mat(int dim) const;

  nlohmann::json to_json() const;
  static HermMetric from_json(const nlohmann::json& j);

 private:
  Eigen::MatrixXcd H_, Hinv_;
};

// A partial connection along F, presented by a reference connection whose
// restriction to F defines it; the restriction must be flat along F
// (curvature contracted with two frame fields vanishes on the grid).
struct PartialConnection {
  Foliation F;
  Connection base;

  PartialConnection(Foliation f, Connection b, double tol = 1e-9);
};

// Does c restrict to the same partial connection as pc along F?
// (contractions of c.A - pc.base.A with the frame fields vanish).
bool is_extension(const PartialConnection& pc, const Connection& c,
                  double tol = 1e-9);
double extension_residual(const PartialConnection& pc, const Connection& c);

// Adjoint with respect to h:  A* = -H^{-1} A^dagger H, so that
// d h(phi,psi) = h(nabla phi, psi) + h(phi, nabla* psi).
Connection adjoint(const Connection& c, const HermMetric& h);
// (A + A*)/2 — self-adjoint ("unitary") midpoint.
Connection unitarize(const Connection& c, const HermMetric& h);
bool is_self_adjoint(const Connection& c, const HermMetric& h, double tol = 1e-11);

// Codimension-one foliation data: ker kappa integrable via d kappa = kappa /\ omega,
// transverse field N normalized by kappa(N) = 1.
struct CodimOneData {
  Form kappa;                 // real nonvanishing 1-form
  Form omega;                 // real 1-form with d kappa = kappa /\ omega
  std::vector<TrigScalar> N;  // kappa(N) = 1

  CodimOneData(Form kappa, Form omega, std::vector<TrigScalar> N,
               double tol = 1e-9);
  int dim() const { return kappa.dim(); }

  // Frame of ker kappa: X_i = d_i - kappa_i N (function-spanning, rank n-1).
  std::vector<std::vector<TrigScalar>> kernel_frame() const;
  Foliation foliation() const;

  static CodimOneData from_json(const nlohmann::json& j, int dim);
};

// The Bott connection of cd on the normal line bundle, trivialized by N: the
// rank-1 real connection with form omega.  Verifies the Cartan identity
// omega(X) = kappa([X, N]) for the kernel frame (residual < tol).
Connection bott_connection(const CodimOneData& cd, double tol = 1e-8);
PartialConnection bott_partial(const CodimOneData& cd, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Interpolation on the cylinder I x T^n
// ---------------------------------------------------------------------------

// d + A(t) with polynomial t-dependence; the curvature picks up the dt-part
// automatically:  R~ = (d_M A + A /\ A) + dt /\ (d/dt A).
struct TConnection {
  int rank = 1;
  TPoly<Form> A;  // each coefficient a degree-1 rank-r Form

  TForm curvature_t() const;
};

// Linear path A_t = (1-t) A0 + t A1; with `reparam` (coefficients of a
// polynomial phi with phi(0)=0, phi(1)=1, low degree first) the path
// A_0 + phi(t) (A1 - A0) instead.
TConnection interpolate(const Connection& c0, const Connection& c1,
                        const std::vector<double>& reparam = {0.0, 1.0});

}  // namespace folrho
