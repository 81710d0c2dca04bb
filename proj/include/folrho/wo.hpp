#pragma once
// The truncated Weil algebra WO_q: a graded-commutative DGA on odd generators
// c~_i (i odd, i <= q') and even generators c_i (i <= q, c-part degree
// truncated at 2q), its rational cohomology, the evaluation map Delta into
// differential forms, and the universal class U.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "folrho/charforms.hpp"
#include "folrho/genus.hpp"

namespace folrho {

// The generator cutoff q': the largest odd integer <= q.  (The alternative
// reading "smallest odd integer <= q" is constant 1 and degenerate; it stays
// available behind the flag.)
int wo_qprime(int q, bool smallest = false);

// A monomial c~_{i_1} ... c~_{i_k} c_1^{e_1} ... c_q^{e_q}: bit j of `tmask`
// is the square-free exponent of c~_{2j+1}; `c_exp[i]` is the exponent of c_i
// (index 0 unused, trailing zeros trimmed).
struct WOMonomial {
  unsigned tmask = 0;
  std::vector<int> c_exp;

  int tilde_degree() const;  // sum of (4j+1) over set bits
  int c_degree() const;      // sum of 2 i e_i
  int degree() const { return tilde_degree() + c_degree(); }

  bool operator==(const WOMonomial& o) const {
    return tmask == o.tmask && c_exp == o.c_exp;
  }
  bool operator<(const WOMonomial& o) const;  // degree, then tmask, then c_exp
  std::string to_string() const;
};

// Sparse rational linear combination of monomials; the truncation mode is
// part of the algebra (inclusive: c-part degree <= 2q, strict: < 2q).
struct WOElement {
  int q = 1;
  bool inclusive = true;
  std::map<WOMonomial, Rat> terms;

  static WOElement zero(int q, bool inclusive = true);
  static WOElement one(int q, bool inclusive = true);
  static WOElement ctilde(int q, int i, bool inclusive = true);
  static WOElement c(int q, int i, bool inclusive = true);

  bool is_zero() const { return terms.empty(); }
  bool is_homogeneous() const;
  int degree() const;  // of a homogeneous element (0 for zero)

  WOElement operator+(const WOElement& o) const;
  WOElement operator-(const WOElement& o) const;
  WOElement operator*(const WOElement& o) const;
  WOElement operator*(const Rat& s) const;
  bool operator==(const WOElement& o) const;

  WOElement component_of_degree(int deg) const;

  // Accumulate c * m, applying the truncation and pruning zeros.
  void add(const WOMonomial& m, const Rat& c);

  std::string to_string() const;
  nlohmann::json to_json() const;
};

// Graded-commutative product with Koszul signs, c~_i^2 = 0, and the c-part
// degree truncation.
WOElement wo_mul(const WOElement& a, const WOElement& b);

// The differential d c~_i = c_i, d c_i = 0, extended by the graded Leibniz
// rule; d o d = 0 exactly.
WOElement wo_d(const WOElement& e);

// Ranks of H^*(WO_q) over Q per degree, with representative cycles, by exact
// Gaussian elimination on the monomial basis.
struct CohomologyReport {
  int q = 1;
  bool inclusive = true;
  std::map<int, int> betti;
  std::map<int, int> basis_dims;
  std::map<int, std::vector<WOElement>> representatives;

  nlohmann::json to_json() const;
};

CohomologyReport wo_cohomology(int q, int max_degree, bool inclusive = true,
                               std::size_t basis_cap = 100000);

// The evaluation into forms determined by the normal-bundle connection and
// metric:  Delta(c~_i) = ch~_{2i}(cF, cF*) / (2 i^i)  and
// Delta(c_n) = ch_{2n}(cF) / i^n  (i the imaginary unit), extended
// multiplicatively.  Requires a real cF and a homogeneous element whose
// degree fits on the torus.
Form delta_map(const WOElement& e, const Connection& cF, const HermMetric& h);

// U = [ (sum_{i odd <= q'} (-1)^{(i+1)/2} c~_i) A(c_1..c_q) ]_{dimM} built
// from ahat_in_ch(q); requires 2q < dimM, dimM odd; d(U) = 0 is verified
// exactly.
WOElement universal_class(int q, int dimM);

// Residual of the form-level relation  kamber_tondeur(cF,h,p) =
// 2 i^p Delta(c~_p)  after pairing both sides with the constant closed forms
// (mod-exact comparison).
double kt_class_relation(int p, const Connection& cF, const HermMetric& h);

}  // namespace folrho
