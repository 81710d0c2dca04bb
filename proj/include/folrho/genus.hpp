#pragma once
// The A-hat genus as exact rational data: power-series coefficients, the
// polynomials A-hat_{4k}(p_1..p_k), and the universal rewrite of the truncated
// genus in Chern-character components of a complexified real bundle.

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <json.hpp>

namespace folrho {

using Rat = boost::multiprecision::cpp_rational;

// Sparse multivariate polynomial with rational coefficients.  Variables are
// indexed 1..nvars; a monomial stores exponents (index 0 unused).  `weights`
// assigns a grading to each variable for truncation.
class RatPoly {
 public:
  using Mono = std::vector<int>;  // exponent vector, trailing zeros trimmed

  RatPoly() = default;
  static RatPoly constant(const Rat& c);
  static RatPoly var(int index, int power = 1);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Mono, Rat>& terms() const { return terms_; }
  Rat coeff(const Mono& m) const;

  RatPoly operator+(const RatPoly& o) const;
  RatPoly operator-(const RatPoly& o) const;
  RatPoly operator*(const RatPoly& o) const;
  RatPoly operator*(const Rat& s) const;
  RatPoly operator-() const;
  bool operator==(const RatPoly& o) const { return terms_ == o.terms_; }

  // Weighted degree of a monomial: sum exp_i * weight(i).
  static int weighted_degree(const Mono& m, const std::vector<int>& weights);
  RatPoly truncate_weight(const std::vector<int>& weights, int max_weight,
                          bool strict = false) const;
  // Keep only monomials of exact weighted degree `weight`.
  RatPoly component_weight(const std::vector<int>& weights, int weight) const;

  // Substitute variables by values in a graded-commutative algebra X
  // (values[i] for variable i; X needs +, scalar double multiplication and a
  // caller-supplied product).  Rational coefficients convert to double.
  template <class X, class Mul>
  X eval(const std::vector<X>& values, const X& one, Mul&& prod) const {
    X acc = one * 0.0;
    for (const auto& [m, c] : terms_) {
      X t = one;
      for (std::size_t i = 1; i < m.size(); ++i)
        for (int e = 0; e < m[i]; ++e) t = prod(t, values.at(i));
      acc = acc + t * static_cast<double>(c);
    }
    return acc;
  }

  std::string to_string(const std::string& varname) const;
  nlohmann::json to_json(const std::string& varname) const;

 private:
  void add(const Mono& m, const Rat& c);
  std::map<Mono, Rat> terms_;
};

// Exact coefficients of f(z) = (sqrt z / 2) / sinh(sqrt z / 2) up to z^n:
// 1, -1/24, 7/5760, -31/967680, ...
std::vector<Rat> ahat_series(int max_order);

// A-hat_{4k} as polynomials in the Pontryagin variables p_1..p_k (weight(p_i)=i
// in z-units, i.e. form degree 4i).  Component k of the returned table is the
// degree-4k summand; computed once per max_weight and cached.
const std::map<int, RatPoly>& ahat_table(int max_weight);

// The truncated genus rewritten in Chern-character variables: a polynomial
// A(c_1..c_q) with weight(c_k) = k (form degree 2k) such that substituting
// c_k -> ch_{2k}(nabla_C) reproduces A-hat(nabla) through form degree 2q for
// every real connection.  Newton's identities on the power sums s_k = k! c_k
// give the Chern forms of the complexification, and p_i = (-1)^i c_{2i}.
// `inclusive` keeps weighted degree == 2q (default), strict mode drops it.
RatPoly ahat_in_ch(int q, bool inclusive = true);

}  // namespace folrho
