#pragma once
// Characteristic forms of connections: Chern character, Chern and Pontryagin
// forms, the A-hat form, their filtered refinements, transgressions along
// interpolation paths, and Kamber-Tondeur forms.

#include <string>

#include "folrho/connection.hpp"
#include "folrho/genus.hpp"

namespace folrho {

// A graded sequence of characteristic forms tagged with its provenance
// ("ch", "c", "p", "ahat", "ch-tilde", "ahat-tilde").
struct CharForm {
  std::string kind;
  GradedFormSequence seq;

  Form entry(int p) const { return seq.entry(p); }
  Form component_of_degree(int deg) const {
    return seq.component_of_degree(deg);
  }
  nlohmann::json to_json() const;
};

// ch(nabla): entry p is ch_{2p} = Tr[(-R/2pi i)^p]/p!, entry 0 the rank.
// Every entry is verified closed (residual below closed_tol).
CharForm chern_character(const Connection& c, double closed_tol = 1e-10);

// Same values, flavored DD_MINUS against pc's foliation; requires that c
// extends pc and that the filtration checks pass.
CharForm chern_character_filtered(const Connection& c,
                                  const PartialConnection& pc,
                                  double tol = 1e-9);

// Chern forms via Newton's identities from the power sums s_k = k! ch_{2k};
// entry p is c_p (degree 2p).
CharForm chern_forms(const Connection& c);

// Pontryagin forms p_i = (-1)^i c_{2i} of the complexification (requires the
// real flag); entry 2i holds p_i (degree 4i).
CharForm pontryagin_forms(const Connection& c);

// A-hat(nabla) = 1 + A-hat_4 + A-hat_8 + ... evaluated on Pontryagin forms;
// entry 2k holds the degree-4k summand.
CharForm ahat_form(const Connection& c, double closed_tol = 1e-10);
CharForm ahat_form_filtered(const Connection& c, const PartialConnection& pc,
                            double tol = 1e-9);

// Rational coefficient tables of the genus (see genus.hpp).
inline const std::map<int, RatPoly>& ahat_coefficients(int max_weight) {
  return ahat_table(max_weight);
}

// Transgression ch~(c1, c0) = int_{I x M/M} ch of an interpolating connection;
// entry p has degree 2p-1 and d ch~ = ch(c1) - ch(c0).  `reparam` selects a
// polynomial reparameterization of the linear path (see interpolate()).
CharForm transgress_ch(const Connection& c1, const Connection& c0,
                       const std::vector<double>& reparam = {0.0, 1.0});

// A-hat~(c1, c0), defined for real connections the same way.
CharForm transgress_ahat(const Connection& c1, const Connection& c0,
                         const std::vector<double>& reparam = {0.0, 1.0});

// The degree-(2p-1) component of ch~(c, c*); purely imaginary (the real-part
// sup is checked against imag_tol).
Form kamber_tondeur(const Connection& c, const HermMetric& h, int p,
                    double imag_tol = 1e-9);

}  // namespace folrho
