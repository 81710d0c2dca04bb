#pragma once
// Shared builders for the unit tests: deterministic random trig data,
// random forms and connections, and block direct sums.

#include <algorithm>
#include <random>
#include <vector>

#include "folrho/connection.hpp"
#include "folrho/form.hpp"
#include "folrho/trig.hpp"

namespace folrho::testing {

using Rng = std::mt19937_64;

// Random trig polynomial with `waves` conjugate-symmetric wave pairs of
// bandwidth <= bw (plus a constant), so the result is real when asked.
inline TrigPoly random_poly(int dim, Rng& rng, int waves = 2, int bw = 1,
                            bool real = true) {
  std::uniform_int_distribution<int> freq(-bw, bw);
  std::uniform_real_distribution<double> amp(-0.6, 0.6);
  TrigPoly p = TrigPoly::constant(dim, Cplx(amp(rng), real ? 0.0 : amp(rng)));
  for (int w = 0; w < waves; ++w) {
    FreqVector k(dim, 0);
    bool nonzero = false;
    for (int i = 0; i < dim; ++i) {
      k[i] = freq(rng);
      nonzero = nonzero || k[i] != 0;
    }
    if (!nonzero) k[rng() % dim] = 1;
    const Cplx z(amp(rng), amp(rng));
    p = p + TrigPoly::wave(dim, k, z);
    if (real) {
      FreqVector mk(dim);
      for (int i = 0; i < dim; ++i) mk[i] = -k[i];
      p = p + TrigPoly::wave(dim, mk, std::conj(z));
    }
  }
  return p;
}

inline TrigScalar random_scalar(int dim, Rng& rng, int waves = 2, int bw = 1,
                                bool real = true) {
  return TrigScalar(random_poly(dim, rng, waves, bw, real));
}

// Random rank-1 form of the given degree: a few random coefficients on
// random strictly increasing index tuples.
inline Form random_form(int dim, int degree, Rng& rng, int terms = 2,
                        int waves = 2, int bw = 1, bool real = true) {
  Form f(dim, degree, 1);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> axes(dim);
    for (int i = 0; i < dim; ++i) axes[i] = i;
    std::shuffle(axes.begin(), axes.end(), rng);
    IndexTuple I(axes.begin(), axes.begin() + degree);
    std::sort(I.begin(), I.end());
    f = f + Form::monomial(random_scalar(dim, rng, waves, bw, real), I);
  }
  return f;
}

// Random matrix-valued 1-form (connection form) of the given fiber rank.
inline Form random_connection_form(int dim, int rank, Rng& rng, int bw = 1,
                                   bool real = true) {
  Form A(dim, 1, rank);
  std::uniform_real_distribution<double> amp(-0.4, 0.4);
  for (int axis = 0; axis < dim; ++axis) {
    MatScalar m(dim, rank, rank);
    for (int r = 0; r < rank; ++r)
      for (int c = 0; c < rank; ++c)
        m.at(r, c) = random_scalar(dim, rng, 1, bw, real);
    A.add_term({axis}, m);
  }
  return A;
}

inline Connection random_connection(int dim, int rank, Rng& rng, int bw = 1,
                                    bool real = true) {
  return Connection::make(random_connection_form(dim, rank, rng, bw, real),
                          real);
}

// Block direct sum of two connections on the same torus.
inline Connection direct_sum(const Connection& a, const Connection& b) {
  const int dim = a.A.dim();
  const int rank = a.rank + b.rank;
  Form A(dim, 1, rank);
  auto embed = [&](const Form& src, int offset, int r) {
    for (const auto& [I, m] : src.terms()) {
      MatScalar big(dim, rank, rank);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) big.at(offset + i, offset + j) = m.at(i, j);
      A.add_term(I, big);
    }
  };
  embed(a.A, 0, a.rank);
  embed(b.A, a.rank, b.rank);
  return Connection::make(A, a.real_flag && b.real_flag);
}

}  // namespace folrho::testing
