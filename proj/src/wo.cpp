#include "folrho/wo.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace folrho {

namespace {

Cplx ipow(int k) {
  static const Cplx table[4] = {Cplx(1, 0), Cplx(0, 1), Cplx(-1, 0),
                                Cplx(0, -1)};
  return table[((k % 4) + 4) % 4];
}

// Largest admissible c-part degree: 2q inclusive, < 2q strict.
int c_degree_cap(int q, bool inclusive) { return inclusive ? 2 * q : 2 * q - 1; }

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

int wo_qprime(int q, bool smallest) {
  if (q < 1) throw ValidationError("wo_qprime: q must be >= 1");
  if (smallest) return 1;
  return (q % 2 == 1) ? q : q - 1;
}

// ---------------------------------------------------------------------------
// WOMonomial
// ---------------------------------------------------------------------------

int WOMonomial::tilde_degree() const {
  int d = 0;
  for (int b = 0; b < 32; ++b)
    if (tmask >> b & 1u) d += 4 * b + 1;
  return d;
}

int WOMonomial::c_degree() const {
  int d = 0;
  for (std::size_t i = 1; i < c_exp.size(); ++i)
    d += 2 * static_cast<int>(i) * c_exp[i];
  return d;
}

bool WOMonomial::operator<(const WOMonomial& o) const {
  const int da = degree(), db = o.degree();
  if (da != db) return da < db;
  if (tmask != o.tmask) return tmask < o.tmask;
  return c_exp < o.c_exp;
}

std::string WOMonomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int b = 0; b < 32; ++b)
    if (tmask >> b & 1u) {
      if (!first) os << " ";
      os << "c~" << (2 * b + 1);
      first = false;
    }
  for (std::size_t i = 1; i < c_exp.size(); ++i)
    if (c_exp[i] > 0) {
      if (!first) os << " ";
      os << "c" << i;
      if (c_exp[i] > 1) os << "^" << c_exp[i];
      first = false;
    }
  if (first) os << "1";
  return os.str();
}

// ---------------------------------------------------------------------------
// WOElement
// ---------------------------------------------------------------------------

void WOElement::add(const WOMonomial& m, const Rat& c) {
  if (c == 0) return;
  if (m.c_degree() > c_degree_cap(q, inclusive)) return;  // truncation
  WOMonomial key = m;
  while (!key.c_exp.empty() && key.c_exp.back() == 0) key.c_exp.pop_back();
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

WOElement WOElement::zero(int q, bool inclusive) {
  if (q < 1) throw ValidationError("WOElement: q must be >= 1");
  WOElement e;
  e.q = q;
  e.inclusive = inclusive;
  return e;
}

WOElement WOElement::one(int q, bool inclusive) {
  WOElement e = zero(q, inclusive);
  e.add(WOMonomial{}, Rat(1));
  return e;
}

WOElement WOElement::ctilde(int q, int i, bool inclusive) {
  WOElement e = zero(q, inclusive);
  if (i < 1 || i % 2 != 1 || i > wo_qprime(q))
    throw ValidationError("WOElement::ctilde: index must be odd and <= q'");
  WOMonomial m;
  m.tmask = 1u << ((i - 1) / 2);
  e.add(m, Rat(1));
  return e;
}

WOElement WOElement::c(int q, int i, bool inclusive) {
  WOElement e = zero(q, inclusive);
  if (i < 1 || i > q)
    throw ValidationError("WOElement::c: index must be in [1, q]");
  WOMonomial m;
  m.c_exp.assign(i + 1, 0);
  m.c_exp[i] = 1;
  e.add(m, Rat(1));  // strict mode truncates c_q to zero
  return e;
}

bool WOElement::is_homogeneous() const {
  if (terms.empty()) return true;
  const int d = terms.begin()->first.degree();
  for (const auto& [m, c] : terms)
    if (m.degree() != d) return false;
  return true;
}

int WOElement::degree() const {
  if (terms.empty()) return 0;
  if (!is_homogeneous())
    throw ValidationError("WOElement::degree: element is not homogeneous");
  return terms.begin()->first.degree();
}

WOElement WOElement::operator+(const WOElement& o) const {
  if (q != o.q || inclusive != o.inclusive)
    throw ValidationError("WOElement: algebra mismatch");
  WOElement out = *this;
  for (const auto& [m, c] : o.terms) out.add(m, c);
  return out;
}

WOElement WOElement::operator-(const WOElement& o) const {
  if (q != o.q || inclusive != o.inclusive)
    throw ValidationError("WOElement: algebra mismatch");
  WOElement out = *this;
  for (const auto& [m, c] : o.terms) out.add(m, -c);
  return out;
}

WOElement WOElement::operator*(const WOElement& o) const {
  return wo_mul(*this, o);
}

WOElement WOElement::operator*(const Rat& s) const {
  WOElement out = zero(q, inclusive);
  if (s == 0) return out;
  for (const auto& [m, c] : terms) out.add(m, c * s);
  return out;
}

bool WOElement::operator==(const WOElement& o) const {
  return q == o.q && inclusive == o.inclusive && terms == o.terms;
}

WOElement WOElement::component_of_degree(int deg) const {
  WOElement out = zero(q, inclusive);
  for (const auto& [m, c] : terms)
    if (m.degree() == deg) out.add(m, c);
  return out;
}

std::string WOElement::to_string() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    if (!first) os << " + ";
    os << "(" << rat_str(c) << ") " << m.to_string();
    first = false;
  }
  return os.str();
}

nlohmann::json WOElement::to_json() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& [m, c] : terms) {
    nlohmann::json t;
    t["coeff"] = rat_str(c);
    nlohmann::json tildes = nlohmann::json::array();
    for (int b = 0; b < 32; ++b)
      if (m.tmask >> b & 1u) tildes.push_back(2 * b + 1);
    t["ctilde"] = tildes;
    nlohmann::json ce = nlohmann::json::object();
    for (std::size_t i = 1; i < m.c_exp.size(); ++i)
      if (m.c_exp[i] > 0) ce[std::to_string(i)] = m.c_exp[i];
    t["c"] = ce;
    t["degree"] = m.degree();
    ts.push_back(t);
  }
  return {{"q", q},
          {"truncation", inclusive ? "inclusive" : "strict"},
          {"terms", ts},
          {"pretty", to_string()}};
}

WOElement wo_mul(const WOElement& a, const WOElement& b) {
  if (a.q != b.q || a.inclusive != b.inclusive)
    throw ValidationError("wo_mul: algebra mismatch");
  WOElement out = WOElement::zero(a.q, a.inclusive);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      if (ma.tmask & mb.tmask) continue;  // c~_i^2 = 0
      // Koszul sign: each generator of mb jumps over the generators of ma
      // sitting at higher positions.
      int inversions = 0;
      for (int r = 0; r < 32; ++r)
        if (mb.tmask >> r & 1u)
          inversions += __builtin_popcount(ma.tmask >> (r + 1));
      WOMonomial m;
      m.tmask = ma.tmask | mb.tmask;
      m.c_exp.assign(std::max(ma.c_exp.size(), mb.c_exp.size()), 0);
      for (std::size_t i = 0; i < ma.c_exp.size(); ++i) m.c_exp[i] += ma.c_exp[i];
      for (std::size_t i = 0; i < mb.c_exp.size(); ++i) m.c_exp[i] += mb.c_exp[i];
      Rat coeff = ca * cb;
      if (inversions % 2 != 0) coeff = -coeff;
      out.add(m, coeff);
    }
  return out;
}

WOElement wo_d(const WOElement& e) {
  WOElement out = WOElement::zero(e.q, e.inclusive);
  for (const auto& [m, c] : e.terms) {
    int before = 0;  // odd factors to the left of the current one
    for (int b = 0; b < 32; ++b) {
      if (!(m.tmask >> b & 1u)) continue;
      const int i = 2 * b + 1;
      WOMonomial n;
      n.tmask = m.tmask & ~(1u << b);
      n.c_exp = m.c_exp;
      if (static_cast<int>(n.c_exp.size()) <= i) n.c_exp.resize(i + 1, 0);
      n.c_exp[i] += 1;
      const Rat coeff = (before % 2 == 0) ? c : -c;
      out.add(n, coeff);
      ++before;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cohomology over Q
// ---------------------------------------------------------------------------

namespace {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // rows

// Reduced row echelon form; returns the rank, fills pivot column indices.
int rref(RatMat& M, std::vector<int>* pivot_cols) {
  if (pivot_cols) pivot_cols->clear();
  const int rows = static_cast<int>(M.size());
  const int cols = rows ? static_cast<int>(M[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (M[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(M[r], M[pr]);
    const Rat inv = Rat(1) / M[r][c];
    for (int j = c; j < cols; ++j) M[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      const Rat f = M[i][c];
      for (int j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

// Incremental echelon span with exact reduction; insert() returns the
// remainder's independence.
struct EchelonSet {
  std::map<int, RatVec> rows;  // leading index -> normalized vector

  // Reduces v in place; returns true (and absorbs v) when independent.
  bool insert(RatVec& v) {
    for (;;) {
      int lead = -1;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) {
          lead = static_cast<int>(i);
          break;
        }
      if (lead < 0) return false;
      auto it = rows.find(lead);
      if (it == rows.end()) {
        const Rat inv = Rat(1) / v[lead];
        for (auto& x : v) x *= inv;
        rows.emplace(lead, v);
        return true;
      }
      const Rat f = v[lead];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * it->second[i];
    }
  }
};

// All monomials of the given total degree, in WOMonomial order.
std::vector<WOMonomial> monomial_basis(int q, bool inclusive, int degree) {
  const int qp = wo_qprime(q);
  const int nbits = (qp + 1) / 2;
  const int cap = c_degree_cap(q, inclusive);
  std::vector<WOMonomial> out;

  for (unsigned mask = 0; mask < (1u << nbits); ++mask) {
    WOMonomial probe;
    probe.tmask = mask;
    const int rem = degree - probe.tilde_degree();
    if (rem < 0 || rem % 2 != 0 || rem > cap) continue;
    // c-exponents with sum 2 i e_i = rem.
    std::vector<int> exp(q + 1, 0);
    std::function<void(int, int)> gen = [&](int i, int left) {
      if (left == 0) {
        WOMonomial m;
        m.tmask = mask;
        m.c_exp = exp;
        while (!m.c_exp.empty() && m.c_exp.back() == 0) m.c_exp.pop_back();
        out.push_back(m);
        return;
      }
      if (i < 1) return;
      for (int e = 0; 2 * i * e <= left; ++e) {
        exp[i] = e;
        gen(i - 1, left - 2 * i * e);
      }
      exp[i] = 0;
    };
    gen(q, rem);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Coordinates of e in the given basis (e must be supported on it).
RatVec coordinates(const WOElement& e, const std::vector<WOMonomial>& basis) {
  RatVec v(basis.size(), Rat(0));
  for (const auto& [m, c] : e.terms) {
    auto it = std::lower_bound(basis.begin(), basis.end(), m);
    if (it == basis.end() || !(*it == m))
      throw NumericalError("wo_cohomology: monomial outside the basis");
    v[static_cast<std::size_t>(it - basis.begin())] = c;
  }
  return v;
}

}  // namespace

nlohmann::json CohomologyReport::to_json() const {
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [d, r] : betti) b[std::to_string(d)] = r;
  nlohmann::json dims = nlohmann::json::object();
  for (const auto& [d, r] : basis_dims) dims[std::to_string(d)] = r;
  nlohmann::json reps = nlohmann::json::object();
  for (const auto& [d, rl] : representatives) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : rl) arr.push_back(e.to_string());
    reps[std::to_string(d)] = arr;
  }
  return {{"q", q},
          {"truncation", inclusive ? "inclusive" : "strict"},
          {"betti", b},
          {"basis_dims", dims},
          {"representatives", reps}};
}

CohomologyReport wo_cohomology(int q, int max_degree, bool inclusive,
                               std::size_t basis_cap) {
  if (q < 1 || max_degree < 0)
    throw ValidationError("wo_cohomology: q >= 1 and max_degree >= 0 required");

  // Bases for degrees 0 .. max_degree + 1 (the extra degree carries the
  // image of d_max).
  std::vector<std::vector<WOMonomial>> bases(max_degree + 2);
  std::size_t total = 0;
  for (int d = 0; d <= max_degree + 1; ++d) {
    bases[d] = monomial_basis(q, inclusive, d);
    total += bases[d].size();
    if (total > basis_cap)
      throw ValidationError("wo_cohomology: monomial basis cap exceeded");
  }

  CohomologyReport rep;
  rep.q = q;
  rep.inclusive = inclusive;
  for (int d = 0; d <= max_degree; ++d)
    rep.basis_dims[d] = static_cast<int>(bases[d].size());

  // rank of d_d and the boundary span in degree d+1, per degree.
  std::vector<int> rank_d(max_degree + 1, 0);
  std::vector<EchelonSet> boundaries(max_degree + 2);

  for (int d = 0; d <= max_degree; ++d) {
    const auto& dom = bases[d];
    const auto& tgt = bases[d + 1];
    RatMat M(tgt.size(), RatVec(dom.size(), Rat(0)));
    for (std::size_t j = 0; j < dom.size(); ++j) {
      WOElement gen = WOElement::zero(q, inclusive);
      gen.add(dom[j], Rat(1));
      const WOElement img = wo_d(gen);
      RatVec col = coordinates(img, tgt);
      for (std::size_t i = 0; i < tgt.size(); ++i) M[i][j] = col[i];
      if (!col.empty()) {
        RatVec v = col;
        boundaries[d + 1].insert(v);
      }
    }

    // Kernel basis of d_d via RREF.
    RatMat R = M;
    std::vector<int> pivots;
    rank_d[d] = rref(R, &pivots);

    std::vector<bool> is_pivot(dom.size(), false);
    for (int p : pivots) is_pivot[p] = true;

    EchelonSet reduce_against = boundaries[d];  // copy of the boundary span
    std::vector<WOElement> reps_d;
    for (std::size_t f = 0; f < dom.size(); ++f) {
      if (is_pivot[f]) continue;
      RatVec k(dom.size(), Rat(0));
      k[f] = Rat(1);
      for (std::size_t pi = 0; pi < pivots.size(); ++pi)
        k[pivots[pi]] = -R[pi][f];
      RatVec kr = k;
      if (!reduce_against.insert(kr)) continue;  // already a boundary
      WOElement e = WOElement::zero(q, inclusive);
      for (std::size_t j = 0; j < dom.size(); ++j) e.add(dom[j], k[j]);
      if (!wo_d(e).is_zero())
        throw NumericalError("wo_cohomology: representative is not a cycle");
      reps_d.push_back(e);
    }

    rep.betti[d] = static_cast<int>(reps_d.size());
    if (!reps_d.empty()) rep.representatives[d] = std::move(reps_d);
  }

  // Euler consistency: betti_d = dim_d - rank d_d - rank d_{d-1}.
  for (int d = 0; d <= max_degree; ++d) {
    const int expected = rep.basis_dims[d] - rank_d[d] -
                         (d > 0 ? rank_d[d - 1] : 0);
    if (rep.betti[d] != expected)
      throw NumericalError("wo_cohomology: rank bookkeeping mismatch");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Delta, the universal class, the Kamber-Tondeur relation
// ---------------------------------------------------------------------------

Form delta_map(const WOElement& e, const Connection& cF, const HermMetric& h) {
  if (!cF.real_flag)
    throw ValidationError("delta_map: cF must be a real connection");
  const int dim = cF.A.dim();
  if (!e.is_homogeneous())
    throw ValidationError("delta_map: element must be homogeneous");
  const int deg = e.degree();
  if (deg > dim) throw ValidationError("delta_map: degree overflow");
  if (e.is_zero()) return Form::zero(dim, deg, 1);

  const CharForm ch = chern_character(cF);
  const CharForm T = transgress_ch(cF, adjoint(cF, h));

  Form acc = Form::zero(dim, deg, 1);
  for (const auto& [m, c] : e.terms) {
    Form f = Form::constant(dim, Cplx(c.convert_to<double>(), 0), 1);
    for (int b = 0; b < 32; ++b)
      if (m.tmask >> b & 1u) {
        const int i = 2 * b + 1;
        f = f.wedge(T.entry(i) * (Cplx(0.5, 0) / ipow(i)));
      }
    for (std::size_t i = 1; i < m.c_exp.size(); ++i)
      for (int rep = 0; rep < m.c_exp[i]; ++rep)
        f = f.wedge(ch.entry(static_cast<int>(i)) *
                    (Cplx(1, 0) / ipow(static_cast<int>(i))));
    acc = acc + f;
  }
  return acc;
}

WOElement universal_class(int q, int dimM) {
  if (dimM % 2 == 0)
    throw ValidationError("universal_class: dimM must be odd");
  if (2 * q >= dimM)
    throw ValidationError("universal_class: 2q < dimM required");

  // A(c_1..c_q) from the genus table, as a WO element.
  const RatPoly A = ahat_in_ch(q);
  WOElement Awo = WOElement::zero(q);
  for (const auto& [mono, coeff] : A.terms()) {
    WOMonomial m;
    m.c_exp = mono;  // same layout: index 0 unused, trailing zeros trimmed
    Awo.add(m, coeff);
  }

  WOElement S = WOElement::zero(q);
  for (int i = 1; i <= wo_qprime(q); i += 2) {
    const Rat sign = (((i + 1) / 2) % 2 == 0) ? Rat(1) : Rat(-1);
    S = S + WOElement::ctilde(q, i) * sign;
  }

  WOElement U = wo_mul(S, Awo).component_of_degree(dimM);
  if (!wo_d(U).is_zero())
    throw NumericalError("universal_class: U is not a cycle");
  return U;
}

double kt_class_relation(int p, const Connection& cF, const HermMetric& h) {
  if (p < 1 || p % 2 != 1)
    throw ValidationError("kt_class_relation: p must be odd and >= 1");
  const Form lhs = kamber_tondeur(cF, h, p);
  const WOElement e = WOElement::ctilde(p, p);
  const Form rhs = delta_map(e, cF, h) * (ipow(p) * Cplx(2, 0));
  const std::vector<Cplx> pair = closed_pairings(lhs - rhs);
  double res = 0;
  for (const Cplx& z : pair) res = std::max(res, std::abs(z));
  return res;
}

}  // namespace folrho
