#include "folrho/genus.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>

namespace folrho {

namespace {

void trim(RatPoly::Mono& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

}  // namespace

RatPoly RatPoly::constant(const Rat& c) {
  RatPoly p;
  p.add({}, c);
  return p;
}

RatPoly RatPoly::var(int index, int power) {
  if (index < 1) throw std::invalid_argument("RatPoly: variable index >= 1");
  RatPoly p;
  Mono m(index + 1, 0);
  m[index] = power;
  p.add(m, 1);
  return p;
}

void RatPoly::add(const Mono& mono, const Rat& c) {
  if (c == 0) return;
  Mono m = mono;
  trim(m);
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rat RatPoly::coeff(const Mono& mono) const {
  Mono m = mono;
  trim(m);
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
  RatPoly out = *this;
  for (const auto& [m, c] : o.terms_) out.add(m, c);
  return out;
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
  RatPoly out = *this;
  for (const auto& [m, c] : o.terms_) out.add(m, -c);
  return out;
}

RatPoly RatPoly::operator-() const {
  RatPoly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
  RatPoly out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Mono m(std::max(ma.size(), mb.size()), 0);
      for (std::size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
      for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
      out.add(m, ca * cb);
    }
  }
  return out;
}

RatPoly RatPoly::operator*(const Rat& s) const {
  RatPoly out;
  if (s == 0) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
  return out;
}

int RatPoly::weighted_degree(const Mono& m, const std::vector<int>& weights) {
  int w = 0;
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (i >= weights.size())
      throw std::invalid_argument("RatPoly: missing weight for variable");
    w += m[i] * weights[i];
  }
  return w;
}

RatPoly RatPoly::truncate_weight(const std::vector<int>& weights,
                                 int max_weight, bool strict) const {
  RatPoly out;
  for (const auto& [m, c] : terms_) {
    const int w = weighted_degree(m, weights);
    if (strict ? w < max_weight : w <= max_weight) out.terms_.emplace(m, c);
  }
  return out;
}

RatPoly RatPoly::component_weight(const std::vector<int>& weights,
                                  int weight) const {
  RatPoly out;
  for (const auto& [m, c] : terms_)
    if (weighted_degree(m, weights) == weight) out.terms_.emplace(m, c);
  return out;
}

std::string RatPoly::to_string(const std::string& varname) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rat a = c;
    if (!first) {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    } else {
      if (a < 0) {
        os << "-";
        a = -a;
      }
      first = false;
    }
    bool coeff_shown = (a != 1) || m.empty();
    if (coeff_shown) os << a;
    bool any = false;
    for (std::size_t i = 1; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (coeff_shown || any) os << "*";
      os << varname << i;
      if (m[i] > 1) os << "^" << m[i];
      any = true;
    }
  }
  return os.str();
}

nlohmann::json RatPoly::to_json(const std::string& varname) const {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [m, c] : terms_) {
    nlohmann::ordered_json t;
    t["exponents"] = std::vector<int>(m.begin() + std::min<std::size_t>(1, m.size()),
                                      m.end());
    std::ostringstream os;
    os << c;
    t["coefficient"] = os.str();
    terms.push_back(t);
  }
  nlohmann::ordered_json out;
  out["variable"] = varname;
  out["terms"] = terms;
  out["pretty"] = to_string(varname);
  return out;
}

std::vector<Rat> ahat_series(int max_order) {
  if (max_order < 0) throw std::invalid_argument("ahat_series: order >= 0");
  // g(z) = sinh(w)/w at w = sqrt(z)/2:  g_n = 1 / (4^n (2n+1)!).
  std::vector<Rat> g(max_order + 1);
  Rat pow4 = 1, fact = 1;  // fact = (2n+1)!
  for (int n = 0; n <= max_order; ++n) {
    if (n > 0) {
      pow4 *= 4;
      fact *= Rat(2 * n) * Rat(2 * n + 1);
    }
    g[n] = Rat(1) / (pow4 * fact);
  }
  // f = 1/g by the standard series recurrence.
  std::vector<Rat> f(max_order + 1);
  f[0] = 1;
  for (int n = 1; n <= max_order; ++n) {
    Rat acc = 0;
    for (int k = 1; k <= n; ++k) acc += g[k] * f[n - k];
    f[n] = -acc;
  }
  return f;
}

namespace {

// log of a series with constant term 1:  n l_n = n a_n - sum k l_k a_{n-k}.
std::vector<Rat> series_log(const std::vector<Rat>& a) {
  std::vector<Rat> l(a.size(), Rat(0));
  for (std::size_t n = 1; n < a.size(); ++n) {
    Rat acc = Rat(int(n)) * a[n];
    for (std::size_t k = 1; k < n; ++k) acc -= Rat(int(k)) * l[k] * a[n - k];
    l[n] = acc / Rat(int(n));
  }
  return l;
}

std::map<int, RatPoly> build_ahat_table(int max_weight) {
  // Power sums of the squared Chern roots in terms of p_i = e_i, by Newton:
  // s_j = p_1 s_{j-1} - p_2 s_{j-2} + ... + (-1)^{j-1} j p_j.
  std::vector<RatPoly> s(max_weight + 1);
  for (int j = 1; j <= max_weight; ++j) {
    RatPoly acc = RatPoly::var(j) * Rat(((j % 2) ? 1 : -1) * j);
    for (int i = 1; i < j; ++i) {
      RatPoly t = RatPoly::var(i) * s[j - i];
      acc = (i % 2) ? acc + t : acc - t;
    }
    s[j] = acc;
  }

  const std::vector<Rat> l = series_log(ahat_series(max_weight));
  std::vector<int> weights(max_weight + 1);
  for (int i = 1; i <= max_weight; ++i) weights[i] = i;

  RatPoly u;  // log A-hat = sum_j l_j s_j, weight(s_j) = j
  for (int j = 1; j <= max_weight; ++j) u = u + s[j] * l[j];

  RatPoly total = RatPoly::constant(1);
  RatPoly upow = RatPoly::constant(1);
  Rat invfact = 1;
  for (int m = 1; m <= max_weight; ++m) {
    upow = (upow * u).truncate_weight(weights, max_weight);
    invfact /= m;
    total = total + upow * invfact;
  }

  std::map<int, RatPoly> table;
  for (int k = 0; k <= max_weight; ++k)
    table[k] = total.component_weight(weights, k);
  return table;
}

}  // namespace

const std::map<int, RatPoly>& ahat_table(int max_weight) {
  static std::mutex mu;
  static std::map<int, std::map<int, RatPoly>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(max_weight);
  if (it == cache.end())
    it = cache.emplace(max_weight, build_ahat_table(max_weight)).first;
  return it->second;
}

RatPoly ahat_in_ch(int q, bool inclusive) {
  if (q < 0) throw std::invalid_argument("ahat_in_ch: q >= 0");
  // Chern forms of the complexification from the character components:
  // power sums s_k = k! c_k, then Newton  k e_k = sum (-1)^{i-1} e_{k-i} s_i.
  std::vector<RatPoly> s(q + 1), e(q + 1);
  Rat fact = 1;
  for (int k = 1; k <= q; ++k) {
    fact *= k;
    s[k] = RatPoly::var(k) * fact;
  }
  e[0] = RatPoly::constant(1);
  for (int k = 1; k <= q; ++k) {
    RatPoly acc;
    for (int i = 1; i <= k; ++i) {
      RatPoly t = e[k - i] * s[i];
      acc = (i % 2) ? acc + t : acc - t;
    }
    e[k] = acc * (Rat(1) / k);
  }

  std::vector<int> weights(q + 1);
  for (int i = 1; i <= q; ++i) weights[i] = i;

  // p_i = (-1)^i c_{2i} of the complexification, weight 2i; assemble the
  // genus through total weight q (form degree 2q).
  RatPoly out = RatPoly::constant(1);
  const auto& table = ahat_table(q / 2);
  for (const auto& [k, poly] : table) {
    if (k == 0 || poly.is_zero()) continue;
    RatPoly expanded;
    for (const auto& [m, c] : poly.terms()) {
      RatPoly t = RatPoly::constant(c);
      for (std::size_t i = 1; i < m.size(); ++i) {
        for (int rep = 0; rep < m[i]; ++rep) {
          RatPoly pi = e[2 * i] * Rat((i % 2) ? -1 : 1);
          t = t * pi;
        }
      }
      expanded = expanded + t;
    }
    out = out + expanded.truncate_weight(weights, q, !inclusive);
  }
  return inclusive ? out : out.truncate_weight(weights, q, true);
}

}  // namespace folrho
