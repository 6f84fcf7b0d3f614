#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "k3db/errors.hpp"
#include "k3db/poly.hpp"
#include "k3db/rational.hpp"

namespace k3db {

// Formal product of factors (1 - t^e), one entry per factor.
// Invariant: exponents ascending, each >= 1; empty product is 1.
struct CycloDenominator {
  std::vector<int> exps;

  CycloDenominator() = default;
  explicit CycloDenominator(std::vector<int> exponents) : exps(std::move(exponents)) {
    std::sort(exps.begin(), exps.end());
    for (int e : exps)
      if (e < 1) throw std::domain_error("CycloDenominator: exponent < 1");
  }

  friend bool operator==(const CycloDenominator& a, const CycloDenominator& b) {
    return a.exps == b.exps;
  }
};

// Least common multiple as factor multisets: per exponent value, the
// larger of the two multiplicities.
inline CycloDenominator lcm(const CycloDenominator& a, const CycloDenominator& b) {
  std::map<int, int> mult;
  for (int e : a.exps) ++mult[e];
  std::map<int, int> mb;
  for (int e : b.exps) ++mb[e];
  for (auto [e, m] : mb) mult[e] = std::max(mult[e], m);
  CycloDenominator out;
  for (auto [e, m] : mult) out.exps.insert(out.exps.end(), static_cast<size_t>(m), e);
  return out;
}

// Multiset difference a \ b; requires b to be contained in a.
inline CycloDenominator diff(const CycloDenominator& a, const CycloDenominator& b) {
  std::map<int, int> mult;
  for (int e : a.exps) ++mult[e];
  for (int e : b.exps) {
    auto it = mult.find(e);
    if (it == mult.end() || it->second == 0)
      throw std::domain_error("CycloDenominator::diff: not a submultiset");
    --it->second;
  }
  CycloDenominator out;
  for (auto [e, m] : mult) out.exps.insert(out.exps.end(), static_cast<size_t>(m), e);
  return out;
}

// The expanded polynomial prod (1 - t^e).
inline Poly cyclo_poly(const CycloDenominator& d) {
  Poly p = Poly::one();
  for (int e : d.exps) p *= Poly::one() - Poly::monomial(e);
  return p;
}

// Exact rational function num / prod (1 - t^e).  Not reduced to lowest
// terms; equality is by cross-multiplication.
struct HilbertSeries {
  Poly num;
  CycloDenominator den;
};

inline HilbertSeries expr_neg(HilbertSeries a) {
  a.num = -a.num;
  return a;
}

// Sum over the least common denominator.
inline HilbertSeries expr_add(const HilbertSeries& a, const HilbertSeries& b) {
  CycloDenominator d = lcm(a.den, b.den);
  Poly num = a.num * cyclo_poly(diff(d, a.den)) + b.num * cyclo_poly(diff(d, b.den));
  return {std::move(num), std::move(d)};
}

inline HilbertSeries expr_sub(const HilbertSeries& a, const HilbertSeries& b) {
  return expr_add(a, expr_neg(b));
}

inline bool expr_equal(const HilbertSeries& a, const HilbertSeries& b) {
  return a.num * cyclo_poly(b.den) == b.num * cyclo_poly(a.den);
}

// Coefficients of the power-series expansion in degrees 0..horizon.
inline std::vector<Rational> expr_expand(const HilbertSeries& s, int horizon) {
  std::vector<Rational> c(static_cast<size_t>(horizon) + 1, Rational(0));
  for (int e = 0; e <= std::min(horizon, s.num.degree()); ++e) c[static_cast<size_t>(e)] = s.num.coeff(e);
  // Each factor 1/(1 - t^e) is the running sum with stride e.
  for (int e : s.den.exps)
    for (int n = e; n <= horizon; ++n)
      c[static_cast<size_t>(n)] += c[static_cast<size_t>(n - e)];
  return c;
}

// Multiplies out s * prod_w (1 - t^w) and requires the result to be a
// polynomial; throws NotPolynomial otherwise.  Factors shared between
// the weights and the stored denominator cancel exactly first.
inline Poly clear_denominator(const HilbertSeries& s, const std::vector<int>& weights) {
  CycloDenominator w(weights);
  // Cancel the common part.
  std::map<int, int> dm;
  for (int e : s.den.exps) ++dm[e];
  CycloDenominator keep_w, keep_d;
  for (int e : w.exps) {
    auto it = dm.find(e);
    if (it != dm.end() && it->second > 0)
      --it->second;
    else
      keep_w.exps.push_back(e);
  }
  for (auto [e, m] : dm) keep_d.exps.insert(keep_d.exps.end(), static_cast<size_t>(m), e);

  Poly num = s.num * cyclo_poly(keep_w);
  if (keep_d.exps.empty()) return num;
  auto [q, r] = divmod(num, cyclo_poly(keep_d));
  if (!r.is_zero())
    throw NotPolynomial("clear_denominator: remainder of degree " + std::to_string(r.degree()));
  return q;
}

}  // namespace k3db
