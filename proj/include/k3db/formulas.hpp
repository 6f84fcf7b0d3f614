#pragma once

#include <vector>

#include "k3db/hilbert.hpp"
#include "k3db/singularity.hpp"

namespace k3db {

// Degree of the polarising class: deg A for a curve (basket read as
// orders), D^2 for a K3 surface, A^3 for a Fano 3-fold.  The surface
// and 3-fold cases share one expression in g and the basket.
inline Rational curve_degree(int g, const CurveBasket& basket) {
  Rational d(2 * g - 2);
  for (int r : basket) d += Rational(r - 1, r);
  return d;
}

inline Rational polarised_degree(int g, const Basket& basket) {
  Rational d(2 * g - 2);
  for (const auto& e : basket) {
    int b = inverse_mod(e.a, e.r);
    d += Rational(b * (e.r - b), e.r);
  }
  return d;
}

inline Rational degree(Kind kind, int g, const Basket& basket) {
  if (kind == Kind::Curve) {
    CurveBasket orders;
    for (const auto& e : basket) orders.push_back(e.r);
    return curve_degree(g, orders);
  }
  return polarised_degree(g, basket);
}

// Hilbert series of the orbifold canonical ring of a curve of genus g
// with orbifold points of the given orders:
//
//   (1 + (g-2)t + (g-2)t^2 + t^3) / (1-t)^2
//     + sum_r t(t + ... + t^(r-1)) / ((1-t)(1-t^r))
inline HilbertSeries hilbert_curve(int g, const CurveBasket& basket) {
  Poly head(std::vector<Rational>{Rational(1), Rational(g - 2), Rational(g - 2), Rational(1)});
  HilbertSeries s{std::move(head), CycloDenominator({1, 1})};
  for (int r : basket) {
    Poly num;
    for (int i = 2; i <= r; ++i) num.set_coeff(i, Rational(1));
    s = expr_add(s, HilbertSeries{std::move(num), CycloDenominator({1, r})});
  }
  return s;
}

// The equivalent closed form
//
//   (1 - (g-1)t - t^2) / (1-t) + t/(1-t)^2 deg A
//     - sum_r 1/(1-t^r) sum_{i=1}^{r-1} ((r-i)/r) t^i
//
// kept alongside the first as a cross-check.
inline HilbertSeries hilbert_curve_alt(int g, const CurveBasket& basket) {
  Poly head(std::vector<Rational>{Rational(1), Rational(-(g - 1)), Rational(-1)});
  HilbertSeries s{std::move(head), CycloDenominator({1})};
  Rational dA = curve_degree(g, basket);
  s = expr_add(s, HilbertSeries{Poly::monomial(1, dA), CycloDenominator({1, 1})});
  for (int r : basket) {
    Poly num;
    for (int i = 1; i <= r - 1; ++i) num.set_coeff(i, Rational(-(r - i), r));
    s = expr_add(s, HilbertSeries{std::move(num), CycloDenominator({r})});
  }
  return s;
}

// Per-singularity correction sum_{i=1}^{r-1} bi~(r - bi~) t^i / (2r)
// with b the inverse of a mod r and bi~ the least residue of b*i.
inline Poly periodic_correction(const QuotientSingularity& e) {
  int b = inverse_mod(e.a, e.r);
  Poly num;
  for (int i = 1; i <= e.r - 1; ++i) {
    int bi = (b * i) % e.r;
    num.set_coeff(i, Rational(bi * (e.r - bi), 2 * e.r));
  }
  return num;
}

// Hilbert series of a polarised K3 surface with the given numerical
// data:
//
//   (1+t)/(1-t) + t(1+t)/(1-t)^3 D^2/2
//     - sum_B 1/(1-t^r) sum_{i=1}^{r-1} bi~(r-bi~) t^i / (2r)
inline HilbertSeries hilbert_k3(int g, const Basket& basket) {
  HilbertSeries s{Poly(std::vector<Rational>{Rational(1), Rational(1)}), CycloDenominator({1})};
  Rational half_d2 = polarised_degree(g, basket) / Rational(2);
  Poly dnum(std::vector<Rational>{Rational(0), half_d2, half_d2});
  s = expr_add(s, HilbertSeries{std::move(dnum), CycloDenominator({1, 1, 1})});
  for (const auto& e : basket)
    s = expr_add(s, HilbertSeries{-periodic_correction(e), CycloDenominator({e.r})});
  return s;
}

// Hilbert series of the anticanonical ring of a Fano 3-fold:
//
//   (1+t)/(1-t)^2 + t(1+t)/(1-t)^4 A^3/2
//     - sum_B 1/((1-t)(1-t^r)) sum_{i=1}^{r-1} bi~(r-bi~) t^i / (2r)
inline HilbertSeries hilbert_fano(int g, const Basket& basket) {
  HilbertSeries s{Poly(std::vector<Rational>{Rational(1), Rational(1)}), CycloDenominator({1, 1})};
  Rational half_a3 = polarised_degree(g, basket) / Rational(2);
  Poly dnum(std::vector<Rational>{Rational(0), half_a3, half_a3});
  s = expr_add(s, HilbertSeries{std::move(dnum), CycloDenominator({1, 1, 1, 1})});
  for (const auto& e : basket)
    s = expr_add(s, HilbertSeries{-periodic_correction(e), CycloDenominator({1, e.r})});
  return s;
}

// Series dispatch on kind; for Kind::Curve the basket is read as bare
// orders.
inline HilbertSeries hilbert_series(Kind kind, int g, const Basket& basket) {
  if (kind == Kind::Curve) {
    CurveBasket orders;
    for (const auto& e : basket) orders.push_back(e.r);
    return hilbert_curve(g, orders);
  }
  return kind == Kind::K3 ? hilbert_k3(g, basket) : hilbert_fano(g, basket);
}

}  // namespace k3db
