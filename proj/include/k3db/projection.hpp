#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3db/candidate.hpp"
#include "k3db/errors.hpp"
#include "k3db/formulas.hpp"
#include "k3db/singularity.hpp"

namespace k3db {

// A basket element examined as a projection centre.  Numerics can
// certify Type I (the coordinate weights needed for the projection all
// present); anything else with the index among the weights stays
// unclassified.
struct Centre {
  QuotientSingularity sing;
  bool type_i = false;
  std::optional<int> image_id;  // database id of the Type I image, once resolved
};

namespace detail {

// True when W minus one copy of r contains the coordinate weights of
// the centre: {a, r-a} for a surface, {1, a, r-a} for a 3-fold.
inline bool has_type1_coordinates(Kind kind, const std::vector<int>& weights,
                                  const QuotientSingularity& s) {
  std::vector<int> pool = weights;
  auto take = [&pool](int v) {
    auto it = std::find(pool.begin(), pool.end(), v);
    if (it == pool.end()) return false;
    pool.erase(it);
    return true;
  };
  if (!take(s.r)) return false;
  if (kind == Kind::Fano && !take(1)) return false;
  return take(s.a) && take(s.r - s.a);
}

}  // namespace detail

// Classifies each basket element of the record in basket order.
// Elements whose index is absent from the weights are not centres and
// are omitted.
inline std::vector<Centre> find_centres(const CandidateRecord& rec) {
  std::vector<Centre> out;
  for (const auto& s : rec.basket) {
    if (std::find(rec.weights.begin(), rec.weights.end(), s.r) == rec.weights.end()) continue;
    Centre c;
    c.sing = s;
    c.type_i = detail::has_type1_coordinates(rec.kind, rec.weights, s);
    out.push_back(c);
  }
  return out;
}

// Basket and weights of the Type I projection image: the centre leaves
// the basket, its two orbifold pieces [a, r mod a] and [r-a, r mod (r-a)]
// join it (pieces of index 1 vanish), and one weight r is dropped.
inline std::pair<Basket, std::vector<int>> type1_image_data(const CandidateRecord& rec,
                                                            const QuotientSingularity& s) {
  if (std::find(rec.basket.begin(), rec.basket.end(), s) == rec.basket.end())
    throw NotTypeI("centre " + std::to_string(s.r) + "/" + std::to_string(s.a) +
                   " not in basket " + basket_str(rec.basket));
  if (!detail::has_type1_coordinates(rec.kind, rec.weights, s))
    throw NotTypeI("centre " + std::to_string(s.r) + "/" + std::to_string(s.a) +
                   " is not numerically Type I for weights of record");

  Basket b = rec.basket;
  b.erase(std::find(b.begin(), b.end(), s));
  if (s.a >= 2) b.emplace_back(s.a, s.r % s.a);
  if (s.r - s.a >= 2) b.emplace_back(s.r - s.a, s.r % (s.r - s.a));
  std::sort(b.begin(), b.end());

  std::vector<int> w = rec.weights;
  w.erase(std::find(w.begin(), w.end(), s.r));
  return {std::move(b), std::move(w)};
}

// Performs the Type I projection and rebuilds the image record from its
// own numerical data.  Throws NotTypeI for an unsuitable centre,
// DegenerateDegree when the image degree is not positive, and
// NotPolynomial when the surviving weights cannot clear the image
// series.
inline CandidateRecord project_type1(const CandidateRecord& rec, const QuotientSingularity& s) {
  auto [basket, weights] = type1_image_data(rec, s);
  CandidateRecord img;
  img.kind = rec.kind;
  img.genus = rec.genus;
  img.basket = std::move(basket);
  img.weights = std::move(weights);
  img.degree = degree(img.kind, img.genus, img.basket);
  if (!(img.degree > Rational(0)))
    throw DegenerateDegree("projection image of " + basket_str(rec.basket) + " at " +
                           std::to_string(s.r) + "/" + std::to_string(s.a) + " has degree " +
                           img.degree.str());
  img.codim = codim_of(img.kind, img.weights.size());
  img.numerator = clear_denominator(hilbert_series(img.kind, img.genus, img.basket), img.weights);
  return img;
}

// Exact checks tying a projection to its centre: the degree drops by
// 1/(r a (r-a)) and the series changes by t^r/((1-t^r)(1-t^a)(1-t^(r-a))),
// both as identities of rational functions.  Throws on any mismatch.
inline void verify_projection(const CandidateRecord& before, const CandidateRecord& after,
                              const QuotientSingularity& s) {
  Rational drop(1, static_cast<long long>(s.r) * s.a * (s.r - s.a));
  Rational got = before.degree - after.degree;
  if (got != drop)
    throw std::logic_error("verify_projection: degree drop " + got.str() + ", expected " +
                           drop.str());
  HilbertSeries pb = hilbert_series(before.kind, before.genus, before.basket);
  HilbertSeries pa = hilbert_series(after.kind, after.genus, after.basket);
  HilbertSeries delta{Poly::monomial(s.r), CycloDenominator({s.a, s.r - s.a, s.r})};
  if (!expr_equal(expr_sub(pb, pa), delta))
    throw std::logic_error("verify_projection: series delta mismatch at centre " +
                           std::to_string(s.r) + "/" + std::to_string(s.a));
}

}  // namespace k3db
