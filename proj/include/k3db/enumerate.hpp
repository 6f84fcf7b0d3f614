#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "k3db/formulas.hpp"
#include "k3db/singularity.hpp"

namespace k3db {

// All canonical singularity types with index at most max_r, in (r, a)
// order.
inline std::vector<QuotientSingularity> singularity_types(int max_r) {
  std::vector<QuotientSingularity> types;
  for (int r = 2; r <= max_r; ++r)
    for (int a = 1; 2 * a <= r; ++a)
      if (std::gcd(a, r) == 1) types.emplace_back(r, a);
  return types;
}

// Smallest genus >= -1 (K3) or >= -2 (Fano) whose series has positive
// degree and nonnegative coefficients P_1..P_horizon.  Genera that pass
// the degree test but fail coefficient positivity are appended to
// *eccentric_genera when given; they are rare and worth surfacing.
inline int min_genus(Kind kind, const Basket& basket, int horizon = 20,
                     std::vector<int>* eccentric_genera = nullptr) {
  int g0 = kind == Kind::Fano ? -2 : -1;
  for (int g = g0; g <= g0 + 60; ++g) {
    if (!(degree(kind, g, basket) > Rational(0))) continue;
    auto coeffs = expr_expand(hilbert_series(kind, g, basket), horizon);
    bool ok = true;
    for (int n = 1; n <= horizon; ++n)
      if (coeffs[static_cast<size_t>(n)].sign() < 0) {
        ok = false;
        break;
      }
    if (!ok) {
      if (eccentric_genera) eccentric_genera->push_back(g);
      continue;
    }
    return g;
  }
  throw std::logic_error("min_genus: no genus found for basket " + basket_str(basket));
}

struct BasketGenus {
  Basket basket;
  int min_genus = 0;
};

struct Eccentric {
  int genus = 0;
  Basket basket;
};

struct K3Enumeration {
  std::vector<BasketGenus> items;       // ascending (rank, size, lex elements)
  std::vector<Eccentric> eccentrics;    // degree > 0 but a negative coefficient
};

// Every basket with sum (r - 1) <= bound - 1, paired with its minimal
// genus.  The empty basket participates unless excluded.
inline K3Enumeration enumerate_k3_baskets(int bound, bool include_empty = true) {
  const auto types = singularity_types(bound);
  K3Enumeration out;
  Basket current;

  std::function<void(size_t, int)> rec = [&](size_t idx, int budget) {
    if (!current.empty() || include_empty) {
      std::vector<int> ecc;
      int g = min_genus(Kind::K3, current, 20, &ecc);
      for (int eg : ecc) out.eccentrics.push_back({eg, current});
      out.items.push_back({current, g});
    }
    for (size_t i = idx; i < types.size(); ++i) {
      int cost = types[i].r - 1;
      if (cost > budget) continue;
      current.push_back(types[i]);
      rec(i, budget - cost);
      current.pop_back();
    }
  };
  rec(0, bound - 1);

  std::sort(out.items.begin(), out.items.end(), [](const BasketGenus& x, const BasketGenus& y) {
    int rx = k3_rank(x.basket), ry = k3_rank(y.basket);
    if (rx != ry) return rx < ry;
    if (x.basket.size() != y.basket.size()) return x.basket.size() < y.basket.size();
    return std::lexicographical_compare(x.basket.begin(), x.basket.end(), y.basket.begin(),
                                        y.basket.end());
  });
  return out;
}

// Visits every valid Fano basket, i.e. every multiset with
// sum (r - 1/r) < bound.  When degree_sum_cap is given, branches whose
// partial sum of b(r-b)/r already exceeds it are cut; the sum is
// monotone under adding elements, so the filter loses nothing with
// that cap on the full sum.
inline void for_each_fano_basket(int bound, const Rational* degree_sum_cap,
                                 const std::function<void(const Basket&)>& visit) {
  const auto types = singularity_types(bound);
  std::vector<Rational> weight, dsum;
  weight.reserve(types.size());
  dsum.reserve(types.size());
  for (const auto& t : types) {
    weight.push_back(Rational(t.r) - Rational(1, t.r));
    int b = inverse_mod(t.a, t.r);
    dsum.push_back(Rational(b * (t.r - b), t.r));
  }

  Basket current;
  std::function<void(size_t, Rational, Rational)> rec = [&](size_t idx, Rational used,
                                                            Rational degree_used) {
    visit(current);
    for (size_t i = idx; i < types.size(); ++i) {
      Rational next = used + weight[i];
      if (!(next < Rational(bound))) continue;
      Rational dnext = degree_used + dsum[i];
      if (degree_sum_cap && dnext > *degree_sum_cap) continue;
      current.push_back(types[i]);
      rec(i, next, dnext);
      current.pop_back();
    }
  };
  rec(0, Rational(0), Rational(0));
}

}  // namespace k3db
