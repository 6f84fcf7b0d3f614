#pragma once

#include <string>
#include <vector>

#include "k3db/errors.hpp"
#include "k3db/formulas.hpp"
#include "k3db/singularity.hpp"

namespace k3db {

struct LatticeCheck {
  Rational d_squared;
  int rank = 0;
  Rational discriminant;  // (prod of basket indices) * D^2
};

// Independent computation of D^2 on the minimal resolution.  The
// polarising class pulls back to D = B + sum m_i E_i where B is the
// central curve with B^2 = 2g - 2 and each basket element [r, a]
// contributes a chain of r - 1 rational (-2)-curves, attached to B at
// the chain's multiplier peak.  With b the inverse of a mod r the
// multipliers along the chain are
//
//   m_i = i b / r              for i = 1 .. r-b
//   m_i = (r-i)(r-b) / r       for i = r-b .. r-1
//
// and the peak vertex i = r-b, of multiplier b(r-b)/r, meets B.  The
// multipliers are forced by D . E_i = 0 for every exceptional curve,
// which is verified here from the assembled intersection matrix; any
// violation throws OrthogonalityFailure.  D^2 is then evaluated as the
// full quadratic form, not via the closed degree formula.
inline LatticeCheck lattice_oracle(int g, const Basket& basket) {
  int n = 1;
  for (const auto& e : basket) n += e.r - 1;

  std::vector<std::vector<Rational>> gram(static_cast<size_t>(n),
                                          std::vector<Rational>(static_cast<size_t>(n), Rational(0)));
  std::vector<Rational> mult(static_cast<size_t>(n), Rational(0));
  mult[0] = Rational(1);
  gram[0][0] = Rational(2 * g - 2);

  int base = 1;
  for (const auto& e : basket) {
    int r = e.r;
    int b = inverse_mod(e.a, r);
    for (int i = 1; i <= r - 1; ++i) {
      size_t v = static_cast<size_t>(base + i - 1);
      gram[v][v] = Rational(-2);
      if (i > 1) {
        size_t u = v - 1;
        gram[u][v] = gram[v][u] = Rational(1);
      }
      mult[v] = i <= r - b ? Rational(i * b, r) : Rational((r - i) * (r - b), r);
    }
    size_t peak = static_cast<size_t>(base + (r - b) - 1);
    gram[0][peak] = gram[peak][0] = Rational(1);
    base += r - 1;
  }

  // w = G v for v the multiplier vector; orthogonality demands w = 0 on
  // every chain vertex.
  std::vector<Rational> w(static_cast<size_t>(n), Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w[static_cast<size_t>(i)] +=
          gram[static_cast<size_t>(i)][static_cast<size_t>(j)] * mult[static_cast<size_t>(j)];
  for (int i = 1; i < n; ++i)
    if (!w[static_cast<size_t>(i)].is_zero())
      throw OrthogonalityFailure("lattice_oracle: D . E_" + std::to_string(i) + " = " +
                                 w[static_cast<size_t>(i)].str() + " for basket " + basket_str(basket));

  Rational d2(0);
  for (int i = 0; i < n; ++i) d2 += mult[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];

  Rational disc = d2;
  for (const auto& e : basket) disc *= Rational(e.r);
  return {d2, n, disc};
}

}  // namespace k3db
