#pragma once

#include <random>

#include "walgebra/pdo.hpp"
#include "walgebra/ring.hpp"

namespace walgebra::testing {

inline DiffPoly u(int idx, int order = 0) { return DiffPoly::var(GenId::u(idx), order); }

/// Small random differential polynomial in u_0..u_{gens-1}.
inline DiffPoly random_poly(std::mt19937& rng, int gens = 2, int max_terms = 3, int max_order = 2, int max_deg = 2) {
  std::uniform_int_distribution<int> nterms(1, max_terms), coef(-3, 3), gen(0, gens - 1), ord(0, max_order),
      deg(0, max_deg);
  PolyBuilder b;
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    DiffPoly m(coef(rng));
    int d = deg(rng);
    for (int k = 0; k < d; ++k) m = m * u(gen(rng), ord(rng));
    b.add(m);
  }
  return b.build();
}

/// Random scalar differential operator of the given order with constant
/// nonzero leading coefficient.
inline PDO random_diff_op(std::mt19937& rng, int order, int gens = 2) {
  std::uniform_int_distribution<int> lead(1, 3);
  PDO p = PDO::term(DiffPoly(lead(rng)), order);
  for (int k = 0; k < order; ++k) p += PDO::term(random_poly(rng, gens, 2, 1, 1), k);
  return p;
}

inline RatMatrix random_const(std::mt19937& rng, int r, int c, int lo = -2, int hi = 2) {
  std::uniform_int_distribution<int> d(lo, hi);
  RatMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = Rat(d(rng));
  }
  return m;
}

}  // namespace walgebra::testing
