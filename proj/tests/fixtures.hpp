#pragma once

// Independent oracles for the closed-form W-algebra fixtures. Nothing here
// calls the solver or the bracket machinery: generators come from direct
// symbol arithmetic and brackets from the explicit binomial formulas.

#include <functional>
#include <map>
#include <vector>

#include "walgebra/pva.hpp"
#include "walgebra/pyramid.hpp"
#include "walgebra/ring.hpp"

namespace walgebra::fixtures {

inline DiffPoly q(int i, int h, int j, int k) { return DiffPoly::var(GenId::q({i, h}, {j, k})); }
inline DiffPoly w(int i, int j, int k) { return DiffPoly::var(GenId::w(i, j, k)); }

// ---------------------------------------------------------------------------
// lambda-operator helpers: every operator acts on everything to its right.

inline LambdaPoly times_lambda(const LambdaPoly& x) {
  LambdaPoly r;
  for (const auto& [m, c] : x.coeffs()) r.add_to(m + 1, c);
  return r;
}
inline LambdaPoly deriv(const LambdaPoly& x) {
  return x.map_coeffs([](const DiffPoly& c) { return c.d(); });
}
/// (s*lambda + s*d + c) x with s = +-1.
inline LambdaPoly shift_op(int s, const DiffPoly& c, const LambdaPoly& x) {
  return Rat(s) * (times_lambda(x) + deriv(x)) + c * x;
}
inline LambdaPoly shift_op_pow(int s, const DiffPoly& c, int n, LambdaPoly x) {
  for (int t = 0; t < n; ++t) x = shift_op(s, c, x);
  return x;
}
/// (-lambda)^n c.
inline LambdaPoly neg_lambda_pow(const DiffPoly& c, int n) {
  return LambdaPoly::term((n % 2 == 0 ? Rat(1) : Rat(-1)) * c, n);
}

// ---------------------------------------------------------------------------
// Generators from the geometric-series expansion of the rectangular
// quasideterminant (principal case r1 = 1).

/// Polynomial in z with differential-polynomial coefficients.
using ZPoly = std::map<int, DiffPoly>;

inline void zadd(ZPoly& p, int m, const DiffPoly& c) {
  if (c.is_zero()) return;
  p[m] += c;
  if (p[m].is_zero()) p.erase(m);
}

/// (delta (z + d) + c) applied to p.
inline ZPoly apply_factor(bool delta, const DiffPoly& c, const ZPoly& p) {
  ZPoly r;
  for (const auto& [m, x] : p) {
    if (delta) {
      zadd(r, m + 1, x);
      zadd(r, m, x.d());
    }
    zadd(r, m, c * x);
  }
  return r;
}

/// Returns {k -> w_{ji;k}} for one entry (i,j) of a rectangular pyramid with
/// r1 rows of length p, read off from the z-expansion. `lead` receives the
/// coefficient of z^p.
inline std::map<int, DiffPoly> rectangular_generators(int p, int r1, int i, int j, DiffPoly* lead = nullptr) {
  ZPoly total;
  zadd(total, 0, q(j, p, i, 1));
  // Chains (i_t, h_t), t = 1..s with 2 <= h_1 < ... < h_s <= p.
  std::vector<std::pair<int, int>> chain;
  std::function<void(int)> rec = [&](int hmin) {
    if (!chain.empty()) {
      auto [is, hs] = chain.back();
      ZPoly tail;
      zadd(tail, 1, DiffPoly(Rat(is == j && hs == p ? 1 : 0)));
      zadd(tail, 0, q(j, p, is, hs));
      for (std::size_t t = chain.size(); t-- > 0;) {
        int prev_i = t == 0 ? i : chain[t - 1].first;
        int prev_h = t == 0 ? 1 : chain[t - 1].second;
        auto [it, ht] = chain[t];
        tail = apply_factor(it == prev_i && ht - 1 == prev_h, q(it, ht - 1, prev_i, prev_h), tail);
      }
      int sign = chain.size() % 2 == 0 ? 1 : -1;
      for (const auto& [m, c] : tail) zadd(total, m, Rat(sign) * c);
    }
    for (int h = hmin; h <= p; ++h) {
      for (int ii = 1; ii <= r1; ++ii) {
        chain.emplace_back(ii, h);
        rec(h + 1);
        chain.pop_back();
      }
    }
  };
  rec(2);
  std::map<int, DiffPoly> out;
  for (int k = 0; k < p; ++k) {
    auto it = total.find(k);
    DiffPoly c = it == total.end() ? DiffPoly() : it->second;
    out[k] = (k % 2 == 0 ? Rat(1) : Rat(-1)) * c;
  }
  if (lead) *lead = total.count(p) ? total.at(p) : DiffPoly();
  return out;
}

/// Short nilpotent p = (2,...,2) with r rows: w_{ji;0}.
inline DiffPoly short_w0(int r, int i, int j) {
  DiffPoly s = q(j, 2, i, 1) - q(j, 2, i, 2).d();
  for (int k = 1; k <= r; ++k) s -= q(k, 1, i, 1) * q(j, 2, k, 2);
  return s;
}

/// The five minimal-nilpotent formulas for p = (2,1): scalar blocks.
struct MinimalGenerators {
  DiffPoly w11_1, w11_0, wp1, w1p, wpp;
};

inline MinimalGenerators minimal_generators() {
  DiffPoly q1111 = q(1, 1, 1, 1), q1212 = q(1, 2, 1, 2), q1211 = q(1, 2, 1, 1);
  DiffPoly qp11 = q(2, 1, 1, 1), qp12 = q(2, 1, 1, 2);  // q_{+(1k)}
  DiffPoly q11p = q(1, 1, 2, 1), q12p = q(1, 2, 2, 1);  // q_{(1k)+}
  DiffPoly Q = q(2, 1, 2, 1);
  MinimalGenerators g;
  g.w11_1 = q1111 + q1212 + qp12 * q11p;
  g.w11_0 = q1211 + qp11 * q11p + qp12 * q12p - q1212.d() - q1111 * q1212 - g.w11_1 * qp12 * q11p +
            qp12 * Q * q11p - qp12.d() * q11p;
  g.wp1 = qp11 + qp12 * Q - qp12.d() - q1111 * qp12 - qp12 * q11p * qp12;
  g.w1p = q12p + Q * q11p + q11p.d() - q1212 * q11p - q11p * qp12 * q11p;
  g.wpp = Q - q11p * qp12;
  return g;
}

// ---------------------------------------------------------------------------
// Closed-form brackets.

/// 0-th bracket of the generic p-th order operator in the rectangular form:
/// {w_{beta alpha;h} lambda w_{delta gamma;k}}_0 with w(x, y, m) returning
/// w_{xy;m} (and -delta_{xy} at m = p).
inline LambdaPoly rectangular_bracket0(int p, int beta, int alpha, int h, int delta, int gamma, int k,
                                       const std::function<DiffPoly(int, int, int)>& wv) {
  LambdaPoly r;
  for (int n = 0; n <= p - h - 1; ++n) {
    for (int a = std::max(0, n - k); a <= p + n - k; ++a) {
      if (a <= n) {
        Rat c = binomial(n, a) * (a % 2 == 0 ? Rat(1) : Rat(-1));
        r += c * (wv(beta, gamma, h + n + 1) * LambdaPoly(wv(delta, alpha, k + a - n)).shifted(a));
      }
      for (int b = 0; b <= p - n - h - 1; ++b) {
        Rat c = binomial(h + n + b + 1, b) * binomial(k + a, a) * (a % 2 == 0 ? Rat(-1) : Rat(1));
        r += c * (wv(beta, gamma, k + a - n) * LambdaPoly(wv(delta, alpha, h + n + b + 1)).shifted(a + b));
      }
    }
  }
  return r;
}

/// 1-st bracket of the rectangular form with matrix sbar (0-based access).
inline LambdaPoly rectangular_bracket1(int p, int beta, int alpha, int h, int delta, int gamma, int k,
                                       const RatMatrix& sbar, const std::function<DiffPoly(int, int, int)>& wv) {
  LambdaPoly r;
  for (int n = 0; n <= p - h - k - 1; ++n) {
    r += (binomial(n + k, k) * sbar(alpha - 1, delta - 1)) * neg_lambda_pow(wv(beta, gamma, h + k + n + 1), n);
    r -= (binomial(n + h, h) * sbar(gamma - 1, beta - 1)) * LambdaPoly(wv(delta, alpha, h + k + n + 1)).shifted(n);
  }
  return r;
}

/// w-variable accessor for a rectangular pyramid, with w_{ji;p} = -delta_{ij}.
inline std::function<DiffPoly(int, int, int)> rectangular_w(int p) {
  return [p](int x, int y, int m) {
    if (m == p) return DiffPoly(Rat(x == y ? -1 : 0));
    return w(x, y, m);
  };
}

/// Constrained pyramid (p1, 1): scalar blocks A_h = w_{11;h} (A_{p1} = -1),
/// P = w_{+1}, M = w_{1+}, W = W_{++}.
struct ConstrainedOracle {
  int p1;
  DiffPoly A(int h) const {
    if (h == p1) return DiffPoly(-1);
    if (h > p1 || h < 0) return {};
    return w(1, 1, h);
  }
  DiffPoly P() const { return w(2, 1, 0); }
  DiffPoly M() const { return w(1, 2, 0); }
  DiffPoly W() const { return w(2, 2, 0); }

  LambdaPoly AA0(int h, int k) const {
    auto wv = [this](int, int, int m) { return A(m); };
    LambdaPoly r = rectangular_bracket0(p1, 1, 1, h, 1, 1, k, wv);
    for (int a = 0; a <= p1 - h - k - 2; ++a) {
      for (int b = 0; b <= p1 - h - k - 2 - a; ++b) {
        LambdaPoly inner = shift_op_pow(-1, W(), b, LambdaPoly(P()));
        LambdaPoly t2 = shift_op_pow(-1, DiffPoly(), a, M() * inner);
        r += binomial(k + a, a) * (A(a + b + h + k + 2) * t2);
        LambdaPoly t3 = shift_op_pow(1, W(), b, M() * LambdaPoly(A(a + b + h + k + 2)).shifted(a));
        r -= binomial(h + a, a) * (P() * t3);
      }
    }
    return r;
  }
  LambdaPoly AP0(int h) const {
    LambdaPoly r;
    for (int a = 0; a <= p1 - h - 1; ++a) r += A(a + h + 1) * shift_op_pow(-1, W(), a, LambdaPoly(P()));
    return r;
  }
  LambdaPoly AM0(int h) const {
    LambdaPoly r;
    for (int a = 0; a <= p1 - h - 1; ++a) {
      for (int b = 0; b <= p1 - h - 1 - a; ++b) {
        r -= binomial(a + h, a) * shift_op_pow(1, W(), b, M() * LambdaPoly(A(a + b + h + 1)).shifted(a));
      }
    }
    return r;
  }
  LambdaPoly PA0(int k) const {
    LambdaPoly r;
    for (int a = 0; a <= p1 - k - 1; ++a) r -= P() * shift_op_pow(1, W(), a, LambdaPoly(A(a + k + 1)));
    return r;
  }
  LambdaPoly MA0(int k) const {
    LambdaPoly r;
    for (int a = 0; a <= p1 - k - 1; ++a) {
      for (int b = 0; b <= p1 - k - 1 - a; ++b) {
        LambdaPoly inner = M() * shift_op_pow(-1, W(), b, LambdaPoly(DiffPoly(1)));
        r += binomial(a + k, a) * (A(a + b + k + 1) * shift_op_pow(-1, DiffPoly(), a, inner));
      }
    }
    return r;
  }
  LambdaPoly PM0() const {
    LambdaPoly r;
    for (int k = 0; k <= p1; ++k) r -= shift_op_pow(1, W(), k, LambdaPoly(A(k)));
    return r;
  }
  LambdaPoly MP0() const {
    LambdaPoly r;
    for (int h = 0; h <= p1; ++h) r += A(h) * shift_op_pow(-1, W(), h, LambdaPoly(DiffPoly(1)));
    return r;
  }
  LambdaPoly AA1(int h, int k) const {
    LambdaPoly r;
    for (int l = 0; l <= p1 - h - k - 1; ++l) {
      r += binomial(l + k, k) * neg_lambda_pow(A(l + h + k + 1), l);
      r -= binomial(l + h, h) * LambdaPoly(A(l + h + k + 1)).shifted(l);
    }
    return r;
  }

  /// Full 0-th / 1-st table on the generators in the order A_0..A_{p1-1}, P, M, W.
  std::map<std::pair<GenId, GenId>, LambdaPoly> table(int which) const {
    std::map<std::pair<GenId, GenId>, LambdaPoly> t;
    GenId gp = GenId::w(2, 1, 0), gm = GenId::w(1, 2, 0), gw = GenId::w(2, 2, 0);
    std::vector<GenId> all;
    for (int h = 0; h < p1; ++h) all.push_back(GenId::w(1, 1, h));
    all.push_back(gp);
    all.push_back(gm);
    all.push_back(gw);
    for (GenId a : all) {
      for (GenId b : all) t[{a, b}] = LambdaPoly();
    }
    for (int h = 0; h < p1; ++h) {
      GenId ah = GenId::w(1, 1, h);
      for (int k = 0; k < p1; ++k) t[{ah, GenId::w(1, 1, k)}] = which == 0 ? AA0(h, k) : AA1(h, k);
      if (which == 0) {
        t[{ah, gp}] = AP0(h);
        t[{ah, gm}] = AM0(h);
        t[{gp, ah}] = PA0(h);
        t[{gm, ah}] = MA0(h);
      }
    }
    if (which == 0) {
      t[{gp, gm}] = PM0();
      t[{gm, gp}] = MP0();
      t[{gw, gw}] = LambdaPoly::term(DiffPoly(1), 1);
      t[{gp, gw}] = LambdaPoly(-P());
      t[{gw, gp}] = LambdaPoly(P());
      t[{gm, gw}] = LambdaPoly(M());
      t[{gw, gm}] = LambdaPoly(-M());
    } else {
      t[{gp, gm}] = LambdaPoly(DiffPoly(-1));
      t[{gm, gp}] = LambdaPoly(DiffPoly(1));
    }
    return t;
  }
};

/// The sixteen-line minimal-nilpotent table (p = (2,1)), written out directly.
inline std::map<std::pair<GenId, GenId>, LambdaPoly> minimal_table0() {
  DiffPoly A = w(1, 1, 1), B = w(1, 1, 0), P = w(2, 1, 0), M = w(1, 2, 0), W = w(2, 2, 0);
  GenId a = GenId::w(1, 1, 1), b = GenId::w(1, 1, 0), gp = GenId::w(2, 1, 0), gm = GenId::w(1, 2, 0),
        gw = GenId::w(2, 2, 0);
  auto L = [](const DiffPoly& c, int m) { return LambdaPoly::term(c, m); };
  DiffPoly one(1);
  std::map<std::pair<GenId, GenId>, LambdaPoly> t;
  for (GenId x : {a, b, gp, gm, gw}) {
    for (GenId y : {a, b, gp, gm, gw}) t[{x, y}] = LambdaPoly();
  }
  t[{a, a}] = L(DiffPoly(2), 1);
  t[{a, b}] = L(-A, 1) - L(one, 2);
  t[{b, a}] = -LambdaPoly(A).shifted(1) + L(one, 2);
  // (d + 2 lambda) B + A (lambda + d) A + (d + 2 lambda) A' - lambda^3
  t[{b, b}] = LambdaPoly(B.d()) + L(Rat(2) * B, 1) + A * LambdaPoly(A).shifted(1) + LambdaPoly(A.d().d()) +
              L(Rat(2) * A.d(), 1) - L(one, 3);
  t[{a, gp}] = LambdaPoly(-P);
  t[{gp, a}] = LambdaPoly(P);
  t[{a, gm}] = LambdaPoly(M);
  t[{gm, a}] = LambdaPoly(-M);
  t[{b, gp}] = LambdaPoly(P.d()) + L(P, 1) - LambdaPoly(P * W) + LambdaPoly(A * P);
  t[{gp, b}] = L(P, 1) + LambdaPoly(P * W) - LambdaPoly(A * P);
  t[{b, gm}] = LambdaPoly(M.d()) + L(Rat(2) * M, 1) + LambdaPoly(W * M) - LambdaPoly(A * M);
  t[{gm, b}] = LambdaPoly(M.d()) + L(Rat(2) * M, 1) - LambdaPoly(W * M) + LambdaPoly(A * M);
  // -(lambda + d + A - W)(lambda - W) + B
  LambdaPoly lw = L(one, 1) - LambdaPoly(W);
  t[{gm, gp}] = -(times_lambda(lw) + deriv(lw) + (A - W) * lw) + LambdaPoly(B);
  // (lambda + d + W)(lambda - A + W) - B
  LambdaPoly la = L(one, 1) - LambdaPoly(A) + LambdaPoly(W);
  t[{gp, gm}] = times_lambda(la) + deriv(la) + W * la - LambdaPoly(B);
  t[{gp, gw}] = LambdaPoly(-P);
  t[{gw, gp}] = LambdaPoly(P);
  t[{gm, gw}] = LambdaPoly(M);
  t[{gw, gm}] = LambdaPoly(-M);
  t[{gw, gw}] = L(one, 1);
  return t;
}

inline std::map<std::pair<GenId, GenId>, LambdaPoly> minimal_table1() {
  GenId a = GenId::w(1, 1, 1), b = GenId::w(1, 1, 0), gp = GenId::w(2, 1, 0), gm = GenId::w(1, 2, 0),
        gw = GenId::w(2, 2, 0);
  std::map<std::pair<GenId, GenId>, LambdaPoly> t;
  for (GenId x : {a, b, gp, gm, gw}) {
    for (GenId y : {a, b, gp, gm, gw}) t[{x, y}] = LambdaPoly();
  }
  t[{b, b}] = LambdaPoly::term(DiffPoly(2), 1);
  t[{gp, gm}] = LambdaPoly(DiffPoly(-1));
  t[{gm, gp}] = LambdaPoly(DiffPoly(1));
  return t;
}

// ---------------------------------------------------------------------------
// Subleading coefficient Qbar of J_1 (1 d + rho Q)^{-1} I_1. Both quadratic
// factors are g_{1/2} variables: the first is q_{(i~,h~),(i,p1-s)}.

inline DiffPoly qbar_closed_form(const Pyramid& pyr, int i, int j) {
  int p1 = pyr.part(1);
  DiffPoly r;
  for (int s = 0; s <= p1 - 1; ++s) r += q(j, p1 - s, i, p1 - s);
  for (int s = 0; s < p1; ++s) {
    for (int t = s + 1; t <= p1; ++t) {
      for (Box b : pyr.boxes()) {
        if (pyr.part(b.i) - 2 * b.h != -p1 + 1 + 2 * s) continue;
        Box second{b.i, b.h + s + 1 - t};
        Box first_row{i, p1 - s}, second_row{j, p1 - t};
        if (!pyr.contains(second) || !pyr.contains(second_row)) continue;
        r += q(b.i, b.h, first_row.i, first_row.h) * q(second_row.i, second_row.h, second.i, second.h);
      }
    }
  }
  return r;
}

}  // namespace walgebra::fixtures
