// Adler-type identities checked coefficient-wise in (z, w, lambda).
//
// All rational expressions in z are expanded for large z; symbols evaluated
// at w+lambda+d are expanded for large w. A window of (z-power, w-power)
// pairs is compared: those coefficients that the tracked floor of the
// operands determines exactly.

#include <algorithm>
#include <sstream>

#include "walgebra/pva.hpp"

namespace walgebra {

namespace {

struct Key {
  int z = 0;
  int w = 0;
  int l = 0;
  auto operator<=>(const Key&) const = default;
};

using Series = std::map<Key, DiffPoly>;

class SeriesBuilder {
 public:
  void add(Key k, const DiffPoly& c, const Rat& s = Rat(1)) {
    if (!c.is_zero() && !s.is_zero()) acc_[k].add(c, s);
  }
  Series build() {
    Series out;
    for (auto& [k, b] : acc_) {
      DiffPoly v = b.build();
      if (!v.is_zero()) out.emplace(k, std::move(v));
    }
    acc_.clear();
    return out;
  }

 private:
  std::map<Key, PolyBuilder> acc_;
};

/// Pairs (z-power e, w-power f) whose coefficients are determined exactly.
struct Window {
  int zmin = 0;
  bool f_bounded = false;
  int fbase = 0;
  int ord = 0;
  bool in(int e, int f) const {
    if (e < zmin) return false;
    return !f_bounded || f >= fbase + std::max(0, ord - e - 1);
  }
  int fglob() const { return f_bounded ? fbase : kExact; }
};

int max_z(const Series& s) {
  int m = kExact;
  for (const auto& [k, c] : s) m = std::max(m, k.z);
  return m;
}

/// (w + lambda + d)^n s, dropping w-powers below fmin.
Series shift_pow(int n, const Series& s, int fmin) {
  if (n < 0 && fmin == kExact) throw NeedsCut("shift_pow: negative power needs a w-floor");
  SeriesBuilder out;
  for (const auto& [k, c] : s) {
    std::vector<DiffPoly> derivs{c};
    for (int j = 0;; ++j) {
      if (n >= 0 && j > n) break;
      int wp = k.w + n - j;
      if (fmin != kExact && wp < fmin) break;
      Rat bn = binomial(n, j);
      while (static_cast<int>(derivs.size()) <= j) derivs.push_back(derivs.back().d());
      for (int r = 0; r <= j; ++r) {
        if (derivs[static_cast<std::size_t>(r)].is_zero()) break;
        out.add({k.z, wp, k.l + j - r}, derivs[static_cast<std::size_t>(r)], bn * binomial(j, r));
      }
    }
  }
  return out.build();
}

/// P(w+lambda+d) i_z(z-w-lambda-d)^{-1} Y.
Series kernel(const PDO& p, const Series& y, const Window& win) {
  SeriesBuilder out;
  if (y.empty() || p.is_zero()) return out.build();
  int lmax = max_z(y) - 1 - win.zmin;
  std::map<int, Series> cache;
  for (const auto& [m, pm] : p.coeffs()) {
    for (int l = 0; l <= lmax; ++l) {
      int n = m + l;
      auto it = cache.find(n);
      if (it == cache.end()) it = cache.emplace(n, shift_pow(n, y, win.fglob())).first;
      for (const auto& [k, c] : it->second) {
        int e = k.z - l - 1;
        if (!win.in(e, k.w)) continue;
        out.add({e, k.w, k.l}, pm * c);
      }
    }
  }
  return out.build();
}

/// P(z) i_z(z-w-lambda-d)^{-1} X.
Series kernel_left(const PDO& p, const Series& x, const Window& win) {
  SeriesBuilder out;
  if (x.empty() || p.is_zero()) return out.build();
  std::map<int, Series> cache;
  int xz = max_z(x);
  for (const auto& [m, pm] : p.coeffs()) {
    int lmax = m + xz - 1 - win.zmin;
    for (int l = 0; l <= lmax; ++l) {
      auto it = cache.find(l);
      if (it == cache.end()) it = cache.emplace(l, shift_pow(l, x, win.fglob())).first;
      for (const auto& [k, c] : it->second) {
        int e = k.z + m - l - 1;
        if (!win.in(e, k.w)) continue;
        out.add({e, k.w, k.l}, pm * c);
      }
    }
  }
  return out.build();
}

/// P(w+lambda+d) [Y i_z(z-w-lambda)^{-1}], the inner expansion carrying no d.
Series kernel_nod(const PDO& p, const Series& y, const Window& win) {
  SeriesBuilder out;
  if (y.empty() || p.is_zero()) return out.build();
  int lmax = max_z(y) - 1 - win.zmin;
  for (const auto& [r, pr] : p.coeffs()) {
    for (int l = 0; l <= lmax; ++l) {
      int fmin = win.f_bounded ? win.fbase - l : kExact;
      Series s = shift_pow(r, y, fmin);
      for (const auto& [k, c] : s) {
        for (int q = 0; q <= l; ++q) {
          int e = k.z - l - 1;
          int f = k.w + l - q;
          if (!win.in(e, f)) continue;
          out.add({e, f, k.l + q}, pr * c, binomial(l, q));
        }
      }
    }
  }
  return out.build();
}

/// Symbol of the adjoint evaluated at lambda - z, keeping z-powers >= zlow.
Series adjoint_symbol(const PDO& a, int zlow) {
  PDO adj = adjoint(a, a.is_exact() ? kExact : a.floor());
  SeriesBuilder out;
  for (const auto& [n, c] : adj.coeffs()) {
    for (int t = 0;; ++t) {
      if (n >= 0 && t > n) break;
      if (n - t < zlow) break;
      Rat sign = ((n - t) % 2 == 0) ? Rat(1) : Rat(-1);
      out.add({n - t, 0, t}, c, sign * binomial(n, t));
    }
  }
  return out.build();
}

Series symbol_in_w(const PDO& a) {
  Series s;
  for (const auto& [n, c] : a.coeffs()) s.emplace(Key{0, n, 0}, c);
  return s;
}

Series symbol_in_z(const PDO& a) {
  Series s;
  for (const auto& [n, c] : a.coeffs()) s.emplace(Key{n, 0, 0}, c);
  return s;
}

Series unit_series() { return Series{{Key{0, 0, 0}, DiffPoly(1)}}; }

Series product(const Series& a, const Series& b) {
  SeriesBuilder out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) out.add({ka.z + kb.z, ka.w + kb.w, ka.l + kb.l}, ca * cb);
  }
  return out.build();
}

void accumulate(SeriesBuilder& out, const Series& s, const Rat& c) {
  if (c.is_zero()) return;
  for (const auto& [k, v] : s) out.add(k, v, c);
}

/// {A(z)_lambda B(w)} over the window.
Series bracket_series(const PDO& a, const PDO& b, const BracketTable& table, const Window& win) {
  SeriesBuilder out;
  for (const auto& [m, am] : a.coeffs()) {
    for (const auto& [n, bn] : b.coeffs()) {
      if (!win.in(m, n)) continue;
      LambdaPoly v = extend(table, am, bn);
      for (const auto& [t, c] : v.coeffs()) out.add({m, n, t}, c);
    }
  }
  return out.build();
}

std::string compare(const Series& lhs, const Series& rhs, const Window& win) {
  auto il = lhs.begin();
  auto ir = rhs.begin();
  auto report = [](const Key& k, const DiffPoly& d) {
    std::ostringstream os;
    os << "z^" << k.z << " w^" << k.w << " lambda^" << k.l << ": " << d.str();
    return os.str();
  };
  while (il != lhs.end() || ir != rhs.end()) {
    if (ir == rhs.end() || (il != lhs.end() && il->first < ir->first)) {
      if (win.in(il->first.z, il->first.w)) return report(il->first, il->second);
      ++il;
    } else if (il == lhs.end() || ir->first < il->first) {
      if (win.in(ir->first.z, ir->first.w)) return report(ir->first, -ir->second);
      ++ir;
    } else {
      if (win.in(il->first.z, il->first.w) && !(il->second == ir->second)) {
        return report(il->first, il->second - ir->second);
      }
      ++il;
      ++ir;
    }
  }
  return "";
}

Window window_for(const MatPDO& a, int depth) {
  Window win;
  int f = a.floor();
  bool negative = false;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) negative = negative || (!a(i, j).is_zero() && a(i, j).min_degree() < 0);
  }
  win.zmin = depth;
  if (f != kExact || negative) {
    int fl = f == kExact ? depth : f;
    win.zmin = std::max(depth, fl);
    win.f_bounded = true;
    win.fbase = fl;
    win.ord = a.order();
  }
  return win;
}

std::string tuple_label(int i, int j, int h, int k) {
  std::ostringstream os;
  os << "(" << i + 1 << j + 1 << "," << h + 1 << k + 1 << ")";
  return os.str();
}

}  // namespace

Report check_adler(const MatPDO& a0, const BracketTable& table, int depth) {
  Report rep{"adler", {}};
  Window win = window_for(a0, depth);
  MatPDO a = win.f_bounded ? a0.truncated(win.fbase) : a0;
  int n = a.rows();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      Series y = adjoint_symbol(a(i, k), win.zmin + 1);
      Series x = symbol_in_w(a(i, k));
      for (int h = 0; h < n; ++h) {
        for (int j = 0; j < n; ++j) {
          Series lhs = bracket_series(a(i, j), a(h, k), table, win);
          SeriesBuilder rb;
          accumulate(rb, kernel(a(h, j), y, win), Rat(1));
          accumulate(rb, kernel_left(a(h, j), x, win), Rat(-1));
          std::string w = compare(lhs, rb.build(), win);
          rep.items.push_back({tuple_label(i, j, h, k), w.empty(), w});
        }
      }
    }
  }
  return rep;
}

Report check_bi_adler(const MatPDO& a0, const BracketPencil& pencil, const RatMatrix& s, int depth) {
  Report rep{"bi-adler", {}};
  rep.append(check_adler(a0, pencil.bracket0, depth));
  Window win = window_for(a0, depth);
  MatPDO a = win.f_bounded ? a0.truncated(win.fbase) : a0;
  int n = a.rows();
  if (s.rows() != n || s.cols() != n) throw std::invalid_argument("check_bi_adler: S has the wrong shape");
  Series one = unit_series();
  PDO id(1);
  Report first{"first bracket", {}};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      Series y = adjoint_symbol(a(i, k), win.zmin + 1);
      Series x = symbol_in_w(a(i, k));
      for (int h = 0; h < n; ++h) {
        for (int j = 0; j < n; ++j) {
          Series lhs = bracket_series(a(i, j), a(h, k), pencil.bracket1, win);
          SeriesBuilder rb;
          if (!s(i, k).is_zero()) {
            accumulate(rb, kernel(a(h, j), one, win), s(i, k));
            accumulate(rb, kernel_left(a(h, j), one, win), -s(i, k));
          }
          if (!s(h, j).is_zero()) {
            accumulate(rb, kernel(id, y, win), s(h, j));
            accumulate(rb, kernel_left(id, x, win), -s(h, j));
          }
          std::string w = compare(lhs, rb.build(), win);
          first.items.push_back({tuple_label(i, j, h, k), w.empty(), w});
        }
      }
    }
  }
  rep.append(first);
  return rep;
}

Report check_inverse_adler(const MatPDO& a, const BracketTable& table, int depth) {
  Report rep{"inverse-adler", {}};
  MatPDO b = invert(a, depth);
  Report inv = check_adler(b, table.scaled(Rat(-1)), depth);
  inv.name = "inverse is Adler for the opposite bracket";
  rep.append(inv);

  // Mixed identity between A and A^{-1}.
  Window win;
  win.zmin = depth;
  win.f_bounded = true;
  win.fbase = b.floor();
  win.ord = a.order();
  int n = a.rows();
  Report mixed{"mixed bracket", {}};
  PDO id(1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int h = 0; h < n; ++h) {
        for (int k = 0; k < n; ++k) {
          Series lhs = bracket_series(a(i, j), b(h, k), table, win);
          SeriesBuilder rb;
          if (h == j) {
            for (int t = 0; t < n; ++t) {
              Series prod = product(adjoint_symbol(a(i, t), win.zmin + 1), symbol_in_w(b(t, k)));
              accumulate(rb, kernel(id, prod, win), Rat(-1));
            }
          }
          if (i == k) {
            for (int t = 0; t < n; ++t) accumulate(rb, kernel_nod(b(h, t), symbol_in_z(a(t, j)), win), Rat(1));
          }
          std::string w = compare(lhs, rb.build(), win);
          mixed.items.push_back({tuple_label(i, j, h, k), w.empty(), w});
        }
      }
    }
  }
  rep.append(mixed);
  return rep;
}

}  // namespace walgebra
