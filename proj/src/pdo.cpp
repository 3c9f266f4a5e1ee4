#include "walgebra/pdo.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace walgebra {

namespace {

const DiffPoly& zero_poly() {
  static const DiffPoly z;
  return z;
}

int clamp_floor(int f) { return f < kExact / 2 ? kExact : f; }

int max_floor(int a, int b) { return clamp_floor(std::max(a, b)); }

}  // namespace

// ---------------------------------------------------------------------------
// PDO

PDO::PDO(const DiffPoly& c) {
  if (!c.is_zero()) c_.emplace(0, c);
}

PDO PDO::term(const DiffPoly& c, int k) {
  PDO p;
  if (!c.is_zero()) p.c_.emplace(k, c);
  return p;
}

PDO PDO::neg_d_power(int k) { return term(DiffPoly(k % 2 == 0 ? 1 : -1), k); }

const DiffPoly& PDO::coeff(int k) const {
  auto it = c_.find(k);
  return it == c_.end() ? zero_poly() : it->second;
}

void PDO::set_coeff(int k, const DiffPoly& c) {
  if (c.is_zero()) {
    c_.erase(k);
  } else if (k >= floor_) {
    c_[k] = c;
  }
}

int PDO::eff_order() const {
  if (floor_ == kExact) return order();
  return std::max(order(), floor_ - 1);
}

PDO PDO::truncated(int f) const {
  PDO r = *this;
  r.floor_ = max_floor(floor_, f);
  r.c_.erase(r.c_.begin(), r.c_.lower_bound(r.floor_));
  return r;
}

PDO PDO::operator-() const {
  PDO r = *this;
  for (auto& [k, c] : r.c_) c = -c;
  return r;
}

PDO operator+(const PDO& a, const PDO& b) {
  int f = max_floor(a.floor_, b.floor_);
  PDO r = a.truncated(f);
  for (auto it = b.c_.lower_bound(f); it != b.c_.end(); ++it) r.set_coeff(it->first, r.coeff(it->first) + it->second);
  return r;
}

PDO operator-(const PDO& a, const PDO& b) { return a + (-b); }

PDO operator*(const DiffPoly& c, const PDO& a) {
  PDO r;
  r.floor_ = a.floor_;
  if (c.is_zero()) return r;
  for (const auto& [k, x] : a.c_) r.set_coeff(k, c * x);
  return r;
}

bool PDO::equals_to_floor(const PDO& b) const {
  int f = max_floor(floor_, b.floor_);
  auto ia = c_.lower_bound(f);
  auto ib = b.c_.lower_bound(f);
  while (ia != c_.end() || ib != b.c_.end()) {
    if (ia == c_.end() || ib == b.c_.end()) return false;
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
    ++ia;
    ++ib;
  }
  return true;
}

namespace {

std::string pdo_str(const PDO& p, bool latex) {
  std::ostringstream os;
  bool first = true;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    const auto& [k, c] = *it;
    if (!first) os << " + ";
    first = false;
    std::string cs = latex ? c.latex() : c.str();
    bool single = c.size() == 1;
    bool unit = c.is_constant() && c.constant_term().is_one();
    if (k == 0) {
      os << (single ? cs : "(" + cs + ")");
      continue;
    }
    if (!unit) os << (single ? cs : "(" + cs + ")") << (latex ? " " : "*");
    if (latex) {
      os << "\\partial" << (k == 1 ? "" : "^{" + std::to_string(k) + "}");
    } else {
      os << "d" << (k == 1 ? "" : "^" + std::to_string(k));
    }
  }
  if (first) os << "0";
  if (!p.is_exact()) {
    if (latex) {
      os << " + O(\\partial^{" << p.floor() - 1 << "})";
    } else {
      os << " + O(d^" << p.floor() - 1 << ")";
    }
  }
  return os.str();
}

}  // namespace

std::string PDO::str() const { return pdo_str(*this, false); }
std::string PDO::latex() const { return pdo_str(*this, true); }

PDO compose(const PDO& a, const PDO& b, int cut) {
  int f = clamp_floor(std::max({cut, a.floor() + b.eff_order(), a.eff_order() + b.floor()}));
  std::map<int, PolyBuilder> acc;
  for (const auto& [m, am] : a.coeffs()) {
    for (const auto& [n, bn] : b.coeffs()) {
      int base = m + n;
      if (f != kExact && base < f) continue;
      if (m < 0 && f == kExact && !bn.is_constant()) {
        throw NeedsCut("compose: infinite series requires a truncation floor");
      }
      DiffPoly deriv = bn;
      for (int j = 0;; ++j) {
        int deg = base - j;
        if (f != kExact && deg < f) break;
        if (m >= 0 && j > m) break;
        if (deriv.is_zero()) break;
        Rat c = binomial(m, j);
        if (!c.is_zero()) {
          DiffPoly prod = am * deriv;
          acc[deg].add(prod, c);
        }
        deriv = deriv.d();
      }
    }
  }
  PDO r = PDO().truncated(f);
  for (auto& [k, pb] : acc) r.set_coeff(k, pb.build());
  return r;
}

PDO adjoint(const PDO& a, int cut) {
  int f = max_floor(a.floor(), cut);
  PDO r = PDO().truncated(f);
  std::map<int, PolyBuilder> acc;
  for (const auto& [m, am] : a.coeffs()) {
    if (m < 0 && f == kExact && !am.is_constant()) throw NeedsCut("adjoint: infinite series requires a truncation floor");
    Rat sign = (m % 2 == 0) ? Rat(1) : Rat(-1);
    DiffPoly deriv = am;
    for (int j = 0;; ++j) {
      int deg = m - j;
      if (f != kExact && deg < f) break;
      if (m >= 0 && j > m) break;
      if (deriv.is_zero()) break;
      acc[deg].add(deriv, sign * binomial(m, j));
      deriv = deriv.d();
    }
  }
  for (auto& [k, pb] : acc) r.set_coeff(k, pb.build());
  return r;
}

DiffPoly residue(const PDO& a) {
  if (a.floor() > -1) throw FloorTooHigh("residue: coefficient of d^-1 is not tracked");
  return a.coeff(-1);
}

PDO plus_part(const PDO& a) {
  PDO r;
  for (auto it = a.coeffs().lower_bound(0); it != a.coeffs().end(); ++it) r.set_coeff(it->first, it->second);
  if (a.floor() > 0) r = r.truncated(a.floor());
  return r;
}

PDO minus_part(const PDO& a) {
  PDO r = a;
  PDO p = plus_part(a);
  for (const auto& [k, c] : p.coeffs()) r.set_coeff(k, DiffPoly());
  return r;
}

// ---------------------------------------------------------------------------
// MatPDO

MatPDO MatPDO::identity(int n) {
  MatPDO m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = PDO(1);
  return m;
}

MatPDO MatPDO::from_constant(const RatMatrix& c) {
  MatPDO m(c.rows(), c.cols());
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) m(i, j) = PDO(DiffPoly(c(i, j)));
  }
  return m;
}

MatPDO MatPDO::scalar(const PDO& a) {
  MatPDO m(1, 1);
  m(0, 0) = a;
  return m;
}

int MatPDO::floor() const {
  int f = kExact;
  for (const auto& e : e_) f = std::max(f, e.floor());
  return f;
}

int MatPDO::order() const {
  int o = kExact;
  for (const auto& e : e_) o = std::max(o, e.order());
  return o;
}

int MatPDO::eff_order() const {
  int o = kExact;
  for (const auto& e : e_) o = std::max(o, e.eff_order());
  return o;
}

bool MatPDO::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const PDO& p) { return p.is_zero(); });
}

std::vector<DiffPoly> MatPDO::coeff_matrix(int k) const {
  std::vector<DiffPoly> m;
  m.reserve(e_.size());
  for (const auto& e : e_) m.push_back(e.coeff(k));
  return m;
}

std::optional<RatMatrix> MatPDO::constant_coeff(int k) const {
  RatMatrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const DiffPoly& c = (*this)(i, j).coeff(k);
      if (!c.is_constant()) return std::nullopt;
      m(i, j) = c.constant_term();
    }
  }
  return m;
}

MatPDO MatPDO::truncated(int f) const {
  MatPDO r = *this;
  int g = std::max(f, floor());
  for (auto& e : r.e_) e = e.truncated(g);
  return r;
}

MatPDO MatPDO::operator-() const {
  MatPDO r = *this;
  for (auto& e : r.e_) e = -e;
  return r;
}

MatPDO operator+(const MatPDO& a, const MatPDO& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("MatPDO: shape mismatch in sum");
  MatPDO r(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
  return r.normalized();
}

MatPDO operator-(const MatPDO& a, const MatPDO& b) { return a + (-b); }

MatPDO operator*(const RatMatrix& c, const MatPDO& a) {
  if (c.cols() != a.rows_) throw std::invalid_argument("MatPDO: shape mismatch in constant product");
  MatPDO r(c.rows(), a.cols_);
  int f = a.floor();
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < a.cols_; ++j) {
      PDO s = PDO().truncated(f);
      for (int k = 0; k < c.cols(); ++k) {
        if (!c(i, k).is_zero()) s += DiffPoly(c(i, k)) * a(k, j);
      }
      r(i, j) = s.truncated(f);
    }
  }
  return r;
}

MatPDO operator*(const MatPDO& a, const RatMatrix& c) {
  if (a.cols_ != c.rows()) throw std::invalid_argument("MatPDO: shape mismatch in constant product");
  MatPDO r(a.rows_, c.cols());
  int f = a.floor();
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < c.cols(); ++j) {
      PDO s = PDO().truncated(f);
      for (int k = 0; k < a.cols_; ++k) {
        if (!c(k, j).is_zero()) s += DiffPoly(c(k, j)) * a(i, k);
      }
      r(i, j) = s.truncated(f);
    }
  }
  return r;
}

bool MatPDO::equals_to_floor(const MatPDO& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) return false;
  int f = std::max(floor(), b.floor());
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (!e_[i].truncated(f).equals_to_floor(b.e_[i].truncated(f))) return false;
  }
  return true;
}

MatPDO MatPDO::block(int r0, int c0, int nr, int nc) const {
  MatPDO b(nr, nc);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

void MatPDO::set_block(int r0, int c0, const MatPDO& b) {
  for (int i = 0; i < b.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
}

std::string MatPDO::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ";\n " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
  }
  os << "]";
  return os.str();
}

std::string MatPDO::latex() const {
  if (rows_ == 1 && cols_ == 1) return (*this)(0, 0).latex();
  std::ostringstream os;
  os << "\\begin{pmatrix}";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? " \\\\ " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? " & " : "") << (*this)(i, j).latex();
  }
  os << "\\end{pmatrix}";
  return os.str();
}

MatPDO compose(const MatPDO& a, const MatPDO& b, int cut) {
  if (a.cols() != b.rows()) throw std::invalid_argument("MatPDO: shape mismatch in composition");
  int f = clamp_floor(std::max({cut, a.floor() + b.eff_order(), a.eff_order() + b.floor()}));
  MatPDO r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      PDO s = PDO().truncated(f);
      for (int k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        s += compose(a(i, k), b(k, j), f);
      }
      r(i, j) = s.truncated(f);
    }
  }
  return r;
}

MatPDO adjoint(const MatPDO& a, int cut) {
  MatPDO r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(j, i) = adjoint(a(i, j), cut);
  }
  return r.normalized();
}

MatPDO plus_part(const MatPDO& a) {
  MatPDO r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(i, j) = plus_part(a(i, j));
  }
  return r;
}

PDO trace(const MatPDO& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("trace: square matrix required");
  PDO s = PDO().truncated(a.floor());
  for (int i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

MatPDO power(const MatPDO& a, int n, int cut) {
  if (n < 0) throw std::invalid_argument("power: negative exponent");
  if (a.rows() != a.cols()) throw std::invalid_argument("power: square matrix required");
  if (n == 0) return MatPDO::identity(a.rows());
  int ord = a.eff_order();
  auto stage_cut = [&](int remaining) { return cut == kExact ? kExact : cut - ord * remaining; };
  MatPDO acc = a.truncated(stage_cut(n - 1));
  for (int j = 2; j <= n; ++j) acc = compose(acc, a, stage_cut(n - j));
  return acc;
}

// ---------------------------------------------------------------------------
// Inversion

namespace {

using PolyMat = std::vector<DiffPoly>;  // row-major n x n

PolyMat mat_mul(const PolyMat& c, const PolyMat& m, int n) {
  PolyMat r(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      PolyBuilder b;
      for (int k = 0; k < n; ++k) {
        const DiffPoly& x = c[static_cast<std::size_t>(i * n + k)];
        const DiffPoly& y = m[static_cast<std::size_t>(k * n + j)];
        if (!x.is_zero() && !y.is_zero()) b.add(x * y);
      }
      r[static_cast<std::size_t>(i * n + j)] = b.build();
    }
  }
  return r;
}

DiffPoly poly_det(const PolyMat& m, const std::vector<int>& rows, const std::vector<int>& cols, int n) {
  if (rows.empty()) return DiffPoly(1);
  PolyBuilder b;
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t t = 0; t < cols.size(); ++t) {
    const DiffPoly& e = m[static_cast<std::size_t>(rows[0] * n + cols[t])];
    if (e.is_zero()) continue;
    std::vector<int> sub_cols = cols;
    sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(t));
    DiffPoly minor = poly_det(m, sub_rows, sub_cols, n);
    if (!minor.is_zero()) b.add(e * minor, (t % 2 == 0) ? Rat(1) : Rat(-1));
  }
  return b.build();
}

/// Inverse over the differential polynomials, when the determinant is a nonzero constant.
std::optional<PolyMat> poly_inverse(const PolyMat& m, int n) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  DiffPoly det = poly_det(m, all, all, n);
  if (det.is_zero() || !det.is_constant()) return std::nullopt;
  Rat inv = det.constant_term().inverse();
  PolyMat r(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows, cols;
      for (int t = 0; t < n; ++t) {
        if (t != j) rows.push_back(t);
        if (t != i) cols.push_back(t);
      }
      Rat sign = ((i + j) % 2 == 0) ? inv : -inv;
      r[static_cast<std::size_t>(i * n + j)] = sign * poly_det(m, rows, cols, n);
    }
  }
  return r;
}

/// Right inverse of an operator whose leading coefficient at `n` is
/// invertible over the differential polynomials, with inverse `l0inv`.
MatPDO direct_inverse(const MatPDO& a, int n, const PolyMat& l0inv, int target) {
  int dim = a.rows();
  int possible = a.floor() == kExact ? kExact : a.floor() - 2 * n;
  int fr = max_floor(target, possible);
  if (fr == kExact) throw NeedsCut("invert: target floor required");
  int steps = -n - fr;
  std::vector<std::vector<PolyMat>> derivs;  // derivs[i][j] = B_i^{(j)}
  std::vector<PolyMat> bk;
  for (int k = 0; k <= steps; ++k) {
    std::vector<PolyBuilder> cacc(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < k; ++i) {
      for (int m = n; m >= n + i - k; --m) {
        int j = m - n - i + k;
        if (m >= 0 && j > m) continue;
        Rat bin = binomial(m, j);
        if (bin.is_zero()) continue;
        auto& dv = derivs[static_cast<std::size_t>(i)];
        while (static_cast<int>(dv.size()) <= j) {
          PolyMat nx(static_cast<std::size_t>(dim * dim));
          for (std::size_t t = 0; t < nx.size(); ++t) nx[t] = dv.back()[t].d();
          dv.push_back(std::move(nx));
        }
        const PolyMat& bij = dv[static_cast<std::size_t>(j)];
        for (int r = 0; r < dim; ++r) {
          for (int s = 0; s < dim; ++s) {
            const DiffPoly& am = a(r, s).coeff(m);
            if (am.is_zero()) continue;
            for (int c = 0; c < dim; ++c) {
              const DiffPoly& x = bij[static_cast<std::size_t>(s * dim + c)];
              if (x.is_zero()) continue;
              cacc[static_cast<std::size_t>(r * dim + c)].add(am * x, bin);
            }
          }
        }
      }
    }
    PolyMat rhs(static_cast<std::size_t>(dim * dim));
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        DiffPoly v = -cacc[static_cast<std::size_t>(r * dim + c)].build();
        if (k == 0 && r == c) v += DiffPoly(1);
        rhs[static_cast<std::size_t>(r * dim + c)] = v;
      }
    }
    PolyMat b = mat_mul(l0inv, rhs, dim);
    derivs.push_back({b});
    bk.push_back(std::move(b));
  }
  MatPDO res(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      PDO p = PDO().truncated(fr);
      for (int k = 0; k <= steps; ++k) p.set_coeff(-n - k, bk[static_cast<std::size_t>(k)][static_cast<std::size_t>(r * dim + c)]);
      res(r, c) = p;
    }
  }
  return res;
}

PDO shifted(const PDO& p, int s) {
  PDO r = PDO().truncated(p.is_exact() ? kExact : p.floor() + s);
  for (const auto& [k, c] : p.coeffs()) r.set_coeff(k + s, c);
  return r;
}

/// Exact inverse of a differential operator F + D with F constant invertible
/// and F^{-1} D nilpotent: sum_k (-F^{-1} D)^k F^{-1}.
std::optional<MatPDO> neumann_inverse(const MatPDO& a) {
  if (a.floor() != kExact || a.is_zero()) return std::nullopt;
  int dim = a.rows();
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (!a(i, j).is_zero() && a(i, j).min_degree() < 0) return std::nullopt;
    }
  }
  RatMatrix f(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) f(i, j) = a(i, j).coeff(0).constant_term();
  }
  auto finv = f.inverse();
  if (!finv) return std::nullopt;
  MatPDO step = -(*finv * (a - MatPDO::from_constant(f)));
  MatPDO term = MatPDO::from_constant(*finv);
  MatPDO sum = term;
  for (int k = 0; k <= 2 * dim + 2; ++k) {
    term = compose(step, term);
    if (term.is_zero()) return sum;
    sum = sum + term;
  }
  return std::nullopt;
}

MatPDO invert_impl(const MatPDO& a0, int target, int depth);

/// Exact nonzero constant entry usable as an elimination pivot.
std::optional<std::pair<int, int>> constant_pivot(const MatPDO& a) {
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const PDO& e = a(i, j);
      if (e.is_exact() && e.coeffs().size() == 1 && e.min_degree() == 0 && e.coeff(0).is_constant()) {
        return std::make_pair(i, j);
      }
    }
  }
  return std::nullopt;
}

/// Inverse by eliminating the constant entry (pi, pj) and inverting the
/// Schur complement of size dim - 1.
MatPDO pivot_inverse(const MatPDO& a, int pi, int pj, int target, int depth) {
  int dim = a.rows();
  Rat cinv = a(pi, pj).coeff(0).constant_term().inverse();
  std::vector<int> rows, cols;
  for (int t = 0; t < dim; ++t) {
    if (t != pi) rows.push_back(t);
    if (t != pj) cols.push_back(t);
  }
  int m = dim - 1;
  MatPDO b(1, m), d(m, 1), e(m, m);
  for (int t = 0; t < m; ++t) {
    b(0, t) = a(pi, cols[static_cast<std::size_t>(t)]);
    d(t, 0) = a(rows[static_cast<std::size_t>(t)], pj);
    for (int u = 0; u < m; ++u) e(t, u) = a(rows[static_cast<std::size_t>(t)], cols[static_cast<std::size_t>(u)]);
  }
  int lift = std::max(0, b.eff_order()) + std::max(0, d.eff_order());
  int inner = target - lift;
  RatMatrix cm(1, 1);
  cm(0, 0) = cinv;
  MatPDO db = compose(d, cm * b, inner);  // d c^{-1} b
  MatPDO schur = (e - db).normalized();
  MatPDO sinv;
  try {
    sinv = invert_impl(schur, inner, depth);
  } catch (const NotInvertible& ex) {
    throw NotInvertible(std::string("Schur complement of a constant pivot: ") + ex.what());
  }
  MatPDO x = compose(cm * b, sinv, target - std::max(0, d.eff_order()));  // c^{-1} b S^{-1}
  MatPDO y = compose(sinv, d * cm, target - std::max(0, b.eff_order()));  // S^{-1} d c^{-1}
  MatPDO corner = compose(x, d * cm, target);                          // c^{-1} b S^{-1} d c^{-1}
  // Inverse rows are indexed by the columns of a and vice versa.
  MatPDO res(dim, dim);
  res(pj, pi) = PDO(DiffPoly(cinv)) + corner(0, 0);
  for (int t = 0; t < m; ++t) {
    res(pj, rows[static_cast<std::size_t>(t)]) = -x(0, t);
    res(cols[static_cast<std::size_t>(t)], pi) = -y(t, 0);
    for (int u = 0; u < m; ++u) res(cols[static_cast<std::size_t>(t)], rows[static_cast<std::size_t>(u)]) = sinv(t, u);
  }
  return res.floor() == kExact ? res : res.truncated(std::max(target, res.floor()));
}

MatPDO invert_impl(const MatPDO& a0, int target, int depth) {
  MatPDO a = a0.normalized();
  int dim = a.rows();
  if (a.rows() != a.cols()) throw std::invalid_argument("invert: square matrix required");
  if (a.is_zero()) throw NotInvertible("operator vanishes to the tracked floor");
  int n = a.order();

  // Route 0: exact elimination on constant entries, then a terminating
  // geometric series around an invertible constant part.
  if (dim > 1) {
    if (auto pv = constant_pivot(a)) return pivot_inverse(a, pv->first, pv->second, target, depth);
  } else if (constant_pivot(a)) {
    return MatPDO::from_constant(*a.constant_coeff(0)->inverse());
  }
  if (auto exact = neumann_inverse(a)) return *exact;

  // Route 1: leading coefficient invertible over the differential polynomials.
  auto l0 = a.constant_coeff(n);
  if (auto inv = poly_inverse(a.coeff_matrix(n), dim)) return direct_inverse(a, n, *inv, target);

  // Route 2: column-wise leading coefficients, A = C diag(d^{m_j}).
  std::vector<int> mcol(static_cast<std::size_t>(dim)), mrow(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    int m = kExact;
    for (int i = 0; i < dim; ++i) m = std::max(m, a(i, j).order());
    if (m == kExact) throw NotInvertible("column " + std::to_string(j) + " vanishes to the tracked floor");
    mcol[static_cast<std::size_t>(j)] = m;
  }
  for (int i = 0; i < dim; ++i) {
    int m = kExact;
    for (int j = 0; j < dim; ++j) m = std::max(m, a(i, j).order());
    if (m == kExact) throw NotInvertible("row " + std::to_string(i) + " vanishes to the tracked floor");
    mrow[static_cast<std::size_t>(i)] = m;
  }
  {
    MatPDO c(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) c(i, j) = shifted(a(i, j), -mcol[static_cast<std::size_t>(j)]);
    }
    c = c.normalized();
    if (auto c0inv = poly_inverse(c.coeff_matrix(0), dim)) {
      int mmin = *std::min_element(mcol.begin(), mcol.end());
      MatPDO cinv = direct_inverse(c, 0, *c0inv, target + mmin);
      MatPDO res(dim, dim);
      for (int i = 0; i < dim; ++i) {
        PDO dinv = PDO::d_power(-mcol[static_cast<std::size_t>(i)]);
        for (int j = 0; j < dim; ++j) res(i, j) = compose(dinv, cinv(i, j), target);
      }
      return res.normalized();
    }
  }

  // Route 3: row-wise leading coefficients, A = diag(d^{n_i}) R.
  {
    int nmin = *std::min_element(mrow.begin(), mrow.end());
    MatPDO r(dim, dim);
    for (int i = 0; i < dim; ++i) {
      PDO dinv = PDO::d_power(-mrow[static_cast<std::size_t>(i)]);
      for (int j = 0; j < dim; ++j) r(i, j) = compose(dinv, a(i, j), target + nmin);
    }
    r = r.normalized();
    if (auto r0inv = poly_inverse(r.coeff_matrix(0), dim)) {
      MatPDO rinv = direct_inverse(r, 0, *r0inv, target + nmin);
      MatPDO res(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) res(i, j) = shifted(rinv(i, j), -mrow[static_cast<std::size_t>(j)]).truncated(target);
      }
      return res.normalized();
    }
  }

  // Route 4: constant singular leading coefficient, block reduction to
  // diag(1_r, 0) followed by the Schur complement formula.
  if (!l0) throw NotInvertible("leading coefficient is not constant; inversion over the fraction field is unsupported");
  if (depth > 4 || dim == 1) throw NotInvertible("leading coefficient is singular");
  RatMatrix p, q;
  int rk = 0;
  normal_form(*l0, p, q, rk);
  MatPDO ap = p * a * q;
  int s = dim - rk;
  int margin = 2 * (std::abs(n) + 2);
  int inner = target - 2 * margin;
  MatPDO a11 = ap.block(0, 0, rk, rk);
  MatPDO a12 = ap.block(0, rk, rk, s);
  MatPDO a21 = ap.block(rk, 0, s, rk);
  MatPDO a22 = ap.block(rk, rk, s, s);
  MatPDO a11inv = invert_impl(a11, inner, depth + 1);
  MatPDO x = compose(a11inv, a12, inner);                 // A11^{-1} A12
  MatPDO y = compose(a21, a11inv, inner);                 // A21 A11^{-1}
  MatPDO schur = (a22 - compose(a21, x, inner)).normalized();
  if (schur.is_zero()) {
    throw NotInvertible("Schur complement A22 - A21 A11^{-1} A12 vanishes to the tracked floor (" +
                        std::to_string(schur.floor()) + ")");
  }
  MatPDO sinv;
  try {
    sinv = invert_impl(schur, inner, depth + 1);
  } catch (const NotInvertible& e) {
    throw NotInvertible(std::string("Schur complement not invertible: ") + e.what());
  }
  MatPDO b12 = -compose(x, sinv, inner);
  MatPDO b21 = -compose(sinv, y, inner);
  MatPDO b11 = a11inv + compose(compose(x, sinv, inner), y, inner);
  MatPDO bp(dim, dim);
  bp.set_block(0, 0, b11);
  bp.set_block(0, rk, b12);
  bp.set_block(rk, 0, b21);
  bp.set_block(rk, rk, sinv);
  bp = bp.normalized();
  return (q * bp * p).truncated(target);
}

}  // namespace

MatPDO invert(const MatPDO& a, int target_floor) { return invert_impl(a, target_floor, 0); }

PDO invert(const PDO& a, int target_floor) { return invert(MatPDO::scalar(a), target_floor)(0, 0); }

namespace {

/// Row index of the unit vector in each column of m, if m is a selection matrix.
std::optional<std::vector<int>> selection(const RatMatrix& m) {
  std::vector<int> out;
  std::vector<bool> used(static_cast<std::size_t>(m.rows()), false);
  for (int j = 0; j < m.cols(); ++j) {
    int hit = -1;
    for (int i = 0; i < m.rows(); ++i) {
      if (m(i, j).is_zero()) continue;
      if (!m(i, j).is_one() || hit >= 0) return std::nullopt;
      hit = i;
    }
    if (hit < 0 || used[static_cast<std::size_t>(hit)]) return std::nullopt;
    used[static_cast<std::size_t>(hit)] = true;
    out.push_back(hit);
  }
  return out;
}

MatPDO submatrix(const MatPDO& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  MatPDO r(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) r(static_cast<int>(i), static_cast<int>(j)) = a(rows[i], cols[j]);
  }
  return r;
}

std::vector<int> complement(const std::vector<int>& sel, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (std::find(sel.begin(), sel.end(), i) == sel.end()) out.push_back(i);
  }
  return out;
}

/// (A^{-1})[rho, gamma]^{-1} = A[gamma, rho] - A[gamma, rho^c] A[gamma^c, rho^c]^{-1} A[gamma^c, rho].
MatPDO schur_quasideterminant(const MatPDO& a, const std::vector<int>& gamma, const std::vector<int>& rho, int target) {
  int n = a.rows();
  std::vector<int> gc = complement(gamma, n);
  std::vector<int> rc = complement(rho, n);
  MatPDO top = submatrix(a, gamma, rho);
  if (gc.empty()) return top.floor() == kExact ? top : top.truncated(target);
  MatPDO b = submatrix(a, gamma, rc);
  MatPDO c = submatrix(a, gc, rho);
  MatPDO m = submatrix(a, gc, rc);
  int lift = std::max(0, b.eff_order()) + std::max(0, c.eff_order());
  int inner = target - lift - 2;
  MatPDO minv;
  try {
    minv = invert(m, inner);
  } catch (const NotInvertible& e) {
    throw NotInvertible(std::string("quasideterminant stage complementary block: ") + e.what());
  }
  MatPDO corr = compose(compose(b, minv, target - std::max(0, c.eff_order())), c, target);
  MatPDO res = top - corr;
  return res.floor() == kExact ? res : res.truncated(target);
}

}  // namespace

MatPDO quasideterminant(const MatPDO& a, const RatMatrix& I, const RatMatrix& J, int target_floor) {
  if (a.rows() != a.cols()) throw std::invalid_argument("quasideterminant: square operator required");
  if (I.rows() != a.rows() || J.cols() != a.cols() || I.cols() != J.rows()) {
    throw std::invalid_argument("quasideterminant: shape mismatch");
  }
  auto rows_sel = selection(J.transpose());
  auto cols_sel = selection(I);
  if (rows_sel && cols_sel) return schur_quasideterminant(a, *cols_sel, *rows_sel, target_floor);
  int ord_x = -a.order();
  for (int attempt = 0; attempt < 6; ++attempt) {
    int t1 = target_floor + 2 * ord_x - 2 * attempt;
    MatPDO ainv;
    try {
      ainv = invert(a, t1);
    } catch (const NotInvertible& e) {
      throw NotInvertible(std::string("quasideterminant stage A^{-1}: ") + e.what());
    }
    MatPDO x = J * ainv * I;
    MatPDO y;
    try {
      y = invert(x, target_floor);
    } catch (const NotInvertible& e) {
      throw NotInvertible(std::string("quasideterminant stage (J A^{-1} I)^{-1}: ") + e.what());
    }
    if (y.floor() <= target_floor || (a.floor() != kExact && ainv.floor() > t1)) return y.truncated(target_floor);
    if (!x.is_zero()) ord_x = std::min(ord_x, x.order());
  }
  throw NotInvertible("quasideterminant: could not reach the target floor");
}

bool shift_quasideterminant_check(const MatPDO& a, const RatMatrix& I, const RatMatrix& J, const RatMatrix& S0,
                                  int target_floor) {
  RatMatrix s = I * S0 * J;
  MatPDO lhs = quasideterminant(a + MatPDO::from_constant(s), I, J, target_floor);
  MatPDO rhs = quasideterminant(a, I, J, target_floor) + MatPDO::from_constant(S0);
  return lhs.equals_to_floor(rhs);
}

MatPDO kth_root(const MatPDO& a0, int K, int target_floor) {
  if (K < 1) throw std::invalid_argument("kth_root: K must be positive");
  MatPDO a = a0.normalized();
  int dim = a.rows();
  if (a.rows() != a.cols()) throw std::invalid_argument("kth_root: square operator required");
  int p = a.order();
  auto lead = a.constant_coeff(p);
  if (!lead || !(*lead == RatMatrix::identity(dim))) throw NotMonic("kth_root: leading coefficient is not the identity");
  if (p % K != 0) throw OrderNotDivisible("kth_root: order " + std::to_string(p) + " not divisible by " + std::to_string(K));
  if (K == 1) return a.truncated(target_floor);
  int m = p / K;
  int possible = a.floor() == kExact ? kExact : m - (p - a.floor());
  int fr = max_floor(target_floor, possible);
  if (fr == kExact) throw NeedsCut("kth_root: target floor required");
  MatPDO b(dim, dim);
  for (int i = 0; i < dim; ++i) b(i, i) = PDO::d_power(m);
  Rat invk = Rat(1, K);
  for (int k = 1; m - k >= fr; ++k) {
    MatPDO bk = power(b, K, p - k);
    MatPDO nb = b;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        DiffPoly c = invk * (a(i, j).coeff(p - k) - bk(i, j).coeff(p - k));
        nb(i, j).set_coeff(m - k, c);
      }
    }
    b = nb;
  }
  return b.truncated(fr);
}

}  // namespace walgebra
