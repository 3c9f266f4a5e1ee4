#include "walgebra/linalg.hpp"

#include <sstream>
#include <stdexcept>

namespace walgebra {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Rat(1);
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rat>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  RatMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c) throw std::invalid_argument("RatMatrix: ragged rows");
    for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : a_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

RatMatrix operator*(const Rat& c, const RatMatrix& a) {
  RatMatrix r = a;
  for (auto& x : r.a_) x = c * x;
  return r;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("RatMatrix: shape mismatch in product");
  RatMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const Rat& x = a(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
      }
    }
  }
  return c;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RatMatrix: shape mismatch in sum");
  RatMatrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RatMatrix: shape mismatch in difference");
  RatMatrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

RatMatrix rref(const RatMatrix& m, std::vector<int>* pivots) {
  RatMatrix a = m;
  int row = 0;
  if (pivots) pivots->clear();
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int p = -1;
    for (int i = row; i < a.rows(); ++i) {
      if (!a(i, col).is_zero()) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    for (int j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(p, j));
    Rat inv = a(row, col).inverse();
    for (int j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      Rat f = a(i, col);
      for (int j = 0; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    if (pivots) pivots->push_back(col);
    ++row;
  }
  return a;
}

int RatMatrix::rank() const {
  std::vector<int> piv;
  rref(*this, &piv);
  return static_cast<int>(piv.size());
}

std::optional<RatMatrix> RatMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("RatMatrix: inverse of non-square matrix");
  int n = rows_;
  RatMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = Rat(1);
  }
  std::vector<int> piv;
  RatMatrix r = rref(aug, &piv);
  if (static_cast<int>(piv.size()) < n || piv[static_cast<std::size_t>(n - 1)] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  }
  return inv;
}

std::string RatMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).str();
  }
  os << "]";
  return os.str();
}

void rank_factorization(const RatMatrix& m, RatMatrix& c, RatMatrix& r) {
  std::vector<int> piv;
  RatMatrix e = rref(m, &piv);
  int k = static_cast<int>(piv.size());
  c = RatMatrix(m.rows(), k);
  r = RatMatrix(k, m.cols());
  for (int t = 0; t < k; ++t) {
    for (int i = 0; i < m.rows(); ++i) c(i, t) = m(i, piv[static_cast<std::size_t>(t)]);
    for (int j = 0; j < m.cols(); ++j) r(t, j) = e(t, j);
  }
}

void normal_form(const RatMatrix& m, RatMatrix& p, RatMatrix& q, int& r) {
  if (m.rows() != m.cols()) throw std::invalid_argument("normal_form: square matrix required");
  int n = m.rows();
  // Row reduction gives P with P*M = E (rref).
  RatMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Rat(1);
  }
  RatMatrix red = rref(aug, nullptr);
  // rref of the augmented matrix may pivot in the identity half; recover E = P*M.
  p = RatMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = red(i, n + j);
  }
  RatMatrix e = p * m;
  std::vector<int> piv;
  for (int i = 0; i < n; ++i) {
    int c = -1;
    for (int j = 0; j < n; ++j) {
      if (!e(i, j).is_zero()) {
        c = j;
        break;
      }
    }
    if (c >= 0) piv.push_back(c);
  }
  r = static_cast<int>(piv.size());
  // Column operations: clear non-pivot entries of pivot rows, then permute pivots first.
  q = RatMatrix::identity(n);
  std::vector<bool> is_piv(static_cast<std::size_t>(n), false);
  for (int c : piv) is_piv[static_cast<std::size_t>(c)] = true;
  for (int t = 0; t < r; ++t) {
    int c = piv[static_cast<std::size_t>(t)];
    for (int j = 0; j < n; ++j) {
      if (j == c || e(t, j).is_zero()) continue;
      // column j -= e(t,j) * column c, applied to both e and q
      Rat f = e(t, j);
      for (int i = 0; i < n; ++i) {
        e(i, j) -= f * e(i, c);
        q(i, j) -= f * q(i, c);
      }
    }
  }
  RatMatrix perm(n, n);
  int next = 0;
  for (int t = 0; t < r; ++t) perm(piv[static_cast<std::size_t>(t)], next++) = Rat(1);
  for (int j = 0; j < n; ++j) {
    if (!is_piv[static_cast<std::size_t>(j)]) perm(j, next++) = Rat(1);
  }
  q = q * perm;
}

void SparseSolver::reduce(Row& row) const {
  for (auto it = row.begin(); it != row.end();) {
    if (it->first < 0) {
      ++it;
      continue;
    }
    auto pv = pivots_.find(it->first);
    if (pv == pivots_.end()) {
      ++it;
      continue;
    }
    Rat f = it->second;
    int col = it->first;
    for (const auto& [c, v] : pv->second) {
      Rat& x = row[c];
      x -= f * v;
    }
    // Drop zeros and restart after the eliminated column.
    for (auto z = row.begin(); z != row.end();) {
      if (z->second.is_zero()) {
        z = row.erase(z);
      } else {
        ++z;
      }
    }
    it = row.upper_bound(col);
  }
}

bool SparseSolver::add_equation(Row row) {
  for (auto z = row.begin(); z != row.end();) {
    if (z->second.is_zero()) {
      z = row.erase(z);
    } else {
      ++z;
    }
  }
  reduce(row);
  auto first = row.lower_bound(0);
  if (first == row.end()) {
    if (!row.empty()) consistent_ = false;
    return consistent_;
  }
  int col = first->first;
  Rat inv = first->second.inverse();
  for (auto& [c, v] : row) v *= inv;
  for (auto& [pc, prow] : pivots_) {
    auto hit = prow.find(col);
    if (hit == prow.end()) continue;
    Rat f = hit->second;
    for (const auto& [c, v] : row) prow[c] -= f * v;
    for (auto z = prow.begin(); z != prow.end();) {
      if (z->second.is_zero()) {
        z = prow.erase(z);
      } else {
        ++z;
      }
    }
  }
  pivots_.emplace(col, std::move(row));
  return consistent_;
}

std::optional<std::vector<Rat>> SparseSolver::unique_solution() const {
  if (!consistent_ || static_cast<int>(pivots_.size()) != n_) return std::nullopt;
  std::vector<Rat> x(static_cast<std::size_t>(n_));
  for (const auto& [c, row] : pivots_) {
    auto it = row.find(-1);
    x[static_cast<std::size_t>(c)] = it == row.end() ? Rat(0) : it->second;
  }
  return x;
}

}  // namespace walgebra
