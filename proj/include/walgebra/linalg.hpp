#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "walgebra/rat.hpp"

namespace walgebra {

/// Dense matrix over Rat.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}
  static RatMatrix identity(int n);
  static RatMatrix from_rows(const std::vector<std::vector<Rat>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Rat& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

  bool is_zero() const;
  RatMatrix transpose() const;
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const Rat& c, const RatMatrix& a);
  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) = default;

  int rank() const;
  /// Inverse of a square matrix, or nullopt if singular.
  std::optional<RatMatrix> inverse() const;

  std::string str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rat> a_;
};

/// Reduced row echelon form; `pivots` receives the pivot column of each nonzero row.
RatMatrix rref(const RatMatrix& m, std::vector<int>* pivots = nullptr);

/// Rank factorization M = C * R with C the pivot columns of M and R the
/// nonzero rows of rref(M).
void rank_factorization(const RatMatrix& m, RatMatrix& c, RatMatrix& r);

/// Invertible P, Q with P * M * Q = diag(1_r, 0).
void normal_form(const RatMatrix& m, RatMatrix& p, RatMatrix& q, int& r);

/// Incremental exact solver for sparse linear systems sum_j a_j x_j = b.
class SparseSolver {
 public:
  using Row = std::map<int, Rat>;  // column -> coefficient; column -1 holds the right-hand side

  explicit SparseSolver(int unknowns) : n_(unknowns) {}
  /// Adds an equation; returns false if it is inconsistent with earlier ones.
  bool add_equation(Row row);
  bool consistent() const { return consistent_; }
  int rank() const { return static_cast<int>(pivots_.size()); }
  /// Unique solution, or nullopt if inconsistent or underdetermined.
  std::optional<std::vector<Rat>> unique_solution() const;

 private:
  void reduce(Row& row) const;
  int n_;
  bool consistent_ = true;
  std::map<int, Row> pivots_;  // pivot column -> row with coefficient 1 at pivot
};

}  // namespace walgebra
