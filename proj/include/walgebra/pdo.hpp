#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "walgebra/linalg.hpp"
#include "walgebra/ring.hpp"

namespace walgebra {

/// Floor value of an operator known exactly (no truncation).
inline constexpr int kExact = -(1 << 28);

struct NotInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FloorTooHigh : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotMonic : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OrderNotDivisible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// An exact operation would produce an infinite series; supply a cut.
struct NeedsCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar pseudodifferential operator sum_k c_k d^k. Coefficients below
/// `floor` are unknown; kExact marks a finite exact operator.
class PDO {
 public:
  PDO() = default;
  PDO(const DiffPoly& c);  // NOLINT(google-explicit-constructor)
  PDO(int c) : PDO(DiffPoly(c)) {}  // NOLINT(google-explicit-constructor)
  /// c * d^k.
  static PDO term(const DiffPoly& c, int k);
  static PDO d_power(int k) { return term(DiffPoly(1), k); }
  /// (-d)^k.
  static PDO neg_d_power(int k);

  const std::map<int, DiffPoly>& coeffs() const { return c_; }
  const DiffPoly& coeff(int k) const;
  void set_coeff(int k, const DiffPoly& c);
  int floor() const { return floor_; }
  bool is_exact() const { return floor_ == kExact; }
  bool is_zero() const { return c_.empty(); }
  /// Highest degree with a nonzero coefficient; kExact for the zero operator.
  int order() const { return c_.empty() ? kExact : c_.rbegin()->first; }
  /// Highest degree that may be nonzero, counting the unknown tail.
  int eff_order() const;
  int min_degree() const { return c_.empty() ? kExact : c_.begin()->first; }

  /// Drops coefficients below f and raises the floor to at least f.
  PDO truncated(int f) const;

  PDO operator-() const;
  friend PDO operator+(const PDO& a, const PDO& b);
  friend PDO operator-(const PDO& a, const PDO& b);
  /// Left multiplication by a function.
  friend PDO operator*(const DiffPoly& c, const PDO& a);
  PDO& operator+=(const PDO& b) { return *this = *this + b; }
  PDO& operator-=(const PDO& b) { return *this = *this - b; }

  /// Equality on the common known range (degrees >= max floor).
  bool equals_to_floor(const PDO& b) const;
  friend bool operator==(const PDO& a, const PDO& b) = default;

  /// Applies f to every coefficient.
  template <class F>
  PDO map_coeffs(F&& f) const {
    PDO r;
    r.floor_ = floor_;
    for (const auto& [k, c] : c_) r.set_coeff(k, f(c));
    return r;
  }

  std::string str() const;
  std::string latex() const;

 private:
  std::map<int, DiffPoly> c_;
  int floor_ = kExact;
  friend class MatPDO;
};

/// Composition a o b. Result floor is the guaranteed floor, raised to `cut`.
PDO compose(const PDO& a, const PDO& b, int cut = kExact);
/// Formal adjoint.
PDO adjoint(const PDO& a, int cut = kExact);
/// Coefficient of d^{-1}.
DiffPoly residue(const PDO& a);
PDO plus_part(const PDO& a);
PDO minus_part(const PDO& a);

/// Dense matrix of PDOs with a common floor.
class MatPDO {
 public:
  MatPDO() = default;
  MatPDO(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows * cols)) {}
  static MatPDO identity(int n);
  static MatPDO from_constant(const RatMatrix& m);
  static MatPDO scalar(const PDO& a);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  PDO& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
  const PDO& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * cols_ + j)]; }

  int floor() const;
  int order() const;
  int eff_order() const;
  bool is_zero() const;
  /// Coefficient matrix at degree k (entries DiffPoly).
  std::vector<DiffPoly> coeff_matrix(int k) const;
  /// Coefficient at degree k as a constant matrix, or nullopt if some entry is non-constant.
  std::optional<RatMatrix> constant_coeff(int k) const;

  MatPDO truncated(int f) const;
  /// Raises every entry to the common floor.
  MatPDO normalized() const { return truncated(floor()); }

  MatPDO operator-() const;
  friend MatPDO operator+(const MatPDO& a, const MatPDO& b);
  friend MatPDO operator-(const MatPDO& a, const MatPDO& b);
  friend MatPDO operator*(const RatMatrix& c, const MatPDO& a);
  friend MatPDO operator*(const MatPDO& a, const RatMatrix& c);
  bool equals_to_floor(const MatPDO& b) const;
  friend bool operator==(const MatPDO& a, const MatPDO& b) = default;

  template <class F>
  MatPDO map_coeffs(F&& f) const {
    MatPDO r(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].map_coeffs(f);
    return r;
  }

  MatPDO block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const MatPDO& b);

  std::string str() const;
  std::string latex() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<PDO> e_;
};

MatPDO compose(const MatPDO& a, const MatPDO& b, int cut = kExact);
MatPDO adjoint(const MatPDO& a, int cut = kExact);
MatPDO plus_part(const MatPDO& a);
/// Trace of a square matrix.
PDO trace(const MatPDO& a);

/// Two-sided inverse valid down to target_floor (or the best floor the
/// operand precision allows, if higher).
MatPDO invert(const MatPDO& a, int target_floor);
PDO invert(const PDO& a, int target_floor);

/// Generalized quasideterminant (J a^{-1} I)^{-1}.
MatPDO quasideterminant(const MatPDO& a, const RatMatrix& I, const RatMatrix& J, int target_floor);

/// Checks |a + I S0 J|_{IJ} = |a|_{IJ} + S0 on the common known range.
bool shift_quasideterminant_check(const MatPDO& a, const RatMatrix& I, const RatMatrix& J, const RatMatrix& S0,
                                  int target_floor);

/// Monic K-th root of a square operator with identity leading coefficient.
MatPDO kth_root(const MatPDO& a, int K, int target_floor);

/// Integer power by repeated composition.
MatPDO power(const MatPDO& a, int n, int cut);

inline void PrintTo(const PDO& p, std::ostream* os) { *os << p.str(); }
inline void PrintTo(const MatPDO& m, std::ostream* os) { *os << m.str(); }

}  // namespace walgebra
