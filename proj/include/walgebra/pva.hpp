#pragma once

#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "walgebra/linalg.hpp"
#include "walgebra/pdo.hpp"
#include "walgebra/ring.hpp"

namespace walgebra {

/// Polynomial in lambda with DiffPoly coefficients.
class LambdaPoly {
 public:
  LambdaPoly() = default;
  LambdaPoly(const DiffPoly& c);  // NOLINT(google-explicit-constructor)
  static LambdaPoly term(const DiffPoly& c, int power);

  const std::map<int, DiffPoly>& coeffs() const { return c_; }
  const DiffPoly& coeff(int m) const;
  void add_to(int m, const DiffPoly& c);
  bool is_zero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? -1 : c_.rbegin()->first; }
  DiffPoly at_zero() const { return coeff(0); }

  LambdaPoly operator-() const;
  friend LambdaPoly operator+(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator*(const DiffPoly& c, const LambdaPoly& a);
  friend LambdaPoly operator*(const Rat& c, const LambdaPoly& a);
  LambdaPoly& operator+=(const LambdaPoly& b) { return *this = *this + b; }
  LambdaPoly& operator-=(const LambdaPoly& b) { return *this = *this - b; }
  friend bool operator==(const LambdaPoly& a, const LambdaPoly& b) = default;

  /// (lambda + d)^n applied to this, d acting on coefficients.
  LambdaPoly shifted(int n) const;
  /// Substitutes lambda -> -lambda - d, d acting on coefficients.
  LambdaPoly reflected() const;

  template <class F>
  LambdaPoly map_coeffs(F&& f) const {
    LambdaPoly r;
    for (const auto& [m, c] : c_) r.add_to(m, f(c));
    return r;
  }

  std::string str() const;
  std::string latex() const;

 private:
  std::map<int, DiffPoly> c_;
};

inline void PrintTo(const LambdaPoly& p, std::ostream* os) { *os << p.str(); }

struct MissingEntry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lambda-brackets {a_lambda b} on a declared generator set.
class BracketTable {
 public:
  BracketTable() = default;
  explicit BracketTable(std::vector<GenId> generators) : gens_(std::move(generators)) {}

  const std::vector<GenId>& generators() const { return gens_; }
  void set(GenId a, GenId b, LambdaPoly v);
  /// Entry {a_lambda b}; MissingEntry if the pair is not declared.
  const LambdaPoly& get(GenId a, GenId b) const;
  bool has(GenId a, GenId b) const { return entries_.count({a, b}) != 0; }
  const std::map<std::pair<GenId, GenId>, LambdaPoly>& entries() const { return entries_; }

  friend BracketTable operator+(const BracketTable& a, const BracketTable& b);
  BracketTable scaled(const Rat& c) const;
  /// Copy with one nonzero entry negated, off-diagonal pairs first (negative controls).
  BracketTable corrupted() const;

 private:
  std::vector<GenId> gens_;
  std::map<std::pair<GenId, GenId>, LambdaPoly> entries_;
};

struct BracketPencil {
  BracketTable bracket0;
  BracketTable bracket1;
  /// bracket0 + eps * bracket1.
  BracketTable at(const Rat& eps) const { return bracket0 + bracket1.scaled(eps); }
};

/// Master-formula extension of a generator table to arbitrary elements.
LambdaPoly extend(const BracketTable& table, const DiffPoly& f, const DiffPoly& g);

struct CheckItem {
  std::string label;
  bool pass = true;
  std::string witness;
};

struct Report {
  std::string name;
  std::vector<CheckItem> items;
  bool ok() const;
  int failures() const;
  void append(const Report& other);
  std::string summary() const;
};

Report check_skew(const BracketTable& table);
Report check_jacobi(const BracketTable& table);

DiffPoly variational_derivative(const DiffPoly& h, GenId g);
/// True iff h lies in dV (no constant term, all variational derivatives vanish).
bool is_total_derivative(const DiffPoly& h);
/// {int h, u} for a generator u.
DiffPoly hamiltonian_flow(const BracketTable& table, const DiffPoly& h, GenId u);
bool check_involution(const BracketTable& table, const DiffPoly& h1, const DiffPoly& h2);

/// Adler identity for the square operator A, comparing z-powers down to
/// `depth` (and the precision window implied by A's floor).
Report check_adler(const MatPDO& a, const BracketTable& table, int depth);
/// A + eps*S is Adler for bracket0 + eps*bracket1.
Report check_bi_adler(const MatPDO& a, const BracketPencil& pencil, const RatMatrix& s, int depth);
/// A^{-1} Adler for the negated bracket and the mixed identity between A and A^{-1}.
Report check_inverse_adler(const MatPDO& a, const BracketTable& table, int depth);

}  // namespace walgebra
