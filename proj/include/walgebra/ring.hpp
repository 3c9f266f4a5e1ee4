#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "walgebra/rat.hpp"

namespace walgebra {

/// Box (i,h) of a pyramid: row i, column h, both 1-based.
struct Box {
  int i = 1;
  int h = 1;
  auto operator<=>(const Box&) const = default;
};

enum class GenKind : std::uint8_t { AffineBox = 0, WGen = 1, Abstract = 2 };

/// Generator of a differential polynomial algebra.
///   AffineBox(a, b): the variable q_{a,b} paired with the elementary matrix E_{a,b}.
///   WGen(i, j, k):   w_{ij;k}.
///   Abstract(n):     a free generator u_n.
/// Ordering is lexicographic on (kind, indices); it is encoded in `code`.
class GenId {
 public:
  GenId() = default;
  static GenId q(Box a, Box b);
  static GenId w(int i, int j, int k);
  static GenId u(int index);

  GenKind kind() const { return static_cast<GenKind>(code_ >> 60); }
  Box box_a() const { return {field(0), field(1)}; }
  Box box_b() const { return {field(2), field(3)}; }
  int wi() const { return field(0); }
  int wj() const { return field(1); }
  int wk() const { return field(2); }
  int index() const { return field(0) * 256 + field(1); }

  std::uint64_t code() const { return code_; }
  static GenId from_code(std::uint64_t c) { GenId g; g.code_ = c & ~kOrderMask; return g; }

  std::string str() const;
  std::string latex() const;

  auto operator<=>(const GenId&) const = default;

  static constexpr std::uint64_t kOrderMask = (std::uint64_t{1} << 28) - 1;

 private:
  int field(int n) const { return static_cast<int>((code_ >> (52 - 8 * n)) & 0xff); }
  static std::uint64_t pack(GenKind k, int a, int b, int c, int d);
  std::uint64_t code_ = 0;
};

/// u_g^{(n)} packed as gen.code() | n.
struct Var {
  std::uint64_t code = 0;
  Var() = default;
  Var(GenId g, int order) : code(g.code() | static_cast<std::uint64_t>(order)) {}
  GenId gen() const { return GenId::from_code(code); }
  int order() const { return static_cast<int>(code & GenId::kOrderMask); }
  Var derived() const { Var v; v.code = code + 1; return v; }
  auto operator<=>(const Var&) const = default;
};

struct Factor {
  Var var;
  int exp = 1;
  auto operator<=>(const Factor&) const = default;
};

/// Sorted by var; exponents positive.
using Monomial = std::vector<Factor>;

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

Monomial monomial_mul(const Monomial& a, const Monomial& b);

/// Canonical sparse differential polynomial over Rat.
class DiffPoly {
 public:
  using Term = std::pair<Monomial, Rat>;

  DiffPoly() = default;
  DiffPoly(const Rat& c);  // NOLINT(google-explicit-constructor)
  DiffPoly(int c) : DiffPoly(Rat(c)) {}  // NOLINT(google-explicit-constructor)
  static DiffPoly var(GenId g, int order = 0);
  static DiffPoly var(Var v);
  static DiffPoly monomial(Monomial m, Rat c);
  /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
  static DiffPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (coefficient of the empty monomial).
  Rat constant_term() const;
  std::size_t size() const { return terms_.size(); }

  DiffPoly operator-() const;
  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const Rat& c, const DiffPoly& a);
  friend DiffPoly operator*(int c, const DiffPoly& a) { return Rat(c) * a; }
  DiffPoly& operator+=(const DiffPoly& b);
  DiffPoly& operator-=(const DiffPoly& b);
  DiffPoly& operator*=(const DiffPoly& b) { return *this = *this * b; }
  friend bool operator==(const DiffPoly& a, const DiffPoly& b) = default;

  DiffPoly pow(int e) const;

  /// Total derivative.
  DiffPoly d() const;
  DiffPoly d(int times) const;
  /// Partial derivative with respect to the variable u_g^{(n)}.
  DiffPoly partial(GenId g, int n) const;
  DiffPoly partial(Var v) const;

  /// All variables u_g^{(n)} occurring.
  std::set<Var> variables() const;
  std::set<GenId> generators() const;
  int max_order(GenId g) const;

  std::string str() const;
  std::string latex() const;

 private:
  std::vector<Term> terms_;
};

inline void PrintTo(const DiffPoly& p, std::ostream* os) { *os << p.str(); }

/// Accumulates terms and produces a canonical polynomial.
class PolyBuilder {
 public:
  void add(const Monomial& m, const Rat& c);
  void add(const DiffPoly& p, const Rat& scale = Rat(1));
  /// Adds scale * m * p.
  void add_product(const Monomial& m, const Rat& scale, const DiffPoly& p);
  DiffPoly build();

 private:
  std::map<Monomial, Rat> acc_;
};

struct MissingImage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Differential-algebra homomorphism determined by images of generators.
/// Generators absent from the map raise MissingImage unless `keep_others`.
DiffPoly substitute(const DiffPoly& a, const std::map<GenId, DiffPoly>& images, bool keep_others = false);

/// Doubled conformal weights. Returns nullopt if a is not homogeneous.
/// The zero polynomial has no weight (nullopt).
std::optional<int> conformal_weight2(const DiffPoly& a, const std::map<GenId, int>& weights2);

}  // namespace walgebra
