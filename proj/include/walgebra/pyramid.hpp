#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "walgebra/linalg.hpp"
#include "walgebra/pdo.hpp"
#include "walgebra/pva.hpp"
#include "walgebra/ring.hpp"

namespace walgebra {

struct BadPartition : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SNotTopDegree : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Pyramid of a partition p_1 >= ... >= p_r > 0 of N. Boxes (i,h) are
/// ordered row by row; E_{(ih),(jk)} has ad x eigenvalue (p_i-p_j)/2-(h-k).
class Pyramid {
 public:
  explicit Pyramid(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  /// 1-based row length.
  int part(int i) const { return parts_[static_cast<std::size_t>(i - 1)]; }
  int r() const { return static_cast<int>(parts_.size()); }
  int r1() const { return r1_; }
  int N() const { return static_cast<int>(boxes_.size()); }
  int depth() const { return parts_.front() - 1; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool contains(Box b) const { return b.i >= 1 && b.i <= r() && b.h >= 1 && b.h <= part(b.i); }
  int index(Box b) const;

  /// Doubled ad x eigenvalue of E_{a,b}.
  int grading2(Box a, Box b) const;
  /// All q-variables of g_{<=1/2}.
  std::vector<GenId> low_variables() const;
  /// All q-variables of g_{>=1/2}.
  std::vector<GenId> high_variables() const;
  std::vector<GenId> all_variables() const;

 private:
  std::vector<int> parts_;
  int r1_ = 0;
  std::vector<Box> boxes_;
  std::map<Box, int> index_;
};

/// Element of gl_N in the elementary-matrix basis.
class LieElement {
 public:
  using Key = std::pair<Box, Box>;
  LieElement() = default;
  static LieElement E(Box a, Box b, const Rat& c = Rat(1));

  const std::map<Key, Rat>& entries() const { return e_; }
  bool is_zero() const { return e_.empty(); }
  Rat at(Box a, Box b) const;
  void add(Box a, Box b, const Rat& c);

  friend LieElement operator+(const LieElement& a, const LieElement& b);
  friend LieElement operator-(const LieElement& a, const LieElement& b);
  friend LieElement operator*(const Rat& c, const LieElement& a);
  friend LieElement operator*(const LieElement& a, const LieElement& b);
  friend bool operator==(const LieElement& a, const LieElement& b) = default;

  RatMatrix to_matrix(const Pyramid& pyr) const;
  /// Sum of c * q_{a,b}: the element viewed in the differential algebra.
  DiffPoly as_poly() const;
  std::string str() const;

 private:
  std::map<Key, Rat> e_;
};

LieElement lie_bracket(const LieElement& a, const LieElement& b);
Rat trace_form(const LieElement& a, const LieElement& b);

LieElement nilpotent_f(const Pyramid& pyr);
/// Diagonal element x with eigenvalue (p_i+1-2h)/2 on e_{ih}.
LieElement grading_x(const Pyramid& pyr);

/// Index (i,j,k) of the slice basis E_{(j1),(i,p_i-k)} and its dual f_{ij;k}.
struct SliceIndex {
  int i = 0;
  int j = 0;
  int k = 0;
  auto operator<=>(const SliceIndex&) const = default;
};
std::vector<SliceIndex> slice_indices(const Pyramid& pyr);
LieElement slice_element(const Pyramid& pyr, SliceIndex s);
LieElement centralizer_element(const Pyramid& pyr, SliceIndex s);
/// Variable q_{(i,p_i-k),(j1)}: the coordinate dual to the slice element.
GenId slice_dual_variable(const Pyramid& pyr, SliceIndex s);
/// g_{<=1/2} variables orthogonal to the slice.
std::vector<GenId> slice_orthogonal_variables(const Pyramid& pyr);

/// Canonical factorizations S = I J and Sbar = Ibar Jbar of a top-degree element.
struct SFactorization {
  LieElement S;
  RatMatrix sbar;
  int rank = 0;
  RatMatrix I, J, Ibar, Jbar, I1, J1;
};
LieElement top_degree_element(const Pyramid& pyr, const RatMatrix& sbar);
SFactorization s_factorization(const Pyramid& pyr, const RatMatrix& sbar);

/// {a_lambda b} = [a,b] + tr(ab) lambda + eps tr(S[a,b]) on the q-variables.
BracketPencil affine_pencil(const Pyramid& pyr, const LieElement& S);
/// 1 d + Q with Q_{(ih),(jk)} = q_{(jk),(ih)}.
MatPDO affine_operator(const Pyramid& pyr);

/// rho(q_a) = pi_{<=1/2} q_a + (f|a) on every q-variable.
std::map<GenId, DiffPoly> rho_map(const Pyramid& pyr);

}  // namespace walgebra
