#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "walgebra/pdo.hpp"
#include "walgebra/pva.hpp"
#include "walgebra/pyramid.hpp"
#include "walgebra/ring.hpp"

namespace walgebra {

struct SolverInconsistent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInImage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pencil rho{q_a lambda q_b}_eps for a in g and b in g_{<=1/2}; the
/// generator list is every q-variable of the pyramid.
BracketPencil rho_pencil(const Pyramid& pyr, const LieElement& S);

/// rho{a_lambda w}_0 = 0 for every a in g_{>=1/2}.
bool membership_test(const DiffPoly& w, const Pyramid& pyr, const BracketTable& rho0);
bool membership_test(const DiffPoly& w, const Pyramid& pyr);

/// Solved generators w_{ij;k} as polynomials in the q-variables of g_{<=1/2}.
struct WPresentation {
  Pyramid pyr;
  std::vector<SliceIndex> indices;
  std::vector<GenId> wgens;
  std::map<GenId, DiffPoly> generators;
  /// Doubled conformal weights of the w-generators.
  std::map<GenId, int> weights2;
  /// rho-reduced 0-th bracket on the q-variables (S-independent).
  BracketTable rho0;
  /// Number of ansatz monomials solved for, per generator.
  std::map<GenId, int> ansatz_size;
};

WPresentation solve_generators(const Pyramid& pyr);

/// Replaces w-variables by their q-expressions.
DiffPoly to_q(const WPresentation& pres, const DiffPoly& v);
/// Inverse of the structure isomorphism; NotInImage if r is not in W.
DiffPoly to_w(const WPresentation& pres, const DiffPoly& r);

/// |1 d + rho(Q)|_{I_1 J_1} over the q-variables.
MatPDO build_L1_from_q(const Pyramid& pyr, int target_floor);
/// L1^{-1} = J_1 (1 d + rho(Q))^{-1} I_1, without forming L1.
MatPDO l1_inverse_from_q(const Pyramid& pyr, int target_floor);
/// -(-d)^{p_1} + W_1 - W_2 (-(-d)^q + W_4)^{-1} W_3 over the w-variables.
MatPDO build_L1_from_w(const WPresentation& pres, int target_floor);
/// The r x r operator -(-d)^p + W(d) with W(d)_{ab} = W_{ba}(d).
MatPDO w_operator(const WPresentation& pres);

/// {v_lambda u}^W for the 0-th (which = 0) or 1-st (which = 1) bracket.
LambdaPoly w_bracket(const WPresentation& pres, const DiffPoly& v, const DiffPoly& u, int which,
                     const SFactorization& s);
/// Both brackets on all pairs of w-generators.
BracketPencil w_pencil(const WPresentation& pres, const SFactorization& s);

/// {w_{ij;p_i-1} lambda w}_1 = 0 for all generators w, whenever p_i = p_j.
Report check_casimirs(const WPresentation& pres, const SFactorization& s);
/// Same, with the rho-reduced first bracket on the q-variables supplied.
Report check_casimirs(const WPresentation& pres, const BracketTable& rho1);

}  // namespace walgebra
