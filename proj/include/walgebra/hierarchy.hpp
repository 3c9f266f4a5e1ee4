#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "walgebra/pdo.hpp"
#include "walgebra/pva.hpp"
#include "walgebra/pyramid.hpp"
#include "walgebra/walg.hpp"

namespace walgebra {

struct WrongPartitionShape : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// |L1|_{Ibar Jbar}.
MatPDO reduce_L(const MatPDO& L1, const SFactorization& s, int target_floor);

/// Sign sigma with sigma * L monic; throws NotMonic if the leading
/// coefficient is not +-identity.
int monic_sign(const MatPDO& L);

/// h_n modulo total derivatives: `density` is the raw -(K/n) Res tr B^n and
/// `normal` a deterministic representative of the same functional.
struct DensityEntry {
  DiffPoly density;
  DiffPoly normal;
};

struct DensityLedger {
  int K = 1;
  int sigma = 1;
  /// Monic K-th root of sigma L.
  MatPDO root;
  std::map<int, DensityEntry> h;
  const DiffPoly& at(int n) const { return h.at(n).density; }
};

/// Integrates by parts every monomial whose top derivative occurs linearly
/// and exceeds the other factors by at least two orders.
DiffPoly normalize_mod_derivatives(const DiffPoly& h);

/// Densities h_1..h_{n_max} of the monicized L; h_0 = 0.
DensityLedger densities(const MatPDO& L, int K, int n_max, int target_floor);

/// [(B^n)_+, L].
MatPDO lax_rhs(const MatPDO& L, const MatPDO& B, int n);

/// Flow of every generator under the Hamiltonian h.
std::map<GenId, DiffPoly> hamiltonian_flows(const BracketTable& table, const DiffPoly& h);

/// Time derivative of every coefficient of L given the generator flows.
MatPDO time_derivative(const MatPDO& L, const std::map<GenId, DiffPoly>& flows);

/// {h_n, L}_0 = sigma {h_{n+K}, L}_1 = [(B^n)_+, L] coefficientwise on the
/// known range of L.
Report check_lenard_magri(const MatPDO& L, const BracketPencil& pencil, const DensityLedger& ledger, int n);

/// Pairwise involution of the stored densities under both brackets.
Report involution_suite(const DensityLedger& ledger, const BracketPencil& pencil);

/// Nonzero variational derivative for every density with index not in p1 Z.
Report nontriviality(const DensityLedger& ledger, int p1);

/// L1 with the central block W_4 set to zero; partitions (p1,...,p1,1,...,1).
MatPDO constrained_reduction(const WPresentation& pres, int target_floor);

/// Generator flows of Lbar_t = [(B^n)_+, Lbar] for a constrained reduction:
/// differential coefficients are read off directly, and the blocks around
/// d^{-1} evolve as W2_t = P(W2), W3_t = -P^*(W3) with P = (B^n)_+.
std::map<GenId, DiffPoly> constrained_flows(const WPresentation& pres, const MatPDO& Lbar, const MatPDO& B, int n);

/// time_derivative(Lbar, flows) = [(B^n)_+, Lbar] on the known range.
Report check_lax_flows(const MatPDO& L, const MatPDO& B, const std::map<GenId, DiffPoly>& flows, int n);

}  // namespace walgebra
