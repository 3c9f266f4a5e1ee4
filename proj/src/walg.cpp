#include "walgebra/walg.hpp"

#include <algorithm>
#include <set>

namespace walgebra {

namespace {

/// Charge of q_{a,b} under diagonal matrices constant along pyramid rows.
std::vector<int> charge(const Pyramid& pyr, GenId g) {
  std::vector<int> c(static_cast<std::size_t>(pyr.r()), 0);
  c[static_cast<std::size_t>(g.box_a().i - 1)] += 1;
  c[static_cast<std::size_t>(g.box_b().i - 1)] -= 1;
  return c;
}

struct Atom {
  Var var;
  int weight2 = 0;
  std::vector<int> charge;
  bool orthogonal = false;
};

/// Differential monomials of doubled weight `target` and given charge with at
/// least one factor from an orthogonal variable.
std::vector<Monomial> enumerate_ansatz(const std::vector<Atom>& atoms, int target, const std::vector<int>& target_charge) {
  std::vector<Monomial> out;
  std::vector<std::size_t> chosen;
  std::vector<int> ch(target_charge.size(), 0);
  auto rec = [&](auto&& self, std::size_t start, int remaining, int orth) -> void {
    if (remaining == 0) {
      if (orth == 0 || ch != target_charge) return;
      Monomial m;
      for (std::size_t idx : chosen) {
        Var v = atoms[idx].var;
        if (!m.empty() && m.back().var == v) {
          ++m.back().exp;
        } else {
          m.push_back({v, 1});
        }
      }
      out.push_back(std::move(m));
      return;
    }
    for (std::size_t t = start; t < atoms.size(); ++t) {
      const Atom& a = atoms[t];
      if (a.weight2 > remaining) continue;
      chosen.push_back(t);
      for (std::size_t c = 0; c < ch.size(); ++c) ch[c] += a.charge[c];
      self(self, t, remaining - a.weight2, orth + (a.orthogonal ? 1 : 0));
      for (std::size_t c = 0; c < ch.size(); ++c) ch[c] -= a.charge[c];
      chosen.pop_back();
    }
  };
  rec(rec, 0, target, 0);
  return out;
}

BracketTable rho_table(const Pyramid& pyr, const BracketTable& affine, const std::map<GenId, DiffPoly>& rho) {
  std::vector<GenId> all = pyr.all_variables();
  BracketTable t(all);
  for (GenId a : all) {
    for (GenId b : pyr.low_variables()) {
      t.set(a, b, affine.get(a, b).map_coeffs([&](const DiffPoly& c) { return substitute(c, rho); }));
    }
  }
  return t;
}

std::map<GenId, DiffPoly> projection_images(const WPresentation& pres) {
  std::map<GenId, DiffPoly> images;
  for (GenId g : pres.pyr.low_variables()) images.emplace(g, DiffPoly());
  for (SliceIndex s : pres.indices) {
    images[slice_dual_variable(pres.pyr, s)] = DiffPoly::var(GenId::w(s.i, s.j, s.k));
  }
  return images;
}

}  // namespace

BracketPencil rho_pencil(const Pyramid& pyr, const LieElement& S) {
  BracketPencil affine = affine_pencil(pyr, S);
  std::map<GenId, DiffPoly> rho = rho_map(pyr);
  return {rho_table(pyr, affine.bracket0, rho), rho_table(pyr, affine.bracket1, rho)};
}

bool membership_test(const DiffPoly& w, const Pyramid& pyr, const BracketTable& rho0) {
  for (GenId a : pyr.high_variables()) {
    if (!extend(rho0, DiffPoly::var(a), w).is_zero()) return false;
  }
  return true;
}

bool membership_test(const DiffPoly& w, const Pyramid& pyr) {
  return membership_test(w, pyr, rho_pencil(pyr, LieElement()).bracket0);
}

WPresentation solve_generators(const Pyramid& pyr) {
  WPresentation pres{pyr, slice_indices(pyr), {}, {}, {}, {}, {}};
  LieElement top = top_degree_element(pyr, RatMatrix::identity(pyr.r1()));
  BracketPencil rp = rho_pencil(pyr, top);
  pres.rho0 = rp.bracket0;

  std::vector<GenId> low = pyr.low_variables();
  std::set<GenId> orth;
  for (GenId g : slice_orthogonal_variables(pyr)) orth.insert(g);
  std::vector<GenId> high = pyr.high_variables();

  int max_weight2 = 0;
  for (SliceIndex s : pres.indices) max_weight2 = std::max(max_weight2, pyr.part(s.i) + pyr.part(s.j) - 2 * s.k);
  std::vector<Atom> atoms;
  for (GenId g : low) {
    int w2 = 2 - pyr.grading2(g.box_a(), g.box_b());
    for (int n = 0; w2 + 2 * n <= max_weight2; ++n) {
      atoms.push_back({Var(g, n), w2 + 2 * n, charge(pyr, g), orth.count(g) != 0});
    }
  }

  for (SliceIndex s : pres.indices) {
    GenId wg = GenId::w(s.i, s.j, s.k);
    int target = pyr.part(s.i) + pyr.part(s.j) - 2 * s.k;
    GenId lead_var = slice_dual_variable(pyr, s);
    DiffPoly lead = DiffPoly::var(lead_var);
    std::vector<Monomial> ansatz = enumerate_ansatz(atoms, target, charge(pyr, lead_var));
    int n = static_cast<int>(ansatz.size());

    SparseSolver solver(n);
    for (GenId a : high) {
      DiffPoly qa = DiffPoly::var(a);
      // One equation per (lambda power, monomial) of rho{q_a lambda w}_0.
      std::map<std::pair<int, Monomial>, SparseSolver::Row> rows;
      auto collect = [&](const LambdaPoly& v, int col, const Rat& sign) {
        for (const auto& [m, c] : v.coeffs()) {
          for (const auto& [mono, coef] : c.terms()) rows[{m, mono}][col] += sign * coef;
        }
      };
      collect(extend(rp.bracket0, qa, lead), -1, Rat(-1));
      for (int t = 0; t < n; ++t) {
        collect(extend(rp.bracket0, qa, DiffPoly::monomial(ansatz[static_cast<std::size_t>(t)], Rat(1))), t, Rat(1));
      }
      for (auto& [key, row] : rows) {
        if (!solver.add_equation(std::move(row))) {
          throw SolverInconsistent("no W-generator solves the invariance equations for " + wg.str());
        }
      }
    }
    auto sol = solver.unique_solution();
    if (!sol) throw SolverInconsistent("W-generator " + wg.str() + " is not uniquely determined");
    PolyBuilder b;
    b.add(lead);
    for (int t = 0; t < n; ++t) b.add(ansatz[static_cast<std::size_t>(t)], (*sol)[static_cast<std::size_t>(t)]);
    DiffPoly w = b.build();
    for (GenId a : high) {
      if (!extend(rp.bracket1, DiffPoly::var(a), w).is_zero()) {
        throw SolverInconsistent("rho{a lambda " + wg.str() + "} depends on eps for a = " + a.str());
      }
    }
    pres.wgens.push_back(wg);
    pres.generators.emplace(wg, w);
    pres.weights2.emplace(wg, target);
    pres.ansatz_size.emplace(wg, n);
  }
  return pres;
}

DiffPoly to_q(const WPresentation& pres, const DiffPoly& v) { return substitute(v, pres.generators, true); }

DiffPoly to_w(const WPresentation& pres, const DiffPoly& r) {
  for (GenId g : r.generators()) {
    if (g.kind() != GenKind::AffineBox || pres.pyr.grading2(g.box_a(), g.box_b()) > 1) {
      throw NotInImage("element has variables outside g_{<=1/2}: " + g.str());
    }
  }
  DiffPoly cand = substitute(r, projection_images(pres));
  if (!(to_q(pres, cand) == r)) throw NotInImage("element is not in the W-algebra: " + r.str());
  return cand;
}

MatPDO build_L1_from_q(const Pyramid& pyr, int target_floor) {
  std::map<GenId, DiffPoly> rho = rho_map(pyr);
  MatPDO a = affine_operator(pyr).map_coeffs([&](const DiffPoly& c) { return substitute(c, rho); });
  SFactorization s = s_factorization(pyr, RatMatrix::identity(pyr.r1()));
  return quasideterminant(a, s.I1, s.J1, target_floor);
}

MatPDO l1_inverse_from_q(const Pyramid& pyr, int target_floor) {
  std::map<GenId, DiffPoly> rho = rho_map(pyr);
  MatPDO a = affine_operator(pyr).map_coeffs([&](const DiffPoly& c) { return substitute(c, rho); });
  SFactorization s = s_factorization(pyr, RatMatrix::identity(pyr.r1()));
  return s.J1 * invert(a, target_floor) * s.I1;
}

MatPDO w_operator(const WPresentation& pres) {
  const Pyramid& pyr = pres.pyr;
  int r = pyr.r();
  MatPDO m(r, r);
  for (int a = 1; a <= r; ++a) {
    m(a - 1, a - 1) = -PDO::neg_d_power(pyr.part(a));
  }
  for (SliceIndex s : pres.indices) {
    // W_{ij} sits in position (j, i).
    m(s.j - 1, s.i - 1) += DiffPoly::var(GenId::w(s.i, s.j, s.k)) * PDO::neg_d_power(s.k);
  }
  return m;
}

MatPDO build_L1_from_w(const WPresentation& pres, int target_floor) {
  const Pyramid& pyr = pres.pyr;
  int r = pyr.r();
  int r1 = pyr.r1();
  MatPDO m = w_operator(pres);
  MatPDO l1 = m.block(0, 0, r1, r1);
  if (r == r1) return l1;
  MatPDO w2 = m.block(0, r1, r1, r - r1);
  MatPDO w3 = m.block(r1, 0, r - r1, r1);
  MatPDO w4 = m.block(r1, r1, r - r1, r - r1);
  MatPDO inv = invert(w4, target_floor - std::max(0, w2.eff_order()) - std::max(0, w3.eff_order()));
  MatPDO corr = compose(compose(w2, inv, target_floor - std::max(0, w3.eff_order())), w3, target_floor);
  return (l1 - corr).truncated(std::max(target_floor, corr.floor()));
}

LambdaPoly w_bracket(const WPresentation& pres, const DiffPoly& v, const DiffPoly& u, int which,
                     const SFactorization& s) {
  DiffPoly vq = to_q(pres, v);
  DiffPoly uq = to_q(pres, u);
  LambdaPoly r;
  if (which == 0) {
    r = extend(pres.rho0, vq, uq);
  } else {
    r = extend(rho_pencil(pres.pyr, s.S).bracket1, vq, uq);
  }
  return r.map_coeffs([&](const DiffPoly& c) { return to_w(pres, c); });
}

BracketPencil w_pencil(const WPresentation& pres, const SFactorization& s) {
  BracketTable rho1 = rho_pencil(pres.pyr, s.S).bracket1;
  BracketPencil out{BracketTable(pres.wgens), BracketTable(pres.wgens)};
  for (GenId a : pres.wgens) {
    DiffPoly aq = pres.generators.at(a);
    for (GenId b : pres.wgens) {
      DiffPoly bq = pres.generators.at(b);
      auto lift = [&](const DiffPoly& c) { return to_w(pres, c); };
      out.bracket0.set(a, b, extend(pres.rho0, aq, bq).map_coeffs(lift));
      out.bracket1.set(a, b, extend(rho1, aq, bq).map_coeffs(lift));
    }
  }
  return out;
}

Report check_casimirs(const WPresentation& pres, const SFactorization& s) {
  return check_casimirs(pres, rho_pencil(pres.pyr, s.S).bracket1);
}

Report check_casimirs(const WPresentation& pres, const BracketTable& rho1) {
  Report rep{"casimirs", {}};
  const Pyramid& pyr = pres.pyr;
  for (SliceIndex c : pres.indices) {
    if (pyr.part(c.i) != pyr.part(c.j) || c.k != pyr.part(c.i) - 1) continue;
    GenId cg = GenId::w(c.i, c.j, c.k);
    for (GenId g : pres.wgens) {
      LambdaPoly v = extend(rho1, pres.generators.at(cg), pres.generators.at(g));
      rep.items.push_back({"{" + cg.str() + " lambda " + g.str() + "}_1", v.is_zero(), v.is_zero() ? "" : v.str()});
    }
  }
  return rep;
}

}  // namespace walgebra
