#include "walgebra/hierarchy.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace walgebra {

MatPDO reduce_L(const MatPDO& L1, const SFactorization& s, int target_floor) {
  if (s.rank == L1.rows() && s.Ibar == RatMatrix::identity(s.rank) && s.Jbar == RatMatrix::identity(s.rank)) {
    return L1;
  }
  return quasideterminant(L1, s.Ibar, s.Jbar, target_floor);
}

int monic_sign(const MatPDO& L) {
  int ord = L.order();
  auto lead = L.constant_coeff(ord);
  if (!lead) throw NotMonic("leading coefficient is not constant");
  RatMatrix id = RatMatrix::identity(L.rows());
  if (*lead == id) return 1;
  if (*lead == Rat(-1) * id) return -1;
  throw NotMonic("leading coefficient is not +-identity");
}

namespace {

/// Highest-order factor of a monomial, ties broken by generator.
std::size_t top_factor(const Monomial& m) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < m.size(); ++t) {
    const Var& a = m[t].var;
    const Var& b = m[best].var;
    if (a.order() > b.order() || (a.order() == b.order() && b.gen() < a.gen())) best = t;
  }
  return best;
}

}  // namespace

DiffPoly normalize_mod_derivatives(const DiffPoly& h) {
  DiffPoly cur = h;
  for (;;) {
    bool changed = false;
    PolyBuilder out;
    for (const auto& [mono, c] : cur.terms()) {
      if (mono.empty()) {
        out.add(mono, c);
        continue;
      }
      std::size_t t = top_factor(mono);
      const Factor& top = mono[t];
      int k = top.var.order();
      int rest_order = -1;
      for (std::size_t s = 0; s < mono.size(); ++s) {
        if (s != t) rest_order = std::max(rest_order, mono[s].var.order());
      }
      if (top.exp != 1 || k < 1 || rest_order > k - 2) {
        out.add(mono, c);
        continue;
      }
      // P u^{(k)} = d(P u^{(k-1)}) - P' u^{(k-1)}.
      Monomial rest;
      for (std::size_t s = 0; s < mono.size(); ++s) {
        if (s != t) rest.push_back(mono[s]);
      }
      DiffPoly p = DiffPoly::monomial(rest, c);
      DiffPoly lowered = DiffPoly::var(top.var.gen(), k - 1);
      out.add(p.d() * lowered, Rat(-1));
      changed = true;
    }
    cur = out.build();
    if (!changed) return cur;
  }
}

DensityLedger densities(const MatPDO& L, int K, int n_max, int target_floor) {
  DensityLedger led;
  led.K = K;
  led.sigma = monic_sign(L);
  MatPDO m = led.sigma == 1 ? L : -L;
  led.root = kth_root(m, K, std::min(target_floor, -n_max - 1));
  led.h[0] = {DiffPoly(), DiffPoly()};
  for (int n = 1; n <= n_max; ++n) {
    MatPDO bn = power(led.root, n, -1);
    DiffPoly res = residue(trace(bn));
    DiffPoly hn = Rat(-K, n) * res;
    led.h[n] = {hn, normalize_mod_derivatives(hn)};
  }
  return led;
}

MatPDO lax_rhs(const MatPDO& L, const MatPDO& B, int n) {
  if (n == 0) return MatPDO(L.rows(), L.cols()).truncated(L.floor());
  MatPDO bn = power(B, n, -1);
  MatPDO p = plus_part(bn);
  int cut = L.floor() == kExact ? kExact : L.floor();
  return compose(p, L, cut) - compose(L, p, cut);
}

std::map<GenId, DiffPoly> hamiltonian_flows(const BracketTable& table, const DiffPoly& h) {
  std::map<GenId, DiffPoly> out;
  for (GenId u : table.generators()) out[u] = hamiltonian_flow(table, h, u);
  return out;
}

namespace {

DiffPoly coefficient_derivative(const DiffPoly& c, const std::map<GenId, DiffPoly>& flows) {
  PolyBuilder b;
  for (Var v : c.variables()) {
    auto it = flows.find(v.gen());
    if (it == flows.end()) throw MissingEntry("no flow for " + v.gen().str());
    b.add(c.partial(v) * it->second.d(v.order()));
  }
  return b.build();
}

}  // namespace

MatPDO time_derivative(const MatPDO& L, const std::map<GenId, DiffPoly>& flows) {
  return L.map_coeffs([&](const DiffPoly& c) { return coefficient_derivative(c, flows); });
}

namespace {

/// First differing coefficient on the common known range, or "".
std::string mismatch(const MatPDO& a, const MatPDO& b) {
  int lo = std::max(a.floor(), b.floor());
  MatPDO x = lo == kExact ? a : a.truncated(lo);
  MatPDO y = lo == kExact ? b : b.truncated(lo);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      PDO d = x(i, j) - y(i, j);
      if (d.is_zero()) continue;
      int e = d.coeffs().rbegin()->first;
      std::ostringstream os;
      os << "entry (" << i << "," << j << ") d^" << e << ": " << d.coeff(e).str();
      return os.str();
    }
  }
  return "";
}

}  // namespace

Report check_lenard_magri(const MatPDO& L, const BracketPencil& pencil, const DensityLedger& ledger, int n) {
  Report rep{"lenard-magri n=" + std::to_string(n), {}};
  const DiffPoly& hn = ledger.at(n);
  const DiffPoly& hnk = ledger.at(n + ledger.K);
  MatPDO d0 = time_derivative(L, hamiltonian_flows(pencil.bracket0, hn));
  MatPDO d1 = time_derivative(L, hamiltonian_flows(pencil.bracket1.scaled(Rat(ledger.sigma)), hnk));
  MatPDO lax = lax_rhs(L, ledger.root, n);
  std::string w01 = mismatch(d0, d1);
  rep.items.push_back({"{h_n, L}_0 = {h_n+K, L}_1", w01.empty(), w01});
  std::string w0l = mismatch(d0, lax);
  rep.items.push_back({"{h_n, L}_0 = [(B^n)_+, L]", w0l.empty(), w0l});
  return rep;
}

Report involution_suite(const DensityLedger& ledger, const BracketPencil& pencil) {
  Report rep{"involution", {}};
  for (const auto& [m, hm] : ledger.h) {
    for (const auto& [n, hn] : ledger.h) {
      if (n < m) continue;
      for (int which : {0, 1}) {
        const BracketTable& t = which == 0 ? pencil.bracket0 : pencil.bracket1;
        DiffPoly v = extend(t, hm.density, hn.density).at_zero();
        bool ok = is_total_derivative(v);
        rep.items.push_back({"{h_" + std::to_string(m) + ", h_" + std::to_string(n) + "}_" + std::to_string(which), ok,
                             ok ? "" : v.str()});
      }
    }
  }
  return rep;
}

Report nontriviality(const DensityLedger& ledger, int p1) {
  Report rep{"nontrivial densities", {}};
  for (const auto& [n, e] : ledger.h) {
    if (n == 0 || n % p1 == 0) continue;
    bool ok = !is_total_derivative(e.density);
    rep.items.push_back({"h_" + std::to_string(n), ok, ok ? "" : "density is a total derivative"});
  }
  return rep;
}

MatPDO constrained_reduction(const WPresentation& pres, int target_floor) {
  const Pyramid& pyr = pres.pyr;
  int p1 = pyr.part(1);
  for (int i = 1; i <= pyr.r(); ++i) {
    int p = pyr.part(i);
    if (p != p1 && p != 1) throw WrongPartitionShape("constrained reduction needs parts p1 or 1");
  }
  if (p1 == 1 || pyr.r1() == pyr.r()) throw WrongPartitionShape("constrained reduction needs both p1 > 1 and parts 1");
  std::map<GenId, DiffPoly> central;
  for (int i = pyr.r1() + 1; i <= pyr.r(); ++i) {
    for (int j = pyr.r1() + 1; j <= pyr.r(); ++j) central.emplace(GenId::w(i, j, 0), DiffPoly());
  }
  MatPDO l1 = build_L1_from_w(pres, target_floor);
  return l1.map_coeffs([&](const DiffPoly& c) { return substitute(c, central, true); });
}

namespace {

/// The generator g and scale s with c = s g + const, if c has that shape.
std::optional<std::pair<GenId, Rat>> linear_generator(const DiffPoly& c) {
  std::optional<std::pair<GenId, Rat>> out;
  for (const auto& [mono, k] : c.terms()) {
    if (mono.empty()) continue;
    if (out || mono.size() != 1 || mono[0].exp != 1 || mono[0].var.order() != 0) return std::nullopt;
    out = std::make_pair(mono[0].var.gen(), k);
  }
  return out;
}

void record_flow(std::map<GenId, DiffPoly>& flows, const DiffPoly& coeff, const DiffPoly& rate) {
  auto lin = linear_generator(coeff);
  if (!lin) return;
  flows.emplace(lin->first, lin->second.inverse() * rate);
}

/// sum_k c_k f^{(k)}.
DiffPoly apply_op(const PDO& p, const DiffPoly& f) {
  PolyBuilder b;
  for (const auto& [k, c] : p.coeffs()) b.add(c * f.d(k));
  return b.build();
}

/// sum_k (-d)^k (f c_k).
DiffPoly apply_adjoint(const PDO& p, const DiffPoly& f) {
  PolyBuilder b;
  for (const auto& [k, c] : p.coeffs()) b.add((f * c).d(k), k % 2 == 0 ? Rat(1) : Rat(-1));
  return b.build();
}

}  // namespace

std::map<GenId, DiffPoly> constrained_flows(const WPresentation& pres, const MatPDO& Lbar, const MatPDO& B, int n) {
  const Pyramid& pyr = pres.pyr;
  int r = pyr.r();
  int r1 = pyr.r1();
  MatPDO p = plus_part(power(B, n, -1));
  MatPDO rhs = n == 0 ? MatPDO(r1, r1) : lax_rhs(Lbar, B, n);
  MatPDO m = w_operator(pres);
  std::map<GenId, DiffPoly> flows;
  for (int a = 0; a < r1; ++a) {
    for (int b = 0; b < r1; ++b) {
      for (const auto& [k, c] : m(a, b).coeffs()) {
        if (n != 0 && k < rhs(a, b).floor()) throw FloorTooHigh("Lax coefficient below the known range");
        record_flow(flows, c, rhs(a, b).coeff(k));
      }
    }
  }
  for (int a = 0; a < r1; ++a) {
    for (int c = r1; c < r; ++c) {
      // W2_t = P W2, column by column.
      DiffPoly rate2;
      for (int l = 0; l < r1; ++l) rate2 += apply_op(p(a, l), m(l, c).coeff(0));
      record_flow(flows, m(a, c).coeff(0), rate2);
      // W3_t = -P^*(W3), row by row.
      DiffPoly rate3;
      for (int l = 0; l < r1; ++l) rate3 -= apply_adjoint(p(l, a), m(c, l).coeff(0));
      record_flow(flows, m(c, a).coeff(0), rate3);
    }
  }
  return flows;
}

Report check_lax_flows(const MatPDO& L, const MatPDO& B, const std::map<GenId, DiffPoly>& flows, int n) {
  Report rep{"lax flow n=" + std::to_string(n), {}};
  MatPDO lhs = time_derivative(L, flows);
  MatPDO rhs = lax_rhs(L, B, n);
  std::string w = mismatch(lhs, rhs);
  rep.items.push_back({"L_t = [(B^n)_+, L]", w.empty(), w});
  return rep;
}

}  // namespace walgebra
