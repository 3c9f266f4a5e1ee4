#include "walgebra/pyramid.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace walgebra {

Pyramid::Pyramid(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw BadPartition("partition must be non-empty");
  for (std::size_t t = 0; t < parts_.size(); ++t) {
    if (parts_[t] <= 0) throw BadPartition("partition parts must be positive");
    if (t > 0 && parts_[t] > parts_[t - 1]) throw BadPartition("partition parts must be non-increasing");
    if (parts_[t] > 200) throw BadPartition("partition part too large");
  }
  if (parts_.size() > 200) throw BadPartition("too many parts");
  r1_ = static_cast<int>(std::count(parts_.begin(), parts_.end(), parts_.front()));
  for (int i = 1; i <= r(); ++i) {
    for (int h = 1; h <= part(i); ++h) {
      index_[{i, h}] = static_cast<int>(boxes_.size());
      boxes_.push_back({i, h});
    }
  }
}

int Pyramid::index(Box b) const {
  auto it = index_.find(b);
  if (it == index_.end()) throw std::out_of_range("box outside the pyramid");
  return it->second;
}

int Pyramid::grading2(Box a, Box b) const { return (part(a.i) - part(b.i)) - 2 * (a.h - b.h); }

std::vector<GenId> Pyramid::all_variables() const {
  std::vector<GenId> out;
  for (Box a : boxes_) {
    for (Box b : boxes_) out.push_back(GenId::q(a, b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GenId> Pyramid::low_variables() const {
  std::vector<GenId> out;
  for (GenId g : all_variables()) {
    if (grading2(g.box_a(), g.box_b()) <= 1) out.push_back(g);
  }
  return out;
}

std::vector<GenId> Pyramid::high_variables() const {
  std::vector<GenId> out;
  for (GenId g : all_variables()) {
    if (grading2(g.box_a(), g.box_b()) >= 1) out.push_back(g);
  }
  return out;
}

LieElement LieElement::E(Box a, Box b, const Rat& c) {
  LieElement e;
  e.add(a, b, c);
  return e;
}

Rat LieElement::at(Box a, Box b) const {
  auto it = e_.find({a, b});
  return it == e_.end() ? Rat(0) : it->second;
}

void LieElement::add(Box a, Box b, const Rat& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = e_.try_emplace({a, b}, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) e_.erase(it);
  }
}

LieElement operator+(const LieElement& a, const LieElement& b) {
  LieElement r = a;
  for (const auto& [k, c] : b.e_) r.add(k.first, k.second, c);
  return r;
}

LieElement operator-(const LieElement& a, const LieElement& b) { return a + Rat(-1) * b; }

LieElement operator*(const Rat& c, const LieElement& a) {
  LieElement r;
  for (const auto& [k, v] : a.e_) r.add(k.first, k.second, c * v);
  return r;
}

LieElement operator*(const LieElement& a, const LieElement& b) {
  LieElement r;
  for (const auto& [ka, ca] : a.e_) {
    for (const auto& [kb, cb] : b.e_) {
      if (ka.second == kb.first) r.add(ka.first, kb.second, ca * cb);
    }
  }
  return r;
}

RatMatrix LieElement::to_matrix(const Pyramid& pyr) const {
  RatMatrix m(pyr.N(), pyr.N());
  for (const auto& [k, c] : e_) m(pyr.index(k.first), pyr.index(k.second)) = c;
  return m;
}

DiffPoly LieElement::as_poly() const {
  PolyBuilder b;
  for (const auto& [k, c] : e_) b.add(DiffPoly::var(GenId::q(k.first, k.second)), c);
  return b.build();
}

std::string LieElement::str() const {
  if (e_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : e_) {
    if (!first) os << " + ";
    first = false;
    if (!c.is_one()) os << c.str() << "*";
    os << "E(" << k.first.i << k.first.h << "," << k.second.i << k.second.h << ")";
  }
  return os.str();
}

LieElement lie_bracket(const LieElement& a, const LieElement& b) { return a * b - b * a; }

Rat trace_form(const LieElement& a, const LieElement& b) {
  Rat t(0);
  LieElement ab = a * b;
  for (const auto& [k, c] : ab.entries()) {
    if (k.first == k.second) t = t + c;
  }
  return t;
}

LieElement nilpotent_f(const Pyramid& pyr) {
  LieElement f;
  for (Box b : pyr.boxes()) {
    if (b.h < pyr.part(b.i)) f.add({b.i, b.h + 1}, b, Rat(1));
  }
  return f;
}

LieElement grading_x(const Pyramid& pyr) {
  LieElement x;
  for (Box b : pyr.boxes()) x.add(b, b, Rat(pyr.part(b.i) + 1 - 2 * b.h, 2));
  return x;
}

std::vector<SliceIndex> slice_indices(const Pyramid& pyr) {
  std::vector<SliceIndex> out;
  for (int i = 1; i <= pyr.r(); ++i) {
    for (int j = 1; j <= pyr.r(); ++j) {
      for (int k = 0; k < std::min(pyr.part(i), pyr.part(j)); ++k) out.push_back({i, j, k});
    }
  }
  return out;
}

LieElement slice_element(const Pyramid& pyr, SliceIndex s) {
  return LieElement::E({s.j, 1}, {s.i, pyr.part(s.i) - s.k});
}

LieElement centralizer_element(const Pyramid& pyr, SliceIndex s) {
  LieElement f;
  for (int h = 0; h <= s.k; ++h) f.add({s.i, pyr.part(s.i) + h - s.k}, {s.j, h + 1}, Rat(1));
  return f;
}

GenId slice_dual_variable(const Pyramid& pyr, SliceIndex s) {
  return GenId::q({s.i, pyr.part(s.i) - s.k}, {s.j, 1});
}

std::vector<GenId> slice_orthogonal_variables(const Pyramid& pyr) {
  std::set<GenId> dual;
  for (SliceIndex s : slice_indices(pyr)) dual.insert(slice_dual_variable(pyr, s));
  std::vector<GenId> out;
  for (GenId g : pyr.low_variables()) {
    if (!dual.count(g)) out.push_back(g);
  }
  return out;
}

LieElement top_degree_element(const Pyramid& pyr, const RatMatrix& sbar) {
  int r1 = pyr.r1();
  if (sbar.rows() != r1 || sbar.cols() != r1) throw SNotTopDegree("Sbar must be r1 x r1");
  LieElement s;
  for (int i = 1; i <= r1; ++i) {
    for (int j = 1; j <= r1; ++j) s.add({i, 1}, {j, pyr.part(1)}, sbar(i - 1, j - 1));
  }
  return s;
}

SFactorization s_factorization(const Pyramid& pyr, const RatMatrix& sbar) {
  SFactorization out;
  out.S = top_degree_element(pyr, sbar);
  out.sbar = sbar;
  rank_factorization(sbar, out.Ibar, out.Jbar);
  out.rank = out.Ibar.cols();
  int r1 = pyr.r1();
  out.I1 = RatMatrix(pyr.N(), r1);
  out.J1 = RatMatrix(r1, pyr.N());
  for (int i = 1; i <= r1; ++i) {
    out.I1(pyr.index({i, 1}), i - 1) = Rat(1);
    out.J1(i - 1, pyr.index({i, pyr.part(1)})) = Rat(1);
  }
  out.I = out.I1 * out.Ibar;
  out.J = out.Jbar * out.J1;
  return out;
}

BracketPencil affine_pencil(const Pyramid& pyr, const LieElement& S) {
  for (const auto& [k, c] : S.entries()) {
    if (!pyr.contains(k.first) || !pyr.contains(k.second) ||
        pyr.grading2(k.first, k.second) != 2 * pyr.depth()) {
      throw SNotTopDegree("S is not in the top degree of the grading");
    }
  }
  std::vector<GenId> gens = pyr.all_variables();
  BracketPencil out{BracketTable(gens), BracketTable(gens)};
  const auto& boxes = pyr.boxes();
  for (Box a : boxes) {
    for (Box b : boxes) {
      for (Box c : boxes) {
        for (Box d : boxes) {
          LieElement comm = lie_bracket(LieElement::E(a, b), LieElement::E(c, d));
          LambdaPoly v(comm.as_poly());
          if (b == c && a == d) v.add_to(1, DiffPoly(1));
          out.bracket0.set(GenId::q(a, b), GenId::q(c, d), v);
          out.bracket1.set(GenId::q(a, b), GenId::q(c, d), LambdaPoly(DiffPoly(trace_form(S, comm))));
        }
      }
    }
  }
  return out;
}

MatPDO affine_operator(const Pyramid& pyr) {
  int n = pyr.N();
  MatPDO a(n, n);
  for (Box x : pyr.boxes()) {
    for (Box y : pyr.boxes()) {
      PDO e(DiffPoly::var(GenId::q(y, x)));
      if (x == y) e += PDO::d_power(1);
      a(pyr.index(x), pyr.index(y)) = e;
    }
  }
  return a;
}

std::map<GenId, DiffPoly> rho_map(const Pyramid& pyr) {
  std::map<GenId, DiffPoly> out;
  for (GenId g : pyr.all_variables()) {
    Box a = g.box_a();
    Box b = g.box_b();
    if (pyr.grading2(a, b) <= 1) {
      out.emplace(g, DiffPoly::var(g));
    } else {
      out.emplace(g, DiffPoly((a.i == b.i && b.h == a.h + 1) ? 1 : 0));
    }
  }
  return out;
}

}  // namespace walgebra
