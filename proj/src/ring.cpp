#include "walgebra/ring.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace walgebra {

std::uint64_t GenId::pack(GenKind k, int a, int b, int c, int d) {
  auto chk = [](int v) {
    if (v < 0 || v > 255) throw std::out_of_range("GenId: index out of range");
    return static_cast<std::uint64_t>(v);
  };
  return (static_cast<std::uint64_t>(k) << 60) | (chk(a) << 52) | (chk(b) << 44) | (chk(c) << 36) | (chk(d) << 28);
}

GenId GenId::q(Box a, Box b) {
  GenId g;
  g.code_ = pack(GenKind::AffineBox, a.i, a.h, b.i, b.h);
  return g;
}

GenId GenId::w(int i, int j, int k) {
  GenId g;
  g.code_ = pack(GenKind::WGen, i, j, k, 0);
  return g;
}

GenId GenId::u(int index) {
  if (index < 0 || index >= 65536) throw std::out_of_range("GenId: abstract index out of range");
  GenId g;
  g.code_ = pack(GenKind::Abstract, index / 256, index % 256, 0, 0);
  return g;
}

std::string GenId::str() const {
  std::ostringstream os;
  switch (kind()) {
    case GenKind::AffineBox:
      os << "q(" << box_a().i << box_a().h << "," << box_b().i << box_b().h << ")";
      break;
    case GenKind::WGen:
      os << "w(" << wi() << wj() << ";" << wk() << ")";
      break;
    case GenKind::Abstract:
      os << "u" << index();
      break;
  }
  return os.str();
}

std::string GenId::latex() const {
  std::ostringstream os;
  switch (kind()) {
    case GenKind::AffineBox:
      os << "q_{(" << box_a().i << box_a().h << "),(" << box_b().i << box_b().h << ")}";
      break;
    case GenKind::WGen:
      os << "w_{" << wi() << wj() << ";" << wk() << "}";
      break;
    case GenKind::Abstract:
      os << "u_{" << index() << "}";
      break;
  }
  return os.str();
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& f : m) {
    h ^= std::hash<std::uint64_t>()(f.var.code) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(f.exp) + (h << 6) + (h >> 2);
  }
  return h;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].var < b[j].var) {
      r.push_back(a[i++]);
    } else if (b[j].var < a[i].var) {
      r.push_back(b[j++]);
    } else {
      r.push_back({a[i].var, a[i].exp + b[j].exp});
      ++i;
      ++j;
    }
  }
  while (i < a.size()) r.push_back(a[i++]);
  while (j < b.size()) r.push_back(b[j++]);
  return r;
}

// ---------------------------------------------------------------------------
// PolyBuilder

void PolyBuilder::add(const Monomial& m, const Rat& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) acc_.erase(it);
  }
}

void PolyBuilder::add(const DiffPoly& p, const Rat& scale) {
  for (const auto& [m, c] : p.terms()) add(m, c * scale);
}

void PolyBuilder::add_product(const Monomial& m, const Rat& scale, const DiffPoly& p) {
  if (scale.is_zero()) return;
  for (const auto& [pm, c] : p.terms()) add(monomial_mul(m, pm), c * scale);
}

DiffPoly PolyBuilder::build() {
  std::vector<DiffPoly::Term> terms;
  terms.reserve(acc_.size());
  for (auto& [m, c] : acc_) terms.emplace_back(m, c);
  acc_.clear();
  // Already canonical: map iteration is sorted and zero entries were erased.
  return DiffPoly::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// DiffPoly

DiffPoly::DiffPoly(const Rat& c) {
  if (!c.is_zero()) terms_.emplace_back(Monomial{}, c);
}

DiffPoly DiffPoly::var(GenId g, int order) { return var(Var(g, order)); }

DiffPoly DiffPoly::var(Var v) {
  DiffPoly p;
  p.terms_.emplace_back(Monomial{Factor{v, 1}}, Rat(1));
  return p;
}

DiffPoly DiffPoly::monomial(Monomial m, Rat c) {
  DiffPoly p;
  if (!c.is_zero()) p.terms_.emplace_back(std::move(m), std::move(c));
  return p;
}

DiffPoly DiffPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  DiffPoly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second.is_zero()) p.terms_.pop_back();
    } else if (!t.second.is_zero()) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool DiffPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.empty()); }

Rat DiffPoly::constant_term() const {
  if (!terms_.empty() && terms_[0].first.empty()) return terms_[0].second;
  return Rat(0);
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

namespace {

DiffPoly merge(const DiffPoly& a, const DiffPoly& b, bool subtract) {
  std::vector<DiffPoly::Term> out;
  const auto& x = a.terms();
  const auto& y = b.terms();
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, subtract ? -y[j].second : y[j].second);
      ++j;
    } else {
      Rat c = subtract ? x[i].second - y[j].second : x[i].second + y[j].second;
      if (!c.is_zero()) out.emplace_back(x[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  // out is sorted, duplicate-free and zero-free.
  return DiffPoly::from_terms(std::move(out));
}

}  // namespace

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return merge(a, b, false);
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) {
  if (b.is_zero()) return a;
  return merge(a, b, true);
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& b) { return *this = *this + b; }
DiffPoly& DiffPoly::operator-=(const DiffPoly& b) { return *this = *this - b; }

DiffPoly operator*(const Rat& c, const DiffPoly& a) {
  if (c.is_zero()) return DiffPoly();
  DiffPoly r = a;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero() || b.is_zero()) return DiffPoly();
  if (a.is_constant()) return a.constant_term() * b;
  if (b.is_constant()) return b.constant_term() * a;
  std::unordered_map<Monomial, Rat, MonomialHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = monomial_mul(ma, mb);
      auto [it, inserted] = acc.try_emplace(std::move(m), ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::vector<DiffPoly::Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (!c.is_zero()) terms.emplace_back(m, c);
  }
  return DiffPoly::from_terms(std::move(terms));
}

DiffPoly DiffPoly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("DiffPoly::pow: negative exponent");
  DiffPoly r(1);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

DiffPoly DiffPoly::d() const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      // d(x^e) = e x^{e-1} x'
      Monomial rest = m;
      int e = rest[i].exp;
      Var dv = rest[i].var.derived();
      if (e == 1) {
        rest.erase(rest.begin() + static_cast<long>(i));
      } else {
        rest[i].exp = e - 1;
      }
      out.emplace_back(monomial_mul(rest, Monomial{Factor{dv, 1}}), c * Rat(e));
    }
  }
  return from_terms(std::move(out));
}

DiffPoly DiffPoly::d(int times) const {
  DiffPoly r = *this;
  for (int i = 0; i < times; ++i) r = r.d();
  return r;
}

DiffPoly DiffPoly::partial(GenId g, int n) const { return partial(Var(g, n)); }

DiffPoly DiffPoly::partial(Var v) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].var != v) continue;
      Monomial rest = m;
      int e = rest[i].exp;
      if (e == 1) {
        rest.erase(rest.begin() + static_cast<long>(i));
      } else {
        rest[i].exp = e - 1;
      }
      out.emplace_back(std::move(rest), c * Rat(e));
    }
  }
  return from_terms(std::move(out));
}

std::set<Var> DiffPoly::variables() const {
  std::set<Var> s;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m) s.insert(f.var);
  }
  return s;
}

std::set<GenId> DiffPoly::generators() const {
  std::set<GenId> s;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m) s.insert(f.var.gen());
  }
  return s;
}

int DiffPoly::max_order(GenId g) const {
  int r = -1;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m) {
      if (f.var.gen() == g) r = std::max(r, f.var.order());
    }
  }
  return r;
}

namespace {

std::string var_str(Var v, bool latex) {
  std::string base = latex ? v.gen().latex() : v.gen().str();
  int n = v.order();
  if (n == 0) return base;
  if (n <= 3) return base + std::string(static_cast<std::size_t>(n), '\'');
  return latex ? base + "^{(" + std::to_string(n) + ")}" : base + "^(" + std::to_string(n) + ")";
}

std::string poly_str(const DiffPoly& p, bool latex) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rat a = c;
    if (a.sign() < 0) {
      os << (first ? "-" : " - ");
      a = -a;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    bool unit = a.is_one() && !m.empty();
    if (!unit) {
      if (latex && !a.is_integer()) {
        os << "\\frac{" << a.num_str() << "}{" << a.den_str() << "}";
      } else {
        os << a.str();
      }
    }
    bool need_sep = !unit;
    for (const auto& f : m) {
      if (need_sep) os << (latex ? " " : "*");
      need_sep = true;
      os << var_str(f.var, latex);
      if (f.exp != 1) os << (latex ? "^{" + std::to_string(f.exp) + "}" : "^" + std::to_string(f.exp));
    }
  }
  return os.str();
}

}  // namespace

std::string DiffPoly::str() const { return poly_str(*this, false); }
std::string DiffPoly::latex() const { return poly_str(*this, true); }

// ---------------------------------------------------------------------------

DiffPoly substitute(const DiffPoly& a, const std::map<GenId, DiffPoly>& images, bool keep_others) {
  std::map<Var, DiffPoly> cache;
  auto image_of = [&](Var v) -> const DiffPoly& {
    auto it = cache.find(v);
    if (it != cache.end()) return it->second;
    GenId g = v.gen();
    auto img = images.find(g);
    DiffPoly r;
    if (img == images.end()) {
      if (!keep_others) throw MissingImage("substitute: no image for " + g.str());
      r = DiffPoly::var(v);
    } else {
      r = img->second.d(v.order());
    }
    return cache.emplace(v, std::move(r)).first->second;
  };
  PolyBuilder out;
  for (const auto& [m, c] : a.terms()) {
    DiffPoly t(c);
    for (const auto& f : m) {
      const DiffPoly& img = image_of(f.var);
      for (int e = 0; e < f.exp; ++e) t = t * img;
      if (t.is_zero()) break;
    }
    out.add(t);
  }
  return out.build();
}

std::optional<int> conformal_weight2(const DiffPoly& a, const std::map<GenId, int>& weights2) {
  std::optional<int> w;
  for (const auto& [m, c] : a.terms()) {
    int s = 0;
    for (const auto& f : m) {
      auto it = weights2.find(f.var.gen());
      if (it == weights2.end()) throw std::invalid_argument("conformal_weight: no weight for " + f.var.gen().str());
      s += f.exp * (it->second + 2 * f.var.order());
    }
    if (w && *w != s) return std::nullopt;
    w = s;
  }
  return w;
}

}  // namespace walgebra
