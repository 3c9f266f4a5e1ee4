#include "walgebra/pva.hpp"

#include <sstream>

namespace walgebra {

namespace {

const DiffPoly& zero_poly() {
  static const DiffPoly z;
  return z;
}

/// (-lambda - d)^m p.
LambdaPoly neg_shift(const DiffPoly& p, int m) {
  LambdaPoly r;
  DiffPoly deriv = p;
  Rat sign = (m % 2 == 0) ? Rat(1) : Rat(-1);
  for (int k = 0; k <= m && !deriv.is_zero(); ++k) {
    r.add_to(m - k, sign * binomial(m, k) * deriv);
    deriv = deriv.d();
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// LambdaPoly

LambdaPoly::LambdaPoly(const DiffPoly& c) {
  if (!c.is_zero()) c_.emplace(0, c);
}

LambdaPoly LambdaPoly::term(const DiffPoly& c, int power) {
  LambdaPoly r;
  r.add_to(power, c);
  return r;
}

const DiffPoly& LambdaPoly::coeff(int m) const {
  auto it = c_.find(m);
  return it == c_.end() ? zero_poly() : it->second;
}

void LambdaPoly::add_to(int m, const DiffPoly& c) {
  if (c.is_zero()) return;
  auto it = c_.find(m);
  if (it == c_.end()) {
    c_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) c_.erase(it);
}

LambdaPoly LambdaPoly::operator-() const {
  LambdaPoly r = *this;
  for (auto& [m, c] : r.c_) c = -c;
  return r;
}

LambdaPoly operator+(const LambdaPoly& a, const LambdaPoly& b) {
  LambdaPoly r = a;
  for (const auto& [m, c] : b.c_) r.add_to(m, c);
  return r;
}

LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b) { return a + (-b); }

LambdaPoly operator*(const DiffPoly& c, const LambdaPoly& a) {
  LambdaPoly r;
  if (c.is_zero()) return r;
  for (const auto& [m, x] : a.c_) r.add_to(m, c * x);
  return r;
}

LambdaPoly operator*(const Rat& c, const LambdaPoly& a) { return DiffPoly(c) * a; }

LambdaPoly LambdaPoly::shifted(int n) const {
  if (n < 0) throw std::invalid_argument("LambdaPoly::shifted: negative power");
  if (n == 0) return *this;
  std::map<int, PolyBuilder> acc;
  for (const auto& [s, c] : c_) {
    DiffPoly deriv = c;
    for (int k = 0; k <= n && !deriv.is_zero(); ++k) {
      acc[s + n - k].add(deriv, binomial(n, k));
      deriv = deriv.d();
    }
  }
  LambdaPoly r;
  for (auto& [m, b] : acc) r.add_to(m, b.build());
  return r;
}

LambdaPoly LambdaPoly::reflected() const {
  LambdaPoly r;
  for (const auto& [s, c] : c_) r += neg_shift(c, s);
  return r;
}

namespace {

std::string lambda_str(const LambdaPoly& p, bool latex) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << " + ";
    first = false;
    std::string cs = latex ? c.latex() : c.str();
    bool unit = c.is_constant() && c.constant_term().is_one();
    if (m == 0) {
      os << (c.size() == 1 ? cs : "(" + cs + ")");
      continue;
    }
    if (!unit) os << (c.size() == 1 ? cs : "(" + cs + ")") << (latex ? " " : "*");
    os << (latex ? "\\lambda" : "lambda");
    if (m != 1) os << (latex ? "^{" + std::to_string(m) + "}" : "^" + std::to_string(m));
  }
  return os.str();
}

}  // namespace

std::string LambdaPoly::str() const { return lambda_str(*this, false); }
std::string LambdaPoly::latex() const { return lambda_str(*this, true); }

// ---------------------------------------------------------------------------
// BracketTable

void BracketTable::set(GenId a, GenId b, LambdaPoly v) { entries_[{a, b}] = std::move(v); }

const LambdaPoly& BracketTable::get(GenId a, GenId b) const {
  auto it = entries_.find({a, b});
  if (it == entries_.end()) throw MissingEntry("bracket table has no entry {" + a.str() + " lambda " + b.str() + "}");
  return it->second;
}

BracketTable operator+(const BracketTable& a, const BracketTable& b) {
  BracketTable r = a;
  for (const auto& [k, v] : b.entries_) {
    auto it = r.entries_.find(k);
    if (it == r.entries_.end()) {
      r.entries_.emplace(k, v);
    } else {
      it->second += v;
    }
  }
  return r;
}

BracketTable BracketTable::scaled(const Rat& c) const {
  BracketTable r = *this;
  for (auto& [k, v] : r.entries_) v = c * v;
  return r;
}

BracketTable BracketTable::corrupted() const {
  BracketTable r = *this;
  // Prefer an off-diagonal pair: flipping {a_lambda a} alone can preserve skewsymmetry.
  for (int pass = 0; pass < 2; ++pass) {
    for (auto& [k, v] : r.entries_) {
      if (!v.is_zero() && (pass == 1 || !(k.first == k.second))) {
        v = -v;
        return r;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Master formula

LambdaPoly extend(const BracketTable& table, const DiffPoly& f, const DiffPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  std::map<GenId, LambdaPoly> fparts;
  for (Var v : f.variables()) {
    DiffPoly p = f.partial(v);
    if (p.is_zero()) continue;
    fparts[v.gen()] += neg_shift(p, v.order());
  }
  std::map<GenId, std::vector<Var>> gvars;
  for (Var v : g.variables()) gvars[v.gen()].push_back(v);

  std::map<std::pair<GenId, int>, LambdaPoly> shift_cache;
  auto shifted_f = [&](GenId i, int s) -> const LambdaPoly& {
    auto key = std::make_pair(i, s);
    auto it = shift_cache.find(key);
    if (it != shift_cache.end()) return it->second;
    return shift_cache.emplace(key, fparts.at(i).shifted(s)).first->second;
  };

  LambdaPoly result;
  for (const auto& [j, vars] : gvars) {
    LambdaPoly gj;
    for (const auto& [i, fi] : fparts) {
      const LambdaPoly& entry = table.get(i, j);
      for (const auto& [s, c] : entry.coeffs()) gj += c * shifted_f(i, s);
    }
    if (gj.is_zero()) continue;
    for (Var v : vars) {
      DiffPoly dg = g.partial(v);
      result += dg * gj.shifted(v.order());
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Reports

bool Report::ok() const { return failures() == 0; }

int Report::failures() const {
  int n = 0;
  for (const auto& it : items) n += it.pass ? 0 : 1;
  return n;
}

void Report::append(const Report& other) {
  for (const auto& it : other.items) {
    CheckItem c = it;
    if (!other.name.empty()) c.label = other.name + ": " + c.label;
    items.push_back(std::move(c));
  }
}

std::string Report::summary() const {
  std::ostringstream os;
  os << name << ": " << (items.size() - static_cast<std::size_t>(failures())) << "/" << items.size() << " pass";
  for (const auto& it : items) {
    if (!it.pass) {
      os << "; first failure " << it.label << " witness " << it.witness;
      break;
    }
  }
  return os.str();
}

Report check_skew(const BracketTable& table) {
  Report r{"skewsymmetry", {}};
  for (GenId a : table.generators()) {
    for (GenId b : table.generators()) {
      LambdaPoly diff = table.get(b, a) + table.get(a, b).reflected();
      CheckItem it{"{" + b.str() + " lambda " + a.str() + "}", diff.is_zero(), diff.is_zero() ? "" : diff.str()};
      r.items.push_back(std::move(it));
    }
  }
  return r;
}

namespace {

using Lambda2 = std::map<std::pair<int, int>, PolyBuilder>;

}  // namespace

Report check_jacobi(const BracketTable& table) {
  Report r{"jacobi", {}};
  const auto& gens = table.generators();
  for (GenId a : gens) {
    for (GenId b : gens) {
      for (GenId c : gens) {
        Lambda2 acc;  // (lambda power, mu power)
        // {a_lambda {b_mu c}}
        for (const auto& [s, g] : table.get(b, c).coeffs()) {
          LambdaPoly inner = extend(table, DiffPoly::var(a), g);
          for (const auto& [t, x] : inner.coeffs()) acc[{t, s}].add(x);
        }
        // - {b_mu {a_lambda c}}
        for (const auto& [s, h] : table.get(a, c).coeffs()) {
          LambdaPoly inner = extend(table, DiffPoly::var(b), h);
          for (const auto& [t, y] : inner.coeffs()) acc[{s, t}].add(y, Rat(-1));
        }
        // - {{a_lambda b}_{lambda+mu} c}
        for (const auto& [s, k] : table.get(a, b).coeffs()) {
          LambdaPoly outer = extend(table, k, DiffPoly::var(c));
          for (const auto& [t, z] : outer.coeffs()) {
            for (int q = 0; q <= t; ++q) acc[{s + q, t - q}].add(z, -binomial(t, q));
          }
        }
        std::string witness;
        for (auto& [key, pb] : acc) {
          DiffPoly v = pb.build();
          if (!v.is_zero()) {
            witness = "lambda^" + std::to_string(key.first) + " mu^" + std::to_string(key.second) + ": " + v.str();
            break;
          }
        }
        r.items.push_back({a.str() + "," + b.str() + "," + c.str(), witness.empty(), witness});
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Variational calculus

DiffPoly variational_derivative(const DiffPoly& h, GenId g) {
  int top = h.max_order(g);
  DiffPoly r;
  for (int n = top; n >= 0; --n) {
    // Horner form: r = dh/du^{(n)} - d r
    r = h.partial(g, n) - r.d();
  }
  return r;
}

bool is_total_derivative(const DiffPoly& h) {
  if (!h.constant_term().is_zero()) return false;
  for (GenId g : h.generators()) {
    if (!variational_derivative(h, g).is_zero()) return false;
  }
  return true;
}

DiffPoly hamiltonian_flow(const BracketTable& table, const DiffPoly& h, GenId u) {
  PolyBuilder out;
  for (GenId g : h.generators()) {
    DiffPoly dh = variational_derivative(h, g);
    if (dh.is_zero()) continue;
    const LambdaPoly& entry = table.get(g, u);
    for (const auto& [s, c] : entry.coeffs()) out.add(c * dh.d(s));
  }
  return out.build();
}

bool check_involution(const BracketTable& table, const DiffPoly& h1, const DiffPoly& h2) {
  return is_total_derivative(extend(table, h1, h2).at_zero());
}

}  // namespace walgebra
