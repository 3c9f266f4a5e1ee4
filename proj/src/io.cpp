#include "walgebra/io.hpp"

#include <algorithm>
#include <sstream>

namespace walgebra {

namespace {

Json int_or_string(const Rat& r, bool num) {
  if (r.fits_int64()) return num ? r.small_num() : r.small_den();
  return num ? r.num_str() : r.den_str();
}

std::string component(const Json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_string()) return j.get<std::string>();
  throw BadJson("rational component must be an integer or a decimal string");
}

int int_at(const Json& j, std::size_t k) {
  if (!j.is_array() || j.size() <= k || !j[k].is_number_integer()) throw BadJson("expected integer at index " + std::to_string(k));
  return j[k].get<int>();
}

}  // namespace

Json to_json(const Rat& r) { return Json::array({int_or_string(r, true), int_or_string(r, false)}); }

Rat rat_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw BadJson("rational must be [num, den]");
  return Rat::parse(component(j[0]) + "/" + component(j[1]));
}

Json to_json(GenId g) {
  switch (g.kind()) {
    case GenKind::AffineBox:
      return Json::array({"q", g.box_a().i, g.box_a().h, g.box_b().i, g.box_b().h});
    case GenKind::WGen:
      return Json::array({"w", g.wi(), g.wj(), g.wk()});
    case GenKind::Abstract:
      return Json::array({"u", g.index()});
  }
  throw BadJson("unknown generator kind");
}

GenId gen_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) throw BadJson("generator must be a tagged array");
  std::string tag = j[0].get<std::string>();
  if (tag == "q" && j.size() == 5) return GenId::q({int_at(j, 1), int_at(j, 2)}, {int_at(j, 3), int_at(j, 4)});
  if (tag == "w" && j.size() == 4) return GenId::w(int_at(j, 1), int_at(j, 2), int_at(j, 3));
  if (tag == "u" && j.size() == 2) return GenId::u(int_at(j, 1));
  throw BadJson("unknown generator tag " + tag);
}

Json to_json(const DiffPoly& p) {
  Json monos = Json::array();
  for (const auto& [mono, c] : p.terms()) {
    Json factors = Json::array();
    for (const Factor& f : mono) factors.push_back(Json::array({to_json(f.var.gen()), f.var.order(), f.exp}));
    monos.push_back({{"coeff", to_json(c)}, {"factors", factors}});
  }
  return {{"monomials", monos}};
}

DiffPoly diffpoly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("monomials")) throw BadJson("DiffPoly needs \"monomials\"");
  std::vector<DiffPoly::Term> terms;
  for (const Json& m : j.at("monomials")) {
    Monomial mono;
    for (const Json& f : m.at("factors")) {
      if (!f.is_array() || f.size() != 3) throw BadJson("factor must be [gen, order, exp]");
      int order = int_at(f, 1);
      int exp = int_at(f, 2);
      if (order < 0 || exp < 1) throw BadJson("factor order must be >= 0 and exponent >= 1");
      mono.push_back({Var(gen_from_json(f[0]), order), exp});
    }
    std::sort(mono.begin(), mono.end());
    Monomial merged;
    for (const Factor& f : mono) {
      if (!merged.empty() && merged.back().var == f.var) {
        merged.back().exp += f.exp;
      } else {
        merged.push_back(f);
      }
    }
    mono = std::move(merged);
    terms.emplace_back(std::move(mono), rat_from_json(m.at("coeff")));
  }
  return DiffPoly::from_terms(std::move(terms));
}

Json to_json(const PDO& p) {
  Json coeffs = Json::object();
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) coeffs[std::to_string(it->first)] = to_json(it->second);
  Json floor = p.is_exact() ? Json(nullptr) : Json(p.floor());
  return {{"floor", floor}, {"coeffs", coeffs}};
}

PDO pdo_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j.contains("floor")) throw BadJson("PDO needs \"floor\" and \"coeffs\"");
  PDO p;
  for (const auto& [deg, c] : j.at("coeffs").items()) p.set_coeff(std::stoi(deg), diffpoly_from_json(c));
  const Json& f = j.at("floor");
  if (f.is_null()) return p;
  if (!f.is_number_integer()) throw BadJson("floor must be an integer or null");
  return p.truncated(f.get<int>());
}

Json to_json(const MatPDO& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

MatPDO matpdo_from_json(const Json& j) {
  if (!j.is_array()) throw BadJson("MatPDO must be nested arrays");
  int rows = static_cast<int>(j.size());
  int cols = rows == 0 ? 0 : static_cast<int>(j[0].size());
  MatPDO m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) throw BadJson("ragged MatPDO rows");
    for (int k = 0; k < cols; ++k) m(i, k) = pdo_from_json(j[i][k]);
  }
  return m;
}

Json to_json(const LambdaPoly& p) {
  Json coeffs = Json::object();
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) coeffs[std::to_string(it->first)] = to_json(it->second);
  return {{"coeffs", coeffs}};
}

LambdaPoly lambdapoly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs")) throw BadJson("LambdaPoly needs \"coeffs\"");
  LambdaPoly p;
  for (const auto& [m, c] : j.at("coeffs").items()) {
    int power = std::stoi(m);
    if (power < 0) throw BadJson("negative lambda power");
    p.add_to(power, diffpoly_from_json(c));
  }
  return p;
}

Json to_json(const BracketTable& t) {
  Json out = Json::array();
  for (const auto& [key, v] : t.entries()) {
    out.push_back({{"a", to_json(key.first)}, {"b", to_json(key.second)}, {"value", to_json(v)}});
  }
  return out;
}

Json to_json(const Report& r) {
  Json items = Json::array();
  for (const CheckItem& it : r.items) {
    items.push_back({{"label", it.label}, {"status", it.pass ? "pass" : "fail"}, {"witness", it.witness}});
  }
  return {{"check", r.name}, {"ok", r.ok()}, {"items", items}};
}

std::string w_key(GenId g) {
  return std::to_string(g.wi()) + "," + std::to_string(g.wj()) + "," + std::to_string(g.wk());
}

Json generators_json(const WPresentation& pres, const MatPDO& L1) {
  Json gens = Json::object();
  for (GenId g : pres.wgens) gens[w_key(g)] = to_json(pres.generators.at(g));
  return {{"partition", pres.pyr.parts()}, {"generators", gens}, {"L1", to_json(L1)}};
}

std::string generators_latex(const WPresentation& pres) {
  std::ostringstream os;
  os << "\\begin{align*}\n";
  for (std::size_t n = 0; n < pres.wgens.size(); ++n) {
    GenId g = pres.wgens[n];
    os << "  " << g.latex() << " &= " << pres.generators.at(g).latex();
    os << (n + 1 < pres.wgens.size() ? " \\\\\n" : "\n");
  }
  os << "\\end{align*}\n";
  return os.str();
}

std::string brackets_latex(const BracketPencil& pencil) {
  std::ostringstream os;
  for (int which : {0, 1}) {
    const BracketTable& t = which == 0 ? pencil.bracket0 : pencil.bracket1;
    os << "\\begin{align*}\n";
    std::size_t n = 0;
    for (const auto& [key, v] : t.entries()) {
      os << "  \\{" << key.first.latex() << "{}_\\lambda " << key.second.latex() << "\\}_" << which << " &= "
         << v.latex();
      os << (++n < t.entries().size() ? " \\\\\n" : "\n");
    }
    os << "\\end{align*}\n";
  }
  return os.str();
}

std::string flows_latex(const std::map<int, std::map<GenId, DiffPoly>>& flows) {
  std::ostringstream os;
  for (const auto& [n, fl] : flows) {
    os << "\\begin{align*}\n";
    std::size_t k = 0;
    for (const auto& [g, v] : fl) {
      os << "  \\frac{d " << g.latex() << "}{d t_{" << n << "}} &= " << v.latex();
      os << (++k < fl.size() ? " \\\\\n" : "\n");
    }
    os << "\\end{align*}\n";
  }
  return os.str();
}

}  // namespace walgebra
