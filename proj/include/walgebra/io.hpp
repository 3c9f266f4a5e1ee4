#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "walgebra/pdo.hpp"
#include "walgebra/pva.hpp"
#include "walgebra/ring.hpp"
#include "walgebra/walg.hpp"

namespace walgebra {

/// Insertion-ordered so that emitted documents are byte-stable.
using Json = nlohmann::ordered_json;

struct BadJson : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rationals as [num, den]; components that do not fit in int64 are decimal strings.
Json to_json(const Rat& r);
Rat rat_from_json(const Json& j);

/// ["q", i, h, j, k], ["w", i, j, k] or ["u", n].
Json to_json(GenId g);
GenId gen_from_json(const Json& j);

/// {"monomials":[{"coeff":[num,den],"factors":[[gen, order, exp],...]},...]}
Json to_json(const DiffPoly& p);
DiffPoly diffpoly_from_json(const Json& j);

/// {"floor": k | null, "coeffs": {degree: DiffPoly}}; null marks an exact operator.
Json to_json(const PDO& p);
PDO pdo_from_json(const Json& j);
/// Row-major nested arrays of PDOs.
Json to_json(const MatPDO& m);
MatPDO matpdo_from_json(const Json& j);

/// {"coeffs": {power: DiffPoly}}
Json to_json(const LambdaPoly& p);
LambdaPoly lambdapoly_from_json(const Json& j);

/// [{"a": gen, "b": gen, "value": LambdaPoly}, ...] over the declared pairs.
Json to_json(const BracketTable& t);

/// {"check": name, "ok": bool, "items": [{"label", "status", "witness"}]}
Json to_json(const Report& r);

/// Key "i,j,k" of a w-generator.
std::string w_key(GenId g);

/// {"partition":[...], "generators":{"i,j,k": DiffPoly}, "L1": MatPDO}
Json generators_json(const WPresentation& pres, const MatPDO& L1);

/// Tables in display math, one row per entry.
std::string generators_latex(const WPresentation& pres);
std::string brackets_latex(const BracketPencil& pencil);
/// dw/dt_n = ... for every listed flow.
std::string flows_latex(const std::map<int, std::map<GenId, DiffPoly>>& flows);

}  // namespace walgebra
