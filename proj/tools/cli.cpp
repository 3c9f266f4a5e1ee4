#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "walgebra/hierarchy.hpp"
#include "walgebra/io.hpp"
#include "walgebra/walg.hpp"

namespace walgebra::cli {

int RunConfig::effective_floor() const { return floor ? *floor : -(2 * partition.front() + 2); }

int RunConfig::effective_depth() const { return depth ? *depth : effective_floor(); }

namespace {

RatMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("sbar: unknown preset or unreadable file " + path);
  std::vector<std::vector<Rat>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<Rat> row;
    std::string tok;
    while (ls >> tok) {
      try {
        row.push_back(Rat::parse(tok));
      } catch (const std::exception&) {
        throw ConfigError("sbar file " + path + ": bad entry " + tok);
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw ConfigError("sbar file " + path + ": ragged rows");
  }
  if (rows.empty()) throw ConfigError("sbar file " + path + " is empty");
  return RatMatrix::from_rows(rows);
}

}  // namespace

RatMatrix resolve_sbar(const std::string& choice, const Pyramid& pyr) {
  int r1 = pyr.r1();
  RatMatrix m;
  if (choice == "identity") {
    m = RatMatrix::identity(r1);
  } else if (choice == "zero") {
    m = RatMatrix(r1, r1);
  } else if (choice == "E11") {
    m = RatMatrix(r1, r1);
    m(0, 0) = Rat(1);
  } else {
    m = read_matrix(choice);
  }
  if (m.rows() != r1 || m.cols() != r1) {
    throw ConfigError("sbar must be " + std::to_string(r1) + "x" + std::to_string(r1) + ", got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  return m;
}

namespace {

const char* extension(Format f) {
  switch (f) {
    case Format::Json:
      return ".json";
    case Format::Latex:
      return ".tex";
    case Format::Text:
      return ".txt";
  }
  return ".txt";
}

void emit(const RunConfig& cfg, const std::string& body, std::ostream& out) {
  if (cfg.out_dir.empty()) {
    out << body;
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::path file = std::filesystem::path(cfg.out_dir) / (cfg.command + extension(cfg.format));
  std::ofstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + file.string());
  f << body;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json matrix_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

std::string partition_str(const std::vector<int>& parts) {
  std::string s;
  for (std::size_t n = 0; n < parts.size(); ++n) s += (n ? "," : "") + std::to_string(parts[n]);
  return s;
}

std::string report_text(const std::vector<Report>& reports) {
  std::ostringstream os;
  for (const Report& r : reports) {
    for (const CheckItem& it : r.items) {
      os << (it.pass ? "PASS  " : "FAIL  ") << r.name << ": " << it.label;
      if (!it.pass && !it.witness.empty()) os << "  [" << it.witness << "]";
      os << "\n";
    }
  }
  return os.str();
}

std::string report_latex(const std::vector<Report>& reports) {
  std::ostringstream os;
  os << "\\begin{tabular}{ll}\n";
  for (const Report& r : reports) {
    os << "  \\texttt{" << r.name << "} & " << (r.ok() ? "pass" : "fail") << " \\\\\n";
  }
  os << "\\end{tabular}\n";
  return os.str();
}

bool all_ok(const std::vector<Report>& reports) {
  for (const Report& r : reports) {
    if (!r.ok()) return false;
  }
  return true;
}

Json reports_json(const std::vector<Report>& reports) {
  Json a = Json::array();
  for (const Report& r : reports) a.push_back(to_json(r));
  return a;
}

BracketPencil pencil_for(const RunConfig& cfg, const WPresentation& pres, const SFactorization& s) {
  BracketPencil p = w_pencil(pres, s);
  if (cfg.corrupt) p.bracket0 = p.bracket0.corrupted();
  return p;
}

int cmd_generators(const RunConfig& cfg, const WPresentation& pres, std::ostream& out) {
  MatPDO l1 = build_L1_from_w(pres, cfg.effective_floor());
  std::string body;
  if (cfg.format == Format::Json) {
    body = dump(generators_json(pres, l1));
  } else if (cfg.format == Format::Latex) {
    body = generators_latex(pres);
  } else {
    std::ostringstream os;
    os << "partition " << partition_str(cfg.partition) << "\n";
    for (GenId g : pres.wgens) os << g.str() << " = " << pres.generators.at(g).str() << "\n";
    os << "L1 = " << l1.str() << "\n";
    body = os.str();
  }
  emit(cfg, body, out);
  return kOk;
}

int cmd_brackets(const RunConfig& cfg, const WPresentation& pres, const RatMatrix& sbar, std::ostream& out) {
  SFactorization s = s_factorization(pres.pyr, sbar);
  BracketPencil pencil = pencil_for(cfg, pres, s);
  std::string body;
  if (cfg.format == Format::Json) {
    body = dump({{"partition", cfg.partition},
                 {"sbar", matrix_json(sbar)},
                 {"bracket0", to_json(pencil.bracket0)},
                 {"bracket1", to_json(pencil.bracket1)}});
  } else if (cfg.format == Format::Latex) {
    body = brackets_latex(pencil);
  } else {
    std::ostringstream os;
    for (int which : {0, 1}) {
      const BracketTable& t = which == 0 ? pencil.bracket0 : pencil.bracket1;
      for (const auto& [key, v] : t.entries()) {
        os << "{" << key.first.str() << " L " << key.second.str() << "}_" << which << " = " << v.str() << "\n";
      }
    }
    body = os.str();
  }
  emit(cfg, body, out);
  return kOk;
}

using FlowTable = std::map<int, std::map<GenId, DiffPoly>>;

int cmd_hierarchy(const RunConfig& cfg, const WPresentation& pres, const RatMatrix& sbar, std::ostream& out) {
  const Pyramid& pyr = pres.pyr;
  int K = pyr.part(1);
  int n_max = cfg.constrained ? cfg.flows : cfg.flows + K;
  int floor = std::min(cfg.effective_floor(), -(n_max + 2));
  std::vector<Report> checks;
  FlowTable flows;
  DensityLedger led;
  if (cfg.constrained) {
    MatPDO lbar = constrained_reduction(pres, floor);
    led = densities(lbar, K, n_max, floor);
    for (int n = 0; n <= cfg.flows; ++n) flows[n] = constrained_flows(pres, lbar, led.root, n);
    if (cfg.corrupt) {
      for (auto& [g, v] : flows[cfg.flows]) {
        if (v.is_zero()) continue;
        v = -v;
        break;
      }
    }
    for (int n = 1; n <= cfg.flows; ++n) checks.push_back(check_lax_flows(lbar, led.root, flows[n], n));
  } else {
    SFactorization s = s_factorization(pyr, sbar);
    BracketPencil pencil = pencil_for(cfg, pres, s);
    MatPDO L = reduce_L(build_L1_from_w(pres, floor), s, floor);
    led = densities(L, K, n_max, floor);
    for (int n = 0; n <= cfg.flows; ++n) {
      flows[n] = hamiltonian_flows(pencil.bracket0, led.at(n));
      checks.push_back(check_lenard_magri(L, pencil, led, n));
    }
    DensityLedger low;
    low.K = led.K;
    for (int n = 1; n <= cfg.flows; ++n) low.h[n] = led.h.at(n);
    checks.push_back(involution_suite(low, pencil));
  }
  std::string body;
  if (cfg.format == Format::Json) {
    Json dens = Json::object();
    for (const auto& [n, e] : led.h) dens[std::to_string(n)] = to_json(e.density);
    Json fl = Json::object();
    for (const auto& [n, m] : flows) {
      Json row = Json::object();
      for (const auto& [g, v] : m) row["w_{" + w_key(g) + "}"] = to_json(v);
      fl[std::to_string(n)] = row;
    }
    body = dump({{"partition", cfg.partition},
                 {"reduce", cfg.constrained ? "constrained" : "none"},
                 {"densities", dens},
                 {"flows", fl},
                 {"checks", reports_json(checks)}});
  } else if (cfg.format == Format::Latex) {
    body = flows_latex(flows);
  } else {
    std::ostringstream os;
    for (const auto& [n, e] : led.h) os << "h_" << n << " = " << e.normal.str() << "\n";
    for (const auto& [n, m] : flows) {
      for (const auto& [g, v] : m) os << "d" << g.str() << "/dt_" << n << " = " << v.str() << "\n";
    }
    os << report_text(checks);
    body = os.str();
  }
  emit(cfg, body, out);
  return all_ok(checks) ? kOk : kCheckFailed;
}

Report membership_report(const std::string& name, const Pyramid& pyr, const BracketTable& rho0,
                         const std::vector<std::pair<std::string, DiffPoly>>& items) {
  Report rep{name, {}};
  for (const auto& [label, p] : items) {
    bool ok = membership_test(p, pyr, rho0);
    rep.items.push_back({label, ok, ok ? "" : p.str()});
  }
  return rep;
}

int cmd_verify(const RunConfig& cfg, const WPresentation& pres, const RatMatrix& sbar, std::ostream& out) {
  const Pyramid& pyr = pres.pyr;
  int floor = cfg.effective_floor();
  int depth = cfg.effective_depth();
  int K = pyr.part(1);
  SFactorization s = s_factorization(pyr, sbar);
  BracketPencil pencil = pencil_for(cfg, pres, s);
  std::vector<Report> reps;

  for (int eps : {0, 1}) {
    BracketTable t = pencil.at(Rat(eps));
    Report sk = check_skew(t);
    sk.name += " eps=" + std::to_string(eps);
    Report ja = check_jacobi(t);
    ja.name += " eps=" + std::to_string(eps);
    reps.push_back(sk);
    reps.push_back(ja);
  }

  std::vector<std::pair<std::string, DiffPoly>> gens;
  for (GenId g : pres.wgens) gens.emplace_back(g.str(), pres.generators.at(g));
  reps.push_back(membership_report("generators lie in W", pyr, pres.rho0, gens));

  MatPDO l1 = build_L1_from_w(pres, floor);
  {
    MatPDO fq = build_L1_from_q(pyr, floor);
    MatPDO fw = l1.map_coeffs([&](const DiffPoly& c) { return to_q(pres, c); });
    int lo = std::max(fq.floor(), fw.floor());
    bool ok = fq.truncated(lo) == fw.truncated(lo);
    reps.push_back({"L1 from q equals L1 from w", {{"floor " + std::to_string(lo), ok, ok ? "" : "coefficients differ"}}});

    MatPDO inv = l1_inverse_from_q(pyr, floor);
    std::vector<std::pair<std::string, DiffPoly>> coeffs;
    for (int i = 0; i < inv.rows(); ++i) {
      for (int j = 0; j < inv.cols(); ++j) {
        for (const auto& [e, c] : inv(i, j).coeffs()) {
          if (e >= floor) coeffs.emplace_back("(" + std::to_string(i) + "," + std::to_string(j) + ") d^" + std::to_string(e), c);
        }
      }
    }
    reps.push_back(membership_report("L1^{-1} coefficients lie in W", pyr, pres.rho0, coeffs));
  }

  reps.push_back(check_adler(l1, pencil.bracket0, depth));
  reps.push_back(check_bi_adler(l1, pencil, sbar, depth));
  if (pyr.N() <= 3) {
    BracketPencil affine = affine_pencil(pyr, s.S);
    Report a = check_adler(affine_operator(pyr), affine.bracket0, depth);
    a.name = "affine " + a.name;
    // Coefficients of (1 d + Q)^{-1} grow combinatorially with depth on gl_3.
    int inv_depth = pyr.N() <= 2 ? depth : std::max(depth, -4);
    Report ia = check_inverse_adler(affine_operator(pyr), affine.bracket0, inv_depth);
    ia.name = "affine " + ia.name + " depth=" + std::to_string(inv_depth);
    reps.push_back(a);
    reps.push_back(ia);
  }
  // Centrality is a statement about S = S_1, i.e. Sbar = 1, whatever Sbar was requested.
  reps.push_back(check_casimirs(pres, s_factorization(pyr, RatMatrix::identity(pyr.r1()))));

  MatPDO L = reduce_L(l1, s, floor);
  if (s.rank != pyr.r1() || !(s.Ibar == RatMatrix::identity(s.rank))) {
    bool ok = shift_quasideterminant_check(l1, s.Ibar, s.Jbar, RatMatrix::identity(s.rank), floor);
    reps.push_back({"reduce_L shift identity", {{"|L1 + Ibar Jbar|_{Ibar Jbar} = |L1|_{Ibar Jbar} + 1", ok, ok ? "" : "mismatch"}}});
  }

  int n_max = cfg.flows + K;
  DensityLedger led = densities(L, K, n_max, std::min(floor, -(n_max + 2)));
  for (int n = 0; n <= cfg.flows; ++n) reps.push_back(check_lenard_magri(L, pencil, led, n));
  DensityLedger low;
  low.K = led.K;
  for (int n = 1; n <= cfg.flows; ++n) low.h[n] = led.h.at(n);
  reps.push_back(involution_suite(low, pencil));

  bool ok = all_ok(reps);
  std::string body;
  if (cfg.format == Format::Json) {
    body = dump({{"partition", cfg.partition},
                 {"sbar", matrix_json(sbar)},
                 {"floor", floor},
                 {"depth", depth},
                 {"ok", ok},
                 {"reports", reports_json(reps)}});
  } else if (cfg.format == Format::Latex) {
    body = report_latex(reps);
  } else {
    body = report_text(reps) + (ok ? "ALL PASS\n" : "FAILURES\n");
  }
  emit(cfg, body, out);
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.partition.empty()) throw ConfigError("empty partition");
    Pyramid pyr(cfg.partition);
    RatMatrix sbar = resolve_sbar(cfg.sbar, pyr);
    if (cfg.flows < 0) throw ConfigError("flows must be >= 0");
    if (cfg.effective_floor() > -1) throw ConfigError("floor must be negative");
    if (cfg.constrained && cfg.command != "hierarchy") throw ConfigError("--reduce constrained applies to hierarchy only");
    WPresentation pres = solve_generators(pyr);
    if (cfg.command == "generators") return cmd_generators(cfg, pres, out);
    if (cfg.command == "brackets") return cmd_brackets(cfg, pres, sbar, out);
    if (cfg.command == "hierarchy") return cmd_hierarchy(cfg, pres, sbar, out);
    if (cfg.command == "verify") return cmd_verify(cfg, pres, sbar, out);
    throw ConfigError("unknown command " + cfg.command);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BadPartition& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const WrongPartitionShape& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputeError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical affine W-algebras: generators, lambda-brackets and Lax hierarchies"};
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.require_subcommand(1, 1);

  std::vector<int> partition;
  std::string sbar = "identity";
  std::optional<int> floor;
  std::optional<int> depth;
  int flows = 3;
  std::string format = "text";
  std::string reduce = "none";
  std::string out_dir;
  bool corrupt = false;

  app.add_option("--partition", partition, "Parts p1 >= p2 >= ... separated by commas")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(1, 64));
  app.add_option("--sbar", sbar, "identity, E11, zero, or a file holding an r1 x r1 rational matrix");
  app.add_option("--floor", floor, "Truncation floor for pseudodifferential operators (default -(2 p1 + 2))");
  app.add_option("--depth", depth, "z-depth of the Adler checks (default: the floor)");
  app.add_option("--flows", flows, "Highest flow index n")->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "latex", "text"}));
  app.add_option("--reduce", reduce, "Reduction of L1 for the hierarchy")->check(CLI::IsMember({"none", "constrained"}));
  app.add_option("--out", out_dir, "Output directory (default: standard output; WALGEBRA_OUT also sets it)");
  app.add_flag("--corrupt", corrupt, "Flip the sign of one bracket entry (negative control)");

  for (const char* name : {"generators", "brackets", "hierarchy", "verify"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("generators")->description("Solve for the generators w_{ij;k} and emit them with L1");
  app.get_subcommand("brackets")->description("Emit both lambda-brackets on all generator pairs");
  app.get_subcommand("hierarchy")->description("Emit densities and flows; checks fold into the exit code");
  app.get_subcommand("verify")->description("Run every checker and report pass/fail with witnesses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig cfg;
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.partition = partition;
  cfg.sbar = sbar;
  cfg.floor = floor;
  cfg.depth = depth;
  cfg.flows = flows;
  cfg.format = format == "json" ? Format::Json : format == "latex" ? Format::Latex : Format::Text;
  cfg.constrained = reduce == "constrained";
  cfg.out_dir = out_dir;
  if (cfg.out_dir.empty()) {
    if (const char* env = std::getenv("WALGEBRA_OUT")) cfg.out_dir = env;
  }
  cfg.corrupt = corrupt;
  return execute(cfg, out, err);
}

}  // namespace walgebra::cli
