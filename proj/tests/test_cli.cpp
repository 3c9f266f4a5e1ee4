#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "walgebra/io.hpp"

using namespace walgebra;
using namespace walgebra::fixtures;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "walgebra");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "walgebra_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, GeneratorsPrincipal) {
  CliRun r = run_cli({"generators", "--partition", "2"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("w(11;1) = q(11,11) + q(12,12)"), std::string::npos) << r.out;
  CliRun one = run_cli({"generators", "--partition", "1", "--format", "json"});
  Json doc = Json::parse(one.out);
  ASSERT_EQ(doc.at("generators").size(), 1u);
  EXPECT_EQ(diffpoly_from_json(doc.at("generators").at("1,1,0")), q(1, 1, 1, 1));
}

TEST(Cli, GeneratorsShortMatchFixture) {
  CliRun r = run_cli({"generators", "--partition", "2,2", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk);
  Json doc = Json::parse(r.out);
  EXPECT_EQ(doc.at("partition"), Json::array({2, 2}));
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      std::string key = std::to_string(i) + "," + std::to_string(j) + ",1";
      EXPECT_EQ(diffpoly_from_json(doc.at("generators").at(key)), q(i, 1, j, 1) + q(i, 2, j, 2)) << key;
      EXPECT_EQ(diffpoly_from_json(doc.at("generators").at(std::to_string(i) + "," + std::to_string(j) + ",0")),
                short_w0(2, j, i));
    }
  }
  EXPECT_EQ(matpdo_from_json(doc.at("L1")).rows(), 2);
}

TEST(Cli, BracketsMinimalTable) {
  CliRun r = run_cli({"brackets", "--partition", "2,1", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk);
  Json doc = Json::parse(r.out);
  EXPECT_EQ(doc.at("bracket0").size(), 25u);
  for (const Json& e : doc.at("bracket1")) {
    if (gen_from_json(e.at("a")) == GenId::w(1, 1, 0) && gen_from_json(e.at("b")) == GenId::w(1, 1, 0)) {
      EXPECT_EQ(lambdapoly_from_json(e.at("value")), LambdaPoly::term(DiffPoly(2), 1));
    }
  }
}

TEST(Cli, HierarchyKdv) {
  CliRun r = run_cli({"hierarchy", "--partition", "2", "--flows", "3", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.out;
  Json doc = Json::parse(r.out);
  DiffPoly f3 = diffpoly_from_json(doc.at("flows").at("3").at("w_{1,1,0}"));
  DiffPoly w0 = w(1, 1, 0);
  f3 = substitute(f3, {{GenId::w(1, 1, 1), DiffPoly()}}, true);
  EXPECT_EQ(f3, Rat(1, 4) * w0.d(3) - Rat(3, 2) * w0 * w0.d());
  for (const Json& rep : doc.at("checks")) EXPECT_TRUE(rep.at("ok").get<bool>()) << rep.dump();

  CliRun zero = run_cli({"hierarchy", "--partition", "2", "--flows", "0", "--format", "json"});
  ASSERT_EQ(zero.code, cli::kOk);
  for (const auto& [k, v] : Json::parse(zero.out).at("flows").at("0").items()) {
    EXPECT_TRUE(diffpoly_from_json(v).is_zero()) << k;
  }
}

TEST(Cli, HierarchyConstrained) {
  CliRun r = run_cli({"hierarchy", "--partition", "2,1", "--reduce", "constrained", "--flows", "2", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc.at("flows").at("2").contains("w_{2,1,0}"));
  EXPECT_EQ(run_cli({"hierarchy", "--partition", "2,1", "--reduce", "constrained", "--corrupt"}).code,
            cli::kCheckFailed);
  EXPECT_EQ(run_cli({"hierarchy", "--partition", "2,2", "--reduce", "constrained"}).code, cli::kUsage);
}

TEST(Cli, VerifyPassesAndCorruptionFails) {
  CliRun ok = run_cli({"verify", "--partition", "2"});
  EXPECT_EQ(ok.code, cli::kOk) << ok.out;
  EXPECT_NE(ok.out.find("ALL PASS"), std::string::npos);
  CliRun e11 = run_cli({"verify", "--partition", "2,2", "--sbar", "E11", "--format", "json"});
  EXPECT_EQ(e11.code, cli::kOk);
  EXPECT_TRUE(Json::parse(e11.out).at("ok").get<bool>());
  CliRun bad = run_cli({"verify", "--partition", "2", "--corrupt"});
  EXPECT_EQ(bad.code, cli::kCheckFailed);
  EXPECT_NE(bad.out.find("FAIL  skewsymmetry"), std::string::npos);
}

TEST(Cli, ConfigRejection) {
  auto bad_sbar = scratch("bad_sbar.txt");
  std::ofstream(bad_sbar) << "1 0 0\n0 1 0\n";
  CliRun r = run_cli({"brackets", "--partition", "2,2", "--sbar", bad_sbar.string()});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("2x2"), std::string::npos);
  EXPECT_EQ(run_cli({"brackets", "--partition", "2", "--sbar", "E11x"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"generators", "--partition", "1,2"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"generators", "--partition", "0"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"generators"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"generators", "--partition", "2", "--floor", "3"}).code, cli::kUsage);
}

TEST(Cli, CustomSbarFile) {
  auto file = scratch("sbar.txt");
  std::ofstream(file) << "# upper triangular\n1 1/2\n0 -3\n";
  CliRun r = run_cli({"brackets", "--partition", "2,2", "--sbar", file.string(), "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  Json s = Json::parse(r.out).at("sbar");
  EXPECT_EQ(rat_from_json(s.at(0).at(1)), Rat(1, 2));
  EXPECT_EQ(rat_from_json(s.at(1).at(1)), Rat(-3));
}

TEST(Cli, ConfigFileAndOverride) {
  auto cfg = scratch("run.cfg");
  std::ofstream(cfg) << "partition=2,2\nformat=json\n";
  CliRun a = run_cli({"generators", "--config", cfg.string()});
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(Json::parse(a.out).at("partition"), Json::array({2, 2}));
  CliRun b = run_cli({"generators", "--config", cfg.string(), "--partition", "3"});
  ASSERT_EQ(b.code, cli::kOk) << b.err;
  EXPECT_EQ(Json::parse(b.out).at("partition"), Json::array({3}));
}

TEST(Cli, OutputDirectoryAndDeterminism) {
  auto dir = scratch("out");
  std::filesystem::remove_all(dir);
  CliRun r = run_cli({"brackets", "--partition", "2,1", "--format", "json", "--out", dir.string()});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(dir / "brackets.json");
  std::stringstream file;
  file << f.rdbuf();
  CliRun again = run_cli({"brackets", "--partition", "2,1", "--format", "json"});
  EXPECT_EQ(file.str(), again.out);
}

TEST(Cli, LatexOutput) {
  CliRun r = run_cli({"hierarchy", "--partition", "2", "--flows", "1", "--format", "latex"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("\\frac{d"), std::string::npos);
  CliRun g = run_cli({"generators", "--partition", "2,1", "--format", "latex"});
  EXPECT_NE(g.out.find("\\begin{align*}"), std::string::npos);
}
