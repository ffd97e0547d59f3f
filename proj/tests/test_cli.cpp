#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "anop/decomposition.hpp"
#include "anop/json_io.hpp"
#include "golden.hpp"

namespace anop {
namespace {

using namespace anop::testing;
using nlohmann::json;

std::string corpus(const std::string& name) { return source_path("corpus/" + name); }

// ANOP_REGEN_GOLDEN=1 rewrites the golden files instead of comparing.
TEST(Golden, ReportsMatch) {
  const bool regen = std::getenv("ANOP_REGEN_GOLDEN") != nullptr;
  const auto cases = load_manifest();
  ASSERT_FALSE(cases.empty());
  for (const auto& c : cases) {
    const auto r = run_cli(c.args);
    EXPECT_EQ(r.code, c.exit_code) << c.file;
    if (regen) {
      std::ofstream(golden_path(c), std::ios::binary) << r.out;
      continue;
    }
    const std::string expected = read_file(golden_path(c));
    ASSERT_FALSE(expected.empty()) << "missing golden " << c.file;
    EXPECT_EQ(r.out, expected) << c.file;
  }
}

TEST(Golden, RepeatedRunsIdentical) {
  for (const auto& c : load_manifest()) {
    EXPECT_EQ(run_cli(c.args).out, run_cli(c.args).out) << c.file;
  }
}

TEST(Cli, DecomposeRecomposePipe) {
  for (const char* name : {"positive_tail.json", "case_alpha_zero.json", "case_f_zero.json", "case_k_zero.json",
                           "case_k_and_f.json", "kernel.json"}) {
    const auto d = run_cli({"decompose", "--in", corpus(name)});
    ASSERT_EQ(d.code, 0) << name;
    const auto r = run_cli({"recompose", "--in", "-"}, d.out);
    ASSERT_EQ(r.code, 0) << name << r.out;
    const auto original = io::model_from_json(json::parse(read_file(corpus(name))));
    const auto back = io::model_from_json(json::parse(r.out).at("result"));
    EXPECT_TRUE(models_equal(normalize_model(original), back, 1e-12)) << name;
  }
}

TEST(Cli, OutputParsesBack) {
  const auto d = run_cli({"decompose", "--in", corpus("case_k_and_f.json")});
  const json payload = json::parse(d.out).at("result");
  EXPECT_EQ(io::to_json(io::triple_from_json(payload)), payload);

  const auto s = run_cli({"structure", "--in", corpus("normal.json")});
  const json sd = json::parse(s.out).at("result");
  EXPECT_EQ(io::to_json(io::structured_from_json(sd)), sd);

  const auto c = run_cli({"classify", "--in", corpus("selfadjoint.json")});
  const json m = json::parse(read_file(corpus("selfadjoint.json")));
  EXPECT_EQ(io::to_json(io::model_from_json(m)), io::to_json(io::model_from_json(io::to_json(io::model_from_json(m)))));
  EXPECT_EQ(json::parse(c.out).at("schema_version"), "1");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"no-such-verb"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"shift", "--in", corpus("selfadjoint.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"realize", "--in", corpus("triple.json"), "--dim", "0"}).code, cli::kExitUsage);

  const auto missing = run_cli({"classify", "--in", corpus("does_not_exist.json")});
  EXPECT_EQ(missing.code, cli::kExitIo);
  EXPECT_EQ(json::parse(missing.out).at("diagnostics").at(0).at("code"), "IO");

  EXPECT_EQ(run_cli({"classify", "--in", "-"}, "{not json").code, cli::kExitIo);
  EXPECT_EQ(run_cli({"classify", "--in", corpus("triple.json")}).code, cli::kExitIo);

  const auto kernel = run_cli({"invert", "--in", corpus("kernel.json")});
  EXPECT_EQ(kernel.code, cli::kExitDomain);
  EXPECT_EQ(json::parse(kernel.out).at("diagnostics").at(0).at("code"), "NOT_INJECTIVE");
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "anop_cli_out.json";
  const auto r = run_cli({"classify", "--in", corpus("positive_tail.json"), "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_file(path.string()), run_cli({"classify", "--in", corpus("positive_tail.json")}).out);
  std::filesystem::remove(path);
}

TEST(Cli, RealizeVerifyPasses) {
  const auto r = run_cli({"realize", "--in", corpus("triple.json"), "--dim", "16", "--seed", "7", "--verify"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out).at("result");
  EXPECT_TRUE(j.at("verification").at("passed").get<bool>());
  const auto v = run_cli({"verify", "--in", "-"}, r.out);
  ASSERT_EQ(v.code, 0) << v.out;
  EXPECT_TRUE(json::parse(v.out).at("result").at("passed").get<bool>());
}

TEST(Cli, FuzzAgrees) {
  const auto r = run_cli({"fuzz", "--trials", "200"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out).at("result");
  EXPECT_EQ(j.at("agreements"), 200);
}

}  // namespace
}  // namespace anop
