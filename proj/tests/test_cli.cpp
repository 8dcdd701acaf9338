#include <filesystem>

#include "doctest.h"
#include "magtb/acceptance.hpp"
#include "magtb/artifacts.hpp"
#include "magtb/cli.hpp"
#include "magtb/common.hpp"

using namespace magtb;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / "magtb_cli_test" / name;
  std::filesystem::remove_all(p);
  return p;
}

RunConfig config(const std::string& command, const std::filesystem::path& out) {
  RunConfig c;
  c.command = command;
  c.out = out.string();
  return c;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("flux parsing and beta conversion") {
    CHECK(parse_flux("1/3") == std::pair{1, 3});
    CHECK(parse_flux("-2/7") == std::pair{-2, 7});
    CHECK_THROWS_AS(parse_flux("1/0"), ArgumentError);
    CHECK_THROWS_AS(parse_flux("13"), ArgumentError);
    CHECK_THROWS_AS(parse_flux("1/3x"), ArgumentError);
    RunConfig c;
    c.a = 3.0;
    c.flux = "1/3";
    CHECK(resolved_beta(c) == doctest::Approx(kPi / 27.0));
    c.flux.clear();
    c.beta = 0.25;
    CHECK(resolved_beta(c) == 0.25);
  }

  TEST_CASE("config serialisation and hashing") {
    RunConfig c;
    c.command = "tb";
    c.lambdas = {4.0, 5.0};
    c.seed = 123;
    const RunConfig back = run_config_from_json(nlohmann::json::parse(to_json(c).dump()));
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    RunConfig moved = c;
    moved.out = "/elsewhere";
    CHECK(config_hash(moved) == config_hash(c));
    moved.seed = 124;
    CHECK(config_hash(moved) != config_hash(c));
    CHECK_THROWS_AS(run_config_from_json({{"frobnicate", 1}}), ArgumentError);
    CHECK_THROWS_AS(run_config_from_json({{"nx", "ten"}}), ArgumentError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::array()), ArgumentError);
    CHECK(run_config_from_json({{"nx", 4}}).ny == RunConfig{}.ny);
  }

  TEST_CASE("validate writes artifacts with metadata and exits 0") {
    const auto out = scratch("validate");
    RunConfig c = config("validate", out);
    const RunOutcome r = run(c);
    CHECK(r.exit_code == kExitOk);
    const CsvTable bonds = parse_csv(read_text(out / "bonds.csv"));
    CHECK(bonds.meta.at("config_hash") == config_hash(c));
    CHECK(bonds.meta.at("command") == "validate");
    const auto manifest = nlohmann::json::parse(read_text(out / "manifest.json"));
    CHECK(manifest.at("config_hash") == config_hash(c));
    CHECK(manifest.contains("timestamp"));
    CHECK(manifest.at("exit_code") == 0);
    CHECK(nlohmann::json::parse(read_text(out / "validate.json")).at("passes") == true);
  }

  TEST_CASE("deterministic commands overwrite identically") {
    const auto out = scratch("tb");
    RunConfig c = config("tb", out);
    c.flux = "1/4";
    c.nx = c.ny = 5;
    REQUIRE(run(c).exit_code == kExitOk);
    const std::string first = read_text(out / "tb_coo.csv") + read_text(out / "tb.json");
    REQUIRE(run(c).exit_code == kExitOk);
    CHECK(read_text(out / "tb_coo.csv") + read_text(out / "tb.json") == first);
  }

  TEST_CASE("butterfly row count") {
    const auto out = scratch("butterfly");
    RunConfig c = config("butterfly", out);
    c.qmax = 12;
    c.size = 20;
    REQUIRE(run(c).exit_code == kExitOk);
    const CsvTable t = parse_csv(read_text(out / "butterfly.csv"));
    CHECK(t.rows.size() >= 1000);
    CHECK(t.meta.at("config_hash") == config_hash(c));
  }

  TEST_CASE("errors map to exit 1 and failed checks to exit 2") {
    CHECK(run(config("frobnicate", scratch("unknown"))).exit_code == kExitError);
    RunConfig c = config("chern", scratch("chern_bad"));
    c.flux = "1/3";
    c.gap = 5;
    CHECK(run(c).exit_code == kExitError);
    RunConfig v = config("validate", scratch("validate_bad"));
    v.lattice = "kagome";
    CHECK(run(v).exit_code == kExitError);
    RunConfig h = config("hopping", scratch("hopping_bad"));
    h.a = 1.5;
    CHECK(run(h).exit_code == kExitError);
    RunConfig r = config("reduce", scratch("reduce_bad"));
    r.wells = 3;
    CHECK(run(r).exit_code == kExitError);
  }

  TEST_CASE("atomic and gramian commands") {
    const auto out = scratch("atomic");
    RunConfig c = config("atomic", out);
    CHECK(run(c).exit_code == kExitOk);
    CHECK(parse_csv(read_text(out / "atomic.csv")).header == std::vector<std::string>{"r", "phi0"});
    RunConfig g = config("gramian", scratch("gramian"));
    g.a = 3.0;
    g.nx = g.ny = 3;
    const RunOutcome r = run(g);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.summary.at("MGM_residual").get<double>() < 1e-10);
  }

  TEST_CASE("reproduce: empty suite passes") {
    const auto out = scratch("suite_empty");
    const SuiteSummary s = reproduce_all(nlohmann::json{{"cases", nlohmann::json::array()}}, out);
    CHECK(s.exit_code == kExitOk);
    CHECK(s.cases.empty());
    CHECK(std::filesystem::exists(out / "reproduce_summary.json"));
  }

  TEST_CASE("reproduce: one corrupted config is isolated") {
    const auto out = scratch("suite_corrupt");
    const nlohmann::json suite = {
        {"cases",
         {{{"name", "good"}, {"config", {{"command", "validate"}, {"nx", 4}, {"ny", 4}}}},
          {{"name", "corrupt"}, {"config", {{"command", "validate"}, {"nx", "four"}}}},
          {{"name", "landau"}, {"criterion", 1}},
          {{"name", "no-such-criterion"}, {"criterion", 42}},
          {{"name", "also-good"}, {"config", {{"command", "tb"}, {"nx", 3}, {"ny", 3}, {"beta", 0.2}}}}}}};
    const SuiteSummary s = reproduce_all(suite, out);
    REQUIRE(s.cases.size() == 5);
    CHECK(s.exit_code == kExitError);
    CHECK(s.cases[0].status == "pass");
    CHECK(s.cases[1].status == "error");
    CHECK_FALSE(s.cases[1].message.empty());
    CHECK(s.cases[2].status == "pass");
    CHECK(s.cases[3].status == "error");
    CHECK(s.cases[4].status == "pass");
    CHECK(std::filesystem::exists(out / "also-good" / "tb.json"));
    CHECK(s.table().find("3/5 passed") != std::string::npos);
  }

  TEST_CASE("reproduce: malformed suite file") {
    const auto dir = scratch("suite_file");
    write_text(dir / "suite.json", "{ not json");
    CHECK_THROWS_AS(reproduce_all(dir / "suite.json", dir / "out"), ArgumentError);
    CHECK_THROWS_AS(reproduce_all(nlohmann::json{{"tests", 1}}, dir / "out"), ArgumentError);
  }

  TEST_CASE("default suite covers every acceptance criterion") {
    const nlohmann::json s = default_suite();
    CHECK(s.at("cases").size() == acceptance_criteria().size());
  }

  TEST_CASE("acceptance summary lines") {
    const CriterionResult r = run_criterion(1);
    CHECK(r.passed);
    CHECK(summary_line(r).rfind("criterion 1 [PASS]", 0) == 0);
    const CriterionResult bad = run_criterion(99);
    CHECK(bad.errored);
    CHECK_FALSE(bad.passed);
    CHECK(summary_line(bad).find("[ERROR]") != std::string::npos);
  }
}
