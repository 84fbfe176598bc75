#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "torusflow/errors.hpp"
#include "torusflow/sweep.hpp"

using namespace torusflow;
using nlohmann::json;

namespace {
RunConfig base_config() {
  return parse_config(json::parse(R"({
    "model": "epitaxial", "params": {"K0": 0, "K1": 0.25, "K2": 1, "K3": 0.25}, "n": 4,
    "initial_data": {"kind": "random_decay", "decay": 5, "scale_to": {"norm": "a2", "value": 0.5}},
    "stepper": {"dt": 0.01, "t_end": 0.1, "record_every": 5}})"));
}

SweepOptions quiet(unsigned threads = 2) {
  SweepOptions o;
  o.write_outputs = false;
  o.threads = threads;
  return o;
}
}  // namespace

TEST_CASE("empty axes run the base config once", "[sweep]") {
  const auto s = run_sweep(base_config(), {}, quiet());
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].error.empty());
  CHECK(s.rows[0].status == RunStatus::completed);
}

TEST_CASE("satisfied flag flips at the checker threshold", "[sweep]") {
  // K2 - 2 (K1 + K3) a2 > 0  <=>  a2 < 1
  SweepAxis axis{"initial_data.scale_to.value", {}};
  for (double a : {0.6, 0.8, 0.95, 1.05, 1.2}) axis.values.push_back(a);
  const auto s = run_sweep(base_config(), {axis}, quiet());
  REQUIRE(s.rows.size() == 5);
  for (const auto& r : s.rows) {
    REQUIRE(r.theorem);
    CHECK(r.theorem->satisfied == (r.values[0].get<double>() < 1.0));
    CHECK(r.envelope.has_value() == r.theorem->satisfied);
  }
}

TEST_CASE("2x2 sweep keeps every row when one run fails", "[sweep]") {
  const std::vector<SweepAxis> axes{{"params.K2", {json(1.0), json(-1.0)}}, {"stepper.dt", {json(0.01), json(0.02)}}};
  const auto s = run_sweep(base_config(), axes, quiet());
  REQUIRE(s.rows.size() == 4);
  CHECK(s.rows[0].values[0] == 1.0);
  CHECK(s.rows[1].values[1] == 0.02);
  CHECK(s.rows[0].error.empty());
  CHECK(s.rows[1].error.empty());
  CHECK(s.rows[2].error.find("K2 > 0") != std::string::npos);
  CHECK_FALSE(s.rows[3].status);

  std::ostringstream os;
  write_sweep_csv(os, s);
  const std::string csv = os.str();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.rfind("index,params.K2,stepper.dt,theorem_id", 0) == 0);
}

TEST_CASE("results do not depend on the number of workers", "[sweep]") {
  const std::vector<SweepAxis> axes{{"seed", {json(1), json(2), json(3), json(4), json(5)}}};
  const auto one = run_sweep(base_config(), axes, quiet(1));
  const auto four = run_sweep(base_config(), axes, quiet(4));
  std::ostringstream a, b;
  write_sweep_csv(a, one);
  write_sweep_csv(b, four);
  CHECK(a.str() == b.str());
}

TEST_CASE("bad axes and oversize sweeps are rejected", "[sweep]") {
  CHECK_THROWS_AS(run_sweep(base_config(), {{"params.K9", {json(1)}}}, quiet()), ConfigError);
  CHECK_THROWS_AS(run_sweep(base_config(), {{"params.K1", {}}}, quiet()), ConfigError);
  SweepOptions small = quiet();
  small.max_runs = 3;
  CHECK_THROWS_AS(run_sweep(base_config(), {{"params.K1", {json(0.1), json(0.2)}}, {"seed", {json(1), json(2)}}}, small),
                  ConfigError);
}

TEST_CASE("sweep plans", "[sweep]") {
  const auto plan = parse_sweep_plan(json::parse(R"({"axes": [{"path": "params.K1", "values": [0.1, 0.2]}],
                                                     "max_runs": 10, "threads": 3})"));
  REQUIRE(plan.axes.size() == 1);
  CHECK(plan.axes[0].values.size() == 2);
  CHECK(plan.options.max_runs == 10);
  CHECK(plan.options.threads == 3);
  CHECK_THROWS_AS(parse_sweep_plan(json::parse(R"({"axis": []})")), ConfigError);
  CHECK_THROWS_AS(parse_sweep_plan(json::parse(R"({"axes": [{"path": "x"}]})")), ConfigError);
}

TEST_CASE("each run owns its output directory", "[sweep]") {
  const auto dir = std::filesystem::temp_directory_path() / "torusflow_sweep_dirs";
  std::filesystem::remove_all(dir);
  SweepOptions o;
  o.directory = dir;
  o.threads = 2;
  run_sweep(base_config(), {{"params.K1", {json(0.1), json(0.2), json(0.3)}}}, o);
  for (const char* name : {"run_0000", "run_0001", "run_0002"}) {
    CHECK(std::filesystem::exists(dir / name / "trace.csv"));
    CHECK(std::filesystem::exists(dir / name / "report.json"));
  }
  std::filesystem::remove_all(dir);
}
