#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / ("torusflow_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }

  int run(const std::string& args) const {
    const std::string cmd = "cd '" + dir.string() + "' && '" TORUSFLOW_CLI_PATH "' " + args + " > out.txt 2> err.txt";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream is(dir / name);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }
};

const char* kSmallRun = R"({
  "model": "epitaxial", "params": {"K0": 0, "K1": 0.25, "K2": 1, "K3": 0.25}, "n": 6,
  "initial_data": {"kind": "random_decay", "decay": 5, "scale_to": {"norm": "a2", "value": 0.5}},
  "stepper": {"dt": 0.01, "t_end": 0.5, "record_every": 5},
  "outputs": {"directory": "out"}})";

}  // namespace

TEST_CASE("simulate writes outputs and exits 0", "[cli]") {
  Workspace w("simulate");
  w.write("run.json", kSmallRun);
  REQUIRE(w.run("simulate run.json") == 0);
  CHECK(fs::exists(w.dir / "out" / "trace.csv"));
  CHECK(fs::exists(w.dir / "out" / "report.json"));
  CHECK(fs::exists(w.dir / "out" / "final_snapshot.txt"));
  CHECK(w.read("out.txt").find("completed") != std::string::npos);

  CHECK(w.run("simulate run.json -o other") == 0);
  CHECK(w.read("out/trace.csv") == w.read("other/trace.csv"));
}

TEST_CASE("configuration errors exit 2 with field messages", "[cli]") {
  Workspace w("config");
  w.write("bad.json", R"({"model": "epitaxial", "params": {"K2": 0}})");
  CHECK(w.run("simulate bad.json") == 2);
  CHECK(w.read("err.txt").find("K2 > 0") != std::string::npos);
  CHECK(w.run("check bad.json") == 2);
  CHECK(w.run("simulate missing.json") == 2);
  CHECK(w.run("frobnicate") == 2);
  CHECK(w.run("") == 2);
}

TEST_CASE("check prints theorem reports without stepping", "[cli]") {
  Workspace w("check");
  w.write("run.json", kSmallRun);
  REQUIRE(w.run("check run.json") == 0);
  const std::string out = w.read("out.txt");
  CHECK(out.find("\"theorem_id\": \"EpitaxialA2_K0zero\"") != std::string::npos);
  CHECK(out.find("\"satisfied\": true") != std::string::npos);
  CHECK_FALSE(fs::exists(w.dir / "out"));
}

TEST_CASE("verify exits 5 on an envelope violation", "[cli]") {
  Workspace w("verify");
  w.write("trace.csv", "t,a0,a2,a4,a6,mean,dt\n0,1,1,1,1,0,0.5\n0.5,0.7,0.7,0.7,0.7,0,0.5\n1,0.3,0.3,0.3,0.3,0,0.5\n");
  CHECK(w.run("verify trace.csv --lambda 0.5") == 0);
  CHECK(w.run("verify trace.csv --lambda 1.0 --norm a0") == 5);
  CHECK(w.read("out.txt").find("\"first_violation_t\": 0.5") != std::string::npos);
  CHECK(w.run("verify trace.csv --lambda 0.75 --tol 0.05") == 0);
  w.write("bad.csv", "t,a0\n");
  CHECK(w.run("verify bad.csv --lambda 1") == 2);
  CHECK(w.run("verify trace.csv") == 2);
}

TEST_CASE("blow-up exits 4 and overflow exits 3", "[cli]") {
  Workspace w("blowup");
  w.write("blow.json", R"({
    "model": "epitaxial", "params": {"K1": 50}, "n": 8,
    "initial_data": {"kind": "modes", "modes": [{"k": [1, 0], "re": 2, "im": 0}, {"k": [0, 1], "re": 2, "im": 0},
                                                 {"k": [1, 1], "re": 0, "im": 1.5}]},
    "stepper": {"dt": 1e-4, "t_end": 1, "record_every": 100, "blowup_threshold": 1000}})");
  CHECK(w.run("simulate blow.json") == 4);
  CHECK(w.read("report.json").find("\"status\": \"blowup_detected\"") != std::string::npos);

  w.write("overflow.json", R"({
    "model": "epitaxial", "params": {"K1": 50}, "n": 8,
    "initial_data": {"kind": "modes", "modes": [{"k": [1, 0], "re": 2, "im": 0}, {"k": [0, 1], "re": 2, "im": 0},
                                                 {"k": [1, 1], "re": 0, "im": 1.5}]},
    "stepper": {"dt": 1e-4, "t_end": 1, "record_every": 100, "blowup_threshold": 1e300}})");
  CHECK(w.run("simulate overflow.json") == 3);
}

TEST_CASE("sweep writes a summary with one row per run", "[cli]") {
  Workspace w("sweep");
  w.write("run.json", kSmallRun);
  w.write("axes.json", R"({"axes": [{"path": "params.K1", "values": [0.1, 0.2]},
                                     {"path": "params.K2", "values": [1.0, -1.0]}], "threads": 2})");
  REQUIRE(w.run("sweep run.json axes.json -o sw") == 0);
  const std::string csv = w.read("sw/summary.csv");
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 5);
  CHECK(csv.find("K2 > 0") != std::string::npos);
}

TEST_CASE("convergence reports second order for ETD2", "[cli]") {
  Workspace w("convergence");
  w.write("run.json", kSmallRun);
  REQUIRE(w.run("convergence run.json --levels 4") == 0);
  const std::string out = w.read("out.txt");
  std::istringstream is(out);
  std::string line;
  std::getline(is, line);
  double dt = 0, diff = 0, order = 0;
  int rows = 0;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    ls >> dt >> diff;
    if (rows > 0) {
      ls >> order;
      CHECK(order > 1.8);
      CHECK(order < 2.2);
    }
    ++rows;
  }
  CHECK(rows == 3);
}
