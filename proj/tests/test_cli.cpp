#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqlab/measure_io.hpp"
#include "eqlab/measures.hpp"

// End-to-end checks that drive the installed binary the way a user would.

namespace {

namespace fs = std::filesystem;
using eqlab::io::json;

struct Invocation {
  int exit_code = -1;
  std::string output;
};

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "eqlab_cli_tests";
  fs::create_directories(dir);
  return dir;
}

Invocation run_cli(const std::string& args) {
  auto log = work_dir() / "invoke.log";
  std::string cmd =
      std::string(EQLAB_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  int raw = std::system(cmd.c_str());
  Invocation result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.output = buf.str();
  return result;
}

fs::path write_config(const std::string& name, const std::string& text) {
  auto path = work_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("schema and help are printable", "[cli]") {
  auto schema = run_cli("print-schema");
  CHECK(schema.exit_code == 0);
  CHECK(schema.output.find("kind") != std::string::npos);
  CHECK(schema.output.find("seed") != std::string::npos);

  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);            // a subcommand is required
  CHECK(run_cli("frobnicate").exit_code == 2);  // unknown subcommand
}

TEST_CASE("coefficient runs produce verifiable records", "[cli]") {
  std::string cfg_text = R"({
  "kind": "fourier",
  "measure": {"type": "beta", "base": 2},
  "modes": 3,
  "seed": 11,
  "tol": 1e-12
})";
  auto cfg = write_config("fourier.json", cfg_text);
  auto record_path = work_dir() / "fourier_out.json";
  auto res = run_cli("run " + cfg.string() + " --output " + record_path.string());
  REQUIRE(res.exit_code == 0);

  std::ifstream in(record_path);
  REQUIRE(in.good());
  json record = json::parse(in);
  CHECK(record["kind"] == "fourier");
  CHECK(record["config"].get<std::string>() == cfg_text);  // byte-exact echo
  CHECK(record.contains("wall_ms"));

  // the recorded table matches a direct library evaluation
  auto beta = eqlab::measures::make_beta(2);
  for (long k = -3; k <= 3; ++k) {
    auto direct = eqlab::measures::fourier_1d(beta, k, 1e-12);
    auto stored = record["payload"]["table"][std::to_string(k)];
    REQUIRE(stored[0].get<double>() == direct.real());
    REQUIRE(stored[1].get<double>() == direct.imag());
  }

  // sibling CSV
  auto csv_path = work_dir() / "fourier_out.csv";
  std::ifstream csv(csv_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,re,im");
}

TEST_CASE("identical configs give identical payloads", "[cli]") {
  std::string cfg_text = R"({
  "kind": "equidist",
  "case": "part2",
  "m": 3, "n": 2,
  "measure": {"type": "lebesgue"},
  "schedule": [50, 150],
  "ensemble": 2,
  "seed": 321,
  "F": 3,
  "G": 8
})";
  auto cfg = write_config("repeat.json", cfg_text);
  auto out1 = work_dir() / "repeat1.json";
  auto out2 = work_dir() / "repeat2.json";
  REQUIRE(run_cli("run " + cfg.string() + " --output " + out1.string()).exit_code == 0);
  REQUIRE(run_cli("run " + cfg.string() + " --output " + out2.string()).exit_code == 0);

  std::ifstream f1(out1), f2(out2);
  json r1 = json::parse(f1), r2 = json::parse(f2);
  CHECK(r1["payload"].dump() == r2["payload"].dump());
  CHECK(r1["config"] == r2["config"]);
}

TEST_CASE("config mistakes exit with the validation code", "[cli]") {
  struct Case {
    const char* name;
    const char* text;
    const char* needle;
  };
  const Case cases[] = {
      {"no_seed.json", R"({"kind":"fourier","measure":{"type":"lebesgue"}})", "seed"},
      {"bad_kind.json", R"({"kind":"mystery","seed":1,"measure":{"type":"lebesgue"}})", "kind"},
      {"bad_probs.json",
       R"({"kind":"fourier","seed":1,"measure":{"type":"digit","base":2,"probs":["1/2","1/3"]}})",
       "probs"},
      {"swapped.json",
       R"({"kind":"density","seed":1,"m":2,"n":3,"measure":{"type":"beta","base":2}})", "m,n"},
      {"not_json.json", "{oops", "config"},
  };
  for (const auto& c : cases) {
    auto cfg = write_config(c.name, c.text);
    auto res = run_cli("run " + cfg.string());
    INFO(c.name << ": " << res.output);
    CHECK(res.exit_code == 2);
    CHECK(res.output.find(c.needle) != std::string::npos);
  }

  CHECK(run_cli("run " + (work_dir() / "missing.json").string()).exit_code == 2);
}

TEST_CASE("records without an output path print to stdout", "[cli]") {
  auto cfg = write_config("stdout.json", R"({
  "kind": "dimension",
  "measure": {"type": "digit", "base": 2, "probs": ["1/3", "2/3"]},
  "seed": 2
})");
  auto res = run_cli("run " + cfg.string());
  REQUIRE(res.exit_code == 0);
  json record = json::parse(res.output);
  CHECK(record["payload"]["dimension"].get<double>() ==
        Catch::Approx(0.9182958340544894).margin(1e-14));
}
