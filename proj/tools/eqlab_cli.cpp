// Experiment runner: `run` executes a JSON experiment config and writes a run
// record, `verify` runs the built-in acceptance suite, `print-schema`
// documents the config format. Exit codes: 0 success, 2 validation error,
// 3 runtime error (verify: 0 iff all checks pass).

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "eqlab/cli.hpp"
#include "eqlab/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic orbit and measure experiments"};
  app.require_subcommand(1);

  std::string config_path, output_override;
  auto* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "path to a JSON experiment config")->required();
  run->add_option("--output", output_override, "override the record output path");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  auto* schema = app.add_subcommand("print-schema", "describe the config format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed())
    return eqlab::cli::handle_run(config_path, output_override, std::cout, std::cerr);
  if (verify->parsed()) return eqlab::verify::run_all(std::cout);
  if (schema->parsed()) {
    std::cout << eqlab::cli::schema_text();
    return 0;
  }
  return 2;
}
