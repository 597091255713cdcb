#include <iostream>

#include <CLI11.hpp>

#include "ccdeg/cli/run.hpp"

int main(int argc, char** argv) {
  namespace cli = ccdeg::cli;
  CLI::App app{"closed-convex envelopes, degree, fixed points and discontinuous ODEs"};
  app.require_subcommand(1);

  std::string scenario, out = "out";
  double tol = 0.0;
  std::size_t grid = 0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "run a scenario and write report.csv, report.txt, plot.svg");
  run->add_option("scenario", scenario, "scenario file")->required();
  run->add_option("--out", out, "output directory")->capture_default_str();
  auto* tol_opt = run->add_option("--tol", tol, "membership tolerance override");
  auto* grid_opt = run->add_option("--grid", grid, "scan grid override");
  auto* seed_opt = run->add_option("--seed", seed, "recorded in report.txt; the pipeline is deterministic");

  auto* validate = app.add_subcommand("validate", "parse and statically check a scenario");
  validate->add_option("scenario", scenario, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help prints and succeeds; every usage error is a plain error exit
    const int code = app.exit(e);
    return code == 0 ? cli::Exit::ok : cli::Exit::error;
  }

  try {
    const cli::Scenario s = cli::load_scenario(scenario);
    if (validate->parsed()) {
      std::cout << cli::validate_scenario(s);
      return cli::Exit::ok;
    }
    cli::RunOptions o;
    if (*tol_opt) o.tol = tol;
    if (*grid_opt) o.grid = grid;
    if (*seed_opt) o.seed = seed;
    const cli::Report r = cli::run_scenario(s, o);
    cli::write_report(r, s, o, out);
    std::cout << r.txt;
    return r.exit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::Exit::error;
  }
}
