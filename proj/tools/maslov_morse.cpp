// maslov-morse: Morse index reports, eigenvalue curves and consistency checks.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "maslov/commands.hpp"
#include "maslov/config.hpp"
#include "maslov/errors.hpp"

namespace {

struct Args {
  std::string config;
  std::optional<int> example;
  std::optional<double> s0;
  std::optional<double> lambdaInf;
  std::optional<int> steps;
  std::optional<int> mesh;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Args& a) {
  auto* cfg = cmd->add_option("--config", a.config, "problem configuration (JSON)");
  auto* ex = cmd->add_option("--example", a.example, "built-in problem")->check(CLI::Range(1, 4));
  cfg->excludes(ex);
  cmd->add_option("--s0", a.s0, "bottom side of the box")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--lambda-inf", a.lambdaInf, "depth of the box")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", a.steps, "RK4 steps over [0, 1]")->check(CLI::PositiveNumber);
  cmd->add_option("--mesh", a.mesh, "finite element count")->check(CLI::Range(64, 1 << 22));
  cmd->add_option("--out", a.out, "output directory");
}

maslov::Config resolve(const Args& a) {
  if (a.config.empty() && !a.example) {
    throw maslov::Error(maslov::ErrorCode::ValidationError, "one of --config or --example is required");
  }
  maslov::Config c = a.example ? maslov::builtin_config(*a.example) : maslov::read_config(a.config);
  if (a.s0) c.settings.s0 = *a.s0;
  if (a.lambdaInf) c.settings.lambdaInf = *a.lambdaInf;
  if (a.steps) c.settings.steps = *a.steps;
  if (a.mesh) c.settings.oracleMesh = *a.mesh;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morse indices of matrix Schrodinger operators via the Maslov index"};
  app.set_version_flag("--version", maslov::version());
  app.require_subcommand(1);
  Args args;
  auto* report = app.add_subcommand("report", "Morse index report (JSON)");
  auto* curves = app.add_subcommand("curves", "eigenvalue curves and phase-gap field (CSV)");
  auto* check = app.add_subcommand("check", "consistency checks");
  for (auto* cmd : {report, curves, check}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? maslov::Ok : maslov::Failure;
  }

  try {
    const maslov::Config cfg = resolve(args);
    const maslov::Problem p = maslov::build_problem(cfg);
    maslov::CommandOptions opts;
    if (args.out) opts.outDir = *args.out;
    if (report->parsed()) return maslov::run_report(p, opts);
    if (curves->parsed()) return maslov::run_curves(p, cfg.grid, opts);
    return maslov::run_check(p, opts);
  } catch (const std::exception& e) {
    std::cerr << maslov::error_to_json(e).dump() << "\n";
    return maslov::Failure;
  }
}
