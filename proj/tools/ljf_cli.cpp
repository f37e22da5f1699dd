#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ljf/config.hpp"
#include "ljf/error.hpp"
#include "ljf/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Löwner and John functions of log-concave functions"};
  app.set_version_flag("--version", std::string(LJF_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> tol;
  std::optional<int> scan_points;
  std::optional<std::uint64_t> seed;
  bool json_only = false;
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", tol, "domination (feasibility) tolerance")->check(CLI::PositiveNumber);
  app.add_option("--scan-points", scan_points, "xi-scan resolution")->check(CLI::Range(2, 1000000));
  app.add_option("--seed", seed, "seed for restart jitter and random checks");
  app.add_flag("--json-only", json_only, "write result.json only");

  for (const char* task : ljf::kTasks) app.add_subcommand(task, std::string("run the ") + task + " task");

  CLI11_PARSE(app, argc, argv);
  const std::string task = app.get_subcommands().front()->get_name();

  try {
    auto cfg = ljf::parse_config(config_path);
    if (!cfg.task.empty() && cfg.task != task)
      ljf::fail(ljf::ErrorCode::validation, "task: config names '" + cfg.task + "' but the command is '" + task + "'");
    cfg.task = task;
    if (out_dir) cfg.out_dir = *out_dir;
    if (tol) cfg.solver.domination_tol = *tol;
    if (scan_points) cfg.scan_points = *scan_points;
    if (seed) cfg.solver.seed = *seed;
    cfg.json_only = cfg.json_only || json_only;
    return ljf::run(cfg, std::cerr);
  } catch (const ljf::Error& e) {
    std::cerr << "error[E" << static_cast<int>(e.code()) << "] " << ljf::error_code_name(e.code()) << ": " << e.what()
              << "\n";
    return ljf::kExitError;
  }
}
