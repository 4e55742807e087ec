// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------
//
// Command-line front end:
//   ristrack run       full method x overhead x speed experiment -> metrics.csv
//   ristrack codebook  serialized codebook
//   ristrack trace     one episode's true/predicted beam path
//   ristrack validate  oracle cross-checks

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "ristrack/bench.hpp"
#include "ristrack/error.hpp"
#include "ristrack/oracles.hpp"

namespace {

using namespace ristrack;
namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const CommonOptions &opts) {
  ExperimentConfig config = opts.config_path.empty() ? ExperimentConfig{} : load_experiment_config(opts.config_path);
  if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') config.output_dir = env;
  if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
  if (opts.seed) config.master_seed = *opts.seed;
  return config;
}

fs::path ensure_output_dir(const ExperimentConfig &config) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  return dir;
}

void add_common(CLI::App *cmd, CommonOptions &opts) {
  cmd->add_option("-c,--config", opts.config_path, "YAML experiment config (defaults apply when omitted)");
  cmd->add_option("-o,--output-dir", opts.output_dir,
                  fmt::format("Output directory (overrides ${} and the config)", kOutputDirEnv));
  cmd->add_option("-s,--seed", opts.seed, "Master seed override");
}

int cmd_run(const CommonOptions &opts, std::optional<int> epochs, std::optional<int> workers) {
  ExperimentConfig config = load(opts);
  if (epochs) config.epochs = *epochs;
  if (workers) config.workers = *workers;
  config.validate();
  const fs::path dir = ensure_output_dir(config);

  const auto start = std::chrono::steady_clock::now();
  const std::vector<MetricsRow> rows = run_experiment(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path csv = dir / "metrics.csv";
  emit_csv(rows, csv.string());
  fmt::print("{:<8} {:>8} {:>5} {:>9} {:>12} {:>12}\n", "method", "overhead", "speed", "accuracy", "rsrp_mae_db",
             "exec_time_s");
  for (const MetricsRow &r : rows) {
    fmt::print("{:<8} {:>8.3f} {:>5} {:>9.3f} {:>12.3f} {:>12.3g}\n", method_name(r.method), r.overhead, r.speed,
               r.accuracy, r.rsrp_mae_db, r.exec_time_s);
  }
  fmt::print("wrote {} ({} rows, {} epochs, {:.1f} s)\n", csv.string(), rows.size(), config.epochs, wall);
  return 0;
}

int cmd_codebook(const CommonOptions &opts, const std::string &output) {
  const ExperimentConfig config = load(opts);
  const Codebook codebook = build_codebook(config.scene, config.resolved_ris(), config.grid, config.quantize);
  if (output.empty() || output == "-") {
    write_codebook(std::cout, codebook);
  } else {
    save_codebook(output, codebook);
    std::cerr << fmt::format("wrote {} ({} entries)\n", output, codebook.size());
  }
  return 0;
}

int cmd_trace(const CommonOptions &opts, const std::string &method, double overhead, int speed, std::uint64_t epoch,
              const std::string &output) {
  const ExperimentConfig config = load(opts);
  const Method m = parse_method(method);
  TrackerConfig check = config.tracker;
  check.overhead = overhead;
  check.validate();
  const Scenario scenario(config.scene, config.resolved_ris(), config.grid, config.quantize);
  const auto episode = run_trace(config, scenario, m, overhead, speed, epoch);
  std::string path = output;
  if (path.empty()) {
    const fs::path dir = ensure_output_dir(config);
    path = (dir / fmt::format("trace_{}_eta{}_s{}.csv", method, format_number(overhead), speed)).string();
  }
  if (path == "-") {
    write_trace(std::cout, episode, scenario.grid());
  } else {
    emit_trace(episode, scenario.grid(), path);
    std::cerr << fmt::format("wrote {} ({} slots)\n", path, episode.size());
  }
  return 0;
}

int cmd_validate(std::uint64_t seed) {
  bool all = true;
  for (const auto &check : oracle::run_validation_suite(seed)) {
    fmt::print("[{}] {}: {}\n", check.passed ? "PASS" : "FAIL", check.name, check.detail);
    all = all && check.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"RIS-assisted beam tracking with Bayesian optimization"};
  app.require_subcommand(1);

  CommonOptions common;
  std::optional<int> epochs;
  std::optional<int> workers;
  auto *run = app.add_subcommand("run", "Run the method x overhead x speed experiment and write metrics.csv");
  add_common(run, common);
  run->add_option("-e,--epochs", epochs, "Epoch count override")->check(CLI::PositiveNumber);
  run->add_option("-j,--workers", workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  std::string codebook_output;
  auto *codebook = app.add_subcommand("codebook", "Write the serialized codebook");
  add_common(codebook, common);
  codebook->add_option("--output", codebook_output, "Codebook file ('-' or empty for stdout)");

  std::string trace_method = "tpe_ei";
  double trace_overhead = 0.4;
  int trace_speed = 1;
  std::uint64_t trace_epoch = 0;
  std::string trace_output;
  auto *trace = app.add_subcommand("trace", "Write one episode's true and predicted beam path");
  add_common(trace, common);
  trace->add_option("-m,--method", trace_method, "ergodic, random, gp_ei or tpe_ei");
  trace->add_option("--overhead", trace_overhead, "Fraction of the codebook measured per slot");
  trace->add_option("--speed", trace_speed, "UE speed in grid cells per slot");
  trace->add_option("--epoch", trace_epoch, "Epoch index whose random streams to use");
  trace->add_option("--output", trace_output, "Trace file ('-' for stdout)");

  std::uint64_t validate_seed = 7;
  auto *validate = app.add_subcommand("validate", "Cross-check the core algorithms against reference oracles");
  validate->add_option("-s,--seed", validate_seed, "Seed for the random test instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(common, epochs, workers);
    if (*codebook) return cmd_codebook(common, codebook_output);
    if (*trace) return cmd_trace(common, trace_method, trace_overhead, trace_speed, trace_epoch, trace_output);
    if (*validate) return cmd_validate(validate_seed);
  } catch (const std::exception &e) {
    std::cerr << "ristrack: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
