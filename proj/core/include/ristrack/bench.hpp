// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_BENCH_HPP
#define RISTRACK_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ristrack/codebook.hpp"
#include "ristrack/tracker.hpp"

namespace ristrack {

/// Environment variable that overrides the configured output directory.
inline constexpr const char *kOutputDirEnv = "RISTRACK_OUTPUT_DIR";

struct ExperimentConfig {
  SceneConfig scene;
  RisGeometry ris;  // element_spacing <= 0 means lambda / 2
  GridMap grid;
  QuantizeOptions quantize;
  TrackerConfig tracker;  // method and overhead are set per cell

  std::vector<Method> methods{Method::Ergodic, Method::Random, Method::GpEi, Method::TpeEi};
  std::vector<double> overheads{0.2, 0.4, 0.6};
  std::vector<int> speeds{1, 2};
  int epochs = 100;
  std::uint64_t master_seed = 20240101;
  int workers = 0;  // 0 = hardware concurrency
  std::string output_dir = "results";

  /// RIS geometry with the half-wavelength default resolved.
  RisGeometry resolved_ris() const;
  void validate() const;
};

/// One (method, overhead, speed) cell of the results table.
struct MetricsRow {
  Method method = Method::Ergodic;
  double overhead = 1.0;  // mean fraction of the codebook measured
  int speed = 1;
  double accuracy = 0.0;
  double rsrp_mae_db = 0.0;
  double exec_time_s = 0.0;  // mean per slot

  // Not serialized; used for statistical comparisons.
  std::size_t slots = 0;
  double rsrp_error_std_db = 0.0;
};

/// True when the achieved power matches the best within 1e-9 relative.
bool hits_best(const SlotResult &slot);

MetricsRow compute_metrics(Method method, int speed, std::span<const SlotResult> results, std::size_t domain_size);

struct CellResult {
  MetricsRow row;
  std::vector<std::vector<SlotResult>> episodes;  // epoch order
};

/// Full method x overhead x speed product (Ergodic runs once per speed).
/// Epochs are spread over worker threads and merged in epoch order.
std::vector<CellResult> run_experiment_cells(const ExperimentConfig &config, const Scenario &scenario);
std::vector<MetricsRow> run_experiment(const ExperimentConfig &config);

/// A single episode with the streams run_experiment() would give `epoch`.
std::vector<SlotResult> run_trace(const ExperimentConfig &config, const Scenario &scenario, Method method,
                                  double overhead, int speed, std::uint64_t epoch);

inline constexpr const char *kCsvHeader = "method,overhead,speed,accuracy,rsrp_mae_db,exec_time_s";
inline constexpr const char *kTraceHeader = "t,true_row,true_col,pred_row,pred_col,true_rsrp_db,achieved_rsrp_db";

/// Six significant digits, as written to every output file.
std::string format_number(double value);

void write_csv(std::ostream &out, std::span<const MetricsRow> rows);
std::vector<MetricsRow> read_csv(std::istream &in);
void emit_csv(std::span<const MetricsRow> rows, const std::string &path);

void write_trace(std::ostream &out, std::span<const SlotResult> episode, const GridMap &grid);
void emit_trace(std::span<const SlotResult> episode, const GridMap &grid, const std::string &path);

/// YAML experiment file; keys missing from the file keep their defaults.
ExperimentConfig parse_experiment_config(const std::string &yaml_text);
ExperimentConfig load_experiment_config(const std::string &path);

}  // namespace ristrack

#endif  // RISTRACK_BENCH_HPP
