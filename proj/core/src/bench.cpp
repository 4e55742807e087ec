// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ristrack/error.hpp"

namespace ristrack {

namespace {

std::size_t overhead_slot(const ExperimentConfig &config, double overhead) {
  for (std::size_t i = 0; i < config.overheads.size(); ++i)
    if (config.overheads[i] == overhead) return i;
  return config.overheads.size();
}

std::vector<std::vector<SlotResult>> run_epochs(const ExperimentConfig &config, const Scenario &scenario,
                                                const TrackerConfig &tracker, int speed, std::size_t slot) {
  const auto epochs = static_cast<std::size_t>(config.epochs);
  std::vector<std::vector<SlotResult>> out(epochs);
  unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(epochs));

  auto run_one = [&](std::size_t epoch) {
    EpisodeStreams streams = episode_streams(config.master_seed, epoch, speed, tracker.method, slot);
    out[epoch] = run_episode(scenario, tracker, speed, streams);
  };
  if (workers == 1) {
    for (std::size_t e = 0; e < epochs; ++e) run_one(e);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t e = next++; e < epochs; e = next++) {
        try {
          run_one(e);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

RisGeometry ExperimentConfig::resolved_ris() const {
  RisGeometry out = ris;
  if (!(out.element_spacing > 0.0)) out.element_spacing = scene.wavelength() / 2.0;
  out.origin = scene.ris_origin;
  return out;
}

void ExperimentConfig::validate() const {
  scene.validate();
  resolved_ris().validate();
  grid.validate();
  tracker.validate();
  if (quantize.sweep_resolution < 1) throw ConfigError("codebook sweep_resolution must be >= 1");
  if (epochs < 1) throw ConfigError(fmt::format("epochs must be >= 1, got {}", epochs));
  if (methods.empty()) throw ConfigError("no methods configured");
  for (double eta : overheads)
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError(fmt::format("overhead {} outside (0, 1]", eta));
  for (int s : speeds)
    if (s < 0) throw ConfigError(fmt::format("speed {} is negative", s));
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

bool hits_best(const SlotResult &slot) { return slot.achieved_rsrp >= slot.true_best_rsrp * (1.0 - 1e-9); }

MetricsRow compute_metrics(Method method, int speed, std::span<const SlotResult> results, std::size_t domain_size) {
  if (results.empty()) throw std::invalid_argument("compute_metrics: no slot results");
  if (domain_size == 0) throw std::invalid_argument("compute_metrics: empty domain");
  MetricsRow row;
  row.method = method;
  row.speed = speed;
  row.slots = results.size();
  double hits = 0.0;
  double measured = 0.0;
  double elapsed = 0.0;
  double error_sum = 0.0;
  double error_sq = 0.0;
  for (const SlotResult &s : results) {
    const bool hit = hits_best(s);
    hits += hit ? 1.0 : 0.0;
    const double error = hit ? 0.0 : std::abs(to_db(s.true_best_rsrp) - to_db(s.achieved_rsrp));
    error_sum += error;
    error_sq += error * error;
    measured += static_cast<double>(s.measurements_used);
    elapsed += s.elapsed_s;
  }
  const auto n = static_cast<double>(results.size());
  row.accuracy = hits / n;
  row.rsrp_mae_db = error_sum / n;
  row.overhead = measured / n / static_cast<double>(domain_size);
  row.exec_time_s = elapsed / n;
  row.rsrp_error_std_db = std::sqrt(std::max(0.0, error_sq / n - row.rsrp_mae_db * row.rsrp_mae_db));
  return row;
}

std::vector<CellResult> run_experiment_cells(const ExperimentConfig &config, const Scenario &scenario) {
  config.validate();
  std::vector<CellResult> out;
  for (Method method : config.methods) {
    const std::vector<double> etas = method == Method::Ergodic ? std::vector<double>{1.0} : config.overheads;
    for (double eta : etas) {
      for (int speed : config.speeds) {
        TrackerConfig tracker = config.tracker;
        tracker.method = method;
        tracker.overhead = eta;
        CellResult cell;
        cell.episodes = run_epochs(config, scenario, tracker, speed, overhead_slot(config, eta));
        std::vector<SlotResult> flat;
        for (const auto &episode : cell.episodes) flat.insert(flat.end(), episode.begin(), episode.end());
        cell.row = compute_metrics(method, speed, flat, scenario.codebook().size());
        out.push_back(std::move(cell));
      }
    }
  }
  return out;
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig &config) {
  config.validate();
  const Scenario scenario(config.scene, config.resolved_ris(), config.grid, config.quantize);
  std::vector<MetricsRow> rows;
  for (auto &cell : run_experiment_cells(config, scenario)) rows.push_back(cell.row);
  return rows;
}

std::vector<SlotResult> run_trace(const ExperimentConfig &config, const Scenario &scenario, Method method,
                                  double overhead, int speed, std::uint64_t epoch) {
  TrackerConfig tracker = config.tracker;
  tracker.method = method;
  tracker.overhead = method == Method::Ergodic ? 1.0 : overhead;
  EpisodeStreams streams = episode_streams(config.master_seed, epoch, speed, method, overhead_slot(config, tracker.overhead));
  return run_episode(scenario, tracker, speed, streams);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{:.6g}", value);
}

void write_csv(std::ostream &out, std::span<const MetricsRow> rows) {
  out << kCsvHeader << '\n';
  for (const MetricsRow &r : rows) {
    out << method_name(r.method) << ',' << format_number(r.overhead) << ',' << r.speed << ','
        << format_number(r.accuracy) << ',' << format_number(r.rsrp_mae_db) << ',' << format_number(r.exec_time_s)
        << '\n';
  }
}

std::vector<MetricsRow> read_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("metrics CSV: missing or unexpected header");
  std::vector<MetricsRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw IoError(fmt::format("metrics CSV line {}: expected 6 fields, got {}", line_no, f.size()));
    try {
      MetricsRow r;
      r.method = parse_method(f[0]);
      r.overhead = std::stod(f[1]);
      r.speed = std::stoi(f[2]);
      r.accuracy = std::stod(f[3]);
      r.rsrp_mae_db = std::stod(f[4]);
      r.exec_time_s = std::stod(f[5]);
      rows.push_back(r);
    } catch (const ConfigError &e) {
      throw IoError(fmt::format("metrics CSV line {}: {}", line_no, e.what()));
    } catch (const std::logic_error &e) {
      throw IoError(fmt::format("metrics CSV line {}: {}", line_no, e.what()));
    }
  }
  return rows;
}

void emit_csv(std::span<const MetricsRow> rows, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  write_csv(out, rows);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

void write_trace(std::ostream &out, std::span<const SlotResult> episode, const GridMap &grid) {
  out << kTraceHeader << '\n';
  for (const SlotResult &s : episode) {
    const GridCell truth = grid.cell(s.true_best_index);
    const GridCell pred = grid.cell(s.chosen_index);
    out << s.slot_index << ',' << truth.row << ',' << truth.col << ',' << pred.row << ',' << pred.col << ','
        << format_number(to_db(s.true_best_rsrp)) << ',' << format_number(to_db(s.achieved_rsrp)) << '\n';
  }
}

void emit_trace(std::span<const SlotResult> episode, const GridMap &grid, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  write_trace(out, episode, grid);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

}  // namespace ristrack
