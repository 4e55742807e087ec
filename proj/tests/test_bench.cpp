// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ristrack/bench.hpp"
#include "ristrack/error.hpp"

namespace ristrack {
namespace {

SlotResult slot(double best, double achieved, std::size_t measured, double elapsed = 0.0) {
  SlotResult s;
  s.true_best_rsrp = best;
  s.achieved_rsrp = achieved;
  s.measurements_used = measured;
  s.elapsed_s = elapsed;
  return s;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.epochs = 2;
  c.tracker.total_slots = 3;
  c.tracker.record_timing = false;
  c.workers = 2;
  return c;
}

std::string csv_text(const std::vector<MetricsRow> &rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

TEST(Metrics, HitsUseRelativeTolerance) {
  EXPECT_TRUE(hits_best(slot(1e-9, 1e-9, 1)));
  EXPECT_TRUE(hits_best(slot(1e-9, 1e-9 * (1 - 1e-10), 1)));
  EXPECT_FALSE(hits_best(slot(1e-9, 1e-9 * (1 - 1e-8), 1)));
}

TEST(Metrics, AllHits) {
  const std::vector<SlotResult> r{slot(2e-9, 2e-9, 100, 0.5), slot(3e-9, 3e-9, 100, 1.5)};
  const MetricsRow m = compute_metrics(Method::Ergodic, 1, r, 100);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.rsrp_mae_db, 0.0);
  EXPECT_DOUBLE_EQ(m.overhead, 1.0);
  EXPECT_DOUBLE_EQ(m.exec_time_s, 1.0);
  EXPECT_EQ(m.slots, 2u);
}

TEST(Metrics, SingleMiss) {
  const std::vector<SlotResult> r{slot(1e-8, 1e-9, 20)};
  const MetricsRow m = compute_metrics(Method::Random, 2, r, 100);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.0);
  EXPECT_NEAR(m.rsrp_mae_db, 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.overhead, 0.2);
  EXPECT_EQ(m.speed, 2);
  EXPECT_EQ(m.method, Method::Random);
}

TEST(Metrics, HandComputedThreeSlots) {
  // Errors 0, 3.0103 (factor 2) and 20 dB (factor 100).
  const std::vector<SlotResult> r{slot(1.0, 1.0, 40), slot(1.0, 0.5, 40), slot(1.0, 0.01, 40)};
  const MetricsRow m = compute_metrics(Method::TpeEi, 1, r, 100);
  EXPECT_NEAR(m.accuracy, 1.0 / 3.0, 1e-15);
  const double e2 = 10.0 * std::log10(2.0);
  EXPECT_NEAR(m.rsrp_mae_db, (e2 + 20.0) / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.overhead, 0.4);
  EXPECT_THROW(compute_metrics(Method::TpeEi, 1, std::vector<SlotResult>{}, 100), std::invalid_argument);
}

TEST(Csv, HeaderOnlyForNoRows) { EXPECT_EQ(csv_text({}), std::string(kCsvHeader) + "\n"); }

TEST(Csv, RoundTripAtSixDigits) {
  std::vector<MetricsRow> rows(3);
  rows[0] = {Method::Ergodic, 1.0, 1, 1.0, 0.0, 1.234567e-4};
  rows[1] = {Method::GpEi, 0.2, 2, 0.375, 1.23456789, 0.00321};
  rows[2] = {Method::TpeEi, 0.6, 1, 0.98333, 0.05, 12.5};
  const std::string text = csv_text(rows);
  std::istringstream in(text);
  const auto back = read_csv(in);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[1].method, Method::GpEi);
  EXPECT_EQ(back[1].speed, 2);
  EXPECT_NEAR(back[1].rsrp_mae_db, 1.23457, 1e-12);
  EXPECT_EQ(csv_text(back), text);
  EXPECT_NE(text.find("\nergodic,1,1,1,0,0.000123457\n"), std::string::npos) << text;
}

TEST(Csv, MalformedInputIsRejected) {
  for (const char *bad : {"", "method,overhead\n", "method,overhead,speed,accuracy,rsrp_mae_db,exec_time_s\nfoo,1,1,1,0,0\n",
                          "method,overhead,speed,accuracy,rsrp_mae_db,exec_time_s\nrandom,0.2,1\n",
                          "method,overhead,speed,accuracy,rsrp_mae_db,exec_time_s\nrandom,x,1,1,0,0\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_csv(in), IoError) << bad;
  }
}

TEST(FormatNumber, SixSignificantDigits) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.2), "0.2");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333");
  EXPECT_EQ(format_number(-72.123456789), "-72.1235");
  EXPECT_EQ(format_number(1.5e-7), "1.5e-07");
}

TEST(Experiment, FullMatrixHasTwentyRows) {
  ExperimentConfig c = tiny_config();
  c.epochs = 1;
  c.tracker.total_slots = 1;
  const auto rows = run_experiment(c);
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows[0].method, Method::Ergodic);
  EXPECT_EQ(rows[0].speed, 1);
  EXPECT_EQ(rows[1].method, Method::Ergodic);
  EXPECT_EQ(rows[1].speed, 2);
  EXPECT_EQ(rows[2].method, Method::Random);
  EXPECT_DOUBLE_EQ(rows[2].overhead, 0.2);
  EXPECT_EQ(rows[19].method, Method::TpeEi);
  EXPECT_DOUBLE_EQ(rows[19].overhead, 0.6);
  EXPECT_EQ(rows[19].speed, 2);
  for (const auto &r : rows) {
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
    EXPECT_GE(r.rsrp_mae_db, 0.0);
  }
  EXPECT_DOUBLE_EQ(rows[0].accuracy, 1.0);
}

TEST(Experiment, SingleCellSingleRow) {
  ExperimentConfig c = tiny_config();
  c.methods = {Method::TpeEi};
  c.overheads = {0.4};
  c.speeds = {1};
  c.epochs = 1;
  c.tracker.total_slots = 1;
  const auto rows = run_experiment(c);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].overhead, 0.4);
}

TEST(Experiment, OutputIsIndependentOfWorkerCount) {
  ExperimentConfig a = tiny_config();
  a.methods = {Method::Random, Method::GpEi, Method::TpeEi};
  a.epochs = 5;
  ExperimentConfig b = a;
  a.workers = 1;
  b.workers = 3;
  EXPECT_EQ(csv_text(run_experiment(a)), csv_text(run_experiment(b)));
}

TEST(Experiment, SeedChangesResults) {
  ExperimentConfig a = tiny_config();
  a.methods = {Method::Random};
  a.epochs = 20;
  ExperimentConfig b = a;
  b.master_seed = a.master_seed + 1;
  EXPECT_NE(csv_text(run_experiment(a)), csv_text(run_experiment(b)));
}

TEST(Trace, ErgodicPredictionEqualsTruth) {
  const ExperimentConfig c = tiny_config();
  const Scenario scenario(c.scene, c.resolved_ris(), c.grid, c.quantize);
  const auto episode = run_trace(c, scenario, Method::Ergodic, 0.2, 1, 0);
  std::ostringstream out;
  write_trace(out, episode, scenario.grid());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kTraceHeader);
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string x; std::getline(fields, x, ',');) f.push_back(x);
    ASSERT_EQ(f.size(), 7u);
    EXPECT_EQ(f[0], std::to_string(lines));
    EXPECT_EQ(f[1], f[3]);
    EXPECT_EQ(f[2], f[4]);
    EXPECT_EQ(f[5], f[6]);
  }
  EXPECT_EQ(lines, c.tracker.total_slots);
}

TEST(Trace, MatchesExperimentEpisode) {
  ExperimentConfig c = tiny_config();
  c.methods = {Method::GpEi};
  c.speeds = {2};
  const Scenario scenario(c.scene, c.resolved_ris(), c.grid, c.quantize);
  const auto cells = run_experiment_cells(c, scenario);
  ASSERT_EQ(cells.size(), 3u);
  const auto &episode = cells[1].episodes[1];
  const auto trace = run_trace(c, scenario, Method::GpEi, 0.4, 2, 1);
  ASSERT_EQ(trace.size(), episode.size());
  for (std::size_t t = 0; t < trace.size(); ++t) {
    EXPECT_EQ(trace[t].ue_cell, episode[t].ue_cell);
    EXPECT_EQ(trace[t].chosen_index, episode[t].chosen_index);
  }
}

TEST(Config, EmptyDocumentKeepsDefaults) {
  const ExperimentConfig c = parse_experiment_config("{}");
  EXPECT_EQ(c.epochs, 100);
  EXPECT_EQ(c.methods.size(), 4u);
  EXPECT_DOUBLE_EQ(c.scene.carrier_frequency, 5.8e9);
  EXPECT_NEAR(c.resolved_ris().element_spacing, c.scene.wavelength() / 2, 1e-15);
}

TEST(Config, ParsesEverySection) {
  const ExperimentConfig c = parse_experiment_config(R"(
scene:
  carrier_frequency_hz: 5.8e9
  wavelength_m: 0.0517
  num_bs_antennas: 4
  noise_power_dbm: -100
  channel_model: empirical_log
ris:
  rows: 8
  cols: 6
  element_spacing_m: half_wavelength
  phase_bits: 1
grid:
  rows: 5
  cols: 4
  cell_size_m: 0.5
  origin: [1.0, -1.0, 2.0]
codebook:
  sweep_resolution: 16
  exact_intervals: false
tracker:
  total_slots: 7
  warm_start: true
  gp: {length_scale: 3.0}
  tpe: {gamma: 0.3, bandwidth: [1.5, 0.5]}
experiment:
  methods: [gp_ei, tpe_ei]
  overheads: [0.1]
  speeds: [0, 3]
  epochs: 9
  master_seed: 77
  output_dir: out
)");
  EXPECT_EQ(c.scene.num_bs_antennas, 4);
  EXPECT_EQ(c.scene.channel_model, ChannelModel::EmpiricalLog);
  EXPECT_DOUBLE_EQ(c.scene.noise_power_dbm, -100.0);
  EXPECT_EQ(c.ris.rows, 8);
  EXPECT_EQ(c.ris.phase_bits, 1);
  EXPECT_NEAR(c.resolved_ris().element_spacing, c.scene.wavelength() / 2, 1e-15);
  EXPECT_EQ(c.grid.rows, 5);
  EXPECT_EQ(c.grid.area_origin, (Vec3{1.0, -1.0, 2.0}));
  EXPECT_EQ(c.quantize.sweep_resolution, 16);
  EXPECT_FALSE(c.quantize.exact_intervals);
  EXPECT_EQ(c.tracker.total_slots, 7);
  EXPECT_TRUE(c.tracker.warm_start);
  EXPECT_DOUBLE_EQ(c.tracker.gp.length_scale, 3.0);
  EXPECT_DOUBLE_EQ(c.tracker.tpe.bandwidth_row, 1.5);
  EXPECT_DOUBLE_EQ(c.tracker.tpe.bandwidth_col, 0.5);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::GpEi, Method::TpeEi}));
  EXPECT_EQ(c.speeds, (std::vector<int>{0, 3}));
  EXPECT_EQ(c.epochs, 9);
  EXPECT_EQ(c.master_seed, 77u);
  EXPECT_EQ(c.output_dir, "out");
}

TEST(Config, RejectsBadInput) {
  for (const char *bad : {"scene: {frequency: 1}", "bogus: 1", "ris: {rows: many}", "scene: {wavelength_m: 0.06}",
                          "scene: {speed_of_light_m_s: 2.99792458e8}", "experiment: {methods: [annealing]}",
                          "experiment: {overheads: [1.5]}", "grid: {origin: [1, 2]}", "scene: [1, 2",
                          "scene: {channel_model: rayleigh}"}) {
    EXPECT_THROW(parse_experiment_config(bad), ConfigError) << bad;
  }
  EXPECT_THROW(load_experiment_config("/nonexistent/config.yaml"), IoError);
}

}  // namespace
}  // namespace ristrack
