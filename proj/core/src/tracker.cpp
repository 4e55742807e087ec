// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/tracker.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ristrack/acquisition.hpp"
#include "ristrack/error.hpp"

namespace ristrack {

namespace {

constexpr std::array<GridCell, 4> kMoves{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

std::size_t random_unmeasured(std::size_t domain, const ObservationHistory &history, std::mt19937_64 &rng) {
  std::vector<std::size_t> free;
  free.reserve(domain);
  for (std::size_t k = 0; k < domain; ++k)
    if (!history.contains(k)) free.push_back(k);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  return free[pick(rng)];
}

GpModel fit_gp_with_retry(const ObservationHistory &history, GpSettings settings) {
  for (int attempt = 0;; ++attempt) {
    try {
      return gp_fit(history, settings);
    } catch (const ConditioningError &) {
      if (attempt >= 6) throw;
      settings.relative_jitter *= 10.0;
    }
  }
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Ergodic:
      return "ergodic";
    case Method::Random:
      return "random";
    case Method::GpEi:
      return "gp_ei";
    case Method::TpeEi:
      return "tpe_ei";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Ergodic, Method::Random, Method::GpEi, Method::TpeEi})
    if (method_name(m) == name) return m;
  throw ConfigError(fmt::format("unknown method '{}' (expected ergodic, random, gp_ei or tpe_ei)", name));
}

MobilityState mobility_step(const MobilityState &state, const GridMap &grid, std::mt19937_64 &rng) {
  MobilityState next = state;
  if (grid.rows == 1 && grid.cols == 1) return next;
  std::uniform_int_distribution<int> direction(0, 3);
  for (int step = 0; step < state.speed; ++step) {
    GridCell moved;
    do {
      const GridCell delta = kMoves[static_cast<std::size_t>(direction(rng))];
      moved = {next.cell.row + delta.row, next.cell.col + delta.col};
    } while (!grid.contains(moved));
    next.cell = moved;
  }
  return next;
}

std::size_t TrackerConfig::budget(std::size_t domain_size) const {
  if (method == Method::Ergodic) return domain_size;
  const auto b = static_cast<std::size_t>(std::llround(overhead * static_cast<double>(domain_size)));
  return std::clamp<std::size_t>(b, 1, domain_size);
}

void TrackerConfig::validate() const {
  if (!(overhead > 0.0 && overhead <= 1.0)) throw ConfigError(fmt::format("overhead must be in (0, 1], got {}", overhead));
  if (total_slots < 1) throw ConfigError(fmt::format("total_slots must be >= 1, got {}", total_slots));
  if (!(slot_duration > 0.0)) throw ConfigError("slot_duration must be positive");
  if (!(tpe.gamma > 0.0 && tpe.gamma < 1.0)) throw ConfigError(fmt::format("tpe gamma must be in (0, 1), got {}", tpe.gamma));
  if (!(tpe.bandwidth_row > 0.0) || !(tpe.bandwidth_col > 0.0)) throw ConfigError("tpe bandwidth must be positive");
  if (!(gp.length_scale > 0.0)) throw ConfigError("gp length scale must be positive");
  if (!(gp.relative_jitter > 0.0)) throw ConfigError("gp jitter must be positive");
}

Scenario::Scenario(SceneConfig scene, RisGeometry ris, GridMap grid, const QuantizeOptions &quantize)
    : scene_(scene), ris_(ris), grid_(grid) {
  codebook_ = build_codebook(scene_, ris_, grid_, quantize);
  init();
}

Scenario::Scenario(SceneConfig scene, RisGeometry ris, GridMap grid, Codebook codebook)
    : scene_(scene), ris_(ris), grid_(grid), codebook_(std::move(codebook)) {
  scene_.validate();
  ris_.validate();
  grid_.validate();
  init();
}

void Scenario::init() {
  if (codebook_.size() != grid_.size())
    throw ConfigError(fmt::format("codebook has {} entries but the grid has {} cells", codebook_.size(), grid_.size()));
  if (codebook_.ris_rows != ris_.rows || codebook_.ris_cols != ris_.cols || codebook_.bits != ris_.phase_bits)
    throw ConfigError("codebook dimensions do not match the RIS geometry");
  bs_ris_ = bs_ris_channel(scene_, ris_);
  transmit_ = TransmitSignal::uniform(scene_.num_bs_antennas);
  incident_ = bs_ris_.gains * transmit_.samples;
  domain_ = grid_domain(grid_.rows, grid_.cols);
}

SlotEnvironment SlotEnvironment::at_cell(const Scenario &scenario, GridCell cell) {
  if (!scenario.grid().contains(cell)) throw std::out_of_range(fmt::format("cell ({}, {}) outside grid", cell.row, cell.col));
  const Vec3 position = scenario.grid().cell_center(cell);
  return SlotEnvironment{&scenario, cell, position, ris_ue_channel(scenario.scene(), scenario.ris(), position)};
}

double SlotEnvironment::rsrp_of(std::size_t k) const {
  return rsrp(ris_ue, scenario->codebook().entries.at(k), scenario->incident());
}

SlotResult track_slot(const SlotEnvironment &env, const TrackerConfig &config, std::mt19937_64 &rng,
                      const SlotResult *previous) {
  const Scenario &scenario = *env.scenario;
  const std::size_t domain = scenario.codebook().size();
  const std::size_t budget = config.budget(domain);
  const auto &points = scenario.domain();
  const double noise_watts = scenario.scene().noise_power_watts();

  SlotResult result;
  result.ue_cell = env.ue_cell;
  result.true_best_index = best_codebook_index(scenario.codebook(), env.ris_ue, scenario.bs_ris(), scenario.transmit());
  result.true_best_rsrp = env.rsrp_of(result.true_best_index);

  const auto start = std::chrono::steady_clock::now();

  ObservationHistory history;
  auto measure = [&](std::size_t k) {
    double power = 0.0;
    if (config.measure_with_noise) {
      power = std::norm(simulate_received(env.ris_ue, scenario.codebook().entries[k], scenario.bs_ris(),
                                          scenario.transmit(), noise_watts, rng));
    } else {
      power = env.rsrp_of(k);
    }
    history.add(k, points[k], to_db(power));
  };

  switch (config.method) {
    case Method::Ergodic:
      for (std::size_t k = 0; k < domain; ++k) measure(k);
      break;
    case Method::Random: {
      std::vector<std::size_t> all(domain);
      std::iota(all.begin(), all.end(), std::size_t{0});
      std::vector<std::size_t> picked;
      picked.reserve(budget);
      std::sample(all.begin(), all.end(), std::back_inserter(picked), budget, rng);
      for (std::size_t k : picked) measure(k);
      break;
    }
    case Method::GpEi:
    case Method::TpeEi: {
      if (config.warm_start && previous != nullptr) {
        measure(previous->chosen_index);
      } else {
        std::uniform_int_distribution<std::size_t> first(0, domain - 1);
        measure(first(rng));
      }
      while (history.size() < budget) {
        std::optional<AcquisitionScore> next;
        if (config.method == Method::GpEi) {
          next = select_next(points, fit_gp_with_retry(history, config.gp), history);
        } else if (history.size() < 2) {
          next = AcquisitionScore{random_unmeasured(domain, history, rng), 0.0};
        } else {
          next = select_next(points, tpe_fit(history, points, config.tpe), history);
        }
        if (!next) break;
        measure(next->candidate);
      }
      break;
    }
  }

  result.chosen_index = history.best().index;
  result.measurements_used = history.size();
  if (config.record_timing)
    result.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.achieved_rsrp = env.rsrp_of(result.chosen_index);
  return result;
}

EpisodeStreams episode_streams(std::uint64_t master_seed, std::uint64_t epoch, int speed, Method method,
                               std::size_t overhead_slot) {
  const auto lo = static_cast<std::uint32_t>(master_seed);
  const auto hi = static_cast<std::uint32_t>(master_seed >> 32);
  const auto ep_lo = static_cast<std::uint32_t>(epoch);
  const auto ep_hi = static_cast<std::uint32_t>(epoch >> 32);
  const auto sp = static_cast<std::uint32_t>(speed);
  std::seed_seq mobility_seed{lo, hi, ep_lo, ep_hi, sp, 0x6d6f62u};
  std::seed_seq optimizer_seed{lo, hi, ep_lo, ep_hi, sp, 0x6f7074u, static_cast<std::uint32_t>(method),
                               static_cast<std::uint32_t>(overhead_slot)};
  return EpisodeStreams{std::mt19937_64(mobility_seed), std::mt19937_64(optimizer_seed)};
}

std::vector<SlotResult> run_episode(const Scenario &scenario, const TrackerConfig &config, int speed,
                                    EpisodeStreams &streams) {
  config.validate();
  if (speed < 0) throw ConfigError(fmt::format("speed must be non-negative, got {}", speed));
  const GridMap &grid = scenario.grid();
  std::uniform_int_distribution<std::size_t> start(0, grid.size() - 1);
  MobilityState state{grid.cell(start(streams.mobility)), speed};

  std::vector<SlotResult> out;
  out.reserve(static_cast<std::size_t>(config.total_slots));
  for (int t = 1; t <= config.total_slots; ++t) {
    state = mobility_step(state, grid, streams.mobility);
    const SlotEnvironment env = SlotEnvironment::at_cell(scenario, state.cell);
    SlotResult slot = track_slot(env, config, streams.optimizer, out.empty() ? nullptr : &out.back());
    slot.slot_index = t;
    out.push_back(slot);
  }
  return out;
}

}  // namespace ristrack
