// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_TRACKER_HPP
#define RISTRACK_TRACKER_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "ristrack/channel.hpp"
#include "ristrack/codebook.hpp"
#include "ristrack/surrogate.hpp"

namespace ristrack {

enum class Method {
  Ergodic,  // measure every codeword
  Random,   // measure a uniform random subset
  GpEi,     // GP surrogate + expected improvement
  TpeEi,    // TPE surrogate + density-ratio EI
};

std::string_view method_name(Method method);
/// Accepts the names produced by method_name(); throws ConfigError otherwise.
Method parse_method(std::string_view name);

struct MobilityState {
  GridCell cell;
  int speed = 1;  // cells per slot
};

/// Moves `speed` times to a uniformly drawn 4-neighbour, redrawing moves that
/// would leave the grid. A 1x1 grid never moves.
MobilityState mobility_step(const MobilityState &state, const GridMap &grid, std::mt19937_64 &rng);

struct TrackerConfig {
  Method method = Method::TpeEi;
  double overhead = 0.2;  // eta, fraction of the codebook measured per slot
  int total_slots = 12;
  double slot_duration = 1.0;  // seconds
  bool warm_start = false;
  bool measure_with_noise = false;
  bool record_timing = true;
  GpSettings gp;
  TpeSettings tpe;

  /// round(eta * domain) clamped to [1, domain]; the full domain for Ergodic.
  std::size_t budget(std::size_t domain_size) const;
  void validate() const;
};

/// Fixed part of an experiment: geometry, codebook and BS -> RIS channel.
class Scenario {
 public:
  Scenario(SceneConfig scene, RisGeometry ris, GridMap grid, const QuantizeOptions &quantize = {});
  Scenario(SceneConfig scene, RisGeometry ris, GridMap grid, Codebook codebook);

  const SceneConfig &scene() const { return scene_; }
  const RisGeometry &ris() const { return ris_; }
  const GridMap &grid() const { return grid_; }
  const Codebook &codebook() const { return codebook_; }
  const ChannelMatrix &bs_ris() const { return bs_ris_; }
  const TransmitSignal &transmit() const { return transmit_; }
  const Eigen::VectorXcd &incident() const { return incident_; }
  /// Grid coordinates of every codebook index.
  const std::vector<DomainPoint> &domain() const { return domain_; }

 private:
  void init();

  SceneConfig scene_;
  RisGeometry ris_;
  GridMap grid_;
  Codebook codebook_;
  ChannelMatrix bs_ris_;
  TransmitSignal transmit_;
  Eigen::VectorXcd incident_;
  std::vector<DomainPoint> domain_;
};

/// One slot's UE placement and RIS -> UE channel.
struct SlotEnvironment {
  const Scenario *scenario = nullptr;
  GridCell ue_cell;
  Vec3 ue_position;
  ChannelVector ris_ue;

  static SlotEnvironment at_cell(const Scenario &scenario, GridCell cell);

  /// Noiseless RSRP of codebook entry k.
  double rsrp_of(std::size_t k) const;
};

struct SlotResult {
  int slot_index = 0;
  GridCell ue_cell;
  std::size_t true_best_index = 0;
  std::size_t chosen_index = 0;
  double true_best_rsrp = 0.0;  // linear
  double achieved_rsrp = 0.0;   // linear, noiseless RSRP of chosen_index
  std::size_t measurements_used = 0;
  double elapsed_s = 0.0;
};

/// Runs one slot of the configured method. `previous` is the prior slot's
/// result, used only when warm_start is set.
SlotResult track_slot(const SlotEnvironment &env, const TrackerConfig &config, std::mt19937_64 &rng,
                      const SlotResult *previous = nullptr);

struct EpisodeStreams {
  std::mt19937_64 mobility;
  std::mt19937_64 optimizer;
};

/// Seeds derived from (master_seed, epoch, speed) for the UE path and from
/// the full (method, overhead slot, speed, epoch) key for the optimizer.
EpisodeStreams episode_streams(std::uint64_t master_seed, std::uint64_t epoch, int speed, Method method,
                               std::size_t overhead_slot);

/// Draws a uniform start cell, then for each slot advances mobility and
/// runs track_slot() at the new cell.
std::vector<SlotResult> run_episode(const Scenario &scenario, const TrackerConfig &config, int speed,
                                    EpisodeStreams &streams);

}  // namespace ristrack

#endif  // RISTRACK_TRACKER_HPP
