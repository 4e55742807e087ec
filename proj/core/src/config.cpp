// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "ristrack/bench.hpp"
#include "ristrack/error.hpp"

namespace ristrack {

namespace {

void check_keys(const YAML::Node &node, std::string_view section, std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw ConfigError(fmt::format("config section '{}' must be a mapping", section));
  for (const auto &kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(fmt::format("unknown config key '{}.{}'", section, key));
  }
}

template <typename T>
void read(const YAML::Node &node, const char *key, T &out, std::string_view section) {
  if (!node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception &) {
    throw ConfigError(fmt::format("config key '{}.{}' has the wrong type", section, key));
  }
}

void read_vec3(const YAML::Node &node, const char *key, Vec3 &out, std::string_view section) {
  if (!node[key]) return;
  const auto v = node[key];
  if (!v.IsSequence() || v.size() != 3) throw ConfigError(fmt::format("config key '{}.{}' must be [x, y, z]", section, key));
  out = {v[0].as<double>(), v[1].as<double>(), v[2].as<double>()};
}

void parse_scene(const YAML::Node &node, SceneConfig &scene) {
  check_keys(node, "scene",
             {"bs_position", "ris_origin", "carrier_frequency_hz", "wavelength_m", "speed_of_light_m_s",
              "num_bs_antennas", "bs_antenna_spacing_m", "noise_power_dbm", "channel_model"});
  read_vec3(node, "bs_position", scene.bs_position, "scene");
  read_vec3(node, "ris_origin", scene.ris_origin, "scene");
  read(node, "carrier_frequency_hz", scene.carrier_frequency, "scene");
  read(node, "num_bs_antennas", scene.num_bs_antennas, "scene");
  read(node, "bs_antenna_spacing_m", scene.bs_antenna_spacing, "scene");
  read(node, "noise_power_dbm", scene.noise_power_dbm, "scene");
  if (node["channel_model"]) {
    const auto model = node["channel_model"].as<std::string>();
    if (model == "free_space") {
      scene.channel_model = ChannelModel::FreeSpace;
    } else if (model == "empirical_log") {
      scene.channel_model = ChannelModel::EmpiricalLog;
    } else {
      throw ConfigError(fmt::format("scene.channel_model must be free_space or empirical_log, got '{}'", model));
    }
  }
  // Derived quantities may be listed for reference; they must agree with the carrier.
  if (node["speed_of_light_m_s"] && node["speed_of_light_m_s"].as<double>() != kSpeedOfLight)
    throw ConfigError(fmt::format("scene.speed_of_light_m_s is fixed at {}", kSpeedOfLight));
  if (node["wavelength_m"]) {
    const double listed = node["wavelength_m"].as<double>();
    if (std::abs(listed - scene.wavelength()) > 1e-3 * scene.wavelength())
      throw ConfigError(fmt::format("scene.wavelength_m = {} disagrees with c / f = {}", listed, scene.wavelength()));
  }
}

void parse_ris(const YAML::Node &node, RisGeometry &ris) {
  check_keys(node, "ris", {"rows", "cols", "element_spacing_m", "phase_bits"});
  read(node, "rows", ris.rows, "ris");
  read(node, "cols", ris.cols, "ris");
  read(node, "phase_bits", ris.phase_bits, "ris");
  if (node["element_spacing_m"]) {
    const auto &v = node["element_spacing_m"];
    if (v.IsScalar() && v.as<std::string>() == "half_wavelength") {
      ris.element_spacing = 0.0;
    } else {
      read(node, "element_spacing_m", ris.element_spacing, "ris");
      if (!(ris.element_spacing > 0.0)) throw ConfigError("ris.element_spacing_m must be positive or half_wavelength");
    }
  }
}

void parse_grid(const YAML::Node &node, GridMap &grid) {
  check_keys(node, "grid", {"rows", "cols", "cell_size_m", "origin"});
  read(node, "rows", grid.rows, "grid");
  read(node, "cols", grid.cols, "grid");
  read(node, "cell_size_m", grid.cell_size, "grid");
  read_vec3(node, "origin", grid.area_origin, "grid");
}

void parse_tracker(const YAML::Node &node, TrackerConfig &tracker) {
  check_keys(node, "tracker",
             {"total_slots", "slot_duration_s", "warm_start", "measure_with_noise", "record_timing", "gp", "tpe"});
  read(node, "total_slots", tracker.total_slots, "tracker");
  read(node, "slot_duration_s", tracker.slot_duration, "tracker");
  read(node, "warm_start", tracker.warm_start, "tracker");
  read(node, "measure_with_noise", tracker.measure_with_noise, "tracker");
  read(node, "record_timing", tracker.record_timing, "tracker");
  if (const auto gp = node["gp"]) {
    check_keys(gp, "tracker.gp", {"length_scale", "relative_jitter"});
    read(gp, "length_scale", tracker.gp.length_scale, "tracker.gp");
    read(gp, "relative_jitter", tracker.gp.relative_jitter, "tracker.gp");
  }
  if (const auto tpe = node["tpe"]) {
    check_keys(tpe, "tracker.tpe", {"gamma", "bandwidth"});
    read(tpe, "gamma", tracker.tpe.gamma, "tracker.tpe");
    if (const auto bw = tpe["bandwidth"]) {
      if (bw.IsSequence() && bw.size() == 2) {
        tracker.tpe.bandwidth_row = bw[0].as<double>();
        tracker.tpe.bandwidth_col = bw[1].as<double>();
      } else {
        tracker.tpe.bandwidth_row = tracker.tpe.bandwidth_col = bw.as<double>();
      }
    }
  }
}

void parse_experiment(const YAML::Node &node, ExperimentConfig &config) {
  check_keys(node, "experiment", {"methods", "overheads", "speeds", "epochs", "master_seed", "workers", "output_dir"});
  if (const auto methods = node["methods"]) {
    config.methods.clear();
    for (const auto &m : methods) config.methods.push_back(parse_method(m.as<std::string>()));
  }
  read(node, "overheads", config.overheads, "experiment");
  read(node, "speeds", config.speeds, "experiment");
  read(node, "epochs", config.epochs, "experiment");
  read(node, "master_seed", config.master_seed, "experiment");
  read(node, "workers", config.workers, "experiment");
  read(node, "output_dir", config.output_dir, "experiment");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string &yaml_text) {
  ExperimentConfig config;
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    throw ConfigError(fmt::format("config is not valid YAML: {}", e.what()));
  }
  if (root.IsNull()) return config;
  check_keys(root, "<root>", {"scene", "ris", "grid", "codebook", "tracker", "experiment"});
  try {
    if (root["scene"]) parse_scene(root["scene"], config.scene);
    if (root["ris"]) parse_ris(root["ris"], config.ris);
    if (root["grid"]) parse_grid(root["grid"], config.grid);
    if (const auto cb = root["codebook"]) {
      check_keys(cb, "codebook", {"sweep_resolution", "exact_intervals"});
      read(cb, "sweep_resolution", config.quantize.sweep_resolution, "codebook");
      read(cb, "exact_intervals", config.quantize.exact_intervals, "codebook");
    }
    if (root["tracker"]) parse_tracker(root["tracker"], config.tracker);
    if (root["experiment"]) parse_experiment(root["experiment"], config);
  } catch (const YAML::Exception &e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str());
}

}  // namespace ristrack
