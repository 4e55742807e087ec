// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/codebook.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ristrack/error.hpp"

namespace ristrack {

namespace {

double wrap_two_pi(double angle) {
  double out = std::fmod(angle, kTwoPi);
  if (out < 0.0) out += kTwoPi;
  return out;
}

Codeword round_with_offset(std::span<const double> phases, int bits, double offset) {
  const int levels = 1 << bits;
  const double step = kTwoPi / levels;
  Codeword out{std::vector<std::uint8_t>(phases.size()), bits};
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto level = static_cast<long long>(std::floor((phases[i] + offset) / step + 0.5));
    out.phase_indices[i] = static_cast<std::uint8_t>(((level % levels) + levels) % levels);
  }
  return out;
}

}  // namespace

Vec3 GridMap::cell_center(GridCell cell) const {
  return area_origin + Vec3{(cell.row + 0.5) * cell_size, (cell.col + 0.5) * cell_size, 0.0};
}

std::vector<Vec3> GridMap::cell_centers() const {
  std::vector<Vec3> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(cell_center(cell(k)));
  return out;
}

void GridMap::validate() const {
  if (rows < 1 || cols < 1) throw ConfigError(fmt::format("grid must have at least one cell, got {}x{}", rows, cols));
  if (!(cell_size > 0.0) || !std::isfinite(cell_size))
    throw ConfigError(fmt::format("grid cell size must be positive, got {}", cell_size));
  if (!area_origin.finite()) throw ConfigError("grid origin has non-finite coordinates");
}

Direction ue_direction(const Vec3 &ue_position) {
  if (!(ue_position.z > 0.0))
    throw GeometryError(fmt::format("UE must be in front of the RIS (z > 0), got z = {}", ue_position.z));
  Direction out;
  const double radial = std::hypot(ue_position.x, ue_position.y);
  out.theta = std::atan2(radial, ue_position.z);
  if (ue_position.x == 0.0 && ue_position.y == 0.0) {
    out.degenerate = true;
    return out;
  }
  out.phi = wrap_two_pi(std::atan2(ue_position.y, ue_position.x));
  return out;
}

std::vector<double> ideal_phases(const SceneConfig &scene, const RisGeometry &ris, const Vec3 &target) {
  const double wavenumber = kTwoPi / scene.wavelength();
  const Vec3 reference_antenna = scene.bs_antenna_positions().front();
  const auto elements = ris.element_positions();
  std::vector<double> out;
  out.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const double d1 = distance(elements[i], reference_antenna);
    const double d2 = distance(elements[i], target);
    if (!(d1 > 0.0) || !(d2 > 0.0))
      throw GeometryError(fmt::format("degenerate geometry at RIS element {}", i));
    out.push_back(wrap_two_pi(wavenumber * (d1 + d2)));
  }
  return out;
}

double alignment_score(const Codeword &codeword, std::span<const double> continuous_phases,
                       std::span<const double> weights) {
  if (codeword.size() != continuous_phases.size() || (!weights.empty() && weights.size() != continuous_phases.size()))
    throw DimensionError("alignment_score: size mismatch");
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t i = 0; i < continuous_phases.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sum += std::polar(w, codeword.phase(i) - continuous_phases[i]);
  }
  return std::abs(sum);
}

Codeword quantize_codeword(std::span<const double> continuous_phases, int bits, const QuantizeOptions &options,
                           std::span<const double> weights) {
  if (options.sweep_resolution < 1) throw std::invalid_argument("sweep_resolution must be >= 1");
  if (bits < 1 || bits > 8) throw std::invalid_argument("bits must be in [1, 8]");
  if (!weights.empty() && weights.size() != continuous_phases.size())
    throw DimensionError("quantize_codeword: weights and phases differ in length");

  const double step = kTwoPi / (1 << bits);
  std::vector<double> offsets;
  offsets.reserve(static_cast<std::size_t>(options.sweep_resolution) + continuous_phases.size() + 1);
  for (int r = 0; r < options.sweep_resolution; ++r) offsets.push_back(step * r / options.sweep_resolution);

  if (options.exact_intervals && !continuous_phases.empty()) {
    // Element i changes level when phase_i + rho crosses a half-step boundary.
    std::vector<double> breakpoints;
    breakpoints.reserve(continuous_phases.size());
    for (double phase : continuous_phases) {
      double b = std::fmod(0.5 * step - phase, step);
      if (b < 0.0) b += step;
      breakpoints.push_back(b);
    }
    std::sort(breakpoints.begin(), breakpoints.end());
    constexpr double kMinWidth = 1e-12;
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
      if (breakpoints[j + 1] - breakpoints[j] > kMinWidth) offsets.push_back(0.5 * (breakpoints[j] + breakpoints[j + 1]));
    }
    const double wrap_width = breakpoints.front() + step - breakpoints.back();
    if (wrap_width > kMinWidth) {
      double mid = breakpoints.back() + 0.5 * wrap_width;
      if (mid >= step) mid -= step;
      offsets.push_back(mid);
    }
    std::sort(offsets.begin(), offsets.end());
  }

  Codeword best = round_with_offset(continuous_phases, bits, offsets.front());
  double best_score = alignment_score(best, continuous_phases, weights);
  for (std::size_t k = 1; k < offsets.size(); ++k) {
    Codeword candidate = round_with_offset(continuous_phases, bits, offsets[k]);
    const double score = alignment_score(candidate, continuous_phases, weights);
    if (score > best_score * (1.0 + 1e-13)) {
      best = std::move(candidate);
      best_score = score;
    }
  }
  return best;
}

Codebook build_codebook(const SceneConfig &scene, const RisGeometry &ris, const GridMap &grid,
                        const QuantizeOptions &options) {
  scene.validate();
  ris.validate();
  grid.validate();
  const ChannelMatrix H = bs_ris_channel(scene, ris);
  const Eigen::VectorXcd incident = H.gains * TransmitSignal::uniform(scene.num_bs_antennas).samples;

  Codebook out{ris.rows, ris.cols, ris.phase_bits, {}};
  out.entries.reserve(grid.size());
  std::vector<double> weights(ris.size());
  for (const Vec3 &center : grid.cell_centers()) {
    const ChannelVector h = ris_ue_channel(scene, ris, center);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      weights[i] = std::abs(h.gains(idx)) * std::abs(incident(idx));
    }
    const std::vector<double> phases = ideal_phases(scene, ris, center);
    out.entries.push_back(quantize_codeword(phases, ris.phase_bits, options, weights));
  }
  return out;
}

std::vector<double> rsrp_landscape(const Codebook &codebook, const ChannelVector &h, const Eigen::VectorXcd &incident) {
  std::vector<double> out;
  out.reserve(codebook.size());
  for (const Codeword &entry : codebook.entries) out.push_back(rsrp(h, entry, incident));
  return out;
}

std::size_t best_codebook_index(const Codebook &codebook, const ChannelVector &h, const ChannelMatrix &H,
                                const TransmitSignal &z) {
  if (codebook.entries.empty()) throw std::invalid_argument("best_codebook_index: empty codebook");
  const Eigen::VectorXcd incident = H.gains * z.samples;
  std::size_t best = 0;
  double best_power = rsrp(h, codebook.entries[0], incident);
  for (std::size_t k = 1; k < codebook.size(); ++k) {
    const double power = rsrp(h, codebook.entries[k], incident);
    if (power > best_power) {
      best = k;
      best_power = power;
    }
  }
  return best;
}

void write_codebook(std::ostream &out, const Codebook &codebook) {
  out << codebook.ris_rows << ' ' << codebook.ris_cols << ' ' << codebook.bits << '\n';
  for (std::size_t k = 0; k < codebook.size(); ++k) {
    out << k;
    for (std::uint8_t level : codebook.entries[k].phase_indices) out << ' ' << static_cast<int>(level);
    out << '\n';
  }
}

Codebook read_codebook(std::istream &in) {
  Codebook out;
  std::string line;
  if (!std::getline(in, line)) throw IoError("codebook: missing header line");
  {
    std::istringstream header(line);
    if (!(header >> out.ris_rows >> out.ris_cols >> out.bits) || out.ris_rows < 1 || out.ris_cols < 1 ||
        out.bits < 1 || out.bits > 8)
      throw IoError(fmt::format("codebook: malformed header '{}'", line));
  }
  const auto n = static_cast<std::size_t>(out.ris_rows) * static_cast<std::size_t>(out.ris_cols);
  const int levels = 1 << out.bits;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::size_t index = 0;
    if (!(fields >> index) || index != out.entries.size())
      throw IoError(fmt::format("codebook line {}: expected entry index {}", line_no, out.entries.size()));
    Codeword entry{std::vector<std::uint8_t>(n), out.bits};
    for (std::size_t i = 0; i < n; ++i) {
      int level = -1;
      if (!(fields >> level) || level < 0 || level >= levels)
        throw IoError(fmt::format("codebook line {}: bad phase index at element {}", line_no, i));
      entry.phase_indices[i] = static_cast<std::uint8_t>(level);
    }
    std::string extra;
    if (fields >> extra) throw IoError(fmt::format("codebook line {}: more than {} phase indices", line_no, n));
    out.entries.push_back(std::move(entry));
  }
  return out;
}

void save_codebook(const std::string &path, const Codebook &codebook) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  write_codebook(out, codebook);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

Codebook load_codebook(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path));
  return read_codebook(in);
}

}  // namespace ristrack
