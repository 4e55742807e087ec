// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/channel.hpp"

#include <fmt/format.h>

#include <limits>

#include "ristrack/error.hpp"

namespace ristrack {

namespace {

using namespace std::complex_literals;

void check_dims(const ChannelVector &h, const Codeword &codeword, const Eigen::VectorXcd &incident) {
  if (h.gains.size() != static_cast<Eigen::Index>(codeword.size()) || incident.size() != h.gains.size())
    throw DimensionError(fmt::format("dimension mismatch: h has {} entries, codeword {}, incident field {}",
                                     h.gains.size(), codeword.size(), incident.size()));
}

Eigen::VectorXcd incident_field(const ChannelMatrix &H, const TransmitSignal &z) {
  if (H.gains.cols() != z.samples.size())
    throw DimensionError(
        fmt::format("dimension mismatch: H has {} columns, z has {} entries", H.gains.cols(), z.samples.size()));
  return H.gains * z.samples;
}

}  // namespace

std::vector<Vec3> SceneConfig::bs_antenna_positions() const {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(num_bs_antennas));
  const double spacing = antenna_spacing();
  for (int k = 0; k < num_bs_antennas; ++k) out.push_back(bs_position + Vec3{k * spacing, 0.0, 0.0});
  return out;
}

double SceneConfig::noise_power_watts() const { return dbm_to_watts(noise_power_dbm); }

void SceneConfig::validate() const {
  if (!(carrier_frequency > 0.0) || !std::isfinite(carrier_frequency))
    throw ConfigError(fmt::format("carrier frequency must be positive, got {}", carrier_frequency));
  if (num_bs_antennas < 1) throw ConfigError(fmt::format("need at least one BS antenna, got {}", num_bs_antennas));
  if (bs_antenna_spacing < 0.0) throw ConfigError("BS antenna spacing must be non-negative");
  if (!bs_position.finite() || !ris_origin.finite()) throw ConfigError("scene positions must be finite");
  if (!std::isfinite(noise_power_dbm)) throw ConfigError("noise power must be finite");
}

TransmitSignal TransmitSignal::uniform(int num_antennas) {
  if (num_antennas < 1) throw DimensionError("transmit signal needs at least one antenna");
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  return TransmitSignal{Eigen::VectorXcd::Constant(num_antennas, std::complex<double>(amplitude, 0.0))};
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double to_db(double linear_power) {
  if (linear_power <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(linear_power);
}

std::complex<double> link_gain(double d, double wavelength, ChannelModel model) {
  if (!(d > 0.0)) throw GeometryError(fmt::format("degenerate geometry: link distance {} m", d));
  double magnitude = 0.0;
  switch (model) {
    case ChannelModel::FreeSpace:
      magnitude = wavelength / (4.0 * std::numbers::pi * d);
      break;
    case ChannelModel::EmpiricalLog:
      magnitude = std::pow(10.0, -(11.0 + 2.0 * std::log10(d)) / 20.0);
      break;
  }
  return magnitude * std::exp(-1i * (kTwoPi * d / wavelength));
}

ChannelMatrix bs_ris_channel(const SceneConfig &scene, const RisGeometry &ris) {
  const double wavelength = scene.wavelength();
  const auto elements = ris.element_positions();
  const auto antennas = scene.bs_antenna_positions();
  ChannelMatrix out{Eigen::MatrixXcd(static_cast<Eigen::Index>(elements.size()),
                                     static_cast<Eigen::Index>(antennas.size()))};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t k = 0; k < antennas.size(); ++k) {
      const double d = distance(elements[i], antennas[k]);
      if (!(d > 0.0))
        throw GeometryError(fmt::format("degenerate geometry: BS antenna {} coincides with RIS element {}", k, i));
      out.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          link_gain(d, wavelength, scene.channel_model);
    }
  }
  return out;
}

ChannelVector ris_ue_channel(const SceneConfig &scene, const RisGeometry &ris, const Vec3 &ue_position) {
  const double wavelength = scene.wavelength();
  const auto elements = ris.element_positions();
  ChannelVector out{Eigen::VectorXcd(static_cast<Eigen::Index>(elements.size()))};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const double d = distance(elements[i], ue_position);
    if (!(d > 0.0)) throw GeometryError(fmt::format("degenerate geometry: UE coincides with RIS element {}", i));
    out.gains(static_cast<Eigen::Index>(i)) = link_gain(d, wavelength, scene.channel_model);
  }
  return out;
}

double rsrp(const ChannelVector &h, const Codeword &codeword, const Eigen::VectorXcd &incident) {
  check_dims(h, codeword, incident);
  std::complex<double> sum{0.0, 0.0};
  for (Eigen::Index i = 0; i < h.gains.size(); ++i) {
    sum += h.gains(i) * std::polar(1.0, codeword.phase(static_cast<std::size_t>(i))) * incident(i);
  }
  return std::norm(sum);
}

double rsrp(const ChannelVector &h, const Codeword &codeword, const ChannelMatrix &H, const TransmitSignal &z) {
  return rsrp(h, codeword, incident_field(H, z));
}

double coherent_bound(const ChannelVector &h, const ChannelMatrix &H, const TransmitSignal &z) {
  const Eigen::VectorXcd incident = incident_field(H, z);
  if (incident.size() != h.gains.size())
    throw DimensionError(fmt::format("dimension mismatch: h has {} entries, H has {} rows", h.gains.size(),
                                     incident.size()));
  const double amplitude = (h.gains.cwiseAbs().array() * incident.cwiseAbs().array()).sum();
  return amplitude * amplitude;
}

std::complex<double> simulate_received(const ChannelVector &h, const Codeword &codeword, const ChannelMatrix &H,
                                       const TransmitSignal &z, double noise_power_watts, std::mt19937_64 &rng) {
  if (noise_power_watts < 0.0) throw std::invalid_argument("noise power must be non-negative");
  const Eigen::VectorXcd incident = incident_field(H, z);
  check_dims(h, codeword, incident);
  std::complex<double> signal{0.0, 0.0};
  for (Eigen::Index i = 0; i < h.gains.size(); ++i) {
    signal += h.gains(i) * std::polar(1.0, codeword.phase(static_cast<std::size_t>(i))) * incident(i);
  }
  if (noise_power_watts == 0.0) return signal;
  std::normal_distribution<double> component(0.0, std::sqrt(noise_power_watts / 2.0));
  const double re = component(rng);
  const double im = component(rng);
  return signal + std::complex<double>(re, im);
}

}  // namespace ristrack
