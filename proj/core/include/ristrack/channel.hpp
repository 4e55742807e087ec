// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_CHANNEL_HPP
#define RISTRACK_CHANNEL_HPP

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

#include "ristrack/geometry.hpp"

namespace ristrack {

enum class ChannelModel {
  FreeSpace,     // lambda / (4 pi d) amplitude
  EmpiricalLog,  // 11 + 2 log10(d) dB path loss
};

struct SceneConfig {
  Vec3 bs_position{0.0, 0.0, 0.5};
  Vec3 ris_origin{0.0, 0.0, 0.0};
  double carrier_frequency = 5.8e9;  // Hz
  int num_bs_antennas = 2;
  /// BS array spacing along +x; zero means lambda / 2.
  double bs_antenna_spacing = 0.0;
  double noise_power_dbm = -120.0;
  ChannelModel channel_model = ChannelModel::FreeSpace;

  double wavelength() const { return kSpeedOfLight / carrier_frequency; }
  double antenna_spacing() const { return bs_antenna_spacing > 0.0 ? bs_antenna_spacing : wavelength() / 2.0; }
  /// Antenna 0 sits at bs_position, antenna k at bs_position + k * spacing * x_hat.
  std::vector<Vec3> bs_antenna_positions() const;
  double noise_power_watts() const;

  void validate() const;
};

/// BS -> RIS channel, N (RIS elements) x M (BS antennas).
struct ChannelMatrix {
  Eigen::MatrixXcd gains;
};

/// RIS -> UE channel. Stores the entries of h^H, so the received
/// signal is sum_i gains[i] * exp(j beta_i) * (H z)_i.
struct ChannelVector {
  Eigen::VectorXcd gains;
};

/// Unit-power BS transmit vector.
struct TransmitSignal {
  Eigen::VectorXcd samples;

  /// (1/sqrt(M)) * (1, ..., 1)
  static TransmitSignal uniform(int num_antennas);
};

double dbm_to_watts(double dbm);
/// 10 log10(p); p <= 0 maps to -inf.
double to_db(double linear_power);

/// Complex gain of a single link of length `d` (throws GeometryError for d <= 0).
std::complex<double> link_gain(double d, double wavelength, ChannelModel model);

ChannelMatrix bs_ris_channel(const SceneConfig &scene, const RisGeometry &ris);
ChannelVector ris_ue_channel(const SceneConfig &scene, const RisGeometry &ris, const Vec3 &ue_position);

/// Noiseless received power |h^H W H z|^2.
double rsrp(const ChannelVector &h, const Codeword &codeword, const ChannelMatrix &H, const TransmitSignal &z);

/// Same as rsrp() with the incident field H z already formed.
double rsrp(const ChannelVector &h, const Codeword &codeword, const Eigen::VectorXcd &incident);

/// (sum_i |h_i| |(Hz)_i|)^2, the largest power any phase configuration can reach.
double coherent_bound(const ChannelVector &h, const ChannelMatrix &H, const TransmitSignal &z);

/// One received sample h^H W H z + n, n ~ CN(0, noise_power).
std::complex<double> simulate_received(const ChannelVector &h, const Codeword &codeword, const ChannelMatrix &H,
                                       const TransmitSignal &z, double noise_power_watts, std::mt19937_64 &rng);

}  // namespace ristrack

#endif  // RISTRACK_CHANNEL_HPP
