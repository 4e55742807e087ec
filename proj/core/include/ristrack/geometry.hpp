// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_GEOMETRY_HPP
#define RISTRACK_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace ristrack {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend bool operator==(const Vec3 &, const Vec3 &) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Vec3 &a, const Vec3 &b) { return (a - b).norm(); }

/// Planar RIS in the z = origin.z plane, boresight along +z.
///
/// Element (r, c) has flat index r * cols + c and sits at
/// origin + ((c - (cols-1)/2) * spacing, (r - (rows-1)/2) * spacing, 0).
struct RisGeometry {
  int rows = 10;
  int cols = 10;
  double element_spacing = 0.0;  // meters
  int phase_bits = 2;
  Vec3 origin{};

  /// Half-wavelength spacing, the usual build for a given carrier.
  static RisGeometry half_wavelength(double wavelength, int rows = 10, int cols = 10, int phase_bits = 2,
                                     Vec3 origin = {});

  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  int levels() const { return 1 << phase_bits; }
  std::vector<Vec3> element_positions() const;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// One RIS configuration: a quantized phase index per element.
/// Element i applies beta_i = 2*pi*phase_indices[i] / 2^bits.
struct Codeword {
  std::vector<std::uint8_t> phase_indices;
  int bits = 2;

  std::size_t size() const { return phase_indices.size(); }
  int levels() const { return 1 << bits; }
  double phase(std::size_t i) const { return kTwoPi * phase_indices[i] / levels(); }

  friend bool operator==(const Codeword &, const Codeword &) = default;
};

/// Codeword with all indices zero (identity reflection).
Codeword zero_codeword(std::size_t n, int bits);

}  // namespace ristrack

#endif  // RISTRACK_GEOMETRY_HPP
