// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/geometry.hpp"

#include <fmt/format.h>

#include "ristrack/error.hpp"

namespace ristrack {

RisGeometry RisGeometry::half_wavelength(double wavelength, int rows, int cols, int phase_bits, Vec3 origin) {
  return RisGeometry{rows, cols, wavelength / 2.0, phase_bits, origin};
}

std::vector<Vec3> RisGeometry::element_positions() const {
  std::vector<Vec3> out;
  out.reserve(size());
  const double row_center = (rows - 1) / 2.0;
  const double col_center = (cols - 1) / 2.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      out.push_back({origin.x + (c - col_center) * element_spacing, origin.y + (r - row_center) * element_spacing,
                     origin.z});
    }
  }
  return out;
}

void RisGeometry::validate() const {
  if (rows < 1 || cols < 1) throw ConfigError(fmt::format("RIS must have at least one element, got {}x{}", rows, cols));
  if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
    throw ConfigError(fmt::format("RIS element spacing must be positive, got {}", element_spacing));
  if (phase_bits < 1 || phase_bits > 8) throw ConfigError(fmt::format("RIS phase bits must be in [1, 8], got {}", phase_bits));
  if (!origin.finite()) throw ConfigError("RIS origin has non-finite coordinates");
}

Codeword zero_codeword(std::size_t n, int bits) { return Codeword{std::vector<std::uint8_t>(n, 0), bits}; }

}  // namespace ristrack
