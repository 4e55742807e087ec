// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_CODEBOOK_HPP
#define RISTRACK_CODEBOOK_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ristrack/channel.hpp"
#include "ristrack/geometry.hpp"

namespace ristrack {

struct GridCell {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridCell &, const GridCell &) = default;
};

/// Rectangular UE area split into square cells in a plane parallel to the RIS.
///
/// `area_origin` is the corner of cell (0, 0); rows advance along +x and
/// columns along +y. Cell (r, c) has flat index r * cols + c.
struct GridMap {
  double cell_size = 0.4;
  int rows = 10;
  int cols = 10;
  Vec3 area_origin{0.4, -2.0, 1.5};

  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  std::size_t index(GridCell cell) const {
    return static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(cell.col);
  }
  GridCell cell(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(cols)), static_cast<int>(index % static_cast<std::size_t>(cols))};
  }
  bool contains(GridCell cell) const { return cell.row >= 0 && cell.row < rows && cell.col >= 0 && cell.col < cols; }
  Vec3 cell_center(GridCell cell) const;
  std::vector<Vec3> cell_centers() const;

  void validate() const;
};

struct Direction {
  double theta = 0.0;  // pitch from the RIS normal, [0, pi/2]
  double phi = 0.0;    // azimuth, [0, 2 pi)
  bool degenerate = false;  // on the normal axis; phi forced to 0
};

/// Pitch/azimuth of a point given in the RIS frame. Requires z > 0.
Direction ue_direction(const Vec3 &ue_position);

/// Continuous phase per element that co-phases the BS -> RIS -> target path:
/// (2 pi / lambda) (d1_i + d2_i) mod 2 pi, with d1 measured from BS antenna 0.
std::vector<double> ideal_phases(const SceneConfig &scene, const RisGeometry &ris, const Vec3 &target);

struct QuantizeOptions {
  int sweep_resolution = 64;
  /// Also try one offset inside every interval between rounding breakpoints,
  /// which makes the result the exact discrete optimum.
  bool exact_intervals = true;
};

/// Discrete codeword maximizing |sum_i w_i exp(j (beta_i - phase_i))|.
///
/// Every candidate is obtained by shifting all phases by a common offset
/// rho in [0, 2 pi / 2^bits) and rounding each to the nearest level. Offsets
/// come from a uniform sweep plus, with `exact_intervals`, the midpoints of
/// the intervals between rounding breakpoints. Ties keep the smallest rho.
/// Empty `weights` means unit weights.
Codeword quantize_codeword(std::span<const double> continuous_phases, int bits, const QuantizeOptions &options = {},
                           std::span<const double> weights = {});

/// Objective maximized by quantize_codeword().
double alignment_score(const Codeword &codeword, std::span<const double> continuous_phases,
                       std::span<const double> weights = {});

/// One codeword per grid cell; index k serves grid cell k.
struct Codebook {
  int ris_rows = 0;
  int ris_cols = 0;
  int bits = 2;
  std::vector<Codeword> entries;

  std::size_t size() const { return entries.size(); }
  friend bool operator==(const Codebook &, const Codebook &) = default;
};

/// Entry k quantizes ideal_phases() toward cell center k, weighting elements
/// by their cascaded link amplitude at that center.
Codebook build_codebook(const SceneConfig &scene, const RisGeometry &ris, const GridMap &grid,
                        const QuantizeOptions &options = {});

/// Index of the entry with the largest RSRP; ties go to the lowest index.
std::size_t best_codebook_index(const Codebook &codebook, const ChannelVector &h, const ChannelMatrix &H,
                                const TransmitSignal &z);

/// RSRP of every entry for one UE channel (linear power, entry order).
std::vector<double> rsrp_landscape(const Codebook &codebook, const ChannelVector &h, const Eigen::VectorXcd &incident);

/// Text form: header "<ris_rows> <ris_cols> <bits>", then one line per entry
/// "<index> <i_1> ... <i_N>".
void write_codebook(std::ostream &out, const Codebook &codebook);
Codebook read_codebook(std::istream &in);
void save_codebook(const std::string &path, const Codebook &codebook);
Codebook load_codebook(const std::string &path);

}  // namespace ristrack

#endif  // RISTRACK_CODEBOOK_HPP
