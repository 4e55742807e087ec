// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_SURROGATE_HPP
#define RISTRACK_SURROGATE_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace ristrack {

/// A codebook index unfolded onto its (row, col) grid coordinates.
struct DomainPoint {
  double row = 0.0;
  double col = 0.0;

  friend bool operator==(const DomainPoint &, const DomainPoint &) = default;
};

inline double squared_distance(const DomainPoint &a, const DomainPoint &b) {
  const double dr = a.row - b.row;
  const double dc = a.col - b.col;
  return dr * dr + dc * dc;
}

/// All points of a rows x cols grid in flat index order.
std::vector<DomainPoint> grid_domain(int rows, int cols);

struct Observation {
  std::size_t index = 0;  // candidate (codebook) index
  DomainPoint point;
  double rsrp_db = 0.0;
};

/// Measurements of one slot, in the order they were taken.
class ObservationHistory {
 public:
  /// Throws std::invalid_argument if `index` is already present.
  void add(std::size_t index, DomainPoint point, double rsrp_db);
  bool contains(std::size_t index) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Observation> &entries() const { return entries_; }
  const Observation &operator[](std::size_t i) const { return entries_[i]; }

  /// Observation with the highest RSRP; the earliest wins ties.
  const Observation &best() const;

 private:
  std::vector<Observation> entries_;
};

// --- Gaussian process -----------------------------------------------------

struct RbfParams {
  double signal_variance = 1.0;  // theta_1
  double length_scale = 2.0;     // theta_2, in grid units
};

/// theta_1 * exp(-|a - b|^2 / theta_2^2). Throws on non-positive parameters.
double rbf_kernel(const DomainPoint &a, const DomainPoint &b, const RbfParams &params);

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Zero-mean GP fitted to negated dB RSRP (lower is better).
class GpModel {
 public:
  GpModel(std::vector<DomainPoint> inputs, Eigen::VectorXd targets, RbfParams params, double jitter);

  GpPrediction predict(const DomainPoint &x) const;

  const RbfParams &params() const { return params_; }
  double jitter() const { return jitter_; }
  const std::vector<DomainPoint> &inputs() const { return inputs_; }
  const Eigen::VectorXd &targets() const { return targets_; }
  /// Lower Cholesky factor of K + jitter * I.
  const Eigen::MatrixXd &cholesky_factor() const { return factor_; }
  /// Smallest negated target, the incumbent for expected improvement.
  double best_target() const { return targets_.minCoeff(); }

 private:
  std::vector<DomainPoint> inputs_;
  Eigen::VectorXd targets_;
  RbfParams params_;
  double jitter_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd alpha_;  // (K + jitter I)^{-1} targets
};

struct GpSettings {
  double length_scale = 2.0;
  /// Jitter as a multiple of the signal variance.
  double relative_jitter = 1e-6;
};

/// Kernel matrix K(a_i, a_j).
Eigen::MatrixXd kernel_matrix(std::span<const DomainPoint> points, const RbfParams &params);

/// Fit with explicit hyperparameters and absolute jitter. Throws ConditioningError
/// if K + jitter * I is not numerically positive definite.
GpModel gp_fit(const ObservationHistory &history, const RbfParams &params, double jitter);

/// Fit with defaults: theta_1 = sample variance of the targets (1 if degenerate),
/// jitter = relative_jitter * theta_1.
GpModel gp_fit(const ObservationHistory &history, const GpSettings &settings = {});

GpPrediction gp_posterior(const GpModel &model, const DomainPoint &x);

// --- Tree-structured Parzen estimator -------------------------------------

struct TpeSettings {
  double gamma = 0.25;
  double bandwidth_row = 1.0;
  double bandwidth_col = 1.0;
};

/// Parzen densities l (good side) and g (rest) tabulated on a finite candidate set.
class TpeModel {
 public:
  TpeModel(std::vector<DomainPoint> candidates, std::vector<DomainPoint> good, std::vector<DomainPoint> bad,
           double threshold, const TpeSettings &settings);

  /// (l(x), g(x)) at any point, normalized so each sums to 1 over the candidates.
  std::pair<double, double> density(const DomainPoint &x) const;
  double good_density_at(std::size_t candidate) const { return good_table_[candidate]; }
  double bad_density_at(std::size_t candidate) const { return bad_table_[candidate]; }

  const std::vector<DomainPoint> &candidates() const { return candidates_; }
  const std::vector<DomainPoint> &good() const { return good_; }
  const std::vector<DomainPoint> &bad() const { return bad_; }
  /// y*: the largest negated value admitted to the good side.
  double threshold() const { return threshold_; }
  double gamma() const { return settings_.gamma; }
  bool good_is_uniform() const { return good_.empty(); }
  bool bad_is_uniform() const { return bad_.empty(); }

 private:
  double mixture(const std::vector<DomainPoint> &centers, const DomainPoint &x) const;

  std::vector<DomainPoint> candidates_;
  std::vector<DomainPoint> good_;
  std::vector<DomainPoint> bad_;
  double threshold_;
  TpeSettings settings_;
  double good_norm_ = 1.0;
  double bad_norm_ = 1.0;
  std::vector<double> good_table_;
  std::vector<double> bad_table_;
};

/// Number of observations on the good side: ceil(gamma * n).
std::size_t tpe_good_count(std::size_t n, double gamma);

/// Split the history on negated dB (stable sort, so earlier entries win ties)
/// and build both densities over `candidates`. Needs at least two observations.
TpeModel tpe_fit(const ObservationHistory &history, std::span<const DomainPoint> candidates,
                 const TpeSettings &settings = {});

std::pair<double, double> tpe_density(const TpeModel &model, const DomainPoint &x);

}  // namespace ristrack

#endif  // RISTRACK_SURROGATE_HPP
