// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/surrogate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ristrack/error.hpp"

namespace ristrack {

std::vector<DomainPoint> grid_domain(int rows, int cols) {
  std::vector<DomainPoint> out;
  out.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.push_back({static_cast<double>(r), static_cast<double>(c)});
  return out;
}

void ObservationHistory::add(std::size_t index, DomainPoint point, double rsrp_db) {
  if (contains(index)) throw std::invalid_argument(fmt::format("candidate {} already measured", index));
  entries_.push_back({index, point, rsrp_db});
}

bool ObservationHistory::contains(std::size_t index) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Observation &o) { return o.index == index; });
}

const Observation &ObservationHistory::best() const {
  if (entries_.empty()) throw std::logic_error("best() on empty history");
  auto it = std::max_element(entries_.begin(), entries_.end(),
                             [](const Observation &a, const Observation &b) { return a.rsrp_db < b.rsrp_db; });
  return *it;
}

double rbf_kernel(const DomainPoint &a, const DomainPoint &b, const RbfParams &params) {
  if (!(params.signal_variance > 0.0) || !(params.length_scale > 0.0))
    throw std::invalid_argument(fmt::format("RBF hyperparameters must be positive (got {}, {})",
                                            params.signal_variance, params.length_scale));
  return params.signal_variance * std::exp(-squared_distance(a, b) / (params.length_scale * params.length_scale));
}

Eigen::MatrixXd kernel_matrix(std::span<const DomainPoint> points, const RbfParams &params) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = rbf_kernel(points[i], points[i], params);
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = rbf_kernel(points[i], points[j], params);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

GpModel::GpModel(std::vector<DomainPoint> inputs, Eigen::VectorXd targets, RbfParams params, double jitter)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), params_(params), jitter_(jitter) {
  if (inputs_.empty()) throw std::invalid_argument("gp_fit: empty history");
  if (static_cast<Eigen::Index>(inputs_.size()) != targets_.size()) throw DimensionError("gp_fit: inputs/targets size mismatch");
  if (jitter_ < 0.0) throw std::invalid_argument("gp_fit: jitter must be non-negative");

  Eigen::MatrixXd k = kernel_matrix(inputs_, params_);
  k.diagonal().array() += jitter_;
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success)
    throw ConditioningError(fmt::format("kernel matrix of {} points is not positive definite (jitter {})",
                                        inputs_.size(), jitter_));
  factor_ = llt.matrixL();
  alpha_ = llt.solve(targets_);
}

GpPrediction GpModel::predict(const DomainPoint &x) const {
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  Eigen::VectorXd cross(n);
  for (Eigen::Index i = 0; i < n; ++i) cross(i) = rbf_kernel(x, inputs_[static_cast<std::size_t>(i)], params_);
  const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(cross);
  GpPrediction out;
  out.mean = cross.dot(alpha_);
  out.variance = params_.signal_variance - v.squaredNorm();
  if (out.variance < 0.0) {
    if (out.variance < -1e-10 * std::max(1.0, params_.signal_variance))
      throw ConditioningError(fmt::format("negative posterior variance {}", out.variance));
    out.variance = 0.0;
  }
  return out;
}

GpModel gp_fit(const ObservationHistory &history, const RbfParams &params, double jitter) {
  std::vector<DomainPoint> inputs;
  Eigen::VectorXd targets(static_cast<Eigen::Index>(history.size()));
  inputs.reserve(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    inputs.push_back(history[i].point);
    targets(static_cast<Eigen::Index>(i)) = -history[i].rsrp_db;
  }
  return GpModel(std::move(inputs), std::move(targets), params, jitter);
}

GpModel gp_fit(const ObservationHistory &history, const GpSettings &settings) {
  if (history.empty()) throw std::invalid_argument("gp_fit: empty history");
  double mean = 0.0;
  for (const auto &o : history.entries()) mean += o.rsrp_db;
  mean /= static_cast<double>(history.size());
  double variance = 0.0;
  for (const auto &o : history.entries()) variance += (o.rsrp_db - mean) * (o.rsrp_db - mean);
  variance /= static_cast<double>(history.size());
  if (!(variance > 1e-12) || !std::isfinite(variance)) variance = 1.0;
  const RbfParams params{variance, settings.length_scale};
  return gp_fit(history, params, settings.relative_jitter * variance);
}

GpPrediction gp_posterior(const GpModel &model, const DomainPoint &x) { return model.predict(x); }

std::size_t tpe_good_count(std::size_t n, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument(fmt::format("gamma must be in (0, 1), got {}", gamma));
  // The small offset keeps products like 0.2 * 5 from rounding up past an integer.
  const auto count = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(count, n == 0 ? 0 : 1, n);
}

TpeModel::TpeModel(std::vector<DomainPoint> candidates, std::vector<DomainPoint> good, std::vector<DomainPoint> bad,
                   double threshold, const TpeSettings &settings)
    : candidates_(std::move(candidates)),
      good_(std::move(good)),
      bad_(std::move(bad)),
      threshold_(threshold),
      settings_(settings) {
  if (candidates_.empty()) throw std::invalid_argument("tpe_fit: empty candidate set");
  if (!(settings_.bandwidth_row > 0.0) || !(settings_.bandwidth_col > 0.0))
    throw std::invalid_argument("tpe_fit: bandwidth must be positive");

  auto tabulate = [&](const std::vector<DomainPoint> &centers, double &norm, std::vector<double> &table) {
    table.resize(candidates_.size());
    if (centers.empty()) {
      norm = 1.0;
      std::fill(table.begin(), table.end(), 1.0 / static_cast<double>(candidates_.size()));
      return;
    }
    for (std::size_t k = 0; k < candidates_.size(); ++k) table[k] = mixture(centers, candidates_[k]);
    norm = std::accumulate(table.begin(), table.end(), 0.0);
    for (double &v : table) v /= norm;
  };
  tabulate(good_, good_norm_, good_table_);
  tabulate(bad_, bad_norm_, bad_table_);
}

double TpeModel::mixture(const std::vector<DomainPoint> &centers, const DomainPoint &x) const {
  const double sr = 2.0 * settings_.bandwidth_row * settings_.bandwidth_row;
  const double sc = 2.0 * settings_.bandwidth_col * settings_.bandwidth_col;
  double sum = 0.0;
  for (const auto &c : centers) {
    const double dr = x.row - c.row;
    const double dc = x.col - c.col;
    sum += std::exp(-(dr * dr / sr + dc * dc / sc));
  }
  return sum;
}

std::pair<double, double> TpeModel::density(const DomainPoint &x) const {
  const double uniform = 1.0 / static_cast<double>(candidates_.size());
  const double l = good_.empty() ? uniform : mixture(good_, x) / good_norm_;
  const double g = bad_.empty() ? uniform : mixture(bad_, x) / bad_norm_;
  return {l, g};
}

TpeModel tpe_fit(const ObservationHistory &history, std::span<const DomainPoint> candidates,
                 const TpeSettings &settings) {
  if (history.size() < 2) throw std::invalid_argument("tpe_fit: need at least two observations");
  const std::size_t n_good = tpe_good_count(history.size(), settings.gamma);

  std::vector<std::size_t> order(history.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Minimizing -RSRP: the highest RSRP comes first.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return -history[a].rsrp_db < -history[b].rsrp_db; });

  std::vector<DomainPoint> good;
  std::vector<DomainPoint> bad;
  for (std::size_t r = 0; r < order.size(); ++r) (r < n_good ? good : bad).push_back(history[order[r]].point);
  const double threshold = -history[order[n_good - 1]].rsrp_db;
  return TpeModel({candidates.begin(), candidates.end()}, std::move(good), std::move(bad), threshold, settings);
}

std::pair<double, double> tpe_density(const TpeModel &model, const DomainPoint &x) { return model.density(x); }

}  // namespace ristrack
