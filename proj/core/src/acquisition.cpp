// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/acquisition.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ristrack {

double standard_normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

double standard_normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double expected_improvement(double mean, double variance, double y_star) {
  if (variance < -1e-10) throw std::invalid_argument(fmt::format("expected_improvement: negative variance {}", variance));
  const double gap = y_star - mean;
  if (variance <= 0.0) return std::max(gap, 0.0);
  const double sigma = std::sqrt(variance);
  const double u = gap / sigma;
  return std::max(0.0, gap * standard_normal_cdf(u) + sigma * standard_normal_pdf(u));
}

double tpe_score(double l, double g, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument(fmt::format("tpe_score: gamma {} outside (0, 1)", gamma));
  if (l < 0.0 || g < 0.0) throw std::invalid_argument("tpe_score: densities must be non-negative");
  if (l == 0.0) return 0.0;
  return 1.0 / (gamma + (g / l) * (1.0 - gamma));
}

std::optional<AcquisitionScore> select_next(std::span<const DomainPoint> candidates, const GpModel &model,
                                            const ObservationHistory &history) {
  const double y_star = model.best_target();
  std::optional<AcquisitionScore> best;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (history.contains(k)) continue;
    const GpPrediction p = model.predict(candidates[k]);
    const double ei = expected_improvement(p.mean, p.variance, y_star);
    if (!best || ei > best->score) best = AcquisitionScore{k, ei};
  }
  return best;
}

std::optional<AcquisitionScore> select_next(std::span<const DomainPoint> candidates, const TpeModel &model,
                                            const ObservationHistory &history) {
  std::optional<std::size_t> best;
  double best_ratio = -1.0;
  double best_l = 0.0;
  double best_g = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (history.contains(k)) continue;
    const auto [l, g] = model.density(candidates[k]);
    const double ratio = g > 0.0 ? l / g : std::numeric_limits<double>::infinity();
    if (!best || ratio > best_ratio) {
      best = k;
      best_ratio = ratio;
      best_l = l;
      best_g = g;
    }
  }
  if (!best) return std::nullopt;
  return AcquisitionScore{*best, tpe_score(best_l, best_g, model.gamma())};
}

}  // namespace ristrack
