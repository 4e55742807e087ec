// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_ACQUISITION_HPP
#define RISTRACK_ACQUISITION_HPP

#include <cstddef>
#include <optional>
#include <span>

#include "ristrack/surrogate.hpp"

namespace ristrack {

struct AcquisitionScore {
  std::size_t candidate = 0;
  double score = 0.0;
};

double standard_normal_pdf(double u);
double standard_normal_cdf(double u);

/// Closed-form expected improvement below `y_star` (minimization).
///
/// With s = sqrt(variance) and u = (y_star - mean) / s:
///   EI = (y_star - mean) * Phi(u) + s * phi(u),   or max(y_star - mean, 0) when s = 0.
/// Variances in [-1e-10, 0) are treated as zero; anything lower throws.
double expected_improvement(double mean, double variance, double y_star);

/// TPE acquisition (gamma + (g / l) (1 - gamma))^-1. l = 0 gives 0.
double tpe_score(double l, double g, double gamma);

/// Next candidate for a GP surrogate: maximum EI against the incumbent
/// (best negated observation). Measured candidates are skipped; ties go to
/// the lowest index. Returns nullopt once every candidate has been measured.
std::optional<AcquisitionScore> select_next(std::span<const DomainPoint> candidates, const GpModel &model,
                                            const ObservationHistory &history);

/// Next candidate for a TPE surrogate: maximum l(x) / g(x), which is also the
/// maximum of tpe_score(). Same exclusion and tie rules as above.
std::optional<AcquisitionScore> select_next(std::span<const DomainPoint> candidates, const TpeModel &model,
                                            const ObservationHistory &history);

}  // namespace ristrack

#endif  // RISTRACK_ACQUISITION_HPP
