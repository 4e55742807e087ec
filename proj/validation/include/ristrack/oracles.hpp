// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_ORACLES_HPP
#define RISTRACK_ORACLES_HPP

// Reference computations used to check the core library. Each one takes a
// different route from the code it checks: scalar loops instead of Eigen,
// brute-force enumeration instead of the offset sweep, an explicit inverse
// instead of Cholesky, quadrature instead of the closed form.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ristrack/codebook.hpp"
#include "ristrack/surrogate.hpp"
#include "ristrack/tracker.hpp"

namespace ristrack::oracle {

using cplx = std::complex<double>;

/// lambda / (4 pi d) * exp(-j 2 pi d / lambda), written out term by term.
cplx free_space_entry(double d, double wavelength);

/// |sum_i hH_i exp(j beta_i) sum_k H_ik z_k|^2 with plain loops.
double direct_rsrp(const std::vector<cplx> &h_row, const std::vector<std::vector<cplx>> &H,
                   const std::vector<cplx> &z, const std::vector<double> &beta);

/// Best |sum_i c_i exp(j beta_i)|^2 over all 2^(bits N) codewords.
double exhaustive_max_power(const std::vector<cplx> &cascade, int bits);

struct DensePosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// GP posterior from an explicitly inverted (K + jitter I).
DensePosterior dense_gp_posterior(const std::vector<DomainPoint> &inputs, const std::vector<double> &targets,
                                  const RbfParams &params, double jitter, const DomainPoint &x);

/// Expected improvement by adaptive quadrature of
/// integral max(y_star - y, 0) N(y; mean, sigma^2) dy.
double ei_quadrature(double mean, double sigma, double y_star);

/// Normalized Gaussian KDE value at x, normalizer summed over `candidates`.
/// Empty `centers` gives the uniform density.
double kde_density(const std::vector<DomainPoint> &centers, const std::vector<DomainPoint> &candidates,
                   double bandwidth_row, double bandwidth_col, const DomainPoint &x);

/// RSRP of codebook entry j with the UE at cell center i, row i column j.
std::vector<std::vector<double>> rsrp_cross_matrix(const Scenario &scenario);

/// Cascaded per-element coefficient hH_i (H z)_i for a UE position.
std::vector<cplx> cascade_coefficients(const SceneConfig &scene, const RisGeometry &ris, const Vec3 &ue);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// quantize_codeword() vs exhaustive search, N in [2, 6], random geometries.
CheckResult check_codebook_optimality(std::uint64_t seed, int geometries_per_n = 50);
/// GP posterior vs dense solve on random instances; also interpolation.
CheckResult check_gp_posterior(std::uint64_t seed, int instances = 100);
/// Closed-form EI vs quadrature on random triples; non-negativity and sigma monotonicity.
CheckResult check_expected_improvement(std::uint64_t seed, int triples = 1000);
/// TPE select_next vs raw argmax of l/g on random histories.
CheckResult check_tpe_selection(std::uint64_t seed, int histories = 1000);

std::vector<CheckResult> run_validation_suite(std::uint64_t seed);

}  // namespace ristrack::oracle

#endif  // RISTRACK_ORACLES_HPP
