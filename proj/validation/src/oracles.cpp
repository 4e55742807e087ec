// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include "ristrack/oracles.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "ristrack/acquisition.hpp"
#include "ristrack/channel.hpp"

namespace ristrack::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double relative_error(double value, double reference) {
  const double scale = std::max(std::abs(reference), std::numeric_limits<double>::min());
  return std::abs(value - reference) / scale;
}

std::vector<DomainPoint> random_subset(const std::vector<DomainPoint> &domain, std::size_t n, std::mt19937_64 &rng,
                                       std::vector<std::size_t> &indices) {
  indices.resize(domain.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::shuffle(indices.begin(), indices.end(), rng);
  indices.resize(n);
  std::vector<DomainPoint> out;
  for (std::size_t k : indices) out.push_back(domain[k]);
  return out;
}

}  // namespace

cplx free_space_entry(double d, double wavelength) {
  const double amplitude = wavelength / (4.0 * kPi * d);
  const double angle = -2.0 * kPi * d / wavelength;
  return {amplitude * std::cos(angle), amplitude * std::sin(angle)};
}

double direct_rsrp(const std::vector<cplx> &h_row, const std::vector<std::vector<cplx>> &H, const std::vector<cplx> &z,
                   const std::vector<double> &beta) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < h_row.size(); ++i) {
    cplx incident{0.0, 0.0};
    for (std::size_t k = 0; k < z.size(); ++k) incident += H[i][k] * z[k];
    const cplx term = h_row[i] * cplx(std::cos(beta[i]), std::sin(beta[i])) * incident;
    re += term.real();
    im += term.imag();
  }
  return re * re + im * im;
}

double exhaustive_max_power(const std::vector<cplx> &cascade, int bits) {
  const int levels = 1 << bits;
  const std::size_t n = cascade.size();
  std::vector<int> digits(n, 0);
  double best = 0.0;
  while (true) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double beta = 2.0 * kPi * digits[i] / levels;
      re += cascade[i].real() * std::cos(beta) - cascade[i].imag() * std::sin(beta);
      im += cascade[i].real() * std::sin(beta) + cascade[i].imag() * std::cos(beta);
    }
    best = std::max(best, re * re + im * im);
    std::size_t pos = 0;
    while (pos < n && ++digits[pos] == levels) digits[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

DensePosterior dense_gp_posterior(const std::vector<DomainPoint> &inputs, const std::vector<double> &targets,
                                  const RbfParams &params, double jitter, const DomainPoint &x) {
  const auto n = static_cast<Eigen::Index>(inputs.size());
  auto kernel = [&](const DomainPoint &a, const DomainPoint &b) {
    const double dr = a.row - b.row;
    const double dc = a.col - b.col;
    return params.signal_variance * std::exp(-(dr * dr + dc * dc) / (params.length_scale * params.length_scale));
  };
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd cross(n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(inputs[i], inputs[j]) + (i == j ? jitter : 0.0);
    cross(i) = kernel(x, inputs[i]);
    y(i) = targets[i];
  }
  const Eigen::MatrixXd inverse = k.fullPivLu().inverse();
  DensePosterior out;
  out.mean = cross.dot(inverse * y);
  out.variance = params.signal_variance - cross.dot(inverse * cross);
  return out;
}

double ei_quadrature(double mean, double sigma, double y_star) {
  // Substituting s = y_star - y maps the improvement region onto [0, inf).
  auto integrand = [&](double s) {
    const double u = (y_star - s - mean) / sigma;
    return s * std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * kPi));
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(integrand, 1e-13);
}

double kde_density(const std::vector<DomainPoint> &centers, const std::vector<DomainPoint> &candidates,
                   double bandwidth_row, double bandwidth_col, const DomainPoint &x) {
  if (centers.empty()) return 1.0 / static_cast<double>(candidates.size());
  auto raw = [&](const DomainPoint &p) {
    double sum = 0.0;
    for (const auto &c : centers) {
      const double zr = (p.row - c.row) / bandwidth_row;
      const double zc = (p.col - c.col) / bandwidth_col;
      sum += std::exp(-0.5 * zr * zr) * std::exp(-0.5 * zc * zc);
    }
    return sum;
  };
  double norm = 0.0;
  for (const auto &p : candidates) norm += raw(p);
  return raw(x) / norm;
}

std::vector<std::vector<double>> rsrp_cross_matrix(const Scenario &scenario) {
  const auto centers = scenario.grid().cell_centers();
  const auto &entries = scenario.codebook().entries;
  std::vector<std::vector<double>> out(centers.size(), std::vector<double>(entries.size()));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto cascade = cascade_coefficients(scenario.scene(), scenario.ris(), centers[i]);
    for (std::size_t j = 0; j < entries.size(); ++j) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t e = 0; e < cascade.size(); ++e) {
        const double beta = entries[j].phase(e);
        re += cascade[e].real() * std::cos(beta) - cascade[e].imag() * std::sin(beta);
        im += cascade[e].real() * std::sin(beta) + cascade[e].imag() * std::cos(beta);
      }
      out[i][j] = re * re + im * im;
    }
  }
  return out;
}

std::vector<cplx> cascade_coefficients(const SceneConfig &scene, const RisGeometry &ris, const Vec3 &ue) {
  const ChannelVector h = ris_ue_channel(scene, ris, ue);
  const ChannelMatrix H = bs_ris_channel(scene, ris);
  const TransmitSignal z = TransmitSignal::uniform(scene.num_bs_antennas);
  std::vector<cplx> out(static_cast<std::size_t>(h.gains.size()));
  for (Eigen::Index i = 0; i < h.gains.size(); ++i) {
    cplx incident{0.0, 0.0};
    for (Eigen::Index k = 0; k < H.gains.cols(); ++k) incident += H.gains(i, k) * z.samples(k);
    out[static_cast<std::size_t>(i)] = h.gains(i) * incident;
  }
  return out;
}

CheckResult check_codebook_optimality(std::uint64_t seed, int geometries_per_n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int cases = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int g = 0; g < geometries_per_n; ++g) {
      SceneConfig scene;
      scene.num_bs_antennas = 1 + static_cast<int>(unit(rng) * 2.0);
      scene.bs_position = {unit(rng) - 0.5, unit(rng) - 0.5, 0.3 + 1.5 * unit(rng)};
      const bool row_layout = unit(rng) < 0.5;
      RisGeometry ris{row_layout ? 1 : n, row_layout ? n : 1, scene.wavelength() * (0.2 + 0.8 * unit(rng)), 2, {}};
      const Vec3 ue{4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0, 0.5 + 3.0 * unit(rng)};

      const auto cascade = cascade_coefficients(scene, ris, ue);
      std::vector<double> phases;
      std::vector<double> weights;
      for (const cplx &c : cascade) {
        double phase = -std::arg(c);
        if (phase < 0.0) phase += 2.0 * kPi;
        phases.push_back(phase);
        weights.push_back(std::abs(c));
      }
      const Codeword word = quantize_codeword(phases, 2, QuantizeOptions{}, weights);
      const ChannelVector h = ris_ue_channel(scene, ris, ue);
      const double achieved = rsrp(h, word, bs_ris_channel(scene, ris), TransmitSignal::uniform(scene.num_bs_antennas));
      const double optimum = exhaustive_max_power(cascade, 2);
      worst = std::max(worst, relative_error(achieved, optimum));
      ++cases;
    }
  }
  return {"codebook optimality vs 4^N search", worst <= 1e-12,
          fmt::format("{} geometries, N = 2..6, max relative gap {:.3e} (tol 1e-12)", cases, worst)};
}

CheckResult check_gp_posterior(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto domain = grid_domain(10, 10);
  double worst_mean = 0.0;
  double worst_var = 0.0;
  double worst_interp_var_ratio = 0.0;
  bool interpolates = true;
  for (int t = 0; t < instances; ++t) {
    const auto n = static_cast<std::size_t>(1 + std::floor(unit(rng) * 60.0));
    std::vector<std::size_t> indices;
    const auto inputs = random_subset(domain, n, rng, indices);
    ObservationHistory history;
    std::vector<double> targets;
    const double level = -60.0 - 40.0 * unit(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double db = level + 8.0 * normal(rng);
      history.add(indices[i], inputs[i], db);
      targets.push_back(-db);
    }
    const RbfParams params{0.5 + 60.0 * unit(rng), 0.7 + 2.3 * unit(rng)};
    const double jitter = 1e-6 * params.signal_variance;
    const GpModel model = gp_fit(history, params, jitter);
    for (const auto &x : domain) {
      const GpPrediction p = gp_posterior(model, x);
      const DensePosterior d = dense_gp_posterior(inputs, targets, params, jitter, x);
      worst_mean = std::max(worst_mean, std::abs(p.mean - d.mean));
      worst_var = std::max(worst_var, std::abs(p.variance - std::max(0.0, d.variance)));
    }
    // At a training point mean = y - jitter * alpha, so the gap is bounded by jitter * |alpha|.
    const Eigen::VectorXd alpha = model.cholesky_factor().transpose().triangularView<Eigen::Upper>().solve(
        model.cholesky_factor().triangularView<Eigen::Lower>().solve(model.targets()));
    for (std::size_t i = 0; i < n; ++i) {
      const GpPrediction p = gp_posterior(model, inputs[i]);
      const double bound = jitter * std::abs(alpha(static_cast<Eigen::Index>(i))) * 1.01 + 1e-9;
      if (std::abs(p.mean - targets[i]) > bound || p.variance > 10.0 * jitter) interpolates = false;
      worst_interp_var_ratio = std::max(worst_interp_var_ratio, p.variance / jitter);
    }
  }
  const bool ok = worst_mean < 1e-8 && worst_var < 1e-8 && interpolates;
  return {"GP posterior vs dense solve", ok,
          fmt::format("{} instances, max |dmean| {:.3e}, max |dvar| {:.3e} (tol 1e-8); training-point variance <= "
                      "{:.3f} x jitter, interpolation {}",
                      instances, worst_mean, worst_var, worst_interp_var_ratio, interpolates ? "ok" : "FAILED")};
}

CheckResult check_expected_improvement(std::uint64_t seed, int triples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  bool non_negative = true;
  bool monotone = true;
  for (int t = 0; t < triples; ++t) {
    const double mean = 6.0 * unit(rng) - 3.0;
    const double y_star = 6.0 * unit(rng) - 3.0;
    const double sigma = 0.05 + 2.95 * unit(rng);
    const double closed = expected_improvement(mean, sigma * sigma, y_star);
    const double quad = ei_quadrature(mean, sigma, y_star);
    worst = std::max(worst, relative_error(closed, quad));
    if (closed < 0.0) non_negative = false;
    double previous = expected_improvement(mean, 0.0, y_star);
    for (double s = 0.05; s <= 3.0; s += 0.05) {
      const double ei = expected_improvement(mean, s * s, y_star);
      if (ei < 0.0) non_negative = false;
      if (ei < previous * (1.0 - 1e-12)) monotone = false;
      previous = ei;
    }
  }
  return {"EI closed form vs quadrature", worst < 1e-6 && non_negative && monotone,
          fmt::format("{} triples, max relative error {:.3e} (tol 1e-6), EI >= 0: {}, monotone in sigma: {}", triples,
                      worst, non_negative ? "yes" : "NO", monotone ? "yes" : "NO")};
}

CheckResult check_tpe_selection(std::uint64_t seed, int histories) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto domain = grid_domain(10, 10);
  int mismatches = 0;
  int split_errors = 0;
  double worst_density = 0.0;
  for (int t = 0; t < histories; ++t) {
    const auto n = static_cast<std::size_t>(2 + std::floor(unit(rng) * 59.0));
    std::vector<std::size_t> indices;
    const auto inputs = random_subset(domain, n, rng, indices);
    ObservationHistory history;
    std::vector<double> values;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse rounding produces ties in some histories.
      const double db = std::round((-80.0 + 10.0 * normal(rng)) * (t % 3 == 0 ? 0.5 : 100.0)) /
                        (t % 3 == 0 ? 0.5 : 100.0);
      history.add(indices[i], inputs[i], db);
      values.push_back(db);
    }
    TpeSettings settings;
    settings.gamma = 0.1 + 0.5 * unit(rng);
    settings.bandwidth_row = 0.5 + 1.5 * unit(rng);
    settings.bandwidth_col = 0.5 + 1.5 * unit(rng);
    const TpeModel model = tpe_fit(history, domain, settings);

    // Good side: the ceil(gamma n) largest RSRP values, earliest first among ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const auto n_good = static_cast<std::size_t>(std::ceil(settings.gamma * static_cast<double>(n) - 1e-9));
    std::vector<DomainPoint> good;
    std::vector<DomainPoint> bad;
    for (std::size_t r = 0; r < n; ++r) (r < n_good ? good : bad).push_back(inputs[order[r]]);
    if (good != model.good() || bad != model.bad()) ++split_errors;

    std::optional<std::size_t> expected;
    double best_ratio = -1.0;
    for (std::size_t k = 0; k < domain.size(); ++k) {
      const double l_ref = kde_density(good, domain, settings.bandwidth_row, settings.bandwidth_col, domain[k]);
      const double g_ref = kde_density(bad, domain, settings.bandwidth_row, settings.bandwidth_col, domain[k]);
      const auto [l, g] = tpe_density(model, domain[k]);
      worst_density = std::max({worst_density, relative_error(l, l_ref), relative_error(g, g_ref)});
      if (history.contains(k)) continue;
      const double ratio = g > 0.0 ? l / g : std::numeric_limits<double>::infinity();
      if (!expected || ratio > best_ratio) {
        expected = k;
        best_ratio = ratio;
      }
    }
    const auto chosen = select_next(domain, model, history);
    if (!chosen || chosen->candidate != *expected) ++mismatches;
  }
  const bool ok = mismatches == 0 && split_errors == 0 && worst_density < 1e-9;
  return {"TPE selection = argmax l/g", ok,
          fmt::format("{} histories, {} argmax mismatches, {} split mismatches, max density error vs KDE {:.3e}",
                      histories, mismatches, split_errors, worst_density)};
}

std::vector<CheckResult> run_validation_suite(std::uint64_t seed) {
  return {check_codebook_optimality(seed), check_gp_posterior(seed + 1), check_expected_improvement(seed + 2),
          check_tpe_selection(seed + 3)};
}

}  // namespace ristrack::oracle
