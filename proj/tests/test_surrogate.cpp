// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ristrack/error.hpp"
#include "ristrack/oracles.hpp"
#include "ristrack/surrogate.hpp"

namespace ristrack {
namespace {

const std::vector<DomainPoint> kDomain = grid_domain(10, 10);

ObservationHistory history_of(const std::vector<std::pair<std::size_t, double>> &obs) {
  ObservationHistory h;
  for (const auto &[index, db] : obs) h.add(index, kDomain[index], db);
  return h;
}

TEST(GridDomain, FlatIndexOrder) {
  ASSERT_EQ(kDomain.size(), 100u);
  EXPECT_EQ(kDomain[0], (DomainPoint{0, 0}));
  EXPECT_EQ(kDomain[13], (DomainPoint{1, 3}));
  EXPECT_EQ(kDomain[99], (DomainPoint{9, 9}));
}

TEST(History, RejectsDuplicatesAndPicksEarliestBest) {
  ObservationHistory h = history_of({{4, -70.0}, {9, -65.0}, {2, -65.0}});
  EXPECT_THROW(h.add(9, kDomain[9], -10.0), std::invalid_argument);
  EXPECT_TRUE(h.contains(2));
  EXPECT_FALSE(h.contains(3));
  EXPECT_EQ(h.best().index, 9u);
  ObservationHistory empty;
  EXPECT_THROW(static_cast<void>(empty.best()), std::logic_error);
}

TEST(RbfKernel, Examples) {
  const RbfParams unit{1.0, 1.0};
  EXPECT_DOUBLE_EQ(rbf_kernel({0, 0}, {0, 0}, unit), 1.0);
  EXPECT_NEAR(rbf_kernel({0, 0}, {0, 1}, unit), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(rbf_kernel({0, 0}, {1, 1}, RbfParams{3.0, 2.0}), 3.0 * std::exp(-0.5), 1e-15);
  EXPECT_THROW(rbf_kernel({0, 0}, {0, 1}, RbfParams{0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(rbf_kernel({0, 0}, {0, 1}, RbfParams{1.0, -1.0}), std::invalid_argument);
}

TEST(GaussianProcess, SinglePoint) {
  const ObservationHistory h = history_of({{0, -60.0}});
  const GpModel m = gp_fit(h, RbfParams{1.0, 2.0}, 0.0);
  // Targets are negated dB.
  EXPECT_DOUBLE_EQ(m.targets()(0), 60.0);
  const auto at = gp_posterior(m, kDomain[0]);
  EXPECT_NEAR(at.mean, 60.0, 1e-12);
  EXPECT_NEAR(at.variance, 0.0, 1e-12);
  const auto near = gp_posterior(m, kDomain[1]);
  const double k = std::exp(-0.25);
  EXPECT_NEAR(near.mean, 60.0 * k, 1e-12);
  EXPECT_NEAR(near.variance, 1.0 - k * k, 1e-12);
}

TEST(GaussianProcess, TwoPointClosedForm) {
  const ObservationHistory h = history_of({{0, -3.0}, {2, 1.5}});
  const RbfParams p{2.0, 1.5};
  const GpModel m = gp_fit(h, p, 0.0);
  const DomainPoint x{0.0, 1.0};
  const double k12 = p.signal_variance * std::exp(-4.0 / 2.25);
  const double k1x = p.signal_variance * std::exp(-1.0 / 2.25);
  const double k2x = k1x;
  const double s = p.signal_variance;
  const double det = s * s - k12 * k12;
  const double y1 = 3.0;
  const double y2 = -1.5;
  const double a1 = (s * y1 - k12 * y2) / det;
  const double a2 = (-k12 * y1 + s * y2) / det;
  const double mean = k1x * a1 + k2x * a2;
  const double quad = (s * (k1x * k1x + k2x * k2x) - 2 * k12 * k1x * k2x) / det;
  const auto post = gp_posterior(m, x);
  EXPECT_NEAR(post.mean, mean, 1e-10);
  EXPECT_NEAR(post.variance, s - quad, 1e-10);
}

TEST(GaussianProcess, SixtyPointsMatchDenseInverse) {
  std::mt19937_64 rng(99);
  std::vector<std::size_t> order(100);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::normal_distribution<double> noise(-70.0, 8.0);
  ObservationHistory h;
  for (int i = 0; i < 60; ++i) h.add(order[i], kDomain[order[i]], noise(rng));
  const GpModel m = gp_fit(h);
  std::vector<DomainPoint> inputs;
  std::vector<double> targets;
  for (const auto &o : h.entries()) {
    inputs.push_back(o.point);
    targets.push_back(-o.rsrp_db);
  }
  for (const auto &x : kDomain) {
    const auto got = gp_posterior(m, x);
    const auto want = oracle::dense_gp_posterior(inputs, targets, m.params(), m.jitter(), x);
    EXPECT_NEAR(got.mean, want.mean, 1e-8);
    EXPECT_NEAR(got.variance, want.variance, 1e-8);
  }
}

TEST(GaussianProcess, DefaultHyperparameters) {
  const ObservationHistory h = history_of({{0, -60.0}, {5, -64.0}, {50, -62.0}});
  const GpModel m = gp_fit(h);
  // Population variance of {60, 64, 62}.
  EXPECT_NEAR(m.params().signal_variance, 8.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.params().length_scale, 2.0);
  EXPECT_NEAR(m.jitter(), 1e-6 * 8.0 / 3.0, 1e-18);
  EXPECT_DOUBLE_EQ(m.best_target(), 60.0);

  const GpModel flat = gp_fit(history_of({{0, -60.0}, {5, -60.0}}));
  EXPECT_DOUBLE_EQ(flat.params().signal_variance, 1.0);
}

TEST(GaussianProcess, FarFromDataRevertsToPrior) {
  const ObservationHistory h = history_of({{0, -60.0}, {1, -62.0}, {10, -61.0}});
  const GpModel m = gp_fit(h, RbfParams{4.0, 1.0}, 1e-9);
  const auto far = gp_posterior(m, {200.0, 200.0});
  EXPECT_NEAR(far.mean, 0.0, 1e-12);
  EXPECT_NEAR(far.variance, 4.0, 1e-12);
}

TEST(GaussianProcess, FactorReproducesKernelMatrix) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> db(-90.0, -50.0);
  ObservationHistory h;
  for (std::size_t i = 0; i < 100; i += 3) h.add(i, kDomain[i], db(rng));
  const GpModel m = gp_fit(h);
  const Eigen::MatrixXd K = kernel_matrix(m.inputs(), m.params());
  EXPECT_LT((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::MatrixXd &L = m.cholesky_factor();
  const Eigen::MatrixXd A = K + m.jitter() * Eigen::MatrixXd::Identity(K.rows(), K.cols());
  EXPECT_LT((L * L.transpose() - A).cwiseAbs().maxCoeff(), 1e-8 * m.params().signal_variance);
}

TEST(GaussianProcess, CoincidentInputsWithoutJitterFail) {
  ObservationHistory h;
  h.add(0, {1.0, 1.0}, -60.0);
  h.add(1, {1.0, 1.0}, -61.0);
  EXPECT_THROW(gp_fit(h, RbfParams{1.0, 2.0}, 0.0), ConditioningError);
  EXPECT_NO_THROW(gp_fit(h, RbfParams{1.0, 2.0}, 1e-6));
  EXPECT_THROW(gp_fit(ObservationHistory{}), std::invalid_argument);
}

TEST(Tpe, GoodCount) {
  EXPECT_EQ(tpe_good_count(2, 0.25), 1u);
  EXPECT_EQ(tpe_good_count(4, 0.25), 1u);
  EXPECT_EQ(tpe_good_count(5, 0.25), 2u);
  EXPECT_EQ(tpe_good_count(5, 0.2), 1u);
  EXPECT_EQ(tpe_good_count(20, 0.25), 5u);
  EXPECT_EQ(tpe_good_count(2, 0.75), 2u);
  EXPECT_THROW(tpe_good_count(3, 1.0), std::invalid_argument);
}

TEST(Tpe, TwoObservationSplit) {
  const ObservationHistory h = history_of({{7, -80.0}, {42, -60.0}});
  const TpeModel m = tpe_fit(h, kDomain);
  ASSERT_EQ(m.good().size(), 1u);
  ASSERT_EQ(m.bad().size(), 1u);
  EXPECT_EQ(m.good()[0], kDomain[42]);
  EXPECT_EQ(m.bad()[0], kDomain[7]);
  EXPECT_DOUBLE_EQ(m.threshold(), 60.0);
  EXPECT_THROW(tpe_fit(history_of({{1, -60.0}}), kDomain), std::invalid_argument);
}

TEST(Tpe, EarlierObservationWinsTies) {
  const TpeModel m = tpe_fit(history_of({{3, -60.0}, {8, -60.0}, {9, -70.0}}), kDomain);
  ASSERT_EQ(m.good().size(), 1u);
  EXPECT_EQ(m.good()[0], kDomain[3]);
}

TEST(Tpe, DensitiesSumToOne) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> db(-90.0, -50.0);
  for (int n : {2, 3, 7, 20, 60}) {
    std::vector<std::size_t> order(100);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    ObservationHistory h;
    for (int i = 0; i < n; ++i) h.add(order[i], kDomain[order[i]], db(rng));
    const TpeModel m = tpe_fit(h, kDomain);
    double sl = 0.0;
    double sg = 0.0;
    for (std::size_t c = 0; c < kDomain.size(); ++c) {
      sl += m.good_density_at(c);
      sg += m.bad_density_at(c);
      const auto [l, g] = tpe_density(m, kDomain[c]);
      EXPECT_DOUBLE_EQ(l, m.good_density_at(c));
      EXPECT_DOUBLE_EQ(g, m.bad_density_at(c));
    }
    EXPECT_NEAR(sl, 1.0, 1e-9);
    EXPECT_NEAR(sg, 1.0, 1e-9);
  }
}

TEST(Tpe, EmptySideIsUniform) {
  const TpeModel m = tpe_fit(history_of({{0, -60.0}, {1, -61.0}}), kDomain, TpeSettings{0.75, 1.0, 1.0});
  EXPECT_TRUE(m.bad_is_uniform());
  EXPECT_FALSE(m.good_is_uniform());
  for (std::size_t c = 0; c < kDomain.size(); ++c) EXPECT_DOUBLE_EQ(m.bad_density_at(c), 0.01);
}

TEST(Tpe, MatchesKernelDensityOracle) {
  const ObservationHistory h = history_of({{11, -55.0}, {12, -58.0}, {77, -80.0}, {45, -66.0}, {90, -71.0}});
  const TpeSettings settings{0.25, 1.3, 0.8};
  const TpeModel m = tpe_fit(h, kDomain, settings);
  ASSERT_EQ(m.good().size(), 2u);
  for (std::size_t c : {0u, 11u, 33u, 56u, 99u}) {
    const double l = oracle::kde_density(m.good(), kDomain, 1.3, 0.8, kDomain[c]);
    const double g = oracle::kde_density(m.bad(), kDomain, 1.3, 0.8, kDomain[c]);
    EXPECT_NEAR(m.good_density_at(c), l, 1e-12);
    EXPECT_NEAR(m.bad_density_at(c), g, 1e-12);
  }
}

TEST(Tpe, InsertionOrderDoesNotMatterWithoutTies) {
  std::vector<std::pair<std::size_t, double>> obs{{5, -61.0}, {17, -75.0}, {23, -58.5}, {64, -90.0}, {88, -70.0},
                                                  {31, -66.0}, {2, -59.0}};
  const TpeModel reference = tpe_fit(history_of(obs), kDomain);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(obs.begin(), obs.end(), rng);
    const TpeModel m = tpe_fit(history_of(obs), kDomain);
    EXPECT_DOUBLE_EQ(m.threshold(), reference.threshold());
    for (std::size_t c = 0; c < kDomain.size(); ++c) {
      EXPECT_NEAR(m.good_density_at(c), reference.good_density_at(c), 1e-15);
      EXPECT_NEAR(m.bad_density_at(c), reference.bad_density_at(c), 1e-15);
    }
  }
}

}  // namespace
}  // namespace ristrack
