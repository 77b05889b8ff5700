#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rmerton/dynamics.hpp"
#include "rmerton/reduce.hpp"
#include "rmerton/strategy.hpp"
#include "rmerton/valuation.hpp"
#include "test_support.hpp"

using namespace rmerton;
using rmerton::testing::point_box;
using rmerton::testing::reference_box;
using rmerton::testing::reference_config;

TEST(RunningIntegrand, PointValuesAndSymmetry) {
    EXPECT_DOUBLE_EQ(running_integrand(0.02, 0.04, 0.02), 0.02);
    EXPECT_DOUBLE_EQ(running_integrand(0.06, 0.04, 0.02), 0.04);
    EXPECT_THROW(running_integrand(0.05, 0.0, 0.02), std::domain_error);

    std::mt19937_64 engine(7);
    const auto uniform = [&engine](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
    };
    for (int i = 0; i < 1000; ++i) {
        const double r = uniform(0.0, 0.1);
        const double d = uniform(0.0, 0.3);
        const double nu = uniform(1e-3, 0.3);
        EXPECT_DOUBLE_EQ(running_integrand(r + d, nu, r), running_integrand(r - d, nu, r));
        EXPECT_GE(running_integrand(r + d, nu, r), r);
    }
}

TEST(ValueClassical, ZeroHorizonIsLogWealth) {
    SimConfig config = reference_config();
    config.n_paths = 100;
    const auto estimate =
        value_classical(config.horizon, 0.05, 0.04, 2.5, box_midpoint(config.box), config);
    EXPECT_DOUBLE_EQ(estimate.mean, std::log(2.5));
    EXPECT_EQ(estimate.std_error, 0.0);
}

TEST(ValueClassical, ZeroVarianceEstimatorAtMuEqualsR) {
    // drift pinned at r with negligible noise: the integrand is r throughout
    SimConfig config = reference_config();
    config.n_paths = 50;
    config.box = point_box(1.0, config.box.r, 1.0, 0.04);
    config.box.sigma_mu = 1e-30;
    config.box.xi = 1e-30;
    const auto estimate = value_classical(0.0, config.box.r, 0.04, 1.0,
                                          box_midpoint(config.box), config);
    EXPECT_NEAR(estimate.mean, std::log(1.0) + config.box.r * config.horizon, 1e-9);
    EXPECT_LT(estimate.std_error, 1e-9);
}

TEST(ValueClassical, RejectsBadPoints) {
    const auto config = reference_config();
    const auto gamma = box_midpoint(config.box);
    EXPECT_THROW(value_classical(0.0, 0.05, 0.0, 1.0, gamma, config), std::domain_error);
    EXPECT_THROW(value_classical(0.0, 0.05, 0.04, 0.0, gamma, config), std::domain_error);
    EXPECT_THROW(value_classical(2.0, 0.05, 0.04, 1.0, gamma, config), std::domain_error);
}

TEST(ValueClassical, SeedDeterminism) {
    SimConfig config = reference_config();
    config.n_paths = 500;
    const auto gamma = corner_set(config.box)[0];
    const auto a = value_classical(0.0, 0.05, 0.04, 1.0, gamma, config);
    const auto b = value_classical(0.0, 0.05, 0.04, 1.0, gamma, config);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.fingerprint, b.fingerprint);
}

// Independent oracle: Euler stepping for (mu, nu) on a four-times-finer grid
// with its own generator, 10^6 paths.
TEST(ValueClassical, MatchesIndependentEulerOracle) {
    SimConfig config = reference_config();  // dt = 2^-8, 10^4 paths
    const auto gamma = corner_set(config.box)[0];
    const double mu0 = 0.05, nu0 = 0.04, x0 = 1.0;
    const auto estimate = value_classical(0.0, mu0, nu0, x0, gamma, config);

    const long n_paths = 1000000;
    const int n_steps = 1024;  // dt / 4
    const double dt = config.horizon / n_steps;
    const double sqrt_dt = std::sqrt(dt);
    const double r = config.box.r;
    const double sigma_mu = config.box.sigma_mu;
    const double xi = config.box.xi;

    std::vector<double> integrals(n_paths);
    std::vector<char> ok(n_paths, 1);
#pragma omp parallel for schedule(static)
    for (long p = 0; p < n_paths; ++p) {
        std::mt19937_64 engine(900000000ULL + static_cast<std::uint64_t>(p));
        std::normal_distribution<double> normal(0.0, 1.0);
        double mu = mu0, nu = nu0, acc = 0.0;
        double f_prev = r + 0.5 * (mu - r) * (mu - r) / nu;
        bool good = true;
        for (int k = 0; k < n_steps; ++k) {
            const double z1 = normal(engine);
            const double z2 = normal(engine);
            mu += gamma.theta_mu * (gamma.eta_mu - mu) * dt + sigma_mu * sqrt_dt * z1;
            nu += gamma.theta_sigma * (gamma.eta_sigma - nu) * dt + xi * nu * sqrt_dt * z2;
            if (!(nu > 0.0)) {
                good = false;
                break;
            }
            const double f = r + 0.5 * (mu - r) * (mu - r) / nu;
            acc += 0.5 * (f_prev + f) * dt;
            f_prev = f;
        }
        integrals[p] = std::log(x0) + acc;
        ok[p] = good ? 1 : 0;
    }
    std::vector<double> kept;
    kept.reserve(n_paths);
    for (long p = 0; p < n_paths; ++p)
        if (ok[p]) kept.push_back(integrals[p]);
    ASSERT_GT(kept.size(), 990000u);
    const auto oracle = mean_and_se(kept);

    const double tolerance =
        3.0 * std::sqrt(oracle.se * oracle.se + estimate.std_error * estimate.std_error);
    EXPECT_NEAR(estimate.mean, oracle.mean, tolerance)
        << "oracle=" << oracle.mean << " se=" << oracle.se;
}

TEST(ValueRobust, DegenerateBoxEqualsClassical) {
    SimConfig config = reference_config();
    config.n_paths = 400;
    config.box = point_box(1.2, 0.05, 0.8, 0.04);
    const auto robust =
        value_robust(0.0, 0.05, 0.04, 1.0, config.box, SelectorMode::paper, config);
    const auto classical =
        value_classical(0.0, 0.05, 0.04, 1.0, box_midpoint(config.box), config);
    EXPECT_EQ(robust.estimate.mean, classical.mean);
    EXPECT_EQ(robust.estimate.std_error, classical.std_error);
}

TEST(ValueRobust, WealthScalingIsAdditiveLog) {
    SimConfig config = reference_config();
    config.n_paths = 500;
    const auto base =
        value_robust(0.0, 0.05, 0.04, 1.0, config.box, SelectorMode::paper, config);
    const auto doubled =
        value_robust(0.0, 0.05, 0.04, 2.0, config.box, SelectorMode::paper, config);
    EXPECT_NEAR(doubled.estimate.mean - base.estimate.mean, std::log(2.0), 1e-12);
    const auto scaled =
        value_robust(0.0, 0.05, 0.04, 7.5, config.box, SelectorMode::paper, config);
    EXPECT_NEAR(scaled.estimate.mean - base.estimate.mean, std::log(7.5), 1e-12);
}

TEST(ValueEstimate, LowerBoundOnMean) {
    // integrand >= r, so mean >= log x + r (T - t) up to MC noise
    SimConfig config = reference_config();
    config.n_paths = 300;
    std::mt19937_64 engine(11);
    const auto uniform = [&engine](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
    };
    const auto corners = corner_set(config.box);
    for (int trial = 0; trial < 10; ++trial) {
        const double mu = uniform(-0.1, 0.2);
        const double nu = uniform(0.005, 0.2);
        const double x = uniform(0.2, 5.0);
        const auto& gamma = corners[static_cast<std::size_t>(engine() % 16)];
        const auto estimate = value_classical(0.0, mu, nu, x, gamma, config);
        EXPECT_GE(estimate.mean,
                  std::log(x) + config.box.r * config.horizon - 3.0 * estimate.std_error);
    }
}

TEST(ValueConsistency, StrategyMeanMatchesValueEstimate) {
    // small-scale version of the strategy/value identity with common
    // increments: MC mean of log X_T under the log-optimal rule vs the
    // trapezoid value estimate
    SimConfig config = reference_config();
    config.n_paths = 2000;
    const auto gamma = corner_set(config.box)[0];
    const auto schedule = constant_schedule(config.horizon, config.n_rebalance, gamma);
    const auto ensemble =
        simulate_paths(config, schedule, {0.0, config.s0, config.mu0, config.nu0, config.x0});
    ASSERT_EQ(ensemble.n_invalid, 0);

    std::vector<double> log_wealth;
    log_wealth.reserve(ensemble.paths.size());
    for (const auto& path : ensemble.paths) {
        std::vector<double> pi(path.dW_S.size());
        for (std::size_t k = 0; k < pi.size(); ++k)
            pi[k] = merton_fraction(path.mu[k], path.nu[k], config.box.r);
        log_wealth.push_back(wealth_log_terminal(path, pi, ensemble.dt, config.box.r));
    }
    const auto strategy_stats = mean_and_se(log_wealth);
    const auto estimate = value_classical(0.0, config.mu0, config.nu0, config.x0, gamma, config);
    const double tolerance = 3.0 * std::sqrt(strategy_stats.se * strategy_stats.se +
                                             estimate.std_error * estimate.std_error);
    EXPECT_NEAR(strategy_stats.mean, estimate.mean, tolerance);
}
