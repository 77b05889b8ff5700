#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rmerton/robust.hpp"
#include "rmerton/verify.hpp"
#include "test_support.hpp"

using namespace rmerton;
using rmerton::testing::point_box;
using rmerton::testing::reference_box;
using rmerton::testing::reference_config;

TEST(PiGrid, EndpointsAndCount) {
    const auto grid = make_pi_grid(-3.0, 3.0, 41);
    ASSERT_EQ(grid.size(), 41u);
    EXPECT_DOUBLE_EQ(grid.front(), -3.0);
    EXPECT_DOUBLE_EQ(grid.back(), 3.0);
}

TEST(MinimaxGap, DegenerateBoxHasZeroGap) {
    SimConfig config = reference_config();
    config.n_paths = 300;
    config.box = point_box(1.0, 0.05, 1.0, 0.04);
    const auto report = minimax_gap(0.0, 0.05, 0.04, 1.0, config.box,
                                    make_pi_grid(-3.0, 3.0, 21), config);
    EXPECT_EQ(report.gap, 0.0);
    EXPECT_EQ(report.sup_inf, report.inf_sup);
}

TEST(MinimaxGap, ExactInequalityOnRandomBoxes) {
    std::mt19937_64 engine(31);
    const auto uniform = [&engine](double lo, double hi) {
        return lo + (hi - lo) * ((static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 4; ++trial) {
        SimConfig config = reference_config();
        config.n_paths = 200;
        config.steps_per_interval = 4;
        config.seed = 1000 + static_cast<std::uint64_t>(trial);
        config.box.eta_mu_min = uniform(0.005, 0.03);
        config.box.eta_mu_max = config.box.eta_mu_min + uniform(0.01, 0.1);
        config.box.eta_sigma_min = uniform(0.005, 0.03);
        config.box.eta_sigma_max = config.box.eta_sigma_min + uniform(0.01, 0.1);
        const auto report = minimax_gap(0.0, uniform(-0.05, 0.15), uniform(0.01, 0.1), 1.0,
                                        config.box, make_pi_grid(-2.0, 2.0, 11), config);
        EXPECT_LE(report.sup_inf, report.inf_sup);  // zero tolerance
        EXPECT_GE(report.gap, 0.0);
    }
}

TEST(MinimaxGap, ReportShapesAndArgPositions) {
    SimConfig config = reference_config();
    config.n_paths = 400;
    const auto grid = make_pi_grid(-1.0, 2.0, 13);
    const auto report = minimax_gap(0.0, 0.05, 0.04, 1.0, config.box, grid, config);
    ASSERT_EQ(report.values.size(), grid.size());
    ASSERT_EQ(report.std_errors.size(), grid.size());
    EXPECT_GE(report.argmax_pi, 0);
    EXPECT_LT(report.argmax_pi, static_cast<int>(grid.size()));
    EXPECT_GE(report.argmin_corner, 0);
    EXPECT_LT(report.argmin_corner, 16);
    EXPECT_GT(report.combined_se, 0.0);
}

TEST(MixtureLinearity, DegenerateWeightVectorIsExact) {
    SimConfig config = reference_config();
    config.n_paths = 300;
    const auto corners = corner_set(config.box);
    const std::vector<ValueEstimate> estimates = {
        value_classical(0.0, 0.05, 0.04, 1.0, corners[0], config),
        value_classical(0.0, 0.05, 0.04, 1.0, corners[5], config),
    };
    const auto residual = mixture_linearity_check(estimates, {1.0, 0.0});
    EXPECT_EQ(residual.abs_residual, 0.0);
}

TEST(MixtureLinearity, EqualWeightsOnIdenticalEstimates) {
    SimConfig config = reference_config();
    config.n_paths = 300;
    const auto gamma = corner_set(config.box)[3];
    const std::vector<ValueEstimate> estimates = {
        value_classical(0.0, 0.05, 0.04, 1.0, gamma, config),
        value_classical(0.0, 0.05, 0.04, 1.0, gamma, config),
    };
    const auto residual = mixture_linearity_check(estimates, {0.5, 0.5});
    EXPECT_EQ(residual.abs_residual, 0.0);
}

TEST(MixtureLinearity, RandomThreeWayWeightsAtRoundingLevel) {
    SimConfig config = reference_config();
    config.n_paths = 2000;
    const auto corners = corner_set(config.box);
    const std::vector<ValueEstimate> estimates = {
        value_classical(0.0, 0.05, 0.04, 1.0, corners[0], config),
        value_classical(0.0, 0.05, 0.04, 1.0, corners[7], config),
        value_classical(0.0, 0.05, 0.04, 1.0, corners[15], config),
    };
    std::mt19937_64 engine(17);
    const auto uniform = [&engine] {
        return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    };
    for (int trial = 0; trial < 50; ++trial) {
        double u0 = uniform(), u1 = uniform(), u2 = uniform();
        const double s = u0 + u1 + u2;
        const auto residual = mixture_linearity_check(estimates, {u0 / s, u1 / s, u2 / s});
        EXPECT_LE(residual.rel_residual, 1e-12);
    }
}

TEST(MixtureLinearity, RejectsBadWeights) {
    SimConfig config = reference_config();
    config.n_paths = 50;
    const auto gamma = corner_set(config.box)[0];
    const std::vector<ValueEstimate> estimates = {
        value_classical(0.0, 0.05, 0.04, 1.0, gamma, config),
        value_classical(0.0, 0.05, 0.04, 1.0, gamma, config),
    };
    EXPECT_THROW(mixture_linearity_check(estimates, {0.7, 0.7}), std::domain_error);
    EXPECT_THROW(mixture_linearity_check(estimates, {1.5, -0.5}), std::domain_error);
    EXPECT_THROW(mixture_linearity_check(estimates, {1.0}), std::domain_error);
}

TEST(BruteForce, DegenerateBoxReturnsTheUniquePoint) {
    SimConfig config = reference_config();
    config.n_paths = 200;
    config.box = point_box(1.0, 0.05, 1.0, 0.04);
    const auto search = brute_force_worst_corner(0.9, 0.05, 0.04, 1.0, config.box, config);
    const auto unique_gamma = box_midpoint(config.box);
    EXPECT_EQ(search.corners[static_cast<std::size_t>(search.argmin)], unique_gamma);
}

TEST(BruteForce, InteriorStateAgreesWithPaperRuleWithinNoise) {
    SimConfig config = reference_config();
    config.n_paths = 4000;
    const double t = 0.9;  // short remaining horizon
    const double mu = 0.05, nu = 0.04;
    const auto search = brute_force_worst_corner(t, mu, nu, 1.0, config.box, config);
    const auto paper = select_corner(mu, nu, config.box, SelectorMode::paper);
    int paper_index = -1;
    for (int j = 0; j < 16; ++j)
        if (search.corners[static_cast<std::size_t>(j)] == paper.corner) paper_index = j;
    ASSERT_GE(paper_index, 0);
    const double best = search.values[static_cast<std::size_t>(search.argmin)];
    const double se_pair =
        std::sqrt(search.std_errors[static_cast<std::size_t>(search.argmin)] *
                      search.std_errors[static_cast<std::size_t>(search.argmin)] +
                  search.std_errors[static_cast<std::size_t>(paper_index)] *
                      search.std_errors[static_cast<std::size_t>(paper_index)]);
    EXPECT_LE(search.values[static_cast<std::size_t>(paper_index)], best + 3.0 * se_pair);
}

TEST(BruteForce, ShrinkingBandFromBelowNeverLowersMinimum) {
    SimConfig config = reference_config();
    config.n_paths = 1000;
    const auto narrow_from_below = [&](double new_min) {
        ParamBox box = config.box;
        box.eta_sigma_min = new_min;
        return brute_force_worst_corner(0.9, 0.05, 0.04, 1.0, box, config);
    };
    const auto wide = narrow_from_below(0.01);
    const auto narrow = narrow_from_below(0.03);
    const double min_wide = wide.values[static_cast<std::size_t>(wide.argmin)];
    const double min_narrow = narrow.values[static_cast<std::size_t>(narrow.argmin)];
    EXPECT_GE(min_narrow, min_wide - 1e-12);
}

TEST(BruteForce, ArgminInvariantUnderWealthScaling) {
    SimConfig config = reference_config();
    config.n_paths = 500;
    const auto a = brute_force_worst_corner(0.9, 0.05, 0.04, 1.0, config.box, config);
    const auto b = brute_force_worst_corner(0.9, 0.05, 0.04, 3.0, config.box, config);
    EXPECT_EQ(a.argmin, b.argmin);
    for (int j = 0; j < 16; ++j)
        EXPECT_NEAR(b.values[static_cast<std::size_t>(j)] -
                        a.values[static_cast<std::size_t>(j)],
                    std::log(3.0), 1e-12);
}

TEST(MomentProbe, DeterministicLimitIsConstantAcrossSampleSizes) {
    SimConfig config = reference_config();
    config.n_paths = 100;
    config.box.sigma_mu = 1e-30;
    config.box.xi = 1e-30;
    const auto probe = moment_bound_probe(2, config.box, config, {50, 100});
    EXPECT_EQ(probe.overflow_excluded, 0);
    EXPECT_LE(probe.nu_rel_change.front(), 1e-9);
    EXPECT_LE(probe.mu_rel_change.front(), 1e-9);
}

TEST(MomentProbe, HigherPowerDominatesWhenVarianceExceedsOne) {
    SimConfig config = reference_config();
    config.mu0 = 1.7;
    config.nu0 = 1.7;
    config.box.eta_mu_min = 1.5;
    config.box.eta_mu_max = 2.0;
    config.box.eta_sigma_min = 1.5;
    config.box.eta_sigma_max = 2.0;
    config.box.xi = 0.05;
    const auto probe2 = moment_bound_probe(2, config.box, config, {400});
    const auto probe4 = moment_bound_probe(4, config.box, config, {400});
    EXPECT_EQ(probe2.overflow_excluded, 0);
    EXPECT_GE(probe4.nu_estimates.front(), probe2.nu_estimates.front());
}

TEST(MomentProbe, EstimatesNondecreasingInHorizon) {
    SimConfig config = reference_config();
    config.n_paths = 100;
    SimConfig longer = config;
    longer.n_rebalance = 32;  // same dt, doubled horizon
    longer.horizon = 2.0;
    const auto short_probe = moment_bound_probe(1, config.box, config, {500});
    const auto long_probe = moment_bound_probe(1, config.box, longer, {500});
    EXPECT_GE(long_probe.nu_estimates.front(), short_probe.nu_estimates.front());
    EXPECT_GE(long_probe.mu_estimates.front(), short_probe.mu_estimates.front());
    EXPECT_GT(short_probe.nu_estimates.front(), 0.0);
}

TEST(MomentProbe, RejectsBadArguments) {
    const auto config = reference_config();
    EXPECT_THROW(moment_bound_probe(0, config.box, config, {100}), std::domain_error);
    EXPECT_THROW(moment_bound_probe(1, config.box, config, {}), std::invalid_argument);
    EXPECT_THROW(moment_bound_probe(1, config.box, config, {100, 100}), std::invalid_argument);
}

TEST(ConvergenceOrder, DeterministicCaseIsFirstOrder) {
    SimConfig config = reference_config();
    const auto report = convergence_order(
        config, {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256}, /*with_noise=*/false);
    EXPECT_NEAR(report.slope, 1.0, 0.2);
    for (std::size_t i = 0; i + 1 < report.rms_errors.size(); ++i)
        EXPECT_GT(report.rms_errors[i], report.rms_errors[i + 1]);
}

TEST(ConvergenceOrder, StochasticSlopeInBand) {
    SimConfig config = reference_config();
    config.n_paths = 300;
    const auto report =
        convergence_order(config, {1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512, 1.0 / 1024});
    EXPECT_GE(report.slope, 0.4);
    EXPECT_LE(report.slope, 1.1);
    for (std::size_t i = 0; i + 1 < report.rms_errors.size(); ++i)
        EXPECT_GT(report.rms_errors[i], report.rms_errors[i + 1]);
}

TEST(ConvergenceOrder, DegenerateRegressionRejected) {
    const auto config = reference_config();
    try {
        convergence_order(config, {0.125, 0.125, 0.125, 0.125}, /*with_noise=*/false);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("degenerate regression"), std::string::npos);
    }
    EXPECT_THROW(convergence_order(config, {0.1, 0.05, 0.025}), std::invalid_argument);
}
