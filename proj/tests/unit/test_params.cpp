#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "rmerton/params.hpp"
#include "test_support.hpp"

using namespace rmerton;
using rmerton::testing::point_box;
using rmerton::testing::reference_box;

TEST(CornerSet, AlwaysSixteenAndInsideBox) {
    const auto box = reference_box();
    const auto corners = corner_set(box);
    ASSERT_EQ(corners.size(), 16u);
    for (const auto& c : corners) EXPECT_TRUE(quadruple_in_box(box, c));
}

TEST(CornerSet, DegenerateBoxCollapses) {
    const auto box = point_box(1.0, 0.05, 1.5, 0.04);
    const auto corners = corner_set(box);
    for (const auto& c : corners) EXPECT_EQ(c, corners[0]);
}

TEST(CornerSet, OneFreeDimensionGivesTwoDistinct) {
    auto box = point_box(1.0, 0.05, 1.5, 0.04);
    box.theta_mu_min = 1.0;
    box.theta_mu_max = 2.0;
    const auto corners = corner_set(box);
    std::set<std::array<double, 4>> distinct;
    for (const auto& c : corners)
        distinct.insert({c.theta_mu, c.eta_mu, c.theta_sigma, c.eta_sigma});
    EXPECT_EQ(distinct.size(), 2u);
}

TEST(CornerSet, IndexZeroIsAllMinima) {
    const auto box = reference_box();
    const auto corners = corner_set(box);
    EXPECT_EQ(corners[0].theta_mu, box.theta_mu_min);
    EXPECT_EQ(corners[0].eta_mu, box.eta_mu_min);
    EXPECT_EQ(corners[0].theta_sigma, box.theta_sigma_min);
    EXPECT_EQ(corners[0].eta_sigma, box.eta_sigma_min);
    EXPECT_EQ(corners[15].theta_mu, box.theta_mu_max);
    EXPECT_EQ(corners[15].eta_sigma, box.eta_sigma_max);
}

TEST(ValidateBox, FlagsZeroThetaMuMin) {
    auto box = reference_box();
    box.theta_mu_min = 0.0;
    const auto violations = validate_box(box);
    ASSERT_FALSE(violations.empty());
    EXPECT_NE(std::find(violations.begin(), violations.end(), "theta_mu_min must be > 0"),
              violations.end());
}

TEST(ValidateBox, FlagsInvertedEtaSigmaInterval) {
    auto box = reference_box();
    box.eta_sigma_min = 0.5;
    box.eta_sigma_max = 0.1;
    const auto violations = validate_box(box);
    EXPECT_NE(std::find(violations.begin(), violations.end(),
                        "eta_sigma_min must be <= eta_sigma_max"),
              violations.end());
}

TEST(ValidateBox, AcceptsReferenceBox) {
    EXPECT_TRUE(validate_box(reference_box()).empty());
}

TEST(ValidateBox, AcceptsDegenerateIntervals) {
    EXPECT_TRUE(validate_box(point_box(1.0, 0.05, 1.5, 0.04)).empty());
}

TEST(ValidateBox, EnforcesUniformBound) {
    auto box = reference_box();
    box.theta_mu_max = 11.0;  // above bound_M = 10
    const auto violations = validate_box(box);
    EXPECT_NE(std::find(violations.begin(), violations.end(), "theta_mu_max must be <= bound_m"),
              violations.end());
}

TEST(GammaSchedule, CornerScheduleRespectsUniformBound) {
    const auto box = reference_box();
    for (const auto& corner : corner_set(box)) {
        const auto schedule = constant_schedule(1.0, 8, corner);
        EXPECT_TRUE(validate_schedule(schedule, box).empty());
        for (const auto& g : schedule.corners) {
            EXPECT_LE(std::max({g.theta_mu, g.eta_mu, g.theta_sigma, g.eta_sigma}), box.bound_m);
            EXPECT_GT(std::min({g.theta_mu, g.eta_mu, g.theta_sigma, g.eta_sigma}), 0.0);
        }
    }
}

TEST(GammaSchedule, ValidatorCatchesOutOfBoxCorner) {
    const auto box = reference_box();
    auto schedule = constant_schedule(1.0, 4, box_midpoint(box));
    schedule.corners[2].eta_sigma = 0.5;  // outside [0.01, 0.09]
    const auto violations = validate_schedule(schedule, box);
    ASSERT_FALSE(violations.empty());
    EXPECT_NE(violations.front().find("corner 2"), std::string::npos);
}

TEST(UniformGrid, EndpointsExact) {
    const auto grid = uniform_grid(1.0, 16);
    ASSERT_EQ(grid.size(), 17u);
    EXPECT_EQ(grid.front(), 0.0);
    EXPECT_EQ(grid.back(), 1.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) EXPECT_LT(grid[i], grid[i + 1]);
}
