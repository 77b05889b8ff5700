#ifndef RMERTON_PARAMS_HPP
#define RMERTON_PARAMS_HPP

#include <array>
#include <string>
#include <vector>

namespace rmerton {

// Ambiguity set for the drift/variance mean-reversion parameters: four closed
// positive intervals, plus the constants that are taken as known (sigma_mu,
// xi, r) and a uniform bound M on every component.
struct ParamBox {
    double theta_mu_min = 0.0;
    double theta_mu_max = 0.0;
    double eta_mu_min = 0.0;
    double eta_mu_max = 0.0;
    double theta_sigma_min = 0.0;
    double theta_sigma_max = 0.0;
    double eta_sigma_min = 0.0;
    double eta_sigma_max = 0.0;
    double sigma_mu = 0.0;  // drift-of-drift volatility
    double xi = 0.0;        // variance-of-variance coefficient
    double r = 0.0;         // riskless rate
    double bound_m = 0.0;   // uniform bound on all interval endpoints
};

// One point gamma = (theta_mu, eta_mu, theta_sigma, eta_sigma).
struct ParamQuadruple {
    double theta_mu = 0.0;
    double eta_mu = 0.0;
    double theta_sigma = 0.0;
    double eta_sigma = 0.0;

    bool operator==(const ParamQuadruple&) const = default;
};

// Piecewise-constant parameter path on the rebalance grid: corners[i] is
// active on [rebalance_times[i], rebalance_times[i+1]).
struct GammaSchedule {
    std::vector<double> rebalance_times;  // t_0 = 0 < ... < t_N = T
    std::vector<ParamQuadruple> corners;  // size N
};

// The 16 extreme points of the box in a fixed order: index bit k selects
// min (0) or max (1) of component k, components ordered
// (theta_mu, eta_mu, theta_sigma, eta_sigma) with theta_mu as bit 0.
// Index 0 is the all-minima corner.
std::array<ParamQuadruple, 16> corner_set(const ParamBox& box);

// Every invariant violation, one human-readable message per offence.
// Empty result means the box is valid.
std::vector<std::string> validate_box(const ParamBox& box);

// Interval midpoints; a convenient interior baseline point.
ParamQuadruple box_midpoint(const ParamBox& box);

bool quadruple_in_box(const ParamBox& box, const ParamQuadruple& q);

// Uniform rebalance grid 0 = t_0 < ... < t_N = T.
std::vector<double> uniform_grid(double horizon, int n_intervals);

// Schedule holding one quadruple on every interval of the uniform grid.
GammaSchedule constant_schedule(double horizon, int n_intervals, const ParamQuadruple& gamma);

std::vector<std::string> validate_schedule(const GammaSchedule& schedule, const ParamBox& box);

}  // namespace rmerton

#endif  // RMERTON_PARAMS_HPP
