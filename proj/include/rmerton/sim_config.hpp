#ifndef RMERTON_SIM_CONFIG_HPP
#define RMERTON_SIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rmerton/params.hpp"

namespace rmerton {

// Which worst-case corner rule to apply: the rule table as published, or the
// selector derived from the value-gradient signs. The two differ only when
// the drift or variance sits outside its eta band.
enum class SelectorMode { paper, sign_logic };

std::string to_string(SelectorMode mode);

// Snapshot of the market at one instant.
struct MarketState {
    double t = 0.0;
    double S = 0.0;   // price, > 0
    double mu = 0.0;  // drift
    double nu = 0.0;  // squared volatility, > 0
    double X = 0.0;   // wealth, > 0
};

// One experiment's knobs. The simulation step grid refines the rebalance grid
// uniformly: dt = T / (n_rebalance * steps_per_interval).
struct SimConfig {
    double horizon = 1.0;          // T
    int n_rebalance = 16;          // N rebalance intervals
    int steps_per_interval = 16;   // simulation steps per interval
    long n_paths = 10000;
    std::uint64_t seed = 0;
    double s0 = 1.0;
    double mu0 = 0.0;
    double nu0 = 0.0;
    double x0 = 1.0;
    ParamBox box;
    SelectorMode mode = SelectorMode::paper;
    std::string out_dir = ".";
    double pi_l4_threshold = 1e12;
    double pi_grid_min = -3.0;
    double pi_grid_max = 3.0;
    int pi_grid_points = 41;

    int n_steps() const { return n_rebalance * steps_per_interval; }
    double dt() const { return horizon / n_steps(); }
};

std::vector<std::string> validate_config(const SimConfig& config);

}  // namespace rmerton

#endif  // RMERTON_SIM_CONFIG_HPP
