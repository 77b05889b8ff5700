#ifndef RMERTON_VALUATION_HPP
#define RMERTON_VALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rmerton/robust.hpp"
#include "rmerton/sim_config.hpp"

namespace rmerton {

// Monte Carlo estimate of a value function at one point, with its per-path
// samples retained so estimator-level identities can be checked exactly.
struct ValueEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    long excluded_paths = 0;
    std::string fingerprint;     // hash over config, gamma and evaluation point
    std::uint64_t seed = 0;
    double dt_effective = 0.0;
    std::vector<double> samples; // one value per included path
};

// r + (mu - r)^2 / (2 nu); the running reward rate of the log-optimal
// strategy. Always >= r.
double running_integrand(double mu, double nu, double r);

// Expected log terminal wealth of the log-optimal strategy from (t, mu, nu, x)
// under one fixed quadruple:
//   log x + E[ int_t^T r + (mu_s - r)^2 / (2 nu_s) ds ],
// the time integral taken by trapezoid rule along simulated (mu, nu) paths.
// The horizon is split into round((T - t)/dt) uniform steps. t = T returns
// log x exactly.
ValueEstimate value_classical(double t, double mu, double nu, double x,
                              const ParamQuadruple& gamma, const SimConfig& config);

// As value_classical, but the quadruple and constants come from an explicit
// box rather than config.box (used for nested-box probes).
ValueEstimate value_under_box(double t, double mu, double nu, double x,
                              const ParamQuadruple& gamma, const ParamBox& box,
                              const SimConfig& config);

struct RobustValue {
    ValueEstimate estimate;
    CornerDecision decision;
};

// Selects the worst-case corner at (mu, nu) and evaluates the classical
// value under it; at the corner optimum this is the robust value.
RobustValue value_robust(double t, double mu, double nu, double x, const ParamBox& box,
                         SelectorMode mode, const SimConfig& config);

}  // namespace rmerton

#endif  // RMERTON_VALUATION_HPP
