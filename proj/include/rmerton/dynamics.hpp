#ifndef RMERTON_DYNAMICS_HPP
#define RMERTON_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rmerton/sim_config.hpp"

namespace rmerton {

// Joint dynamics simulated by this module:
//   dS  = S (mu dt + sqrt(nu) dW_S)
//   dmu = theta_mu (eta_mu - mu) dt + sigma_mu dW_mu
//   dnu = theta_sigma (eta_sigma - nu) dt + xi nu dW_sigma
// with W_S, W_mu, W_sigma independent. mu steps by its exact Gaussian
// transition; nu steps by the variation-of-constants solution with a
// midpoint quadrature of the forcing integral, which keeps nu > 0 for any
// step size; S and the wealth X step in log space.

struct OuStepCoeffs {
    double decay;  // e^{-theta dt}
    double level;  // eta (1 - decay)
    double noise;  // sigma_mu sqrt((1 - decay^2) / (2 theta))
};

OuStepCoeffs make_ou_coeffs(double theta_mu, double eta_mu, double sigma_mu, double dt);

inline double ou_step_with(const OuStepCoeffs& c, double mu, double z) {
    return c.level + c.decay * mu + c.noise * z;
}

struct VarStepCoeffs {
    double homog;        // e^{-(theta + xi^2/2) dt}
    double forcing;      // theta eta dt sqrt(homog)
    double xi_sqrt_dt;   // xi sqrt(dt)
};

VarStepCoeffs make_var_coeffs(double theta_sigma, double eta_sigma, double xi, double dt);

inline double var_step_with(const VarStepCoeffs& c, double nu, double z) {
    const double shock = std::exp(c.xi_sqrt_dt * z);
    return c.homog * shock * nu + c.forcing * std::sqrt(shock);
}

// Exact one-step transition of the drift process. z is a standard normal.
double ou_exact_step(double mu, const ParamQuadruple& gamma, double sigma_mu, double dt, double z);

// Positivity-preserving one-step transition of the squared volatility.
double variance_step(double nu, const ParamQuadruple& gamma, double xi, double dt, double z);

// One simulated path: states at every grid node plus the three Gaussian
// increment streams that produced them (each increment has variance dt).
struct PathBundle {
    long path_index = 0;
    std::vector<double> S;
    std::vector<double> mu;
    std::vector<double> nu;
    std::vector<double> X;
    std::vector<double> dW_S;
    std::vector<double> dW_mu;
    std::vector<double> dW_sigma;
    bool valid = true;
    std::size_t first_bad_step = 0;  // meaningful when !valid
};

struct PathEnsemble {
    std::vector<double> times;  // uniform grid refining the rebalance grid
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::vector<PathBundle> paths;
    long n_invalid = 0;
};

// Re-selects the active quadruple at a rebalance date from the path state.
using CornerPolicy = std::function<ParamQuadruple(double t, double mu, double nu)>;

// Samples n_paths paths on [0, T] under the given piecewise-constant
// schedule. The wealth column holds the log-optimal strategy's wealth,
// stepped in log space. Bit-reproducible for a fixed seed, independent of
// thread count. Paths that overflow are flagged and counted, never dropped
// silently.
PathEnsemble simulate_paths(const SimConfig& config, const GammaSchedule& schedule,
                            const MarketState& initial);

// Same, but the quadruple on each interval is chosen per path at the
// interval's start from the current (mu, nu). Decisions land in the
// returned schedule slots of `chosen`, one inner vector per path.
PathEnsemble simulate_paths_adaptive(const SimConfig& config, const CornerPolicy& policy,
                                     const MarketState& initial,
                                     std::vector<std::vector<ParamQuadruple>>* chosen = nullptr);

// Terminal log-wealth of the self-financing strategy pi on a simulated path:
//   log X_T = log X_0 + sum_k [pi_k mu_k + r(1-pi_k) - pi_k^2 nu_k / 2] dt
//                     + sum_k pi_k sqrt(nu_k) dW_S_k
// Throws std::runtime_error naming the step if an intermediate is not finite.
double wealth_log_terminal(const PathBundle& path, std::span<const double> pi, double dt,
                           double r);

struct EulerWealth {
    double terminal = 0.0;
    bool positive = true;        // wealth stayed > 0 along the recursion
    std::size_t bad_step = 0;    // first step with X <= 0 when !positive
};

// Direct Euler recursion X_{k+1} = X_k (1 + pi_k mu_k dt + pi_k sqrt(nu_k) dW_S_k
// + r(1-pi_k) dt). Unlike the log-space map this can cross zero; such paths
// come back flagged.
EulerWealth euler_wealth(const PathBundle& path, std::span<const double> pi, double dt, double r);

// Per-path integral functionals of a (mu, nu) simulation under one constant
// quadruple; enough to price any constant-fraction strategy and the
// log-optimal one without storing trajectories.
struct PathFunctionals {
    double mu_int = 0.0;        // left-rule  int mu dt
    double nu_int = 0.0;        // left-rule  int nu dt
    double mart = 0.0;          // int sqrt(nu) dW_S
    double excess_trap = 0.0;   // trapezoid  int r + (mu-r)^2/(2 nu) dt
    double excess_left = 0.0;   // left-rule  int r + (mu-r)^2/(2 nu) dt
    double mart_opt = 0.0;      // int (mu-r)/nu * sqrt(nu) dW_S
    bool valid = true;
};

// Streams the same per-step normals as simulate_paths (z_S, z_mu, z_sigma in
// that order), so runs with equal seeds share increments with full-path
// simulations.
std::vector<PathFunctionals> simulate_path_functionals(double horizon, int n_steps,
                                                       const ParamQuadruple& gamma,
                                                       const ParamBox& box, double mu0, double nu0,
                                                       std::uint64_t seed, long n_paths);

}  // namespace rmerton

#endif  // RMERTON_DYNAMICS_HPP
