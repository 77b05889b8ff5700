#ifndef RMERTON_VERIFY_HPP
#define RMERTON_VERIFY_HPP

#include <array>
#include <vector>

#include "rmerton/valuation.hpp"

namespace rmerton {

// Matrix game between constant fractions (rows) and box corners (columns),
// every cell estimated from the same increment streams. On any finite matrix
// sup_inf <= inf_sup holds exactly; the interesting question is whether the
// gap exceeds Monte Carlo resolution.
struct MinimaxReport {
    std::vector<double> pi_grid;
    std::array<ParamQuadruple, 16> corners{};
    std::vector<std::array<double, 16>> values;  // [pi][corner]
    std::vector<std::array<double, 16>> std_errors;
    double sup_inf = 0.0;
    double inf_sup = 0.0;
    double gap = 0.0;           // inf_sup - sup_inf, >= 0 by construction
    double combined_se = 0.0;   // from the two achieving cells
    int argmax_pi = 0;          // maximin row
    int argmin_corner = 0;      // minimax column
    long n_paths = 0;
    long excluded_paths = 0;
};

MinimaxReport minimax_gap(double t, double mu, double nu, double x, const ParamBox& box,
                          const std::vector<double>& pi_grid, const SimConfig& config);

std::vector<double> make_pi_grid(double lo, double hi, int points);

struct MixtureResidual {
    double abs_residual = 0.0;
    double rel_residual = 0.0;
};

// Estimator-level mixture identity: averaging per-path values then mixing
// must equal mixing per path then averaging. The two routes differ only by
// floating-point association, so the relative residual is required to sit
// at rounding level (<= 1e-12).
MixtureResidual mixture_linearity_check(const std::vector<ValueEstimate>& values,
                                        const std::vector<double>& weights);

// Exhaustive corner search: the classical value under every corner held
// constant on [t, T], all from shared increments.
struct CornerSearch {
    std::array<ParamQuadruple, 16> corners{};
    std::array<double, 16> values{};
    std::array<double, 16> std_errors{};
    int argmin = 0;
    bool tie_within_se = false;  // runner-up within one combined SE
    long excluded_paths = 0;
};

CornerSearch brute_force_worst_corner(double t, double mu, double nu, double x,
                                      const ParamBox& box, const SimConfig& config);

// MC estimates of E[int_0^T max_corner nu_t^n dt] and
// E[int_0^T max_corner |mu_t|^n dt], the max running over the 16 corner
// processes driven by shared increments, reported for a growing sequence of
// sample sizes (nested prefixes of one path set).
struct MomentProbe {
    int exponent = 1;
    std::vector<long> sample_sizes;
    std::vector<double> nu_estimates;
    std::vector<double> mu_estimates;
    std::vector<double> nu_rel_change;  // |e_{i+1}/e_i - 1|
    std::vector<double> mu_rel_change;
    long overflow_excluded = 0;
};

MomentProbe moment_bound_probe(int exponent, const ParamBox& box, const SimConfig& config,
                               const std::vector<long>& sample_sizes);

// Log-log regression of the RMS log-wealth discrepancy between the Euler
// wealth recursion and the closed-form map under full investment (pi = 1),
// over a list of step sizes. with_noise = false zeroes the increments and
// the variance path, leaving the first-order drift ODE comparison.
// Throws std::invalid_argument("degenerate regression") when the regressor
// has no spread.
struct ConvergenceReport {
    std::vector<double> dt_values;
    std::vector<double> rms_errors;
    std::vector<long> excluded;  // Euler paths that crossed zero, per level
    double slope = 0.0;
    double intercept = 0.0;
};

ConvergenceReport convergence_order(const SimConfig& config, const std::vector<double>& dt_list,
                                    bool with_noise = true);

}  // namespace rmerton

#endif  // RMERTON_VERIFY_HPP
