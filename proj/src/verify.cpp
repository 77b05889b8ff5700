#include "rmerton/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmerton/dynamics.hpp"
#include "rmerton/reduce.hpp"
#include "rmerton/rng.hpp"
#include "rmerton/strategy.hpp"

namespace rmerton {

std::vector<double> make_pi_grid(double lo, double hi, int points) {
    if (points < 1) throw std::invalid_argument("make_pi_grid: need at least one point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return grid;
}

MinimaxReport minimax_gap(double t, double mu, double nu, double x, const ParamBox& box,
                          const std::vector<double>& pi_grid, const SimConfig& config) {
    if (pi_grid.empty()) throw std::invalid_argument("minimax_gap: empty pi grid");
    if (!(nu > 0.0)) throw std::domain_error("minimax_gap: nu must be > 0");
    if (!(t < config.horizon)) throw std::domain_error("minimax_gap: t must precede the horizon");

    const double horizon = config.horizon - t;
    const int n_steps = std::max(1L, std::lround(horizon / config.dt()));
    const double r = box.r;
    const double log_x = std::log(x);

    MinimaxReport report;
    report.pi_grid = pi_grid;
    report.corners = corner_set(box);
    report.n_paths = config.n_paths;

    // Per corner and path: terminal log wealth of a constant fraction p is
    //   log x + r h + p (mu_int - r h + mart) - p^2 nu_int / 2.
    const std::size_t n_pi = pi_grid.size();
    std::vector<std::vector<double>> drift_term(16), quad_term(16);
    std::vector<bool> path_ok(static_cast<std::size_t>(config.n_paths), true);
    for (int j = 0; j < 16; ++j) {
        const auto fs = simulate_path_functionals(horizon, n_steps,
                                                  report.corners[static_cast<std::size_t>(j)],
                                                  box, mu, nu, config.seed, config.n_paths);
        auto& d = drift_term[static_cast<std::size_t>(j)];
        auto& q = quad_term[static_cast<std::size_t>(j)];
        d.resize(fs.size());
        q.resize(fs.size());
        for (std::size_t p = 0; p < fs.size(); ++p) {
            d[p] = fs[p].mu_int - r * horizon + fs[p].mart;
            q[p] = fs[p].nu_int;
            if (!fs[p].valid) path_ok[p] = false;
        }
    }
    // A path excluded under any corner is excluded from every cell so that
    // all cells keep common random numbers.
    std::vector<std::size_t> kept;
    kept.reserve(path_ok.size());
    for (std::size_t p = 0; p < path_ok.size(); ++p)
        if (path_ok[p]) kept.push_back(p);
    report.excluded_paths = static_cast<long>(path_ok.size() - kept.size());
    report.n_paths = static_cast<long>(kept.size());
    if (kept.empty()) throw std::runtime_error("minimax_gap: no surviving paths");

    report.values.assign(n_pi, {});
    report.std_errors.assign(n_pi, {});
    std::vector<double> cell(kept.size());
    for (std::size_t i = 0; i < n_pi; ++i) {
        const double p = pi_grid[i];
        for (int j = 0; j < 16; ++j) {
            const auto& d = drift_term[static_cast<std::size_t>(j)];
            const auto& q = quad_term[static_cast<std::size_t>(j)];
            for (std::size_t k = 0; k < kept.size(); ++k)
                cell[k] = log_x + r * horizon + p * d[kept[k]] - 0.5 * p * p * q[kept[k]];
            const auto stats = mean_and_se(cell);
            report.values[i][static_cast<std::size_t>(j)] = stats.mean;
            report.std_errors[i][static_cast<std::size_t>(j)] = stats.se;
        }
    }

    // sup over rows of the column-wise min, and inf over columns of the
    // row-wise max; both exact on the finite matrix.
    double sup_inf = -std::numeric_limits<double>::infinity();
    int argmax_pi = 0, argmin_at_argmax = 0;
    for (std::size_t i = 0; i < n_pi; ++i) {
        double row_min = report.values[i][0];
        int row_argmin = 0;
        for (int j = 1; j < 16; ++j)
            if (report.values[i][static_cast<std::size_t>(j)] < row_min) {
                row_min = report.values[i][static_cast<std::size_t>(j)];
                row_argmin = j;
            }
        if (row_min > sup_inf) {
            sup_inf = row_min;
            argmax_pi = static_cast<int>(i);
            argmin_at_argmax = row_argmin;
        }
    }
    double inf_sup = std::numeric_limits<double>::infinity();
    int argmin_corner = 0, argmax_at_argmin = 0;
    for (int j = 0; j < 16; ++j) {
        double col_max = report.values[0][static_cast<std::size_t>(j)];
        int col_argmax = 0;
        for (std::size_t i = 1; i < n_pi; ++i)
            if (report.values[i][static_cast<std::size_t>(j)] > col_max) {
                col_max = report.values[i][static_cast<std::size_t>(j)];
                col_argmax = static_cast<int>(i);
            }
        if (col_max < inf_sup) {
            inf_sup = col_max;
            argmin_corner = j;
            argmax_at_argmin = col_argmax;
        }
    }

    report.sup_inf = sup_inf;
    report.inf_sup = inf_sup;
    report.gap = inf_sup - sup_inf;
    report.argmax_pi = argmax_pi;
    report.argmin_corner = argmin_corner;
    const double se_a = report.std_errors[static_cast<std::size_t>(argmax_pi)]
                                         [static_cast<std::size_t>(argmin_at_argmax)];
    const double se_b = report.std_errors[static_cast<std::size_t>(argmax_at_argmin)]
                                         [static_cast<std::size_t>(argmin_corner)];
    report.combined_se = std::sqrt(se_a * se_a + se_b * se_b);
    return report;
}

MixtureResidual mixture_linearity_check(const std::vector<ValueEstimate>& values,
                                        const std::vector<double>& weights) {
    if (values.empty() || values.size() != weights.size())
        throw std::domain_error("mixture check: need one weight per estimate");
    double weight_sum = 0.0;
    for (const double w : weights) {
        if (!(w >= 0.0)) throw std::domain_error("mixture check: weights must be nonnegative");
        weight_sum += w;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12)
        throw std::domain_error("mixture check: weights must sum to 1");
    const std::size_t n = values.front().samples.size();
    for (const auto& v : values) {
        if (v.samples.size() != n)
            throw std::domain_error("mixture check: estimates must share the sample count");
        if (v.seed != values.front().seed || v.dt_effective != values.front().dt_effective)
            throw std::domain_error("mixture check: estimates must share seed and grid");
    }
    if (n == 0) throw std::domain_error("mixture check: estimates carry no samples");

    // Route one: mix the means. Route two: mix per path, then average.
    double mixed_means = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) mixed_means += weights[j] * mean(values[j].samples);

    std::vector<double> mixed_paths(n, 0.0);
    for (std::size_t j = 0; j < values.size(); ++j)
        for (std::size_t p = 0; p < n; ++p) mixed_paths[p] += weights[j] * values[j].samples[p];
    const double mean_mixed = mean(mixed_paths);

    MixtureResidual out;
    out.abs_residual = std::abs(mixed_means - mean_mixed);
    const double scale = std::max({std::abs(mixed_means), std::abs(mean_mixed), 1e-300});
    out.rel_residual = out.abs_residual / scale;
    return out;
}

CornerSearch brute_force_worst_corner(double t, double mu, double nu, double x,
                                      const ParamBox& box, const SimConfig& config) {
    CornerSearch search;
    search.corners = corner_set(box);
    for (int j = 0; j < 16; ++j) {
        const auto estimate = value_under_box(t, mu, nu, x,
                                              search.corners[static_cast<std::size_t>(j)], box,
                                              config);
        search.values[static_cast<std::size_t>(j)] = estimate.mean;
        search.std_errors[static_cast<std::size_t>(j)] = estimate.std_error;
        search.excluded_paths += estimate.excluded_paths;
    }
    search.argmin = static_cast<int>(
        std::min_element(search.values.begin(), search.values.end()) - search.values.begin());
    const double best = search.values[static_cast<std::size_t>(search.argmin)];
    const double best_se = search.std_errors[static_cast<std::size_t>(search.argmin)];
    for (int j = 0; j < 16; ++j) {
        if (j == search.argmin) continue;
        const double se = search.std_errors[static_cast<std::size_t>(j)];
        const double band = std::sqrt(se * se + best_se * best_se);
        if (search.values[static_cast<std::size_t>(j)] <= best + band) search.tie_within_se = true;
    }
    return search;
}

namespace {

double int_pow(double x, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= x;
    return out;
}

}  // namespace

MomentProbe moment_bound_probe(int exponent, const ParamBox& box, const SimConfig& config,
                               const std::vector<long>& sample_sizes) {
    if (exponent < 1) throw std::domain_error("moment probe: exponent must be >= 1");
    if (sample_sizes.empty()) throw std::invalid_argument("moment probe: no sample sizes");
    for (std::size_t i = 0; i + 1 < sample_sizes.size(); ++i)
        if (!(sample_sizes[i] < sample_sizes[i + 1]))
            throw std::invalid_argument("moment probe: sample sizes must increase");

    const long n_max = sample_sizes.back();
    const int n_steps = config.n_steps();
    const double dt = config.dt();
    const auto corners = corner_set(box);

    std::array<OuStepCoeffs, 16> ou{};
    std::array<VarStepCoeffs, 16> var{};
    for (int j = 0; j < 16; ++j) {
        const auto& c = corners[static_cast<std::size_t>(j)];
        ou[static_cast<std::size_t>(j)] = make_ou_coeffs(c.theta_mu, c.eta_mu, box.sigma_mu, dt);
        var[static_cast<std::size_t>(j)] = make_var_coeffs(c.theta_sigma, c.eta_sigma, box.xi, dt);
    }
    const double xi_sqrt_dt = box.xi * std::sqrt(dt);

    std::vector<double> nu_integral(static_cast<std::size_t>(n_max));
    std::vector<double> mu_integral(static_cast<std::size_t>(n_max));
    std::vector<char> ok(static_cast<std::size_t>(n_max), 1);

#pragma omp parallel for schedule(static)
    for (long p = 0; p < n_max; ++p) {
        auto stream = NormalStream::for_path(config.seed, static_cast<std::uint64_t>(p));
        std::array<double, 16> mus, nus;
        mus.fill(config.mu0);
        nus.fill(config.nu0);
        double acc_nu = 0.0, acc_mu = 0.0;
        for (int k = 0; k < n_steps; ++k) {
            (void)stream.next();  // z_S slot, unused here
            const double z_mu = stream.next();
            const double z_sigma = stream.next();
            double mu_abs_max = 0.0, nu_max = 0.0;
            for (int j = 0; j < 16; ++j) {
                mu_abs_max = std::max(mu_abs_max, std::abs(mus[static_cast<std::size_t>(j)]));
                nu_max = std::max(nu_max, nus[static_cast<std::size_t>(j)]);
            }
            acc_mu += int_pow(mu_abs_max, exponent) * dt;
            acc_nu += int_pow(nu_max, exponent) * dt;
            // one shock shared by all corners, per-corner homogeneous factors
            const double shock = std::exp(xi_sqrt_dt * z_sigma);
            const double sqrt_shock = std::sqrt(shock);
            for (int j = 0; j < 16; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                mus[ju] = ou[ju].level + ou[ju].decay * mus[ju] + ou[ju].noise * z_mu;
                nus[ju] = var[ju].homog * shock * nus[ju] + var[ju].forcing * sqrt_shock;
            }
        }
        const auto pu = static_cast<std::size_t>(p);
        nu_integral[pu] = acc_nu;
        mu_integral[pu] = acc_mu;
        if (!std::isfinite(acc_nu) || !std::isfinite(acc_mu)) ok[pu] = 0;
    }

    MomentProbe probe;
    probe.exponent = exponent;
    probe.sample_sizes = sample_sizes;
    for (const long size : sample_sizes) {
        std::vector<double> nu_kept, mu_kept;
        nu_kept.reserve(static_cast<std::size_t>(size));
        mu_kept.reserve(static_cast<std::size_t>(size));
        for (long p = 0; p < size; ++p) {
            if (!ok[static_cast<std::size_t>(p)]) continue;
            nu_kept.push_back(nu_integral[static_cast<std::size_t>(p)]);
            mu_kept.push_back(mu_integral[static_cast<std::size_t>(p)]);
        }
        if (nu_kept.empty()) throw std::runtime_error("moment probe: every path overflowed");
        probe.nu_estimates.push_back(mean(nu_kept));
        probe.mu_estimates.push_back(mean(mu_kept));
    }
    for (long p = 0; p < n_max; ++p)
        if (!ok[static_cast<std::size_t>(p)]) ++probe.overflow_excluded;
    for (std::size_t i = 0; i + 1 < probe.nu_estimates.size(); ++i) {
        probe.nu_rel_change.push_back(
            std::abs(probe.nu_estimates[i + 1] / probe.nu_estimates[i] - 1.0));
        probe.mu_rel_change.push_back(
            std::abs(probe.mu_estimates[i + 1] / probe.mu_estimates[i] - 1.0));
    }
    return probe;
}

ConvergenceReport convergence_order(const SimConfig& config, const std::vector<double>& dt_list,
                                    bool with_noise) {
    if (dt_list.size() < 4)
        throw std::invalid_argument("convergence_order: need at least four step sizes");
    for (const double dt : dt_list)
        if (!(dt > 0.0) || !(dt <= config.horizon))
            throw std::invalid_argument("convergence_order: step sizes must lie in (0, T]");

    ConvergenceReport report;
    report.dt_values = dt_list;
    const ParamQuadruple gamma = box_midpoint(config.box);

    for (const double dt : dt_list) {
        const int n_steps = static_cast<int>(std::max(1L, std::lround(config.horizon / dt)));
        SimConfig level = config;
        level.n_rebalance = 1;
        level.steps_per_interval = n_steps;
        if (!with_noise) level.n_paths = 1;

        const auto schedule = constant_schedule(level.horizon, 1, gamma);
        const MarketState initial{0.0, level.s0, level.mu0, level.nu0, level.x0};

        PathEnsemble ensemble;
        if (with_noise) {
            ensemble = simulate_paths(level, schedule, initial);
        } else {
            // noise-off comparison: zero increments and zero variance path,
            // so both wealth maps reduce to the drift ODE recursion
            ensemble.dt = level.dt();
            ensemble.times.resize(static_cast<std::size_t>(n_steps) + 1);
            for (int k = 0; k <= n_steps; ++k)
                ensemble.times[static_cast<std::size_t>(k)] = level.horizon * k / n_steps;
            PathBundle path;
            path.S.assign(static_cast<std::size_t>(n_steps) + 1, initial.S);
            path.mu.assign(static_cast<std::size_t>(n_steps) + 1, initial.mu);
            path.nu.assign(static_cast<std::size_t>(n_steps) + 1, 0.0);
            path.X.assign(static_cast<std::size_t>(n_steps) + 1, initial.X);
            path.dW_S.assign(static_cast<std::size_t>(n_steps), 0.0);
            path.dW_mu.assign(static_cast<std::size_t>(n_steps), 0.0);
            path.dW_sigma.assign(static_cast<std::size_t>(n_steps), 0.0);
            for (int k = 0; k < n_steps; ++k)
                path.mu[static_cast<std::size_t>(k) + 1] =
                    ou_exact_step(path.mu[static_cast<std::size_t>(k)], gamma,
                                  level.box.sigma_mu, ensemble.dt, 0.0);
            ensemble.paths.push_back(std::move(path));
        }

        // full-investment fraction: exercises the drift, variance and
        // martingale terms without the heavy tails of the leveraged rule
        std::vector<double> squared_errors;
        long excluded = 0;
        const std::vector<double> pi(static_cast<std::size_t>(n_steps), 1.0);
        for (const auto& path : ensemble.paths) {
            if (!path.valid) {
                ++excluded;
                continue;
            }
            const double closed = wealth_log_terminal(path, pi, ensemble.dt, level.box.r);
            const auto euler = euler_wealth(path, pi, ensemble.dt, level.box.r);
            if (!euler.positive) {
                ++excluded;
                continue;
            }
            const double err = std::log(euler.terminal) - closed;
            squared_errors.push_back(err * err);
        }
        if (squared_errors.empty())
            throw std::runtime_error("convergence_order: no usable paths at a level");
        report.rms_errors.push_back(std::sqrt(mean(squared_errors)));
        report.excluded.push_back(excluded);
    }

    // least squares of log rms on log dt
    const std::size_t n = dt_list.size();
    double x_bar = 0.0, y_bar = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(dt_list[i]);
        ys[i] = std::log(report.rms_errors[i]);
        x_bar += xs[i];
        y_bar += ys[i];
    }
    x_bar /= static_cast<double>(n);
    y_bar /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - x_bar) * (xs[i] - x_bar);
        sxy += (xs[i] - x_bar) * (ys[i] - y_bar);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate regression");
    report.slope = sxy / sxx;
    report.intercept = y_bar - report.slope * x_bar;
    return report;
}

}  // namespace rmerton
