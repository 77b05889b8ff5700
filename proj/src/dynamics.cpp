#include "rmerton/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rmerton/rng.hpp"

namespace rmerton {

OuStepCoeffs make_ou_coeffs(double theta_mu, double eta_mu, double sigma_mu, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("ou step: dt must be > 0");
    if (!(theta_mu > 0.0)) throw std::domain_error("ou step: theta_mu must be > 0");
    OuStepCoeffs c;
    c.decay = std::exp(-theta_mu * dt);
    c.level = eta_mu * (1.0 - c.decay);
    c.noise = sigma_mu * std::sqrt((1.0 - c.decay * c.decay) / (2.0 * theta_mu));
    return c;
}

VarStepCoeffs make_var_coeffs(double theta_sigma, double eta_sigma, double xi, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("variance step: dt must be > 0");
    VarStepCoeffs c;
    c.homog = std::exp(-(theta_sigma + 0.5 * xi * xi) * dt);
    c.forcing = theta_sigma * eta_sigma * dt * std::sqrt(c.homog);
    c.xi_sqrt_dt = xi * std::sqrt(dt);
    return c;
}

double ou_exact_step(double mu, const ParamQuadruple& gamma, double sigma_mu, double dt,
                     double z) {
    return ou_step_with(make_ou_coeffs(gamma.theta_mu, gamma.eta_mu, sigma_mu, dt), mu, z);
}

double variance_step(double nu, const ParamQuadruple& gamma, double xi, double dt, double z) {
    if (!(nu > 0.0)) throw std::domain_error("variance step: nu must be > 0");
    return var_step_with(make_var_coeffs(gamma.theta_sigma, gamma.eta_sigma, xi, dt), nu, z);
}

namespace {

bool state_ok(double s, double mu, double nu, double x) {
    return std::isfinite(s) && s > 0.0 && std::isfinite(mu) && std::isfinite(nu) && nu > 0.0 &&
           std::isfinite(x) && x > 0.0;
}

void run_one_path(const SimConfig& config, const GammaSchedule* schedule,
                  const CornerPolicy* policy, const MarketState& initial, PathBundle& path,
                  std::vector<ParamQuadruple>* chosen) {
    const int n_steps = config.n_steps();
    const int spi = config.steps_per_interval;
    const double dt = config.dt();
    const double sqrt_dt = std::sqrt(dt);
    const double r = config.box.r;

    path.S.assign(n_steps + 1, initial.S);
    path.mu.assign(n_steps + 1, initial.mu);
    path.nu.assign(n_steps + 1, initial.nu);
    path.X.assign(n_steps + 1, initial.X);
    path.dW_S.assign(n_steps, 0.0);
    path.dW_mu.assign(n_steps, 0.0);
    path.dW_sigma.assign(n_steps, 0.0);
    path.valid = true;

    auto stream = NormalStream::for_path(config.seed, static_cast<std::uint64_t>(path.path_index));

    OuStepCoeffs ou{};
    VarStepCoeffs var{};
    for (int k = 0; k < n_steps; ++k) {
        if (k % spi == 0) {
            const int interval = k / spi;
            ParamQuadruple gamma;
            if (schedule) {
                gamma = schedule->corners[static_cast<std::size_t>(interval)];
            } else {
                gamma = (*policy)(interval * config.horizon / config.n_rebalance, path.mu[k],
                                  path.nu[k]);
                if (chosen) chosen->push_back(gamma);
            }
            ou = make_ou_coeffs(gamma.theta_mu, gamma.eta_mu, config.box.sigma_mu, dt);
            var = make_var_coeffs(gamma.theta_sigma, gamma.eta_sigma, config.box.xi, dt);
        }

        const double z_s = stream.next();
        const double z_mu = stream.next();
        const double z_sigma = stream.next();
        path.dW_S[k] = sqrt_dt * z_s;
        path.dW_mu[k] = sqrt_dt * z_mu;
        path.dW_sigma[k] = sqrt_dt * z_sigma;

        if (!path.valid) continue;  // keep consuming the stream, state frozen

        const double mu_k = path.mu[k];
        const double nu_k = path.nu[k];
        const double vol_k = std::sqrt(nu_k);
        const double pi_k = (mu_k - r) / nu_k;  // log-optimal fraction

        path.S[k + 1] = path.S[k] * std::exp((mu_k - 0.5 * nu_k) * dt + vol_k * path.dW_S[k]);
        path.X[k + 1] =
            path.X[k] * std::exp((r + pi_k * (mu_k - r) - 0.5 * pi_k * pi_k * nu_k) * dt +
                                 pi_k * vol_k * path.dW_S[k]);
        path.mu[k + 1] = ou_step_with(ou, mu_k, z_mu);
        path.nu[k + 1] = var_step_with(var, nu_k, z_sigma);

        if (!state_ok(path.S[k + 1], path.mu[k + 1], path.nu[k + 1], path.X[k + 1])) {
            path.valid = false;
            path.first_bad_step = static_cast<std::size_t>(k) + 1;
            path.S[k + 1] = path.S[k];
            path.mu[k + 1] = path.mu[k];
            path.nu[k + 1] = path.nu[k];
            path.X[k + 1] = path.X[k];
        }
    }
}

PathEnsemble run_ensemble(const SimConfig& config, const GammaSchedule* schedule,
                          const CornerPolicy* policy, const MarketState& initial,
                          std::vector<std::vector<ParamQuadruple>>* chosen) {
    if (const auto bad = validate_config(config); !bad.empty())
        throw std::invalid_argument("simulate_paths: invalid config: " + bad.front());
    if (!(initial.S > 0.0 && initial.nu > 0.0 && initial.X > 0.0))
        throw std::domain_error("simulate_paths: initial state must have S, nu, X > 0");
    if (schedule) {
        if (static_cast<int>(schedule->corners.size()) != config.n_rebalance)
            throw std::invalid_argument("simulate_paths: schedule does not match rebalance grid");
        const auto grid = uniform_grid(config.horizon, config.n_rebalance);
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(schedule->rebalance_times[i] - grid[i]) >
                1e-12 * std::max(1.0, config.horizon))
                throw std::invalid_argument(
                    "simulate_paths: schedule times must equal the uniform rebalance grid");
    }

    PathEnsemble ensemble;
    ensemble.seed = config.seed;
    ensemble.dt = config.dt();
    ensemble.times.resize(static_cast<std::size_t>(config.n_steps()) + 1);
    for (int k = 0; k <= config.n_steps(); ++k)
        ensemble.times[static_cast<std::size_t>(k)] = config.horizon * k / config.n_steps();
    ensemble.paths.resize(static_cast<std::size_t>(config.n_paths));
    if (chosen) chosen->assign(static_cast<std::size_t>(config.n_paths), {});

#pragma omp parallel for schedule(static)
    for (long p = 0; p < config.n_paths; ++p) {
        auto& path = ensemble.paths[static_cast<std::size_t>(p)];
        path.path_index = p;
        run_one_path(config, schedule, policy, initial, path,
                     chosen ? &(*chosen)[static_cast<std::size_t>(p)] : nullptr);
    }

    for (const auto& path : ensemble.paths)
        if (!path.valid) ++ensemble.n_invalid;
    return ensemble;
}

}  // namespace

PathEnsemble simulate_paths(const SimConfig& config, const GammaSchedule& schedule,
                            const MarketState& initial) {
    return run_ensemble(config, &schedule, nullptr, initial, nullptr);
}

PathEnsemble simulate_paths_adaptive(const SimConfig& config, const CornerPolicy& policy,
                                     const MarketState& initial,
                                     std::vector<std::vector<ParamQuadruple>>* chosen) {
    return run_ensemble(config, nullptr, &policy, initial, chosen);
}

double wealth_log_terminal(const PathBundle& path, std::span<const double> pi, double dt,
                           double r) {
    const std::size_t n_steps = path.dW_S.size();
    if (pi.size() != n_steps)
        throw std::invalid_argument("wealth_log_terminal: pi must cover every step");
    double acc = std::log(path.X[0]);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double p = pi[k];
        const double term = (p * path.mu[k] + r * (1.0 - p) - 0.5 * p * p * path.nu[k]) * dt +
                            p * std::sqrt(path.nu[k]) * path.dW_S[k];
        acc += term;
        if (!std::isfinite(acc))
            throw std::runtime_error("wealth_log_terminal: non-finite value at step " +
                                     std::to_string(k));
    }
    return acc;
}

EulerWealth euler_wealth(const PathBundle& path, std::span<const double> pi, double dt, double r) {
    const std::size_t n_steps = path.dW_S.size();
    if (pi.size() != n_steps)
        throw std::invalid_argument("euler_wealth: pi must cover every step");
    EulerWealth out;
    double x = path.X[0];
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double p = pi[k];
        x *= 1.0 + p * path.mu[k] * dt + p * std::sqrt(path.nu[k]) * path.dW_S[k] +
             r * (1.0 - p) * dt;
        if (!std::isfinite(x))
            throw std::runtime_error("euler_wealth: non-finite value at step " +
                                     std::to_string(k));
        if (x <= 0.0 && out.positive) {
            out.positive = false;
            out.bad_step = k;
        }
    }
    out.terminal = x;
    return out;
}

std::vector<PathFunctionals> simulate_path_functionals(double horizon, int n_steps,
                                                       const ParamQuadruple& gamma,
                                                       const ParamBox& box, double mu0, double nu0,
                                                       std::uint64_t seed, long n_paths) {
    if (!(horizon > 0.0) || n_steps < 1 || n_paths < 1)
        throw std::invalid_argument("simulate_path_functionals: bad horizon/steps/paths");
    if (!(nu0 > 0.0)) throw std::domain_error("simulate_path_functionals: nu0 must be > 0");
    const double dt = horizon / n_steps;
    const double sqrt_dt = std::sqrt(dt);
    const double r = box.r;
    const auto ou = make_ou_coeffs(gamma.theta_mu, gamma.eta_mu, box.sigma_mu, dt);
    const auto var = make_var_coeffs(gamma.theta_sigma, gamma.eta_sigma, box.xi, dt);

    std::vector<PathFunctionals> out(static_cast<std::size_t>(n_paths));

#pragma omp parallel for schedule(static)
    for (long p = 0; p < n_paths; ++p) {
        auto stream = NormalStream::for_path(seed, static_cast<std::uint64_t>(p));
        PathFunctionals f;
        double mu = mu0;
        double nu = nu0;
        double excess_prev = r + 0.5 * (mu - r) * (mu - r) / nu;
        for (int k = 0; k < n_steps; ++k) {
            const double z_s = stream.next();
            const double z_mu = stream.next();
            const double z_sigma = stream.next();
            const double dw_s = sqrt_dt * z_s;
            const double vol = std::sqrt(nu);

            f.mu_int += mu * dt;
            f.nu_int += nu * dt;
            f.mart += vol * dw_s;
            f.excess_left += excess_prev * dt;
            f.mart_opt += (mu - r) / nu * vol * dw_s;

            mu = ou_step_with(ou, mu, z_mu);
            nu = var_step_with(var, nu, z_sigma);
            const double excess = r + 0.5 * (mu - r) * (mu - r) / nu;
            f.excess_trap += 0.5 * (excess_prev + excess) * dt;
            excess_prev = excess;
        }
        f.valid = std::isfinite(f.mu_int) && std::isfinite(f.nu_int) && std::isfinite(f.mart) &&
                  std::isfinite(f.excess_trap) && std::isfinite(f.excess_left) &&
                  std::isfinite(f.mart_opt) && nu > 0.0;
        out[static_cast<std::size_t>(p)] = f;
    }
    return out;
}

}  // namespace rmerton
