#include "rmerton/valuation.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "rmerton/config_file.hpp"
#include "rmerton/dynamics.hpp"
#include "rmerton/reduce.hpp"

namespace rmerton {

double running_integrand(double mu, double nu, double r) {
    if (!(nu > 0.0)) throw std::domain_error("running_integrand: nu must be > 0");
    const double excess = mu - r;
    return r + 0.5 * excess * excess / nu;
}

namespace {

std::uint64_t mix_double(std::uint64_t h, double v) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string point_fingerprint(const SimConfig& config, const ParamQuadruple& gamma, double t,
                              double mu, double nu, double x) {
    std::uint64_t h = config_fingerprint(config);
    for (const double v : {gamma.theta_mu, gamma.eta_mu, gamma.theta_sigma, gamma.eta_sigma, t,
                           mu, nu, x})
        h = mix_double(h, v);
    return fingerprint_hex(h);
}

}  // namespace

ValueEstimate value_under_box(double t, double mu, double nu, double x,
                              const ParamQuadruple& gamma, const ParamBox& box,
                              const SimConfig& config) {
    if (!(nu > 0.0)) throw std::domain_error("value: nu must be > 0");
    if (!(x > 0.0)) throw std::domain_error("value: x must be > 0");
    if (t > config.horizon) throw std::domain_error("value: t must not exceed the horizon");

    ValueEstimate estimate;
    estimate.seed = config.seed;
    estimate.fingerprint = point_fingerprint(config, gamma, t, mu, nu, x);

    const double horizon = config.horizon - t;
    if (horizon == 0.0) {
        estimate.mean = std::log(x);
        estimate.n_paths = config.n_paths;
        estimate.samples.assign(static_cast<std::size_t>(config.n_paths), estimate.mean);
        return estimate;
    }

    const int n_steps = std::max(1L, std::lround(horizon / config.dt()));
    estimate.dt_effective = horizon / n_steps;

    const auto functionals =
        simulate_path_functionals(horizon, n_steps, gamma, box, mu, nu, config.seed,
                                  config.n_paths);
    const double log_x = std::log(x);
    estimate.samples.reserve(functionals.size());
    for (const auto& f : functionals) {
        if (!f.valid) {
            ++estimate.excluded_paths;
            continue;
        }
        estimate.samples.push_back(log_x + f.excess_trap);
    }
    estimate.n_paths = static_cast<long>(estimate.samples.size());
    if (estimate.n_paths == 0)
        throw std::runtime_error("value: every path overflowed; nothing to average");
    const auto stats = mean_and_se(estimate.samples);
    estimate.mean = stats.mean;
    estimate.std_error = stats.se;
    return estimate;
}

ValueEstimate value_classical(double t, double mu, double nu, double x,
                              const ParamQuadruple& gamma, const SimConfig& config) {
    return value_under_box(t, mu, nu, x, gamma, config.box, config);
}

RobustValue value_robust(double t, double mu, double nu, double x, const ParamBox& box,
                         SelectorMode mode, const SimConfig& config) {
    RobustValue out;
    out.decision = select_corner(mu, nu, box, mode);
    out.estimate = value_under_box(t, mu, nu, x, out.decision.corner, box, config);
    return out;
}

}  // namespace rmerton
