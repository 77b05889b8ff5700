#include "rmerton/strategy.hpp"

#include <cmath>
#include <stdexcept>

#include "rmerton/reduce.hpp"

namespace rmerton {

double merton_fraction(double mu, double nu, double r) {
    if (!(nu > 0.0)) throw std::domain_error("merton_fraction: nu must be > 0");
    return (mu - r) / nu;
}

FractionProcess FractionProcess::Constant(double value) {
    FractionProcess p;
    p.kind = Kind::constant;
    p.constant = value;
    return p;
}

FractionProcess FractionProcess::PerStep(std::vector<double> values) {
    FractionProcess p;
    p.kind = Kind::per_step;
    p.per_step = std::move(values);
    return p;
}

FractionProcess FractionProcess::Policy(std::function<double(const MarketState&)> rule) {
    FractionProcess p;
    p.kind = Kind::policy;
    p.policy = std::move(rule);
    return p;
}

FractionProcess merton_policy(double r) {
    return FractionProcess::Policy(
        [r](const MarketState& s) { return merton_fraction(s.mu, s.nu, r); });
}

std::vector<double> fraction_values(const FractionProcess& process, const PathBundle& path,
                                    const std::vector<double>& times) {
    const std::size_t n_steps = path.dW_S.size();
    std::vector<double> out(n_steps);
    switch (process.kind) {
        case FractionProcess::Kind::constant:
            for (auto& v : out) v = process.constant;
            break;
        case FractionProcess::Kind::per_step:
            if (process.per_step.size() != n_steps)
                throw std::invalid_argument("fraction_values: per-step size mismatch");
            out = process.per_step;
            break;
        case FractionProcess::Kind::policy:
            for (std::size_t k = 0; k < n_steps; ++k) {
                const MarketState s{times[k], path.S[k], path.mu[k], path.nu[k], path.X[k]};
                out[k] = process.policy(s);
            }
            break;
    }
    return out;
}

AdmissibilityReport check_admissible(const FractionProcess& process, const PathEnsemble& paths,
                                     double threshold, double r) {
    AdmissibilityReport report;
    const double dt = paths.dt;
    std::vector<double> per_path;
    per_path.reserve(paths.paths.size());

    for (const auto& path : paths.paths) {
        if (!path.valid) continue;
        const auto pi = fraction_values(process, path, paths.times);
        double log_x = std::log(path.X[0]);
        double l4 = 0.0;
        bool violated = false;
        for (std::size_t k = 0; k < pi.size(); ++k) {
            if (!std::isfinite(pi[k])) {
                report.values_finite = false;
                violated = true;
                if (!report.first_violation) report.first_violation = {path.path_index, k};
                break;
            }
            const double x_k = std::exp(log_x);
            const double cash = x_k * pi[k];
            l4 += cash * cash * cash * cash * dt;
            log_x += (pi[k] * path.mu[k] + r * (1.0 - pi[k]) - 0.5 * pi[k] * pi[k] * path.nu[k]) *
                         dt +
                     pi[k] * std::sqrt(path.nu[k]) * path.dW_S[k];
            if (!std::isfinite(log_x)) {
                report.wealth_positive = false;
                violated = true;
                if (!report.first_violation) report.first_violation = {path.path_index, k};
                break;
            }
        }
        if (violated) continue;
        per_path.push_back(l4);
    }

    report.n_paths_used = static_cast<long>(per_path.size());
    if (!per_path.empty()) report.l4_estimate = mean(per_path);
    report.admissible = report.values_finite && report.wealth_positive &&
                        std::isfinite(report.l4_estimate) && report.l4_estimate < threshold &&
                        report.n_paths_used > 0;
    return report;
}

}  // namespace rmerton
