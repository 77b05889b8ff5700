#ifndef RMERTON_STRATEGY_HPP
#define RMERTON_STRATEGY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "rmerton/dynamics.hpp"

namespace rmerton {

// Log-optimal fraction of wealth in the risky asset, (mu - r) / nu.
// Maximizes pi (mu - r) - pi^2 nu / 2 pointwise.
double merton_fraction(double mu, double nu, double r);

// A fraction-of-wealth process on the simulation grid. Three forms: a single
// constant, one value per grid step, or a state-feedback rule (adapted by
// construction).
struct FractionProcess {
    enum class Kind { constant, per_step, policy };
    Kind kind = Kind::constant;
    double constant = 0.0;
    std::vector<double> per_step;
    std::function<double(const MarketState&)> policy;

    static FractionProcess Constant(double value);
    static FractionProcess PerStep(std::vector<double> values);
    static FractionProcess Policy(std::function<double(const MarketState&)> rule);
};

// Realized fraction values along one simulated path, one per step.
std::vector<double> fraction_values(const FractionProcess& process, const PathBundle& path,
                                    const std::vector<double>& times);

// The log-optimal rule as a feedback process.
FractionProcess merton_policy(double r);

struct AdmissibilityReport {
    bool admissible = false;
    double l4_estimate = 0.0;   // MC estimate of E[ int |X pi|^4 dt ]
    bool values_finite = true;
    bool wealth_positive = true;
    long n_paths_used = 0;
    // first offending (path, step) when a non-finite fraction or wealth shows up
    std::optional<std::pair<long, std::size_t>> first_violation;
};

// Empirical admissibility probe: estimates the time-integrated fourth moment
// of the cash value X pi and checks wealth positivity under the log-space
// wealth map. An MC estimate cannot certify finiteness; it can only flag
// blow-ups against the configured threshold.
AdmissibilityReport check_admissible(const FractionProcess& process, const PathEnsemble& paths,
                                     double threshold, double r);

}  // namespace rmerton

#endif  // RMERTON_STRATEGY_HPP
