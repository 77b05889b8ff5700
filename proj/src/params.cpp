#include "rmerton/params.hpp"

#include <cmath>
#include <stdexcept>

namespace rmerton {

namespace {

struct Interval {
    const char* name;
    double lo;
    double hi;
};

}  // namespace

std::array<ParamQuadruple, 16> corner_set(const ParamBox& box) {
    std::array<ParamQuadruple, 16> corners;
    for (int i = 0; i < 16; ++i) {
        corners[i].theta_mu = (i & 1) ? box.theta_mu_max : box.theta_mu_min;
        corners[i].eta_mu = (i & 2) ? box.eta_mu_max : box.eta_mu_min;
        corners[i].theta_sigma = (i & 4) ? box.theta_sigma_max : box.theta_sigma_min;
        corners[i].eta_sigma = (i & 8) ? box.eta_sigma_max : box.eta_sigma_min;
    }
    return corners;
}

std::vector<std::string> validate_box(const ParamBox& box) {
    std::vector<std::string> violations;
    const Interval intervals[] = {
        {"theta_mu", box.theta_mu_min, box.theta_mu_max},
        {"eta_mu", box.eta_mu_min, box.eta_mu_max},
        {"theta_sigma", box.theta_sigma_min, box.theta_sigma_max},
        {"eta_sigma", box.eta_sigma_min, box.eta_sigma_max},
    };
    for (const auto& iv : intervals) {
        const std::string n(iv.name);
        if (!(iv.lo > 0.0)) violations.push_back(n + "_min must be > 0");
        if (!(iv.lo <= iv.hi)) violations.push_back(n + "_min must be <= " + n + "_max");
        if (!(iv.hi <= box.bound_m)) violations.push_back(n + "_max must be <= bound_m");
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            violations.push_back(n + " bounds must be finite");
    }
    if (!(box.sigma_mu > 0.0)) violations.emplace_back("sigma_mu must be > 0");
    if (!(box.xi > 0.0)) violations.emplace_back("xi must be > 0");
    if (!(box.r > 0.0)) violations.emplace_back("r must be > 0");
    if (!(box.bound_m > 0.0)) violations.emplace_back("bound_m must be > 0");
    return violations;
}

ParamQuadruple box_midpoint(const ParamBox& box) {
    return {0.5 * (box.theta_mu_min + box.theta_mu_max),
            0.5 * (box.eta_mu_min + box.eta_mu_max),
            0.5 * (box.theta_sigma_min + box.theta_sigma_max),
            0.5 * (box.eta_sigma_min + box.eta_sigma_max)};
}

bool quadruple_in_box(const ParamBox& box, const ParamQuadruple& q) {
    return q.theta_mu >= box.theta_mu_min && q.theta_mu <= box.theta_mu_max &&
           q.eta_mu >= box.eta_mu_min && q.eta_mu <= box.eta_mu_max &&
           q.theta_sigma >= box.theta_sigma_min && q.theta_sigma <= box.theta_sigma_max &&
           q.eta_sigma >= box.eta_sigma_min && q.eta_sigma <= box.eta_sigma_max;
}

std::vector<double> uniform_grid(double horizon, int n_intervals) {
    if (!(horizon > 0.0)) throw std::domain_error("uniform_grid: horizon must be > 0");
    if (n_intervals < 1) throw std::domain_error("uniform_grid: need at least one interval");
    std::vector<double> times(static_cast<std::size_t>(n_intervals) + 1);
    for (int i = 0; i <= n_intervals; ++i)
        times[static_cast<std::size_t>(i)] = horizon * static_cast<double>(i) / n_intervals;
    times.back() = horizon;
    return times;
}

GammaSchedule constant_schedule(double horizon, int n_intervals, const ParamQuadruple& gamma) {
    GammaSchedule schedule;
    schedule.rebalance_times = uniform_grid(horizon, n_intervals);
    schedule.corners.assign(static_cast<std::size_t>(n_intervals), gamma);
    return schedule;
}

std::vector<std::string> validate_schedule(const GammaSchedule& schedule, const ParamBox& box) {
    std::vector<std::string> violations;
    const auto& t = schedule.rebalance_times;
    if (t.size() < 2) violations.emplace_back("schedule needs at least [t_0, t_1]");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1])) violations.emplace_back("rebalance_times must be strictly increasing");
    if (!t.empty() && t.front() != 0.0) violations.emplace_back("schedule must start at t = 0");
    if (schedule.corners.size() + 1 != t.size())
        violations.emplace_back("need exactly one quadruple per interval");
    for (std::size_t i = 0; i < schedule.corners.size(); ++i)
        if (!quadruple_in_box(box, schedule.corners[i]))
            violations.push_back("corner " + std::to_string(i) + " lies outside the box");
    return violations;
}

}  // namespace rmerton
