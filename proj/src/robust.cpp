#include "rmerton/robust.hpp"

#include <cmath>
#include <stdexcept>

namespace rmerton {

std::string to_string(BandRegion region) {
    switch (region) {
        case BandRegion::below_band: return "below_band";
        case BandRegion::in_band: return "in_band";
        case BandRegion::above_band: return "above_band";
    }
    return "?";
}

std::string to_string(RateSide side) {
    switch (side) {
        case RateSide::below_r: return "lt";
        case RateSide::at_r: return "eq";
        case RateSide::above_r: return "gt";
    }
    return "?";
}

namespace {

BandRegion classify(double value, double lo, double hi) {
    if (value < lo) return BandRegion::below_band;
    if (value > hi) return BandRegion::above_band;
    return BandRegion::in_band;
}

}  // namespace

CornerDecision select_corner(double mu, double nu, const ParamBox& box, SelectorMode mode) {
    if (!(nu > 0.0)) throw std::domain_error("select_corner: nu must be > 0");

    CornerDecision d;
    d.mode = mode;
    d.mu_band = classify(mu, box.eta_mu_min, box.eta_mu_max);
    d.nu_band = classify(nu, box.eta_sigma_min, box.eta_sigma_max);
    d.mu_side = mu < box.r ? RateSide::below_r
                           : (mu > box.r ? RateSide::above_r : RateSide::at_r);

    if (mode == SelectorMode::sign_logic) {
        // V_mu < 0 iff mu < r; V_nu < 0 always.
        const double sign_mu = mu < box.r ? -1.0 : 1.0;
        const double sign_nu = -1.0;
        const auto corners = corner_set(box);
        int best = 0;
        double best_value = 0.0;
        for (int j = 0; j < 16; ++j) {
            const auto& c = corners[static_cast<std::size_t>(j)];
            const double value = sign_mu * c.theta_mu * (c.eta_mu - mu) +
                                 sign_nu * c.theta_sigma * (c.eta_sigma - nu);
            if (j == 0 || value < best_value) {
                best = j;
                best_value = value;
            }
        }
        d.corner = corners[static_cast<std::size_t>(best)];
        return d;
    }

    // Published rule table. mu = r uses the mu > r branch.
    if (mu < box.r) {
        switch (d.mu_band) {
            case BandRegion::in_band:
            case BandRegion::below_band:
                d.corner.eta_mu = box.eta_mu_max;
                d.corner.theta_mu = box.theta_mu_max;
                break;
            case BandRegion::above_band:
                d.corner.eta_mu = box.eta_mu_min;
                d.corner.theta_mu = box.theta_mu_max;
                break;
        }
    } else {
        switch (d.mu_band) {
            case BandRegion::in_band:
            case BandRegion::above_band:
                d.corner.eta_mu = box.eta_mu_min;
                d.corner.theta_mu = box.theta_mu_max;
                break;
            case BandRegion::below_band:
                d.corner.eta_mu = box.eta_mu_min;
                d.corner.theta_mu = box.theta_mu_min;
                break;
        }
    }
    switch (d.nu_band) {
        case BandRegion::in_band:
            d.corner.eta_sigma = box.eta_sigma_max;
            d.corner.theta_sigma = box.theta_sigma_max;
            break;
        case BandRegion::above_band:
            d.corner.eta_sigma = box.eta_sigma_min;
            d.corner.theta_sigma = box.theta_sigma_min;
            break;
        case BandRegion::below_band:
            d.corner.eta_sigma = box.eta_sigma_min;
            d.corner.theta_sigma = box.theta_sigma_max;
            break;
    }
    return d;
}

WorstCaseSchedule worst_case_schedule(const std::vector<MarketState>& states, double horizon,
                                      const ParamBox& box, SelectorMode mode) {
    if (states.empty()) throw std::invalid_argument("worst_case_schedule: no states");
    if (!(horizon > 0.0)) throw std::domain_error("worst_case_schedule: horizon must be > 0");
    if (states.front().t != 0.0)
        throw std::invalid_argument("worst_case_schedule: first state must sit at t = 0");

    WorstCaseSchedule out;
    out.schedule.rebalance_times.reserve(states.size() + 1);
    out.decisions.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        if (i > 0 && !(s.t > states[i - 1].t))
            throw std::invalid_argument("worst_case_schedule: dates must increase");
        if (!(s.t < horizon))
            throw std::invalid_argument("worst_case_schedule: dates must precede the horizon");
        out.schedule.rebalance_times.push_back(s.t);
        auto decision = select_corner(s.mu, s.nu, box, mode);
        out.schedule.corners.push_back(decision.corner);
        out.decisions.push_back(std::move(decision));
    }
    out.schedule.rebalance_times.push_back(horizon);
    return out;
}

}  // namespace rmerton
