#ifndef RMERTON_ROBUST_HPP
#define RMERTON_ROBUST_HPP

#include <string>
#include <vector>

#include "rmerton/sim_config.hpp"

namespace rmerton {

enum class BandRegion { below_band, in_band, above_band };
enum class RateSide { below_r, at_r, above_r };

std::string to_string(BandRegion region);
std::string to_string(RateSide side);

// Worst-case corner of the box for one (mu, nu) state, with the region
// labels that produced it.
struct CornerDecision {
    ParamQuadruple corner;
    BandRegion mu_band = BandRegion::in_band;
    RateSide mu_side = RateSide::above_r;  // mu = r is resolved as the mu > r branch
    BandRegion nu_band = BandRegion::in_band;
    SelectorMode mode = SelectorMode::paper;
};

// Adversarial corner choice.
//
// mode == paper applies the published rule table verbatim:
//   mu < r:  in band -> (eta_mu_max, theta_mu_max); mu below band -> same;
//            mu above band -> (eta_mu_min, theta_mu_max)
//   mu >= r: in band -> (eta_mu_min, theta_mu_max);
//            mu below band -> (eta_mu_min, theta_mu_min);
//            mu above band -> (eta_mu_min, theta_mu_max)
//   nu in band -> (eta_sigma_max, theta_sigma_max);
//   nu above band -> (eta_sigma_min, theta_sigma_min);
//   nu below band -> (eta_sigma_min, theta_sigma_max)
//
// mode == sign_logic minimizes
//   sgn(V_mu) theta_mu (eta_mu - mu) + sgn(V_nu) theta_sigma (eta_sigma - nu)
// over the 16 corners with sgn(V_mu) = -1 iff mu < r and sgn(V_nu) = -1,
// ties broken by corner_set ordering. The two rules agree whenever both
// state variables sit inside their eta bands.
//
// Band membership is closed-interval; values exactly on an endpoint count
// as in band.
CornerDecision select_corner(double mu, double nu, const ParamBox& box, SelectorMode mode);

struct WorstCaseSchedule {
    GammaSchedule schedule;
    std::vector<CornerDecision> decisions;
};

// Piecewise-constant worst-case schedule: one corner decision per rebalance
// date, from the state observed at that date. states[i].t must equal the
// rebalance dates t_0 = 0 < ... < t_{N-1} < horizon.
WorstCaseSchedule worst_case_schedule(const std::vector<MarketState>& states, double horizon,
                                      const ParamBox& box, SelectorMode mode);

}  // namespace rmerton

#endif  // RMERTON_ROBUST_HPP
