#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rmerton/config_file.hpp"
#include "rmerton/dynamics.hpp"
#include "rmerton/robust.hpp"
#include "rmerton/strategy.hpp"
#include "rmerton/valuation.hpp"
#include "rmerton/verify.hpp"

namespace py = pybind11;
using namespace rmerton;

namespace {

SelectorMode mode_from_string(const std::string& mode) {
    if (mode == "paper") return SelectorMode::paper;
    if (mode == "sign-logic" || mode == "sign_logic") return SelectorMode::sign_logic;
    throw std::invalid_argument("mode must be 'paper' or 'sign-logic'");
}

py::dict decision_dict(const CornerDecision& d) {
    py::dict out;
    out["theta_mu"] = d.corner.theta_mu;
    out["eta_mu"] = d.corner.eta_mu;
    out["theta_sigma"] = d.corner.theta_sigma;
    out["eta_sigma"] = d.corner.eta_sigma;
    out["mu_band"] = to_string(d.mu_band);
    out["mu_vs_r"] = to_string(d.mu_side);
    out["nu_band"] = to_string(d.nu_band);
    out["mode"] = to_string(d.mode);
    return out;
}

py::dict estimate_dict(const ValueEstimate& e) {
    py::dict out;
    out["mean"] = e.mean;
    out["std_error"] = e.std_error;
    out["n_paths"] = e.n_paths;
    out["excluded_paths"] = e.excluded_paths;
    out["fingerprint"] = e.fingerprint;
    out["seed"] = e.seed;
    out["dt_effective"] = e.dt_effective;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Robust log-utility portfolio toolkit: mean-reverting drift, "
              "GARCH-diffusion variance, box-valued parameter ambiguity";

    py::class_<ParamBox>(m, "ParamBox")
        .def(py::init([](double theta_mu_min, double theta_mu_max, double eta_mu_min,
                         double eta_mu_max, double theta_sigma_min, double theta_sigma_max,
                         double eta_sigma_min, double eta_sigma_max, double sigma_mu, double xi,
                         double r, double bound_m) {
                 ParamBox box{theta_mu_min, theta_mu_max, eta_mu_min, eta_mu_max,
                              theta_sigma_min, theta_sigma_max, eta_sigma_min, eta_sigma_max,
                              sigma_mu, xi, r, bound_m};
                 return box;
             }),
             py::arg("theta_mu_min"), py::arg("theta_mu_max"), py::arg("eta_mu_min"),
             py::arg("eta_mu_max"), py::arg("theta_sigma_min"), py::arg("theta_sigma_max"),
             py::arg("eta_sigma_min"), py::arg("eta_sigma_max"), py::arg("sigma_mu"),
             py::arg("xi"), py::arg("r"), py::arg("bound_M") = 10.0)
        .def_readwrite("theta_mu_min", &ParamBox::theta_mu_min)
        .def_readwrite("theta_mu_max", &ParamBox::theta_mu_max)
        .def_readwrite("eta_mu_min", &ParamBox::eta_mu_min)
        .def_readwrite("eta_mu_max", &ParamBox::eta_mu_max)
        .def_readwrite("theta_sigma_min", &ParamBox::theta_sigma_min)
        .def_readwrite("theta_sigma_max", &ParamBox::theta_sigma_max)
        .def_readwrite("eta_sigma_min", &ParamBox::eta_sigma_min)
        .def_readwrite("eta_sigma_max", &ParamBox::eta_sigma_max)
        .def_readwrite("sigma_mu", &ParamBox::sigma_mu)
        .def_readwrite("xi", &ParamBox::xi)
        .def_readwrite("r", &ParamBox::r)
        .def_readwrite("bound_M", &ParamBox::bound_m);

    py::class_<ParamQuadruple>(m, "ParamQuadruple")
        .def(py::init([](double theta_mu, double eta_mu, double theta_sigma, double eta_sigma) {
                 return ParamQuadruple{theta_mu, eta_mu, theta_sigma, eta_sigma};
             }),
             py::arg("theta_mu"), py::arg("eta_mu"), py::arg("theta_sigma"),
             py::arg("eta_sigma"))
        .def_readwrite("theta_mu", &ParamQuadruple::theta_mu)
        .def_readwrite("eta_mu", &ParamQuadruple::eta_mu)
        .def_readwrite("theta_sigma", &ParamQuadruple::theta_sigma)
        .def_readwrite("eta_sigma", &ParamQuadruple::eta_sigma)
        .def("__eq__", [](const ParamQuadruple& a, const ParamQuadruple& b) { return a == b; })
        .def("__repr__", [](const ParamQuadruple& q) {
            return "ParamQuadruple(theta_mu=" + std::to_string(q.theta_mu) +
                   ", eta_mu=" + std::to_string(q.eta_mu) +
                   ", theta_sigma=" + std::to_string(q.theta_sigma) +
                   ", eta_sigma=" + std::to_string(q.eta_sigma) + ")";
        });

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("T", &SimConfig::horizon)
        .def_readwrite("n_rebalance", &SimConfig::n_rebalance)
        .def_readwrite("steps_per_interval", &SimConfig::steps_per_interval)
        .def_readwrite("n_paths", &SimConfig::n_paths)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("S0", &SimConfig::s0)
        .def_readwrite("mu0", &SimConfig::mu0)
        .def_readwrite("nu0", &SimConfig::nu0)
        .def_readwrite("x0", &SimConfig::x0)
        .def_readwrite("box", &SimConfig::box)
        .def("dt", &SimConfig::dt)
        .def("n_steps", &SimConfig::n_steps);

    m.def("load_config", [](const std::string& path) {
        return config_from_keys(read_config_file(path));
    }, py::arg("path"), "Read a key = value configuration file.");

    m.def("validate_box", &validate_box, py::arg("box"),
          "Every invariant violation; empty when the box is valid.");
    m.def("corner_set", [](const ParamBox& box) {
        const auto corners = corner_set(box);
        return std::vector<ParamQuadruple>(corners.begin(), corners.end());
    }, py::arg("box"), "The 16 extreme points of the box in index-bit order.");
    m.def("box_midpoint", &box_midpoint, py::arg("box"));

    m.def("merton_fraction", &merton_fraction, py::arg("mu"), py::arg("nu"), py::arg("r"),
          "Log-optimal fraction (mu - r) / nu.");
    m.def("running_integrand", &running_integrand, py::arg("mu"), py::arg("nu"), py::arg("r"),
          "r + (mu - r)^2 / (2 nu).");
    m.def("ou_exact_step", &ou_exact_step, py::arg("mu"), py::arg("gamma"), py::arg("sigma_mu"),
          py::arg("dt"), py::arg("z"), "Exact one-step drift transition sample.");
    m.def("variance_step", &variance_step, py::arg("nu"), py::arg("gamma"), py::arg("xi"),
          py::arg("dt"), py::arg("z"), "Positivity-preserving variance step.");

    m.def("select_corner",
          [](double mu, double nu, const ParamBox& box, const std::string& mode) {
              return decision_dict(select_corner(mu, nu, box, mode_from_string(mode)));
          },
          py::arg("mu"), py::arg("nu"), py::arg("box"), py::arg("mode") = "paper",
          "Worst-case corner of the box at one state.");

    m.def("value_classical",
          [](double t, double mu, double nu, double x, const ParamQuadruple& gamma,
             const SimConfig& config) {
              return estimate_dict(value_classical(t, mu, nu, x, gamma, config));
          },
          py::arg("t"), py::arg("mu"), py::arg("nu"), py::arg("x"), py::arg("gamma"),
          py::arg("config"));

    m.def("value_robust",
          [](double t, double mu, double nu, double x, const SimConfig& config,
             const std::string& mode) {
              const auto out =
                  value_robust(t, mu, nu, x, config.box, mode_from_string(mode), config);
              py::dict d = estimate_dict(out.estimate);
              d["corner"] = decision_dict(out.decision);
              return d;
          },
          py::arg("t"), py::arg("mu"), py::arg("nu"), py::arg("x"), py::arg("config"),
          py::arg("mode") = "paper");

    m.def("simulate_terminals",
          [](const SimConfig& config, const std::string& mode) {
              const SelectorMode m_ = mode_from_string(mode);
              const CornerPolicy policy = [&config, m_](double, double mu, double nu) {
                  return select_corner(mu, nu, config.box, m_).corner;
              };
              const auto ensemble = simulate_paths_adaptive(
                  config, policy, {0.0, config.s0, config.mu0, config.nu0, config.x0});
              py::dict out;
              std::vector<double> s, nu, x;
              std::vector<bool> valid;
              for (const auto& p : ensemble.paths) {
                  s.push_back(p.S.back());
                  nu.push_back(p.nu.back());
                  x.push_back(p.X.back());
                  valid.push_back(p.valid);
              }
              out["S_T"] = s;
              out["nu_T"] = nu;
              out["X_T"] = x;
              out["valid"] = valid;
              out["n_invalid"] = ensemble.n_invalid;
              return out;
          },
          py::arg("config"), py::arg("mode") = "paper",
          "Terminal states of the worst-case rebalancing protocol.");

    m.def("check_admissible",
          [](const SimConfig& config, double pi_constant, double threshold) {
              const auto schedule = constant_schedule(config.horizon, config.n_rebalance,
                                                      box_midpoint(config.box));
              const auto ensemble = simulate_paths(
                  config, schedule, {0.0, config.s0, config.mu0, config.nu0, config.x0});
              const auto report = check_admissible(FractionProcess::Constant(pi_constant),
                                                   ensemble, threshold, config.box.r);
              py::dict out;
              out["admissible"] = report.admissible;
              out["l4_estimate"] = report.l4_estimate;
              out["wealth_positive"] = report.wealth_positive;
              out["values_finite"] = report.values_finite;
              out["n_paths_used"] = report.n_paths_used;
              return out;
          },
          py::arg("config"), py::arg("pi_constant"), py::arg("threshold") = 1e12,
          "Admissibility probe for a constant fraction on baseline paths.");

    m.def("minimax_gap",
          [](const SimConfig& config, int pi_points, double pi_lo, double pi_hi) {
              const auto report =
                  minimax_gap(0.0, config.mu0, config.nu0, config.x0, config.box,
                              make_pi_grid(pi_lo, pi_hi, pi_points), config);
              py::dict out;
              out["sup_inf"] = report.sup_inf;
              out["inf_sup"] = report.inf_sup;
              out["gap"] = report.gap;
              out["combined_se"] = report.combined_se;
              out["argmin_corner"] = report.argmin_corner;
              out["n_paths"] = report.n_paths;
              return out;
          },
          py::arg("config"), py::arg("pi_points") = 41, py::arg("pi_lo") = -3.0,
          py::arg("pi_hi") = 3.0);

    m.def("brute_force_worst_corner",
          [](double t, double mu, double nu, double x, const SimConfig& config) {
              const auto search = brute_force_worst_corner(t, mu, nu, x, config.box, config);
              py::dict out;
              out["values"] = std::vector<double>(search.values.begin(), search.values.end());
              out["std_errors"] =
                  std::vector<double>(search.std_errors.begin(), search.std_errors.end());
              out["argmin"] = search.argmin;
              out["tie_within_se"] = search.tie_within_se;
              return out;
          },
          py::arg("t"), py::arg("mu"), py::arg("nu"), py::arg("x"), py::arg("config"));

    m.def("convergence_order",
          [](const SimConfig& config, const std::vector<double>& dt_list) {
              const auto report = convergence_order(config, dt_list);
              py::dict out;
              out["slope"] = report.slope;
              out["rms_errors"] = report.rms_errors;
              return out;
          },
          py::arg("config"), py::arg("dt_list"));
}
