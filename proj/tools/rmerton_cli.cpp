// Command-line driver: simulate, policy, value, verify.
//
// Exit codes: 0 success / verification passed, 1 verification failed,
// 2 usage or configuration error. All output files are reproducible byte
// for byte for a fixed config, independent of thread count.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmerton/config_file.hpp"
#include "rmerton/csv.hpp"
#include "rmerton/dynamics.hpp"
#include "rmerton/reduce.hpp"
#include "rmerton/rng.hpp"
#include "rmerton/robust.hpp"
#include "rmerton/strategy.hpp"
#include "rmerton/valuation.hpp"
#include "rmerton/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rmerton;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

void print_usage(std::ostream& os) {
    os << "usage: rmerton <command> [options]\n"
          "\n"
          "commands:\n"
          "  simulate            per-path terminal summaries under the worst-case protocol\n"
          "  policy              corner decisions per rebalance date along baseline paths\n"
          "  value               robust value estimate at the configured initial point\n"
          "  verify <check>      run one verification; check is one of\n"
          "                      minimax | corners | mixture | moments | convergence\n"
          "\n"
          "options:\n"
          "  --config PATH       key = value configuration file (required)\n"
          "  --seed U64          override the seed\n"
          "  --out DIR           output directory (default from config)\n"
          "  --mode paper|sign-logic   corner selector mode\n"
          "  --set k=v           override any config key (repeatable)\n"
          "  --trajectories      simulate: also write full state trajectories\n";
}

struct CliArgs {
    std::string command;
    std::string check;
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    bool trajectories = false;
};

CliArgs parse_args(int argc, char** argv) {
    CliArgs args;
    if (argc < 2) throw ConfigError("missing command");
    args.command = argv[1];
    int i = 2;
    if (args.command == "verify") {
        if (argc < 3 || std::string(argv[2]).rfind("--", 0) == 0)
            throw ConfigError("verify: missing check name");
        args.check = argv[2];
        i = 3;
    }
    for (; i < argc; ++i) {
        const std::string flag = argv[i];
        const auto need_value = [&](const char* name) -> std::string {
            if (i + 1 >= argc) throw ConfigError(std::string(name) + ": missing value");
            return argv[++i];
        };
        if (flag == "--config") {
            args.config_path = need_value("--config");
        } else if (flag == "--seed") {
            args.overrides.emplace_back("seed", need_value("--seed"));
        } else if (flag == "--out") {
            args.overrides.emplace_back("out_dir", need_value("--out"));
        } else if (flag == "--mode") {
            args.overrides.emplace_back("mode", need_value("--mode"));
        } else if (flag == "--set") {
            const std::string kv = need_value("--set");
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value");
            args.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        } else if (flag == "--trajectories") {
            args.trajectories = true;
        } else {
            throw ConfigError("unknown option '" + flag + "'");
        }
    }
    if (args.config_path.empty()) throw ConfigError("--config is required");
    return args;
}

SimConfig load_config(const CliArgs& args) {
    auto keys = read_config_file(args.config_path);
    for (const auto& [k, v] : args.overrides) keys[k] = v;
    SimConfig config = config_from_keys(keys);
    if (const auto bad = validate_config(config); !bad.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : bad) msg += "\n  " + v;
        throw ConfigError(msg);
    }
    return config;
}

std::vector<std::string> metadata_lines(const SimConfig& config, const std::string& command) {
    return {"config_fingerprint=" + fingerprint_hex(config_fingerprint(config)),
            "command=" + command, "mode=" + to_string(config.mode)};
}

MarketState initial_state(const SimConfig& config) {
    return {0.0, config.s0, config.mu0, config.nu0, config.x0};
}

std::string out_path(const SimConfig& config, const std::string& name) {
    fs::create_directories(config.out_dir);
    return (fs::path(config.out_dir) / name).string();
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const SimConfig& config, bool trajectories) {
    const CornerPolicy policy = [&config](double, double mu, double nu) {
        return select_corner(mu, nu, config.box, config.mode).corner;
    };
    const auto ensemble = simulate_paths_adaptive(config, policy, initial_state(config));

    CsvWriter csv(out_path(config, "paths.csv"), metadata_lines(config, "simulate"),
                  {"seed", "path_index", "valid", "S_T", "mu_T", "nu_T", "X_T", "log_X_T"});
    for (const auto& path : ensemble.paths) {
        csv.row({CsvWriter::cell(config.seed), CsvWriter::cell(path.path_index),
                 CsvWriter::cell(path.valid ? 1 : 0), CsvWriter::cell(path.S.back()),
                 CsvWriter::cell(path.mu.back()), CsvWriter::cell(path.nu.back()),
                 CsvWriter::cell(path.X.back()), CsvWriter::cell(std::log(path.X.back()))});
    }
    if (trajectories) {
        CsvWriter traj(out_path(config, "trajectories.csv"), metadata_lines(config, "simulate"),
                       {"path_index", "t", "S", "mu", "nu", "X"});
        for (const auto& path : ensemble.paths)
            for (std::size_t k = 0; k < ensemble.times.size(); ++k)
                traj.row({CsvWriter::cell(path.path_index), CsvWriter::cell(ensemble.times[k]),
                          CsvWriter::cell(path.S[k]), CsvWriter::cell(path.mu[k]),
                          CsvWriter::cell(path.nu[k]), CsvWriter::cell(path.X[k])});
    }
    std::cout << "simulate: " << ensemble.paths.size() << " paths, " << ensemble.n_invalid
              << " flagged invalid\n";
    return kExitOk;
}

// ------------------------------------------------------------------ policy

int cmd_policy(const SimConfig& config) {
    // Baseline dynamics under the box midpoint, so that both selector modes
    // see identical states and rows differ only where the rules differ.
    const auto schedule =
        constant_schedule(config.horizon, config.n_rebalance, box_midpoint(config.box));
    const auto ensemble = simulate_paths(config, schedule, initial_state(config));

    const int spi = config.steps_per_interval;
    CsvWriter csv(out_path(config, "policy.csv"), metadata_lines(config, "policy"),
                  {"path_index", "t", "mu", "nu", "mu_band", "mu_vs_r", "nu_band", "theta_mu",
                   "eta_mu", "theta_sigma", "eta_sigma", "mode"});
    for (const auto& path : ensemble.paths) {
        if (!path.valid) continue;
        std::vector<MarketState> at_dates;
        for (int i = 0; i < config.n_rebalance; ++i) {
            const auto k = static_cast<std::size_t>(i) * static_cast<std::size_t>(spi);
            at_dates.push_back(
                {ensemble.times[k], path.S[k], path.mu[k], path.nu[k], path.X[k]});
        }
        const auto wc = worst_case_schedule(at_dates, config.horizon, config.box, config.mode);
        for (std::size_t i = 0; i < wc.decisions.size(); ++i) {
            const auto& d = wc.decisions[i];
            csv.row({CsvWriter::cell(path.path_index), CsvWriter::cell(at_dates[i].t),
                     CsvWriter::cell(at_dates[i].mu), CsvWriter::cell(at_dates[i].nu),
                     to_string(d.mu_band), to_string(d.mu_side), to_string(d.nu_band),
                     CsvWriter::cell(d.corner.theta_mu), CsvWriter::cell(d.corner.eta_mu),
                     CsvWriter::cell(d.corner.theta_sigma), CsvWriter::cell(d.corner.eta_sigma),
                     to_string(config.mode)});
        }
    }
    std::cout << "policy: " << ensemble.paths.size() << " paths, " << ensemble.n_invalid
              << " flagged invalid\n";
    return kExitOk;
}

// ------------------------------------------------------------------- value

json decision_to_json(const CornerDecision& d) {
    return json{{"theta_mu", d.corner.theta_mu},
                {"eta_mu", d.corner.eta_mu},
                {"theta_sigma", d.corner.theta_sigma},
                {"eta_sigma", d.corner.eta_sigma},
                {"mu_band", to_string(d.mu_band)},
                {"mu_vs_r", to_string(d.mu_side)},
                {"nu_band", to_string(d.nu_band)},
                {"mode", to_string(d.mode)}};
}

int cmd_value(const SimConfig& config) {
    const auto robust =
        value_robust(0.0, config.mu0, config.nu0, config.x0, config.box, config.mode, config);
    const auto& e = robust.estimate;

    json out{{"mean", e.mean},
             {"std_error", e.std_error},
             {"n_paths", e.n_paths},
             {"excluded_paths", e.excluded_paths},
             {"fingerprint", e.fingerprint},
             {"seed", e.seed},
             {"dt_effective", e.dt_effective},
             {"point", json{{"t", 0.0}, {"mu", config.mu0}, {"nu", config.nu0},
                            {"x", config.x0}}},
             {"corner", decision_to_json(robust.decision)}};
    std::ofstream jf(out_path(config, "value.json"), std::ios::binary);
    jf << out.dump(2) << "\n";

    CsvWriter csv(out_path(config, "value.csv"), metadata_lines(config, "value"),
                  {"t", "mu", "nu", "x", "mean", "std_error", "n_paths", "excluded_paths",
                   "theta_mu", "eta_mu", "theta_sigma", "eta_sigma", "fingerprint"});
    csv.row({CsvWriter::cell(0.0), CsvWriter::cell(config.mu0), CsvWriter::cell(config.nu0),
             CsvWriter::cell(config.x0), CsvWriter::cell(e.mean), CsvWriter::cell(e.std_error),
             CsvWriter::cell(e.n_paths), CsvWriter::cell(e.excluded_paths),
             CsvWriter::cell(robust.decision.corner.theta_mu),
             CsvWriter::cell(robust.decision.corner.eta_mu),
             CsvWriter::cell(robust.decision.corner.theta_sigma),
             CsvWriter::cell(robust.decision.corner.eta_sigma), e.fingerprint});

    std::cout << "value: mean=" << format_number(e.mean)
              << " se=" << format_number(e.std_error) << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ verify

struct Verdict {
    std::string check;
    bool pass = true;
    std::vector<std::pair<std::string, std::string>> facts;

    void fact(const std::string& k, double v) { facts.emplace_back(k, format_number(v)); }
    void fact(const std::string& k, const std::string& v) { facts.emplace_back(k, v); }
    void require(bool ok) { pass = pass && ok; }
};

int write_verdict(const SimConfig& config, const Verdict& verdict) {
    std::ofstream out(out_path(config, "verdict_" + verdict.check + ".txt"), std::ios::binary);
    out << "# config_fingerprint=" << fingerprint_hex(config_fingerprint(config)) << "\n";
    out << "check = " << verdict.check << "\n";
    out << "status = " << (verdict.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& [k, v] : verdict.facts) out << k << " = " << v << "\n";
    std::cout << "verify " << verdict.check << ": " << (verdict.pass ? "PASS" : "FAIL") << "\n";
    return verdict.pass ? kExitOk : kExitCheckFailed;
}

int verify_minimax(const SimConfig& config) {
    const auto grid = make_pi_grid(config.pi_grid_min, config.pi_grid_max, config.pi_grid_points);
    const auto report =
        minimax_gap(0.0, config.mu0, config.nu0, config.x0, config.box, grid, config);

    CsvWriter csv(out_path(config, "minimax_matrix.csv"), metadata_lines(config, "verify"),
                  {"pi", "corner_index", "value", "std_error"});
    for (std::size_t i = 0; i < report.pi_grid.size(); ++i)
        for (int j = 0; j < 16; ++j)
            csv.row({CsvWriter::cell(report.pi_grid[i]), CsvWriter::cell(j),
                     CsvWriter::cell(report.values[i][static_cast<std::size_t>(j)]),
                     CsvWriter::cell(report.std_errors[i][static_cast<std::size_t>(j)])});

    Verdict verdict;
    verdict.check = "minimax";
    verdict.fact("sup_inf", report.sup_inf);
    verdict.fact("inf_sup", report.inf_sup);
    verdict.fact("gap", report.gap);
    verdict.fact("combined_se", report.combined_se);
    verdict.fact("limit_3se", 3.0 * report.combined_se);
    verdict.fact("argmax_pi", report.pi_grid[static_cast<std::size_t>(report.argmax_pi)]);
    verdict.fact("argmin_corner", static_cast<double>(report.argmin_corner));
    verdict.fact("n_paths", static_cast<double>(report.n_paths));
    verdict.fact("excluded_paths", static_cast<double>(report.excluded_paths));
    verdict.require(report.sup_inf <= report.inf_sup);  // exact, zero tolerance
    verdict.require(report.gap >= 0.0);
    verdict.require(report.gap <= 3.0 * report.combined_se);
    return write_verdict(config, verdict);
}

struct UniformDraw {
    std::mt19937_64 engine;
    explicit UniformDraw(std::uint64_t seed) : engine(seed) {}
    double in(double lo, double hi) {
        const double u = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
};

int find_corner_index(const std::array<ParamQuadruple, 16>& corners, const ParamQuadruple& c) {
    for (int j = 0; j < 16; ++j)
        if (corners[static_cast<std::size_t>(j)] == c) return j;
    throw std::runtime_error("corner not found in corner set");
}

int verify_corners(const SimConfig& config) {
    // Interior states at a short remaining horizon; out-of-band states are
    // reported to the diff file without affecting the verdict.
    const double t_eval = std::max(0.0, config.horizon - std::min(0.1, 0.1 * config.horizon));
    UniformDraw draw(substream_seed(config.seed, 0x636f726eULL));
    const auto& box = config.box;

    Verdict verdict;
    verdict.check = "corners";
    CsvWriter diff(out_path(config, "corner_diff.csv"), metadata_lines(config, "verify"),
                   {"kind", "mu", "nu", "paper_index", "brute_index", "paper_value",
                    "brute_value", "combined_se"});
    CsvWriter matrix(out_path(config, "corners_matrix.csv"), metadata_lines(config, "verify"),
                     {"state", "mu", "nu", "corner_index", "value", "std_error", "is_argmin"});
    const auto dump_matrix = [&matrix](int state, double mu, double nu,
                                       const CornerSearch& search) {
        for (int j = 0; j < 16; ++j)
            matrix.row({CsvWriter::cell(state), CsvWriter::cell(mu), CsvWriter::cell(nu),
                        CsvWriter::cell(j),
                        CsvWriter::cell(search.values[static_cast<std::size_t>(j)]),
                        CsvWriter::cell(search.std_errors[static_cast<std::size_t>(j)]),
                        CsvWriter::cell(j == search.argmin ? 1 : 0)});
    };

    int interior_checked = 0, interior_matched = 0;
    for (int s = 0; s < 20; ++s) {
        const double mu = draw.in(box.eta_mu_min, box.eta_mu_max);
        const double nu = draw.in(box.eta_sigma_min, box.eta_sigma_max);
        const auto paper = select_corner(mu, nu, box, SelectorMode::paper);
        const auto brute = brute_force_worst_corner(t_eval, mu, nu, config.x0, box, config);
        dump_matrix(s, mu, nu, brute);
        const int paper_idx = find_corner_index(brute.corners, paper.corner);
        const double paper_value = brute.values[static_cast<std::size_t>(paper_idx)];
        const double best = brute.values[static_cast<std::size_t>(brute.argmin)];
        const double se_pair = std::sqrt(
            brute.std_errors[static_cast<std::size_t>(paper_idx)] *
                brute.std_errors[static_cast<std::size_t>(paper_idx)] +
            brute.std_errors[static_cast<std::size_t>(brute.argmin)] *
                brute.std_errors[static_cast<std::size_t>(brute.argmin)]);
        ++interior_checked;
        const bool ok = paper_idx == brute.argmin || paper_value <= best + 3.0 * se_pair;
        if (ok) ++interior_matched;
        if (paper_idx != brute.argmin)
            diff.row({"interior", CsvWriter::cell(mu), CsvWriter::cell(nu),
                      CsvWriter::cell(paper_idx), CsvWriter::cell(brute.argmin),
                      CsvWriter::cell(paper_value), CsvWriter::cell(best),
                      CsvWriter::cell(se_pair)});
        verdict.require(ok);
    }

    // out-of-band sweep, report only
    int out_of_band_disagreements = 0;
    for (int s = 0; s < 20; ++s) {
        const double mu_width = box.eta_mu_max - box.eta_mu_min;
        const double nu_width = box.eta_sigma_max - box.eta_sigma_min;
        double mu, nu;
        switch (s % 4) {
            case 0:
                mu = draw.in(box.eta_mu_min - std::max(mu_width, 0.05), box.eta_mu_min);
                nu = draw.in(box.eta_sigma_min, box.eta_sigma_max);
                break;
            case 1:
                mu = draw.in(box.eta_mu_max, box.eta_mu_max + std::max(mu_width, 0.05));
                nu = draw.in(box.eta_sigma_min, box.eta_sigma_max);
                break;
            case 2:
                mu = draw.in(box.eta_mu_min, box.eta_mu_max);
                nu = draw.in(box.eta_sigma_max, box.eta_sigma_max + std::max(nu_width, 0.02));
                break;
            default:
                mu = draw.in(box.eta_mu_min, box.eta_mu_max);
                nu = draw.in(0.5 * box.eta_sigma_min, box.eta_sigma_min);
                break;
        }
        const auto paper = select_corner(mu, nu, box, SelectorMode::paper);
        const auto brute = brute_force_worst_corner(t_eval, mu, nu, config.x0, box, config);
        dump_matrix(20 + s, mu, nu, brute);
        const int paper_idx = find_corner_index(brute.corners, paper.corner);
        if (paper_idx != brute.argmin) {
            ++out_of_band_disagreements;
            const double se_pair = std::sqrt(
                brute.std_errors[static_cast<std::size_t>(paper_idx)] *
                    brute.std_errors[static_cast<std::size_t>(paper_idx)] +
                brute.std_errors[static_cast<std::size_t>(brute.argmin)] *
                    brute.std_errors[static_cast<std::size_t>(brute.argmin)]);
            diff.row({"out_of_band", CsvWriter::cell(mu), CsvWriter::cell(nu),
                      CsvWriter::cell(paper_idx), CsvWriter::cell(brute.argmin),
                      CsvWriter::cell(brute.values[static_cast<std::size_t>(paper_idx)]),
                      CsvWriter::cell(brute.values[static_cast<std::size_t>(brute.argmin)]),
                      CsvWriter::cell(se_pair)});
        }
    }

    verdict.fact("t_eval", t_eval);
    verdict.fact("interior_checked", static_cast<double>(interior_checked));
    verdict.fact("interior_matched", static_cast<double>(interior_matched));
    verdict.fact("out_of_band_disagreements", static_cast<double>(out_of_band_disagreements));
    return write_verdict(config, verdict);
}

int verify_mixture(const SimConfig& config) {
    const auto corners = corner_set(config.box);
    std::vector<ValueEstimate> estimates;
    for (int j = 0; j < 3; ++j)
        estimates.push_back(value_classical(0.0, config.mu0, config.nu0, config.x0,
                                            corners[static_cast<std::size_t>(j)], config));

    UniformDraw draw(substream_seed(config.seed, 0x6d697874ULL));
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        double u0 = draw.in(0.0, 1.0), u1 = draw.in(0.0, 1.0), u2 = draw.in(0.0, 1.0);
        const double s = u0 + u1 + u2;
        const auto residual = mixture_linearity_check(estimates, {u0 / s, u1 / s, u2 / s});
        worst = std::max(worst, residual.rel_residual);
    }

    Verdict verdict;
    verdict.check = "mixture";
    verdict.fact("trials", 100.0);
    verdict.fact("worst_rel_residual", worst);
    verdict.fact("limit", 1e-12);
    verdict.require(worst <= 1e-12);
    return write_verdict(config, verdict);
}

int verify_moments(const SimConfig& config) {
    Verdict verdict;
    verdict.check = "moments";
    CsvWriter csv(out_path(config, "moments.csv"), metadata_lines(config, "verify"),
                  {"n", "sample_size", "nu_estimate", "mu_estimate", "overflow_excluded"});
    const std::vector<long> sizes = {100000, 400000};
    for (int n = 1; n <= 4; ++n) {
        const auto probe = moment_bound_probe(n, config.box, config, sizes);
        for (std::size_t i = 0; i < sizes.size(); ++i)
            csv.row({CsvWriter::cell(n), CsvWriter::cell(sizes[i]),
                     CsvWriter::cell(probe.nu_estimates[i]), CsvWriter::cell(probe.mu_estimates[i]),
                     CsvWriter::cell(probe.overflow_excluded)});
        const std::string tag = "n" + std::to_string(n);
        verdict.fact(tag + "_nu_rel_change", probe.nu_rel_change.front());
        verdict.fact(tag + "_mu_rel_change", probe.mu_rel_change.front());
        verdict.fact(tag + "_overflow_excluded", static_cast<double>(probe.overflow_excluded));
        verdict.require(probe.nu_rel_change.front() < 0.05);
        verdict.require(probe.mu_rel_change.front() < 0.05);
        if (n <= 2) verdict.require(probe.overflow_excluded == 0);
    }
    verdict.fact("limit_rel_change", 0.05);
    return write_verdict(config, verdict);
}

int verify_convergence(const SimConfig& config) {
    SimConfig local = config;
    local.n_paths = 1000;
    const std::vector<double> dts = {1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512, 1.0 / 1024};
    const auto report = convergence_order(local, dts);

    CsvWriter csv(out_path(config, "convergence.csv"), metadata_lines(config, "verify"),
                  {"dt", "rms_error", "excluded"});
    for (std::size_t i = 0; i < dts.size(); ++i)
        csv.row({CsvWriter::cell(report.dt_values[i]), CsvWriter::cell(report.rms_errors[i]),
                 CsvWriter::cell(report.excluded[i])});

    Verdict verdict;
    verdict.check = "convergence";
    verdict.fact("slope", report.slope);
    verdict.fact("limit_low", 0.4);
    verdict.fact("limit_high", 1.1);
    verdict.fact("n_paths", static_cast<double>(local.n_paths));
    verdict.require(report.slope >= 0.4 && report.slope <= 1.1);
    return write_verdict(config, verdict);
}

int cmd_verify(const SimConfig& config, const std::string& check) {
    if (check == "minimax") return verify_minimax(config);
    if (check == "corners") return verify_corners(config);
    if (check == "mixture") return verify_mixture(config);
    if (check == "moments") return verify_moments(config);
    if (check == "convergence") return verify_convergence(config);
    throw ConfigError("unknown check '" + check +
                      "'; expected minimax|corners|mixture|moments|convergence");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc >= 2) {
        const std::string first = argv[1];
        if (first == "-h" || first == "--help" || first == "help") {
            print_usage(std::cout);
            return kExitOk;
        }
    }
    try {
        const CliArgs args = parse_args(argc, argv);
        const SimConfig config = load_config(args);
        if (args.command == "simulate") return cmd_simulate(config, args.trajectories);
        if (args.command == "policy") return cmd_policy(config);
        if (args.command == "value") return cmd_value(config);
        if (args.command == "verify") return cmd_verify(config, args.check);
        throw ConfigError("unknown command '" + args.command + "'");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        print_usage(std::cerr);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}
