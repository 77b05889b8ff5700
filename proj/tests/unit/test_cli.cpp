// End-to-end checks of the command-line contract: exit codes, config
// diagnostics, and the selector-mode row diff. Binary and config locations
// are baked in by the build.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliEnv {
    std::string cli;
    std::string cfg;
    bool available() const {
        return !cli.empty() && !cfg.empty() && fs::exists(cli) && fs::exists(cfg);
    }
};

CliEnv cli_env() {
#if defined(RMERTON_CLI_PATH) && defined(RMERTON_CFG_PATH)
    return {RMERTON_CLI_PATH, RMERTON_CFG_PATH};
#else
    const char* cli = std::getenv("RMERTON_CLI");
    const char* cfg = std::getenv("RMERTON_CFG");
    return {cli ? cli : "", cfg ? cfg : ""};
#endif
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "rmerton_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, MissingRequiredKeyExitsTwoAndNamesIt) {
    const auto env = cli_env();
    if (!env.available()) GTEST_SKIP() << "RMERTON_CLI/RMERTON_CFG not set";
    const auto dir = scratch_dir();
    // reference config with the seed line removed
    std::istringstream in(slurp(env.cfg));
    std::ofstream out(dir / "missing_seed.cfg", std::ios::binary);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("seed", 0) != 0) out << line << "\n";
    out.close();

    const auto err_file = dir / "stderr.txt";
    const int code = run("\"" + env.cli + "\" simulate --config \"" +
                         (dir / "missing_seed.cfg").string() + "\" --out \"" +
                         (dir / "o1").string() + "\" 2> \"" + err_file.string() + "\"");
    EXPECT_EQ(code, 2);
    EXPECT_NE(slurp(err_file).find("seed"), std::string::npos);
}

TEST(Cli, InvalidCountsExitTwo) {
    const auto env = cli_env();
    if (!env.available()) GTEST_SKIP() << "RMERTON_CLI/RMERTON_CFG not set";
    const auto dir = scratch_dir();
    const int code = run("\"" + env.cli + "\" simulate --config \"" + env.cfg +
                         "\" --set n_paths=0 --out \"" + (dir / "o2").string() +
                         "\" >/dev/null 2>&1");
    EXPECT_EQ(code, 2);
}

TEST(Cli, UnknownCheckAndCommandExitTwo) {
    const auto env = cli_env();
    if (!env.available()) GTEST_SKIP() << "RMERTON_CLI/RMERTON_CFG not set";
    EXPECT_EQ(run("\"" + env.cli + "\" verify nonsense --config \"" + env.cfg +
                  "\" >/dev/null 2>&1"),
              2);
    EXPECT_EQ(run("\"" + env.cli + "\" frobnicate --config \"" + env.cfg +
                  "\" >/dev/null 2>&1"),
              2);
}

TEST(Cli, PolicyModeTogglesOnlyOutOfBandRows) {
    const auto env = cli_env();
    if (!env.available()) GTEST_SKIP() << "RMERTON_CLI/RMERTON_CFG not set";
    const auto dir = scratch_dir();
    // narrow eta bands so the baseline paths cross out of band regularly
    const std::string base = "\"" + env.cli + "\" policy --config \"" + env.cfg +
                             "\" --set n_paths=40 --set eta_sigma_min=0.03"
                             " --set eta_sigma_max=0.05 --set eta_mu_max=0.015 ";
    ASSERT_EQ(run(base + "--mode paper --out \"" + (dir / "paper").string() +
                  "\" >/dev/null 2>&1"),
              0);
    ASSERT_EQ(run(base + "--mode sign-logic --out \"" + (dir / "sign").string() +
                  "\" >/dev/null 2>&1"),
              0);

    const auto parse_rows = [](const fs::path& path) {
        std::istringstream in(slurp(path));
        std::vector<std::vector<std::string>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("path_index", 0) == 0) continue;
            std::vector<std::string> cells;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            rows.push_back(cells);
        }
        return rows;
    };
    const auto paper_rows = parse_rows(dir / "paper" / "policy.csv");
    const auto sign_rows = parse_rows(dir / "sign" / "policy.csv");
    ASSERT_EQ(paper_rows.size(), sign_rows.size());
    ASSERT_GT(paper_rows.size(), 0u);

    // columns: 0 path, 1 t, 2 mu, 3 nu, 4 mu_band, 5 mu_vs_r, 6 nu_band,
    // 7..10 corner, 11 mode
    int differing = 0;
    for (std::size_t i = 0; i < paper_rows.size(); ++i) {
        const auto& a = paper_rows[i];
        const auto& b = sign_rows[i];
        for (int c = 0; c <= 6; ++c) ASSERT_EQ(a[c], b[c]) << "row " << i;  // same states
        const bool corner_differs = a[7] != b[7] || a[8] != b[8] || a[9] != b[9] || a[10] != b[10];
        const bool in_band = a[4] == "in_band" && a[6] == "in_band";
        if (corner_differs) {
            ++differing;
            EXPECT_FALSE(in_band) << "row " << i << " differs while fully in band";
        }
    }
    EXPECT_GT(differing, 0) << "expected at least one out-of-band decision to differ";
}

TEST(Cli, VerifyExitCodeReflectsVerdict) {
    const auto env = cli_env();
    if (!env.available()) GTEST_SKIP() << "RMERTON_CLI/RMERTON_CFG not set";
    const auto dir = scratch_dir();
    EXPECT_EQ(run("\"" + env.cli + "\" verify mixture --config \"" + env.cfg +
                  "\" --set n_paths=500 --out \"" + (dir / "vm").string() +
                  "\" >/dev/null 2>&1"),
              0);
}
