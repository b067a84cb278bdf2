#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qscatter/cli/commands.h"
#include "qscatter/cli/config.h"

namespace qscatter::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("qscatter_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }

    std::string write(const std::string &name, const std::string &text) {
        auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    std::string read(const std::string &name) const {
        std::ifstream in(dir_ / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    int run(const std::string &command, const std::string &config, const std::string &out = "out", int threads = 1) {
        GlobalOptions o;
        o.config_path = config;
        o.out_dir = (dir_ / out).string();
        o.threads = threads;
        log_.str("");
        return run_command(command, o, log_);
    }

    std::vector<std::vector<std::string>> csv_rows(const std::string &name) const {
        std::vector<std::vector<std::string>> rows;
        std::istringstream in(read(name));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') {
                continue;
            }
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) {
                cells.push_back(cell);
            }
            rows.push_back(cells);
        }
        return rows;
    }

    fs::path dir_;
    std::ostringstream log_;
};

const char *kFree =
    "n = 8\n"
    "gamma = 0.012665147955292222\n"
    "dtau = 2e-4\n"
    "K0 = 32, 40\n"
    "sigma_K_ratio = 0.05\n"
    "xi0 = -0.25\n"
    "potential.kind = zero\n";

TEST_F(CliTest, SimulateFreeParticle) {
    auto cfg = write("free.conf", kFree);
    ASSERT_EQ(run("simulate", cfg), kExitOk) << log_.str();
    auto text = read("out/simulate.csv");
    EXPECT_EQ(text.rfind("# qscatter simulate csv v1", 0), 0u);
    auto rows = csv_rows("out/simulate.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0][0], "K0");
    for (std::size_t i = 1; i < rows.size(); i++) {
        EXPECT_NEAR(std::stod(rows[i][2]), 1.0, 1e-9);
        EXPECT_EQ(rows[i][7], "exact");
    }
}

TEST_F(CliTest, ReproducibleAndThreadIndependent) {
    auto cfg = write("free.conf", kFree);
    ASSERT_EQ(run("simulate", cfg, "a", 1), kExitOk);
    ASSERT_EQ(run("simulate", cfg, "b", 1), kExitOk);
    ASSERT_EQ(run("simulate", cfg, "c", 2), kExitOk);
    EXPECT_EQ(read("a/simulate.csv"), read("b/simulate.csv"));
    EXPECT_EQ(read("a/simulate.csv"), read("c/simulate.csv"));
}

TEST_F(CliTest, ManifestNamesConfigHash) {
    auto cfg = write("free.conf", kFree);
    ASSERT_EQ(run("simulate", cfg), kExitOk);
    auto m = nlohmann::json::parse(read("out/simulate.manifest.json"));
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(ConfigFile::load(cfg).canonical_text())));
    EXPECT_EQ(m["config_hash"], std::string("fnv1a64:") + buf);
    EXPECT_EQ(m["command"], "simulate");
    EXPECT_EQ(m["tool_version"], kVersion);
    EXPECT_FALSE(m["outputs"].empty());
}

TEST_F(CliTest, MissingGammaIsConfigError) {
    auto cfg = write("bad.conf", "n = 8\ndtau = 1e-4\nK0 = 32\npotential.kind = zero\n");
    EXPECT_EQ(run("simulate", cfg), kExitConfig);
    EXPECT_NE(log_.str().find("bad.conf:4: missing required key 'gamma'"), std::string::npos) << log_.str();
}

TEST_F(CliTest, ConfigErrorsCarryLineNumbers) {
    auto cfg = write("bad.conf", "n = 8\ngamma = 1\ndtau = fast\nK0 = 32\npotential.kind = zero\n");
    EXPECT_EQ(run("simulate", cfg), kExitConfig);
    EXPECT_NE(log_.str().find("bad.conf:3:"), std::string::npos) << log_.str();

    auto unknown = write("unknown.conf", std::string(kFree) + "colour = blue\n");
    EXPECT_EQ(run("simulate", unknown), kExitConfig);
    EXPECT_NE(log_.str().find("unknown.conf:8:"), std::string::npos) << log_.str();

    auto dup = write("dup.conf", "n = 8\nn = 9\n");
    EXPECT_EQ(run("simulate", dup), kExitConfig);
    EXPECT_EQ(run("simulate", (dir_ / "absent.conf").string()), kExitConfig);
}

TEST_F(CliTest, JsonConfigMatchesText) {
    auto text_cfg = write("free.conf", kFree);
    auto json_cfg = write("free.json",
                          R"({"n": 8, "gamma": 0.012665147955292222, "dtau": 2e-4, "K0": [32, 40],
                              "sigma_K_ratio": 0.05, "xi0": -0.25, "potential": {"kind": "zero"}})");
    ASSERT_EQ(run("simulate", text_cfg, "t"), kExitOk);
    ASSERT_EQ(run("simulate", json_cfg, "j"), kExitOk) << log_.str();
    EXPECT_EQ(read("t/simulate.csv"), read("j/simulate.csv"));
}

TEST_F(CliTest, PreconditionFailure) {
    auto cfg = write("overlap.conf",
                     "n = 8\ngamma = 0.0127\ndtau = 1e-4\nK0 = 32\nxi0 = -0.25\n"
                     "potential.kind = barrier\npotential.height = 10\npotential.width = 0.8\n");
    EXPECT_EQ(run("simulate", cfg), kExitPrecondition) << log_.str();
}

TEST_F(CliTest, OracleDeltaGrid) {
    auto cfg = write("oracle.conf",
                     "potential.kind = delta\ngrid.variable = eta\ngrid.values = 0.5, 1, 2\nk = 1\nphase_shifts = true\n");
    ASSERT_EQ(run("oracle", cfg), kExitOk) << log_.str();
    auto rows = csv_rows("out/oracle.csv");
    ASSERT_EQ(rows.size(), 4u);
    const double expected[] = {0.8, 0.5, 0.2};
    for (int i = 0; i < 3; i++) {
        EXPECT_NEAR(std::stod(rows[i + 1][7]), expected[i], 1e-12);
        EXPECT_NEAR(std::stod(rows[i + 1][11]), 0, 1e-12);
    }
}

TEST_F(CliTest, OracleAsymmetricPhaseShifts) {
    auto cfg = write("asym.conf",
                     "potential.kind = delta\npotential.strength = 2\npotential.center = 0.3\n"
                     "grid.variable = k\ngrid.values = 1, 2\nphase_shifts = true\n");
    EXPECT_EQ(run("oracle", cfg), kExitPrecondition) << log_.str();
}

TEST_F(CliTest, CompareFreePassesAndCoarseStepFails) {
    auto free = write("free.conf", kFree);
    ASSERT_EQ(run("compare", free), kExitOk) << log_.str();
    auto report = nlohmann::json::parse(read("out/compare.json"));
    EXPECT_TRUE(report["pass"].get<bool>());

    auto coarse = write("coarse.conf",
                        "n = 8\ngamma = 0.012665147955292222\ndtau = 2e-3\nK0 = 64\nsigma_K_ratio = 0.05\nxi0 = -0.25\n"
                        "potential.kind = delta\npotential.eta = 1\n");
    EXPECT_EQ(run("compare", coarse, "coarse"), kExitTolerance);
    auto failed = nlohmann::json::parse(read("coarse/compare.json"));
    EXPECT_FALSE(failed["pass"].get<bool>());
}

TEST_F(CliTest, PulseConvergenceDecreases) {
    auto cfg = write("fig8.conf",
                     "potential.kind = barrier\npotential.height = 1\npotential.width = 1\n"
                     "energy = 0.7071067811865476\nscan.mode = pulse-convergence\nscan.pulses = 25, 50, 100, 200\n");
    ASSERT_EQ(run("scan", cfg), kExitOk) << log_.str();
    auto rows = csv_rows("out/scan-pulse-convergence.csv");
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 2; i < rows.size(); i++) {
        EXPECT_LT(std::stod(rows[i][1]), std::stod(rows[i - 1][1]));
    }
    EXPECT_TRUE(fs::exists(dir_ / "out/scan-pulse-convergence.manifest.json"));
}

TEST_F(CliTest, UsageErrors) {
    std::vector<std::string> args{"qscatter", "simulate"};
    std::vector<char *> argv;
    for (auto &a : args) {
        argv.push_back(a.data());
    }
    EXPECT_EQ(main_cli(static_cast<int>(argv.size()), argv.data()), kExitUsage);
    auto cfg = write("free.conf", kFree);
    EXPECT_EQ(run("bogus", cfg), kExitUsage);
}

TEST(ConfigFile, Parsing) {
    auto c = ConfigFile::parse("a = 1 # trailing\nb: x, y\n\n# comment\nlist = 1, 2, 3\n", "mem");
    EXPECT_EQ(c.get_int("a"), 1);
    EXPECT_EQ(c.get_int_list("list"), (std::vector<std::int64_t>{1, 2, 3}));
    EXPECT_FALSE(c.has("c"));
    EXPECT_EQ(c.get_double("c", 2.5), 2.5);
    EXPECT_THROW(c.get_double("b"), ConfigError);
    EXPECT_THROW(ConfigFile::parse("novalue\n", "mem"), ConfigError);
}

TEST(ParallelFor, RunsEveryIndexAndRethrows) {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (int h : hits) {
        EXPECT_EQ(h, 1);
    }
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7) {
                         throw std::runtime_error("boom");
                     }
                 }),
                 std::runtime_error);
}

}  // namespace
}  // namespace qscatter::cli
