// Copyright 2026 The cmispread Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cmispread;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("cmispread_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, spread_writes_csv_and_manifest) {
    auto r = run({"spread", "--n-blocks", "16", "--m", "2", "--p", "0.05", "--t-max", "5", "--realizations", "3",
                  "--seed", "7", "--out", path("field.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = lines_of(slurp(path("field.csv")));
    ASSERT_EQ(lines.size(), 1u + 5 * 7);
    EXPECT_EQ(lines[0], "t,x,p,m,n_blocks,realizations,mean_cmi_norm,stderr");
    auto manifest = nlohmann::json::parse(slurp(path("field.manifest.json")));
    EXPECT_EQ(manifest["subcommand"], "spread");
    EXPECT_EQ(manifest["seed"], 7);
    EXPECT_EQ(manifest["config"]["n_blocks"], 16);
    ASSERT_EQ(manifest["outputs"].size(), 1u);
    EXPECT_EQ(manifest["outputs"][0], path("field.csv"));
    EXPECT_TRUE(manifest.contains("start") && manifest.contains("end") && manifest.contains("version"));
}

TEST_F(CliTest, noiseless_spread_respects_lightcone) {
    auto r = run({"spread", "--n-blocks", "32", "--m", "2", "--p", "0", "--t-max", "12", "--realizations", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = lines_of(r.out);
    std::size_t inside = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::size_t t = 0, x = 0;
        ASSERT_EQ(std::sscanf(lines[i].c_str(), "%zu,%zu,", &t, &x), 2);
        std::string mean = lines[i].substr(0, lines[i].rfind(','));
        mean = mean.substr(mean.rfind(',') + 1);
        if (x > t) {
            EXPECT_EQ(mean, "0") << lines[i];
        } else if (mean != "0") {
            ++inside;
        }
    }
    EXPECT_GT(inside, 0u);
}

TEST_F(CliTest, outputs_do_not_depend_on_threads_or_reruns) {
    const std::vector<std::vector<std::string>> commands = {
        {"spread", "--n-blocks", "16", "--m", "2", "--p", "0.05", "--t-max", "6", "--realizations", "5"},
        {"fourblock", "--m", "6", "--seeds", "6"},
        {"ansatz", "--n", "12", "--k", "8", "--samples", "20"},
        {"bell", "--n-blocks", "8", "--m", "2", "--p", "0.05", "--trials", "12"},
        {"collapse", "--p-list", "0.125", "--n-blocks", "16", "--m", "2", "--realizations", "6"},
    };
    for (const auto &cmd : commands) {
        auto one = cmd;
        one.insert(one.begin(), {"--threads", "1"});
        auto three = cmd;
        three.insert(three.begin(), {"--threads", "3"});
        auto a = run(one);
        auto b = run(three);
        auto c = run(one);
        ASSERT_EQ(a.code, 0) << cmd[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << cmd[0];
        EXPECT_EQ(a.out, c.out) << cmd[0];
        EXPECT_FALSE(a.out.empty());
    }
}

TEST_F(CliTest, unknown_flag_prints_usage) {
    auto r = run({"spread", "--bogus", "1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"nosuch"}).code, 1);
}

TEST_F(CliTest, help_exits_zero) {
    auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("oracle-check"), std::string::npos);
}

TEST_F(CliTest, invalid_values_are_config_errors) {
    EXPECT_EQ(run({"spread", "--p", "2"}).code, 1);
    EXPECT_EQ(run({"spread", "--n-blocks", "7"}).code, 1);
    EXPECT_EQ(run({"fourblock", "--p", "0.5"}).code, 1);
    EXPECT_EQ(run({"spread", "--out", path("missing/dir/f.csv"), "--n-blocks", "4", "--t-max", "1",
                   "--realizations", "1"})
                  .code,
              1);
    EXPECT_EQ(run({"--threads", "0", "toy"}).code, 1);
}

TEST_F(CliTest, config_file_supplies_defaults) {
    {
        std::ofstream f(path("run.cfg"));
        f << "# sweep\nn_blocks = 8\nm=2\np=0.1\nt-max=3\nrealizations=2\n";
    }
    auto r = run({"--config", path("run.cfg"), "spread", "--t-max", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 1u + 2 * 3);
    EXPECT_NE(lines[1].find(",0.1,2,8,2,"), std::string::npos) << lines[1];

    EXPECT_EQ(run({"--config", path("nope.cfg"), "spread"}).code, 1);
    {
        std::ofstream f(path("bad.cfg"));
        f << "no equals sign\n";
    }
    EXPECT_EQ(run({"--config", path("bad.cfg"), "spread"}).code, 1);
    {
        std::ofstream f(path("unknown.cfg"));
        f << "colour=blue\n";
    }
    EXPECT_EQ(run({"--config", path("unknown.cfg"), "toy", "--seeds", "1"}).code, 1);
}

TEST_F(CliTest, dumps_round_trip) {
    auto r = run({"spread", "--n-blocks", "8", "--m", "2", "--p", "0.1", "--t-max", "4", "--realizations", "2",
                  "--seed", "3", "--out", path("f.csv"), "--dump-errors", path("err_"), "--dump-tableau",
                  path("final.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    CircuitConfig cfg;
    cfg.n_blocks = 8;
    cfg.m = 2;
    cfg.p = 0.1;
    cfg.t_max = 4;
    cfg.x_values = CircuitConfig::full_x_grid(8);
    cfg.realizations = 2;
    cfg.seed = 3;
    auto tab = StabilizerTableau::from_text(slurp(path("final.txt")));
    EXPECT_EQ(tab, evolve_state(cfg, 0, 4));
    for (std::size_t i = 0; i < 2; ++i) {
        auto errors = ErrorConfiguration::from_rle(slurp(path("err_" + std::to_string(i) + ".rle")));
        auto fresh = run_coarse_grained(cfg, i);
        EXPECT_EQ(errors, fresh.errors);
        // Replaying with noise at p = 0 must reproduce the run.
        auto quiet = cfg;
        quiet.p = 0;
        EXPECT_EQ(run_coarse_grained(quiet, i, &errors).cmi, fresh.cmi);
    }
    auto manifest = nlohmann::json::parse(slurp(path("f.manifest.json")));
    EXPECT_EQ(manifest["outputs"].size(), 4u);
}

TEST_F(CliTest, bell_emits_json_lines) {
    auto r = run({"bell", "--n-blocks", "8", "--m", "4", "--p", "0.03125", "--trials", "6", "--seed", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 7u);
    for (std::size_t i = 0; i < 6; ++i) {
        auto j = nlohmann::json::parse(lines[i]);
        EXPECT_EQ(j["trial"], i);
        for (const char *key : {"n_bell", "cmi_pre", "mi_ac_post", "clauses", "seed"}) EXPECT_TRUE(j.contains(key));
        EXPECT_TRUE(j["clauses"]["bound"].get<bool>());
    }
    auto agg = nlohmann::json::parse(lines.back())["aggregate"];
    EXPECT_EQ(agg["trials"], 6);
    EXPECT_EQ(agg["bound_rate"], 1.0);
}

TEST_F(CliTest, toy_csv_shape) {
    auto r = run({"toy", "--seeds", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 23u);
    EXPECT_EQ(lines[0], "p,channel,seed_count,mean_cmi2,stderr");
    EXPECT_EQ(lines[1].substr(0, 15), "0,depolarizing,");
    EXPECT_EQ(lines[2].substr(0, 11), "0,heralded,");
}

TEST_F(CliTest, collapse_writes_one_file_per_rate_and_merged) {
    auto r = run({"collapse", "--p-list", "0.125,0.25", "--n-blocks", "16", "--m", "2", "--realizations", "5",
                  "--out-prefix", path("c_")});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char *name : {"c_p0.125.csv", "c_p0.25.csv", "c_merged.csv", "c_merged.manifest.json"}) {
        EXPECT_TRUE(fs::exists(path(name))) << name;
    }
    auto lines = lines_of(slurp(path("c_p0.125.csv")));
    ASSERT_GT(lines.size(), 5u);
    EXPECT_EQ(lines[4], "p,m,t,t_tilde,x_dec,x_dec_tilde,fit_points,fit_r2,rejected_reason");
    auto manifest = nlohmann::json::parse(slurp(path("c_merged.manifest.json")));
    EXPECT_EQ(manifest["outputs"].size(), 3u);
}

TEST_F(CliTest, oracle_check_passes) {
    auto r = run({"oracle-check", "--circuits", "30", "--max-qubits", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["circuits"], 30);
}

TEST(cli_config, expand_config_places_entries_after_subcommand) {
    fs::path p = fs::temp_directory_path() / "cmispread_expand.cfg";
    {
        std::ofstream f(p);
        f << "m=3\nseed=9\n";
    }
    auto args = cli::expand_config({"--threads", "2", "--config", p.string(), "fourblock", "--seed", "4"});
    std::vector<std::string> expected = {"--threads", "2", "fourblock", "--m=3", "--seed", "4"};
    EXPECT_EQ(args, expected);
    fs::remove(p);
}

TEST(cli_config, manifest_path) {
    EXPECT_EQ(cli::manifest_path_for("out/field.csv"), "out/field.manifest.json");
    EXPECT_EQ(cli::manifest_path_for("a.b/field"), "a.b/field.manifest.json");
}
