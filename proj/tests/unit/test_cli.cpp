// Copyright 2026 The ioncat Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <cmath>
#include <random>
#include <sstream>

#include "commands.hpp"

using namespace ioncat;
using namespace ioncat::cli;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = IONCAT_SOURCE_DIR "/configs/";

fs::path scratch_dir(const std::string& name)
{
    std::random_device rd;
    const fs::path p = fs::temp_directory_path() / ("ioncat_test_" + name + "_" + std::to_string(rd()));
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text)
{
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <class F>
Run run(F cmd, const Flags& flags)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cmd(flags, out, err);
    return {code, out.str(), err.str()};
}

Flags with_config(const std::string& path)
{
    Flags f;
    f.config = path;
    return f;
}

} // namespace

TEST_CASE("simulate writes results and a Wigner grid", "[cli]")
{
    const fs::path dir = scratch_dir("sim");
    Flags f = with_config(kConfigs + "multi_cat_n3.json");
    f.out = dir.string();
    f.jobs = 2;
    const Run r = run(cmd_simulate, f);
    INFO(r.err);
    REQUIRE(r.code == kExitOk);
    CHECK(fs::exists(dir / "result.json"));
    CHECK(fs::exists(dir / "branches.csv"));
    CHECK(fs::exists(dir / "wigner_all_excited.json"));
    const std::string csv = slurp(dir / "wigner_all_excited.csv");
    CHECK(csv.rfind("x,p,w\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 201 * 201 + 1);
    const auto env = io::json::parse(slurp(dir / "wigner_all_excited.json"));
    CHECK(env["metadata"]["N"] == 3);
    CHECK(env["metadata"]["alpha_abs"] == 3.0);

    // The wigner subcommand rebuilds a grid from the saved result.
    const fs::path wcfg = write_config(dir, "w.json",
                                       R"({"state_file": ")" + (dir / "result.json").string() +
                                           R"(", "branch": "all_excited", "x": [-1, 1], "p": [-1, 1], "points": 3})");
    const Run w = run(cmd_wigner, with_config(wcfg.string()));
    INFO(w.err);
    CHECK(w.code == kExitOk);
    CHECK(w.out.rfind("x,p,w\n", 0) == 0);
    const fs::path wnobranch = write_config(dir, "w2.json",
                                            R"({"state_file": ")" + (dir / "result.json").string() +
                                                R"(", "x": [-1, 1], "p": [-1, 1], "points": 3})");
    CHECK(run(cmd_wigner, with_config(wnobranch.string())).code == kExitInvalid);
    fs::remove_all(dir);
}

TEST_CASE("simulate output is byte-identical across runs", "[cli]")
{
    for (const char* name : {"entangled_cat_n3.json", "cat_deterministic_n3.json", "sequence_example.json"}) {
        CAPTURE(name);
        const Run a = run(cmd_simulate, with_config(kConfigs + name));
        const Run b = run(cmd_simulate, with_config(kConfigs + name));
        REQUIRE(a.code == kExitOk);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
    Flags seeded = with_config(kConfigs + "cat_deterministic_n3.json");
    seeded.seed = 5;
    const Run s1 = run(cmd_simulate, seeded);
    const Run s2 = run(cmd_simulate, seeded);
    CHECK(s1.out == s2.out);
    CHECK(s1.out != run(cmd_simulate, with_config(kConfigs + "cat_deterministic_n3.json")).out);
}

TEST_CASE("simulate cat_deterministic reports complementary branches", "[cli]")
{
    const Run r = run(cmd_simulate, with_config(kConfigs + "cat_deterministic_n3.json"));
    REQUIRE(r.code == kExitOk);
    const auto j = io::json::parse(r.out);
    REQUIRE(j["branches"].size() == 2);
    const double sum = j["branches"][0]["probability"].get<double>() + j["branches"][1]["probability"].get<double>();
    CHECK_THAT(sum, WithinAbs(1.0, 1e-9));
    const auto& counts = j["samples"][0]["counts"];
    CHECK(counts["all_excited"].get<int>() + counts["all_ground"].get<int>() + counts["other"].get<int>() == 10000);
}

TEST_CASE("simulate exit codes", "[cli]")
{
    const Run trunc = run(cmd_simulate, with_config(kConfigs + "truncation_too_small.json"));
    CHECK(trunc.code == kExitTruncation);
    CHECK_THAT(trunc.err, ContainsSubstring("n_max"));

    const fs::path dir = scratch_dir("bad");
    const fs::path unknown = write_config(dir, "u.json", R"({"protocol": "multi_cat", "ions": 1,
        "alpha_target": [0, 1], "lasers": {"rabi": 1, "eta": 0.1}, "extra": 1})");
    CHECK(run(cmd_simulate, with_config(unknown.string())).code == kExitInvalid);
    CHECK(run(cmd_simulate, with_config((dir / "missing.json").string())).code == kExitInvalid);
    const fs::path broken = write_config(dir, "b.json", "{ not json");
    CHECK(run(cmd_simulate, with_config(broken.string())).code == kExitInvalid);
    const fs::path order = write_config(dir, "o.json", R"({"protocol": "sequence", "ions": 1, "n_max": 20,
        "pulses": [{"kind": "resonant_bichromatic", "order": 3, "rabi": 1, "eta": 0.1, "duration": 1, "phase": 0}]})");
    CHECK(run(cmd_simulate, with_config(order.string())).code == kExitInvalid);
    const fs::path nowhere = write_config(dir, "n.json", R"({"protocol": "multi_cat", "ions": 1,
        "alpha_target": [0, 1], "lasers": {"rabi": 1, "eta": 0.1},
        "wigner": {"branch": "all_excited", "x": [-1, 1], "p": [-1, 1], "points": 3}})");
    CHECK(run(cmd_simulate, with_config(nowhere.string())).code == kExitInvalid);
    Flags badfmt = with_config(kConfigs + "entangled_cat_n3.json");
    badfmt.format = "xml";
    CHECK(run(cmd_simulate, badfmt).code == kExitInvalid);
    fs::remove_all(dir);
}

TEST_CASE("simulate csv format", "[cli]")
{
    Flags f = with_config(kConfigs + "entangled_cat_n3.json");
    f.format = "csv";
    const Run r = run(cmd_simulate, f);
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("label,basis,probability,ideal_fidelity\nx_plus,x,", 0) == 0);
}

TEST_CASE("validate exit codes", "[cli]")
{
    Flags f;
    f.quick = true;
    const Run ok = run(cmd_validate, f);
    CHECK(ok.code == kExitOk);
    CHECK_THAT(ok.err, ContainsSubstring("worst fidelity"));
    CHECK_THAT(ok.out, ContainsSubstring("PASS"));

    f.negative_control = true;
    const Run bad = run(cmd_validate, f);
    CHECK(bad.code == kExitFailure);
    CHECK_THAT(bad.err, ContainsSubstring("worst fidelity 0."));
    CHECK_THAT(bad.out, ContainsSubstring("FAIL"));

    Flags j;
    j.quick = true;
    j.format = "json";
    const auto doc = io::json::parse(run(cmd_validate, j).out);
    CHECK(doc["pass"] == true);
    CHECK(doc["checks"].size() == 12);
}

TEST_CASE("sweep", "[cli]")
{
    const Run n = run(cmd_sweep, with_config(kConfigs + "sweep_postselect_n.json"));
    INFO(n.err);
    REQUIRE(n.code == kExitOk);
    std::istringstream lines(n.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "N,N,alpha_abs,eta,delta,n_max,P_all_excited,F_all_excited,P_all_ground,F_all_ground");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        ++rows;
        std::vector<std::string> cells;
        std::istringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) {
            cells.push_back(cell);
        }
        REQUIRE(cells.size() >= 7);
        const double p = std::stod(cells[6]);
        CHECK_THAT(p * std::pow(2.0, rows), WithinAbs(1.0, 0.1));
    }
    CHECK(rows == 5);

    Flags threaded = with_config(kConfigs + "sweep_postselect_n.json");
    threaded.jobs = 3;
    CHECK(run(cmd_sweep, threaded).out == n.out);

    CHECK(run(cmd_sweep, with_config(kConfigs + "sweep_empty.json")).code == kExitInvalid);

    Flags eta = with_config(kConfigs + "sweep_eta_dispersive.json");
    eta.format = "json";
    const Run e = run(cmd_sweep, eta);
    REQUIRE(e.code == kExitOk);
    const auto doc = io::json::parse(e.out);
    REQUIRE(doc["rows"].size() == 3);
    const double f0 = doc["rows"][0]["dispersive_fidelity"].get<double>();
    const double f1 = doc["rows"][1]["dispersive_fidelity"].get<double>();
    const double f2 = doc["rows"][2]["dispersive_fidelity"].get<double>();
    CHECK(f0 < f1);
    CHECK(f1 < f2);

    const fs::path dir = scratch_dir("sweep");
    Flags out = with_config(kConfigs + "sweep_postselect_n.json");
    out.out = dir.string();
    CHECK(run(cmd_sweep, out).code == kExitOk);
    CHECK(slurp(dir / "sweep.csv") == n.out);
    fs::remove_all(dir);
}
