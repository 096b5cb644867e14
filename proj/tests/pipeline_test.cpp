// SPDX-License-Identifier: Apache-2.0
//
// hypersim: simulator and control stack for programmable wireless environments
// Copyright (C) 2026 the hypersim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "hypersim/errors.hpp"
#include "hypersim/pipeline.hpp"
#include "hypersim/scenario.hpp"

using namespace hypersim;
namespace fs = std::filesystem;

namespace {

struct ScopedDir {
    fs::path path;
    explicit ScopedDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScopedDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Coated floor at y=0, bare divider between a and b. The a->b link has to
// bounce; a->c has a clear direct line.
const char* kRoom = R"({
  "interior_point": [1.0, 0.9],
  "walls": [
    {"id": 0, "a": [0.0, 0.0], "b": [4.0, 0.0], "coated": true},
    {"id": 1, "a": [2.0, 0.5], "b": [2.0, 1.5], "coated": false}
  ],
  "devices": [
    {"id": "a", "position": [0.5, 1.0], "role": "TX",
     "tx_power_dbm": 20.0, "frequency_hz": 2.4e9},
    {"id": "b", "position": [3.5, 1.0], "role": "RX", "frequency_hz": 2.4e9},
    {"id": "c", "position": [0.5, 2.5], "role": "RX", "frequency_hz": 2.4e9}
  ],
  "objectives": [
    {"kind": "LINK_OPTIMIZE", "src": "a", "dst": "b"},
    {"kind": "LINK_OPTIMIZE", "src": "a", "dst": "c"}
  ]
})";

// Same scene without the coating: a->b has no route at all.
const char* kDeadRoom = R"({
  "interior_point": [1.0, 0.9],
  "walls": [
    {"id": 0, "a": [0.0, 0.0], "b": [4.0, 0.0], "coated": false},
    {"id": 1, "a": [2.0, 0.5], "b": [2.0, 1.5], "coated": false}
  ],
  "devices": [
    {"id": "a", "position": [0.5, 1.0], "role": "TX",
     "tx_power_dbm": 20.0, "frequency_hz": 2.4e9},
    {"id": "b", "position": [3.5, 1.0], "role": "RX", "frequency_hz": 2.4e9},
    {"id": "c", "position": [0.5, 2.5], "role": "RX", "frequency_hz": 2.4e9}
  ],
  "objectives": [
    {"kind": "LINK_OPTIMIZE", "src": "a", "dst": "b"},
    {"kind": "LINK_OPTIMIZE", "src": "a", "dst": "c"}
  ]
})";

std::string strip_wall_clock(const std::string& report) {
    std::istringstream in(report);
    std::string out, line;
    while (std::getline(in, line))
        if (line.find("\"wall_clock_s\"") == std::string::npos) out += line + "\n";
    return out;
}

} // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("fnv1a matches the reference vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("hash_file hashes the raw bytes") {
    ScopedDir dir("hypersim_test_hash");
    const auto file = dir.path / "blob.bin";
    atomic_write(file, "a");
    CHECK(hash_file(file) == fnv1a_hex("a"));
    CHECK_THROWS_AS((void)hash_file(dir.path / "missing.bin"), ParseError);
}

TEST_CASE("atomic_write leaves no temp file behind") {
    ScopedDir dir("hypersim_test_atomic");
    const auto file = dir.path / "out.txt";
    atomic_write(file, "first version, longer");
    atomic_write(file, "second");
    CHECK(slurp(file) == "second");
    CHECK_FALSE(fs::exists(dir.path / "out.txt.tmp"));
}

TEST_CASE("simulate serves both links and writes artifacts") {
    ScopedDir dir("hypersim_test_run");
    const auto scenario = parse_scenario(kRoom);
    RunParams params;
    params.scenario_hash = "feedface00000000";
    params.out_dir = dir.path;

    const auto result = run_simulate(scenario, params);
    CHECK(result.exit_code == 0);
    CHECK(result.scenario_hash == "feedface00000000");

    // One steer command on the floor tile below the midpoint of a->b.
    REQUIRE(result.commands.size() == 1);
    CHECK(result.commands[0].tile_id == 3);
    CHECK(result.commands[0].fn.kind == EmKind::Steer);

    REQUIRE(result.outcomes.size() == 2);
    const auto& bounce = result.outcomes[0];
    CHECK(bounce.status == "SATISFIED");
    CHECK(bounce.tiles_claimed == 1);
    REQUIRE(bounce.path.has_value());
    CHECK(bounce.path->tiles == std::vector<int>{3});
    CHECK(bounce.path->segment_lengths.size() == 2);
    CHECK(bounce.path->total_length ==
          doctest::Approx(std::sqrt(2.5625) + std::sqrt(4.0625)));
    REQUIRE(bounce.received.has_value());
    CHECK(std::isfinite(bounce.received->coherent_dbm));
    REQUIRE(bounce.delay_spread_s.has_value());
    CHECK(*bounce.delay_spread_s >= 0.0);
    CHECK(bounce.pdp_csv == "pdp_0.csv");

    const auto& direct = result.outcomes[1];
    CHECK(direct.status == "SATISFIED");
    CHECK(direct.tiles_claimed == 0);
    REQUIRE(direct.path.has_value());
    CHECK(direct.path->tiles.empty());
    CHECK(direct.pdp_csv == "pdp_1.csv");

    // All commands land on wall 0. The wall is an 8-tile chain headed by
    // tile 0, so one wave out and back takes 2x7 rounds.
    REQUIRE(result.disseminations.size() == 1);
    CHECK(result.disseminations[0].wall_id == 0);
    CHECK(result.disseminations[0].representative == 0);
    CHECK(result.disseminations[0].rounds == 14);
    CHECK(result.disseminations[0].acks_complete);
    CHECK(result.disseminations[0].commands == 1);

    CHECK(slurp(dir.path / "pdp_0.csv").rfind("delay_s,power_w\n", 0) == 0);
    CHECK(fs::exists(dir.path / "pdp_1.csv"));
    REQUIRE(result.frame_trace == "frames.jsonl");
    std::istringstream frames(slurp(dir.path / "frames.jsonl"));
    std::string line;
    int lines = 0;
    while (std::getline(frames, line)) {
        const auto ev = nlohmann::json::parse(line);
        CHECK(ev.contains("wall"));
        CHECK(ev.contains("round"));
        CHECK(ev.contains("from"));
        CHECK(ev.contains("to"));
        CHECK(ev.contains("type"));
        CHECK(ev.contains("seq"));
        ++lines;
    }
    CHECK(lines > 0);
}

TEST_CASE("artifact writing can be turned off") {
    ScopedDir dir("hypersim_test_dryrun");
    const auto scenario = parse_scenario(kRoom);
    RunParams params;
    params.out_dir = dir.path;
    params.write_artifacts = false;
    const auto result = run_simulate(scenario, params);
    CHECK(result.exit_code == 0);
    CHECK(result.frame_trace.empty());
    for (const auto& outcome : result.outcomes) CHECK(outcome.pdp_csv.empty());
    CHECK_FALSE(fs::exists(dir.path / "frames.jsonl"));
    CHECK_FALSE(fs::exists(dir.path / "pdp_0.csv"));
}

TEST_CASE("an unservable objective does not poison the rest") {
    const auto scenario = parse_scenario(kDeadRoom);
    RunParams params;
    params.write_artifacts = false;
    const auto result = run_simulate(scenario, params);
    CHECK(result.exit_code == 2);
    REQUIRE(result.outcomes.size() == 2);
    CHECK(result.outcomes[0].status == "NO_PATH");
    CHECK_FALSE(result.outcomes[0].path.has_value());
    CHECK_FALSE(result.outcomes[0].received.has_value());
    CHECK(result.outcomes[1].status == "SATISFIED");
    REQUIRE(result.outcomes[1].received.has_value());
    CHECK(std::isfinite(result.outcomes[1].received->coherent_dbm));
    CHECK(result.commands.empty());
    CHECK(result.disseminations.empty());
}

TEST_CASE("report json carries the run facts") {
    const auto scenario = parse_scenario(kRoom);
    RunParams params;
    params.scenario_hash = "0123456789abcdef";
    params.write_artifacts = false;
    const auto result = run_simulate(scenario, params);
    const auto report = report_json(scenario, params, result);

    const auto doc = nlohmann::json::parse(report);
    CHECK(doc.at("schema") == "hypersim-report-v1");
    CHECK(doc.at("scenario_hash") == "0123456789abcdef");
    CHECK(doc.at("parameters").at("budget") == 20000);
    CHECK(doc.at("command_count") == 1);
    CHECK(doc.at("commands")[0].at("tile") == 3);
    CHECK(doc.at("commands")[0].at("kind") == "STEER");

    const auto& objectives = doc.at("objectives");
    REQUIRE(objectives.size() == 2);
    CHECK(objectives[0].at("label") == "LINK_OPTIMIZE:a->b");
    CHECK(objectives[0].at("status") == "SATISFIED");
    const auto nodes = objectives[0].at("path").at("nodes");
    REQUIRE(nodes.size() == 3);
    CHECK(nodes[0] == "a");
    CHECK(nodes[1] == 3);
    CHECK(nodes[2] == "b");
    CHECK(objectives[0].at("received_dbm").at("coherent").is_number());

    CHECK(doc.at("dissemination")[0].at("wall") == 0);
    CHECK(doc.contains("wall_clock_s"));
    CHECK(report.back() == '\n');
}

TEST_CASE("no_path objectives report without power fields") {
    const auto scenario = parse_scenario(kDeadRoom);
    RunParams params;
    params.write_artifacts = false;
    const auto result = run_simulate(scenario, params);
    const auto doc = nlohmann::json::parse(report_json(scenario, params, result));
    CHECK(doc.at("objectives")[0].at("status") == "NO_PATH");
    CHECK_FALSE(doc.at("objectives")[0].contains("received_dbm"));
    CHECK_FALSE(doc.at("objectives")[0].contains("path"));
}

TEST_CASE("reports differ only in wall clock across reruns") {
    const auto scenario = parse_scenario(kRoom);
    RunParams params;
    params.write_artifacts = false;
    params.seed = 42;
    const auto first = run_simulate(scenario, params);
    const auto second = run_simulate(scenario, params);
    const auto report_a = report_json(scenario, params, first);
    const auto report_b = report_json(scenario, params, second);
    CHECK(strip_wall_clock(report_a) == strip_wall_clock(report_b));
}

TEST_CASE("lookup table round trips through the run") {
    ScopedDir dir("hypersim_test_table");
    const auto scenario = parse_scenario(kRoom);
    RunParams params;
    params.write_artifacts = false;
    params.table_path = dir.path / "table.json";

    const auto first = run_simulate(scenario, params);
    REQUIRE(fs::exists(params.table_path));

    // A rerun with a budget the search could never accept has to come
    // entirely from the table.
    RunParams cheap = params;
    cheap.budget = 1;
    const auto second = run_simulate(scenario, cheap);
    REQUIRE(second.commands.size() == first.commands.size());
    for (size_t i = 0; i < first.commands.size(); ++i) {
        CHECK(second.commands[i].tile_id == first.commands[i].tile_id);
        CHECK(second.commands[i].config.bit_string() ==
              first.commands[i].config.bit_string());
    }
}

TEST_SUITE_END();
