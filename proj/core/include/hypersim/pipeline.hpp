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
// ------------------------------------------------------------------------
//
// End-to-end run orchestration shared by the CLI subcommands: control step,
// command dissemination over the wired tile meshes, ray launching with the
// applied configuration, and report/artifact serialization.

#ifndef HYPERSIM_PIPELINE_HPP
#define HYPERSIM_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hypersim/controller.hpp"
#include "hypersim/propagation.hpp"
#include "hypersim/scenario.hpp"
#include "hypersim/tilenet.hpp"

namespace hypersim {

struct RunParams {
    int max_bounces = 3;
    int n_rays = 3600;
    unsigned seed = 0;
    int budget = 20000;
    std::string scenario_hash;        // hash of the scenario file bytes
    std::filesystem::path table_path; // optional: load before, save after
    std::filesystem::path out_dir = ".";
    bool write_artifacts = true; // PDP CSVs and the frame trace
};

struct ObjectiveOutcome {
    Objective objective;
    std::string status; // SATISFIED or NO_PATH
    std::optional<AirPath> path;
    std::optional<ReceivedPower> received;
    std::optional<double> delay_spread_s;
    Pdp pdp;
    std::string pdp_csv;   // artifact name, empty when not written
    int tiles_claimed = 0; // tiles commanded for this objective
};

// Command delivery over one wall's wired mesh.
struct WallDissemination {
    int wall_id = 0;
    int representative = 0;
    int rounds = 0;
    bool acks_complete = false;
    int commands = 0;
    std::vector<TraceEvent> trace;
};

struct RunResult {
    std::string scenario_hash;
    std::vector<ObjectiveOutcome> outcomes;
    std::vector<TileCommand> commands;
    TileFunctionMap functions; // commanded functions after the step
    std::vector<WallDissemination> disseminations;
    std::string frame_trace; // artifact name, empty when not written
    double wall_clock_s = 0.0;
    int exit_code = 0; // 0 all served, 2 when any objective has NO_PATH
};

// 64-bit FNV-1a over raw bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string hash_file(const std::filesystem::path& path);

// Whole pipeline for one scenario. Throws on input errors; NO_PATH outcomes
// are reported per objective instead of thrown.
RunResult run_simulate(const Scenario& scenario, const RunParams& params);

// Report JSON text for a finished run; wall_clock_s is the only
// run-to-run varying field.
std::string report_json(const Scenario& scenario, const RunParams& params,
                        const RunResult& result);

// Write bytes via a sibling temp file and rename, so failures leave no
// partial artifact behind.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

} // namespace hypersim

#endif // HYPERSIM_PIPELINE_HPP
