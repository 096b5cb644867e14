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

#include "hypersim/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hypersim/errors.hpp"

namespace hypersim {

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fnv1a_hex(buffer.str());
}

void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ParseError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw ParseError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string pdp_csv_text(const Pdp& pdp) {
    std::string out = "delay_s,power_w\n";
    char buf[80];
    for (const PdpTap& tap : pdp.taps) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", tap.delay_s, tap.power_w);
        out += buf;
    }
    return out;
}

std::string trace_jsonl(const std::vector<WallDissemination>& walls) {
    std::string out;
    for (const WallDissemination& w : walls) {
        for (const TraceEvent& ev : w.trace) {
            nlohmann::json line;
            line["wall"] = w.wall_id;
            line["round"] = ev.round;
            line["from"] = ev.from;
            line["to"] = ev.to;
            line["type"] = std::string(to_string(ev.type));
            line["seq"] = ev.seq;
            out += line.dump();
            out += '\n';
        }
    }
    return out;
}

} // namespace

RunResult run_simulate(const Scenario& scenario, const RunParams& params) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult result;
    result.scenario_hash = params.scenario_hash;

    ControllerConfig cfg;
    cfg.max_bounces = params.max_bounces;
    cfg.n_rays = params.n_rays;
    cfg.compile_budget = params.budget;
    cfg.rng_seed = params.seed;

    LookupTable table;
    if (!params.table_path.empty() && std::filesystem::exists(params.table_path))
        table = LookupTable::load(params.table_path);

    Controller controller(scenario.plan, cfg, std::move(table));
    StepResult step = controller.control_step(scenario.objectives);
    result.commands = step.commands;
    result.functions = controller.state();

    // Southbound: deliver each wall's command batch over its wired mesh.
    std::map<int, std::vector<TileCommand>> per_wall;
    for (const TileCommand& cmd : step.commands) {
        const Tile* tile = scenario.plan.tile(cmd.tile_id);
        per_wall[tile->wall_id].push_back(cmd);
    }
    for (const auto& [wall_id, batch] : per_wall) {
        TileObject object = TileObject::for_wall(scenario.plan, wall_id);
        DisseminateResult d = object.disseminate(batch);
        WallDissemination w;
        w.wall_id = wall_id;
        w.representative = object.representative();
        w.rounds = d.rounds;
        w.acks_complete = d.acks_complete;
        w.commands = static_cast<int>(batch.size());
        w.trace = std::move(d.trace);
        result.disseminations.push_back(std::move(w));
    }

    // Status per objective label. Duplicated objectives share their label and
    // therefore their status, which is the honest reading of a duplicate.
    std::map<std::string, std::string> status;
    for (const std::string& label : step.served) status[label] = "SATISFIED";
    for (const std::string& label : step.unserved) status[label] = "NO_PATH";

    std::map<std::string, int> claim_count;
    for (const TileCommand& cmd : step.commands)
        if (cmd.objective != "RELEASE") ++claim_count[cmd.objective];

    LaunchParams launch_params;
    launch_params.max_bounces = params.max_bounces;
    launch_params.n_rays = params.n_rays;

    int link_index = 0;
    for (const Objective& objective : scenario.objectives) {
        ObjectiveOutcome outcome;
        outcome.objective = objective;
        const std::string label = objective.label();
        outcome.status = status.count(label) != 0 ? status[label] : "NO_PATH";
        outcome.tiles_claimed = claim_count.count(label) != 0 ? claim_count[label] : 0;

        if (objective.kind != ObjectiveKind::Block) {
            for (const AirPath& path : step.paths)
                if (path.objective == label) {
                    outcome.path = path;
                    break;
                }
            if (outcome.status == "SATISFIED") {
                const Device* src = scenario.plan.device(objective.src);
                auto paths = launch(*src, scenario.plan, result.functions, launch_params);
                auto to_dst = paths_to(paths, objective.dst);
                outcome.received = received_power(to_dst, src->tx_power_dbm);
                outcome.pdp = power_delay_profile(to_dst, src->tx_power_dbm);
                outcome.delay_spread_s = rms_delay_spread(outcome.pdp);
                if (params.write_artifacts)
                    outcome.pdp_csv = "pdp_" + std::to_string(link_index) + ".csv";
            }
            ++link_index;
        }
        if (outcome.status == "NO_PATH") result.exit_code = 2;
        result.outcomes.push_back(std::move(outcome));
    }

    if (params.write_artifacts) {
        std::filesystem::create_directories(params.out_dir);
        for (const ObjectiveOutcome& outcome : result.outcomes)
            if (!outcome.pdp_csv.empty())
                atomic_write(params.out_dir / outcome.pdp_csv,
                             pdp_csv_text(outcome.pdp));
        result.frame_trace = "frames.jsonl";
        atomic_write(params.out_dir / result.frame_trace,
                     trace_jsonl(result.disseminations));
    }

    if (!params.table_path.empty()) controller.table().save(params.table_path);

    result.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

namespace {

nlohmann::json json_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

} // namespace

std::string report_json(const Scenario& scenario, const RunParams& params,
                        const RunResult& result) {
    (void)scenario;
    nlohmann::json doc;
    doc["schema"] = "hypersim-report-v1";
    doc["scenario_hash"] = result.scenario_hash;
    doc["parameters"] = {{"max_bounces", params.max_bounces},
                         {"rays", params.n_rays},
                         {"seed", params.seed},
                         {"budget", params.budget}};

    doc["command_count"] = result.commands.size();
    nlohmann::json commands = nlohmann::json::array();
    for (const TileCommand& cmd : result.commands) {
        nlohmann::json c;
        c["seq"] = cmd.seq;
        c["tile"] = cmd.tile_id;
        c["kind"] = std::string(to_string(cmd.fn.kind));
        c["objective"] = cmd.objective;
        c["bits"] = cmd.config.bit_string();
        c["quality"] = cmd.config.quality;
        commands.push_back(std::move(c));
    }
    doc["commands"] = std::move(commands);

    nlohmann::json walls = nlohmann::json::array();
    for (const WallDissemination& w : result.disseminations) {
        nlohmann::json entry;
        entry["wall"] = w.wall_id;
        entry["representative"] = w.representative;
        entry["rounds"] = w.rounds;
        entry["acks_complete"] = w.acks_complete;
        entry["commands"] = w.commands;
        walls.push_back(std::move(entry));
    }
    doc["dissemination"] = std::move(walls);
    if (!result.frame_trace.empty()) doc["frame_trace"] = result.frame_trace;

    nlohmann::json objectives = nlohmann::json::array();
    for (const ObjectiveOutcome& outcome : result.outcomes) {
        nlohmann::json entry;
        entry["kind"] = std::string(to_string(outcome.objective.kind));
        entry["label"] = outcome.objective.label();
        entry["src"] = outcome.objective.src;
        if (outcome.objective.kind != ObjectiveKind::Block)
            entry["dst"] = outcome.objective.dst;
        if (outcome.objective.kind == ObjectiveKind::SecureLink)
            entry["avoid_radius"] = outcome.objective.avoid_radius;
        entry["status"] = outcome.status;
        entry["tiles_claimed"] = outcome.tiles_claimed;
        if (outcome.path) {
            nlohmann::json path;
            nlohmann::json nodes = nlohmann::json::array();
            nodes.push_back(outcome.path->src);
            for (int tid : outcome.path->tiles) nodes.push_back(tid);
            nodes.push_back(outcome.path->dst);
            path["nodes"] = std::move(nodes);
            path["segment_lengths_m"] = outcome.path->segment_lengths;
            path["total_length_m"] = outcome.path->total_length;
            path["total_loss_db"] = outcome.path->total_loss_db;
            entry["path"] = std::move(path);
        }
        if (outcome.received) {
            entry["received_dbm"] = {
                {"coherent", json_or_null(outcome.received->coherent_dbm)},
                {"incoherent", json_or_null(outcome.received->incoherent_dbm)}};
        }
        if (outcome.delay_spread_s)
            entry["delay_spread_s"] = json_or_null(*outcome.delay_spread_s);
        if (!outcome.pdp_csv.empty()) entry["pdp_csv"] = outcome.pdp_csv;
        objectives.push_back(std::move(entry));
    }
    doc["objectives"] = std::move(objectives);

    // Kept on one dedicated line so consumers comparing reports can strip it.
    doc["wall_clock_s"] = result.wall_clock_s;
    return doc.dump(2) + "\n";
}

} // namespace hypersim
