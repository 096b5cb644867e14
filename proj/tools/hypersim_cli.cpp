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
// hypersim command line front end.
//
//   hypersim simulate room.json --out results/
//   hypersim route room.json
//   hypersim compile --kind steer --in 0 --out 30 --table table.json
//   hypersim render room.json results/report.json --out room.svg
//   hypersim report results/report.json
//
// Exit codes: 0 success, 1 input or validation errors, 2 when an objective
// cannot be routed.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "hypersim/controller.hpp"
#include "hypersim/emcompiler.hpp"
#include "hypersim/errors.hpp"
#include "hypersim/pipeline.hpp"
#include "hypersim/render.hpp"
#include "hypersim/scenario.hpp"

namespace {

using nlohmann::json;

constexpr double kDegToRad = hypersim::kPi / 180.0;

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw hypersim::ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw hypersim::ParseError(path.string() + ": " + e.what());
    }
}

void print_objective_line(const hypersim::ObjectiveOutcome& outcome) {
    std::string line = outcome.objective.label();
    line += "  " + outcome.status;
    if (outcome.path) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "  loss=%.2f dB", outcome.path->total_loss_db);
        line += buf;
    }
    if (outcome.received) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "  coherent=%.2f dBm",
                      outcome.received->coherent_dbm);
        line += buf;
    }
    if (outcome.objective.kind == hypersim::ObjectiveKind::Block) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "  tiles_absorbing=%d", outcome.tiles_claimed);
        line += buf;
    }
    std::cout << line << "\n";
}

int cmd_simulate(const std::filesystem::path& scenario_path,
                 hypersim::RunParams params) {
    params.scenario_hash = hypersim::hash_file(scenario_path);
    const hypersim::Scenario scenario = hypersim::load_scenario(scenario_path);
    const hypersim::RunResult result = hypersim::run_simulate(scenario, params);

    const std::string report = hypersim::report_json(scenario, params, result);
    hypersim::atomic_write(params.out_dir / "report.json", report);

    for (const auto& outcome : result.outcomes) print_objective_line(outcome);
    std::cout << "commands " << result.commands.size() << ", report "
              << (params.out_dir / "report.json").string() << "\n";
    return result.exit_code;
}

int cmd_route(const std::filesystem::path& scenario_path, hypersim::RunParams params) {
    params.scenario_hash = hypersim::hash_file(scenario_path);
    const hypersim::Scenario scenario = hypersim::load_scenario(scenario_path);

    hypersim::ControllerConfig cfg;
    cfg.max_bounces = params.max_bounces;
    cfg.n_rays = params.n_rays;
    cfg.compile_budget = params.budget;
    cfg.rng_seed = params.seed;

    hypersim::LookupTable table;
    if (!params.table_path.empty() && std::filesystem::exists(params.table_path))
        table = hypersim::LookupTable::load(params.table_path);

    hypersim::Controller controller(scenario.plan, cfg, std::move(table));
    const hypersim::StepResult step = controller.control_step(scenario.objectives);

    json doc;
    doc["scenario_hash"] = params.scenario_hash;
    json paths = json::array();
    for (const auto& path : step.paths) {
        json p;
        p["objective"] = path.objective;
        json nodes = json::array();
        nodes.push_back(path.src);
        for (int tid : path.tiles) nodes.push_back(tid);
        nodes.push_back(path.dst);
        p["nodes"] = std::move(nodes);
        p["total_length_m"] = path.total_length;
        p["total_loss_db"] = path.total_loss_db;
        paths.push_back(std::move(p));
    }
    doc["paths"] = std::move(paths);
    json commands = json::array();
    for (const auto& cmd : step.commands) {
        json c;
        c["seq"] = cmd.seq;
        c["tile"] = cmd.tile_id;
        c["kind"] = std::string(hypersim::to_string(cmd.fn.kind));
        c["objective"] = cmd.objective;
        c["bits"] = cmd.config.bit_string();
        commands.push_back(std::move(c));
    }
    doc["commands"] = std::move(commands);
    doc["unserved"] = step.unserved;

    std::filesystem::create_directories(params.out_dir);
    hypersim::atomic_write(params.out_dir / "route.json", doc.dump(2) + "\n");
    if (!params.table_path.empty()) controller.table().save(params.table_path);

    for (const auto& path : step.paths) {
        std::cout << path.objective << "  loss=";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", path.total_loss_db);
        std::cout << buf << " dB  bounces=" << path.tiles.size() << "\n";
    }
    for (const auto& label : step.unserved) std::cout << label << "  NO_PATH\n";
    if (!step.unserved.empty())
        throw hypersim::NoPathError("no compliant path for " + step.unserved.front());
    return 0;
}

int cmd_compile(const std::string& kind_name, double in_deg, double out_deg,
                double focus_x, double focus_y, bool has_focus_point, int columns,
                double spacing, double frequency, int budget, unsigned seed,
                const std::filesystem::path& table_path) {
    std::string canonical = kind_name;
    for (char& c : canonical) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto kind = hypersim::em_kind_from_string(canonical);
    if (!kind)
        throw hypersim::ValidationError("compile: unknown kind '" + kind_name + "'");

    hypersim::TileModel model;
    model.columns = columns;
    model.spacing = spacing;

    hypersim::CompileRequest request;
    request.kind = *kind;
    request.theta_in = in_deg * kDegToRad;
    request.theta_target = out_deg * kDegToRad;
    if (*kind == hypersim::EmKind::Specular) request.theta_target = -request.theta_in;
    if (*kind == hypersim::EmKind::Focus && has_focus_point)
        request.focus_point = hypersim::Vec2{focus_x, focus_y};

    hypersim::LookupTable table(model);
    if (!table_path.empty() && std::filesystem::exists(table_path))
        table = hypersim::LookupTable::load(table_path);

    hypersim::SwitchConfig config;
    if (auto hit = table.get(request, model.columns, frequency)) {
        config = *hit;
    } else {
        config = hypersim::compile(model, request, frequency, budget, seed);
        table.put(request, model.columns, frequency, config);
    }
    if (!table_path.empty()) table.save(table_path);

    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", config.quality);
    std::cout << "bits " << config.bit_string() << "\nquality " << buf << "\n";
    return 0;
}

int cmd_render(const std::filesystem::path& scenario_path,
               const std::filesystem::path& report_path,
               const std::filesystem::path& out_path) {
    const std::string hash = hypersim::hash_file(scenario_path);
    const hypersim::Scenario scenario = hypersim::load_scenario(scenario_path);
    const json report = load_json(report_path);

    if (!report.contains("scenario_hash") || !report["scenario_hash"].is_string())
        throw hypersim::ValidationError(report_path.string() +
                                        ": missing scenario_hash");
    if (report["scenario_hash"].get<std::string>() != hash)
        throw hypersim::HashMismatch("report " + report_path.string() +
                                     " was produced from a different scenario file");

    hypersim::RenderInput input;
    if (report.contains("commands"))
        for (const auto& cmd : report["commands"]) {
            const auto kind = hypersim::em_kind_from_string(
                cmd.at("kind").get<std::string>());
            if (kind) input.tile_functions[cmd.at("tile").get<int>()] = *kind;
        }
    if (report.contains("objectives"))
        for (const auto& entry : report["objectives"]) {
            if (!entry.contains("path")) continue;
            const auto kind = hypersim::objective_kind_from_string(
                entry.at("kind").get<std::string>());
            if (!kind) continue;
            hypersim::RenderPath path;
            path.kind = *kind;
            path.label = entry.at("label").get<std::string>();
            for (const auto& node : entry["path"].at("nodes")) {
                if (node.is_string()) {
                    const auto* dev =
                        scenario.plan.device(node.get<std::string>());
                    if (dev == nullptr)
                        throw hypersim::ValidationError(
                            "render: report path references unknown device '" +
                            node.get<std::string>() + "'");
                    path.points.push_back(dev->position);
                } else {
                    const auto* tile = scenario.plan.tile(node.get<int>());
                    if (tile == nullptr)
                        throw hypersim::ValidationError(
                            "render: report path references unknown tile " +
                            std::to_string(node.get<int>()));
                    path.points.push_back(tile->center);
                }
            }
            input.paths.push_back(std::move(path));
        }

    hypersim::atomic_write(out_path, hypersim::render_svg(scenario.plan, input));
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
}

int cmd_report(const std::filesystem::path& report_path) {
    const json report = load_json(report_path);
    std::cout << "scenario_hash  "
              << report.value("scenario_hash", std::string("?")) << "\n";
    std::cout << "commands       " << report.value("command_count", 0) << "\n";
    if (report.contains("dissemination"))
        for (const auto& w : report["dissemination"])
            std::cout << "wall " << w.value("wall", -1) << "  rep "
                      << w.value("representative", -1) << "  rounds "
                      << w.value("rounds", 0) << "  acks "
                      << (w.value("acks_complete", false) ? "complete" : "INCOMPLETE")
                      << "\n";
    if (report.contains("objectives"))
        for (const auto& entry : report["objectives"]) {
            std::string line = entry.value("label", std::string("?"));
            line += "  " + entry.value("status", std::string("?"));
            if (entry.contains("path")) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "  loss=%.2f dB",
                              entry["path"].value("total_loss_db", 0.0));
                line += buf;
            }
            if (entry.contains("received_dbm") &&
                entry["received_dbm"]["coherent"].is_number()) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "  coherent=%.2f dBm",
                              entry["received_dbm"]["coherent"].get<double>());
                line += buf;
            }
            std::cout << line << "\n";
        }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypersim: programmable wireless environment simulator"};
    app.require_subcommand(1);

    std::filesystem::path scenario_path;
    std::filesystem::path report_path;
    std::filesystem::path out_dir = ".";
    std::filesystem::path svg_path = "floorplan.svg";
    std::filesystem::path table_path;
    int max_bounces = 3;
    int rays = 3600;
    unsigned seed = 0;
    int budget = 20000;

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--max-bounces", max_bounces, "Bounce limit for routing/rays")
            ->capture_default_str();
        cmd->add_option("--rays", rays, "Rays per launch fan")->capture_default_str();
        cmd->add_option("--seed", seed, "Search seed")->capture_default_str();
        cmd->add_option("--budget", budget, "Compile evaluation budget")
            ->capture_default_str();
        cmd->add_option("--table", table_path, "Configuration table file (load/save)");
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Run the full pipeline");
    simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
    add_run_flags(simulate);

    CLI::App* route = app.add_subcommand("route", "Control step only, no propagation");
    route->add_option("scenario", scenario_path, "Scenario JSON")->required();
    add_run_flags(route);

    std::string compile_kind = "steer";
    double compile_in = 0.0;
    double compile_out = 0.0;
    double focus_x = 0.0;
    double focus_y = 0.0;
    int compile_columns = 8;
    double compile_spacing = 0.0;
    double compile_frequency = 2.4e9;
    CLI::App* compile = app.add_subcommand("compile", "Compile one switch config");
    compile->add_option("--kind", compile_kind, "SPECULAR|STEER|ABSORB|FOCUS")
        ->capture_default_str();
    compile->add_option("--in", compile_in, "Incident angle, degrees")
        ->capture_default_str();
    CLI::Option* out_angle =
        compile->add_option("--out", compile_out, "Target angle, degrees")
            ->capture_default_str();
    CLI::Option* focus_x_opt = compile->add_option("--focus-x", focus_x, "Focal x, m");
    CLI::Option* focus_y_opt = compile->add_option("--focus-y", focus_y, "Focal y, m");
    compile->add_option("--columns", compile_columns, "Meta-atom columns")
        ->capture_default_str();
    compile->add_option("--spacing", compile_spacing,
                        "Column spacing, m (0: half the design wavelength)")
        ->capture_default_str();
    compile->add_option("--frequency", compile_frequency, "Hz")->capture_default_str();
    compile->add_option("--budget", budget, "Evaluation budget")->capture_default_str();
    compile->add_option("--seed", seed, "Search seed")->capture_default_str();
    compile->add_option("--table", table_path, "Table file to update");

    CLI::App* render = app.add_subcommand("render", "Draw scenario + report as SVG");
    render->add_option("scenario", scenario_path, "Scenario JSON")->required();
    render->add_option("report", report_path, "Report JSON from simulate")->required();
    render->add_option("--out", svg_path, "SVG output path")->capture_default_str();

    CLI::App* report = app.add_subcommand("report", "Summarize a report JSON");
    report->add_option("report", report_path, "Report JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        hypersim::RunParams params;
        params.max_bounces = max_bounces;
        params.n_rays = rays;
        params.seed = seed;
        params.budget = budget;
        params.table_path = table_path;
        params.out_dir = out_dir;

        if (app.got_subcommand(simulate)) return cmd_simulate(scenario_path, params);
        if (app.got_subcommand(route)) return cmd_route(scenario_path, params);
        if (app.got_subcommand(compile))
            return cmd_compile(compile_kind, compile_in,
                               out_angle->count() ? compile_out : 0.0, focus_x, focus_y,
                               focus_x_opt->count() && focus_y_opt->count(),
                               compile_columns, compile_spacing, compile_frequency,
                               budget, seed, table_path);
        if (app.got_subcommand(render))
            return cmd_render(scenario_path, report_path, svg_path);
        if (app.got_subcommand(report)) return cmd_report(report_path);
    } catch (const hypersim::NoPathError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
