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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hypersim/controller.hpp"
#include "hypersim/errors.hpp"
#include "oracles.hpp"

using namespace hypersim;

namespace {

void add_wall(Floorplan& plan, int id, Vec2 a, Vec2 b, bool coated) {
    plan.walls.push_back({id, a, b, coated});
    int next = 0;
    for (const Tile& t : plan.tiles) next = std::max(next, t.id + 1);
    auto tiles = tessellate(plan.walls.back(), plan.tile_size, plan.columns_per_tile,
                            plan.interior_point, next);
    plan.tiles.insert(plan.tiles.end(), tiles.begin(), tiles.end());
}

// Two coated walls at y = 0 and y = 4, six meters long, tiles 0..11 below and
// 12..23 above.
Floorplan corridor() {
    Floorplan plan;
    plan.interior_point = {3.0, 2.0};
    add_wall(plan, 0, {0.0, 0.0}, {6.0, 0.0}, true);
    add_wall(plan, 1, {0.0, 4.0}, {6.0, 4.0}, true);
    return plan;
}

Device dev(const char* id, Vec2 p, DeviceRole role, double dbm = 0.0) {
    Device d;
    d.id = id;
    d.position = p;
    d.role = role;
    d.tx_power_dbm = dbm;
    d.frequency_hz = 2.4e9;
    return d;
}

} // namespace

TEST_SUITE_BEGIN("controller");

TEST_CASE("objective labels and ranks") {
    Objective link{ObjectiveKind::LinkOptimize, "a", "b", 1.0};
    CHECK(link.label() == "LINK_OPTIMIZE:a->b");
    Objective block{ObjectiveKind::Block, "m", "", 1.0};
    CHECK(block.label() == "BLOCK:m");

    CHECK(objective_rank(ObjectiveKind::Block) < objective_rank(ObjectiveKind::SecureLink));
    CHECK(objective_rank(ObjectiveKind::SecureLink) <
          objective_rank(ObjectiveKind::PowerTransfer));
    CHECK(objective_rank(ObjectiveKind::PowerTransfer) <
          objective_rank(ObjectiveKind::LinkOptimize));

    for (ObjectiveKind k : {ObjectiveKind::LinkOptimize, ObjectiveKind::SecureLink,
                            ObjectiveKind::PowerTransfer, ObjectiveKind::Block}) {
        auto back = objective_kind_from_string(to_string(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
}

TEST_CASE("tile a bounce costs about one decibel") {
    CHECK(tile_loss_db() == doctest::Approx(-10.0 * std::log10(0.8)));
}

TEST_CASE("tile graph connects across the corridor") {
    Floorplan plan = corridor();
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));

    const auto graph = build_tile_graph(plan);
    CHECK(graph.tiles.size() == 24);
    CHECK(std::is_sorted(graph.tiles.begin(), graph.tiles.end()));

    // Devices in the open see every tile of both walls.
    REQUIRE(graph.device_tiles.count("a") == 1);
    CHECK(graph.device_tiles.at("a").size() == 24);

    // Same-wall tiles are never adjacent; opposite tiles always are.
    const auto& adj0 = graph.tile_tiles.at(0);
    for (int n : adj0) CHECK(plan.tile(n)->wall_id == 1);
    CHECK(adj0.size() == 12);

    REQUIRE(graph.device_devices.count("a") == 1);
    CHECK(graph.device_devices.at("a") == std::vector<std::string>{"b"});
}

TEST_CASE("tile graph ignores bare walls and blocked sight lines") {
    Floorplan plan = corridor();
    add_wall(plan, 2, {3.0, 0.5}, {3.0, 3.5}, false); // bare divider
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));

    const auto graph = build_tile_graph(plan);
    // Only coated tiles enter the graph.
    CHECK(graph.tiles.size() == 24);
    for (int t : graph.tiles) CHECK(plan.wall(plan.tile(t)->wall_id)->coated);

    // The divider hides the far half of each wall from device a.
    const auto& seen = graph.device_tiles.at("a");
    CHECK(seen.size() < 24);
    // Direct sight between the devices is blocked.
    CHECK(graph.device_devices.at("a").empty());
}

TEST_CASE("compute_airpath prefers the direct link") {
    Floorplan plan = corridor();
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    const auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    CHECK(path->tiles.empty());
    CHECK(path->total_length == doctest::Approx(4.0));
    CHECK(path->total_loss_db == doctest::Approx(free_space_loss_db(4.0, 2.4e9)));
    CHECK(path->segment_lengths.size() == 1);
}

TEST_CASE("compute_airpath bounces around an obstruction") {
    Floorplan plan = corridor();
    add_wall(plan, 2, {3.0, 0.5}, {3.0, 3.5}, false);
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    const auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    REQUIRE_FALSE(path->tiles.empty());
    CHECK(path->segment_lengths.size() == path->tiles.size() + 1);

    double len = 0.0;
    for (double s : path->segment_lengths) len += s;
    CHECK(path->total_length == doctest::Approx(len));
    CHECK(path->total_loss_db ==
          doctest::Approx(free_space_loss_db(len, 2.4e9) +
                          double(path->tiles.size()) * tile_loss_db()));

    // The moment bounces are forbidden there is no route at all.
    q.max_bounces = 0;
    CHECK_FALSE(compute_airpath(plan, graph, q).has_value());
}

TEST_CASE("compute_airpath tie-break picks the smallest tile sequence") {
    Floorplan plan = corridor();
    add_wall(plan, 2, {3.0, 1.5}, {3.0, 2.5}, false); // short divider
    plan.devices.push_back(dev("a", {2.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {4.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    const auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    // Four one-bounce routes tie exactly by symmetry (tiles 5, 6, 17, 18);
    // the lexicographically smallest sequence wins.
    CHECK(path->tiles == std::vector<int>{5});
}

TEST_CASE("compute_airpath respects exclusions") {
    Floorplan plan = corridor();
    add_wall(plan, 2, {3.0, 1.5}, {3.0, 2.5}, false);
    plan.devices.push_back(dev("a", {2.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {4.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    q.exclude_tiles = {5};
    auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    CHECK(path->tiles == std::vector<int>{6});
}

TEST_CASE("compute_airpath keep-out is strict") {
    Floorplan plan = corridor();
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    q.avoid_points = {{3.0, 1.0}};
    q.avoid_radius = 1.0; // the direct segment passes at exactly 1.0
    const auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    REQUIRE_FALSE(path->tiles.empty());
    for (size_t i = 0; i < path->tiles.size() + 1; ++i) {
        const Vec2 p = i == 0 ? Vec2{1.0, 2.0} : plan.tile(path->tiles[i - 1])->center;
        const Vec2 nxt =
            i == path->tiles.size() ? Vec2{5.0, 2.0} : plan.tile(path->tiles[i])->center;
        CHECK(point_segment_distance({3.0, 1.0}, p, nxt) > 1.0);
    }
}

TEST_CASE("compute_airpath can be told to use at least one tile") {
    Floorplan plan = corridor();
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    q.require_tile = true;
    const auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    CHECK(path->tiles.size() == 1);
}

TEST_CASE("compute_airpath matches exhaustive enumeration on random scenes") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> xpos(0.5, 5.5);
    std::uniform_real_distribution<double> ypos(0.5, 3.5);

    for (int trial = 0; trial < 10; ++trial) {
        Floorplan plan;
        plan.tile_size = 1.0; // keep the search space small
        plan.interior_point = {3.0, 2.0};
        add_wall(plan, 0, {0.0, 0.0}, {6.0, 0.0}, true);
        add_wall(plan, 1, {0.0, 4.0}, {6.0, 4.0}, true);
        if (trial % 2 == 0) add_wall(plan, 2, {3.0, 1.0}, {3.0, 3.0}, false);

        plan.devices.push_back(dev("a", {xpos(rng), ypos(rng)}, DeviceRole::Tx, 10.0));
        plan.devices.push_back(dev("b", {xpos(rng), ypos(rng)}, DeviceRole::Rx));
        const auto graph = build_tile_graph(plan);

        RouteQuery q;
        q.src = "a";
        q.dst = "b";
        const auto got = compute_airpath(plan, graph, q);

        oracle::RouteProbe probe{plan};
        const auto want = probe.best(*plan.device("a"), *plan.device("b"));

        REQUIRE(got.has_value() == want.has_value());
        if (got)
            CHECK(got->total_loss_db == doctest::Approx(want->total_loss_db).epsilon(1e-12));
    }
}

TEST_CASE("path_functions writes exact steer angles") {
    Floorplan plan = corridor();
    add_wall(plan, 2, {3.0, 0.5}, {3.0, 3.5}, false);
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    const auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    REQUIRE(path->tiles.size() == 1);

    const auto fns = path_functions(plan, *path, false);
    REQUIRE(fns.size() == 1);
    const Tile& tile = *plan.tile(path->tiles[0]);
    const EmFunction& fn = fns.at(tile.id);
    CHECK(fn.kind == EmKind::Steer);
    CHECK(fn.incident_angle ==
          doctest::Approx(angle_in_frame(tile.center, {1.0, 2.0}, tile.tangent,
                                         tile.normal)));
    CHECK(fn.target_angle ==
          doctest::Approx(angle_in_frame(tile.center, {5.0, 2.0}, tile.tangent,
                                         tile.normal)));

    const auto focused = path_functions(plan, *path, true);
    CHECK(focused.at(tile.id).kind == EmKind::Focus);
    CHECK(focused.at(tile.id).focus_target.x == doctest::Approx(5.0));
    CHECK(focused.at(tile.id).incident_angle == doctest::Approx(fn.incident_angle));
}

TEST_CASE("emit_commands reuses the table on the second pass") {
    Floorplan plan = corridor();
    add_wall(plan, 2, {3.0, 0.5}, {3.0, 3.5}, false);
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 10.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    const auto graph = build_tile_graph(plan);

    RouteQuery q;
    q.src = "a";
    q.dst = "b";
    auto path = compute_airpath(plan, graph, q);
    REQUIRE(path.has_value());
    path->objective = "LINK_OPTIMIZE:a->b";

    LookupTable table(TileModel{8, plan.tile_size / 8.0, 2.4e9});
    int seq = 1;
    const auto first = emit_commands(plan, *path, false, 2.4e9, table, 20000, seq);
    REQUIRE(first.size() == path->tiles.size());
    CHECK(seq == 1 + static_cast<int>(first.size()));
    CHECK(first[0].seq == 1);
    CHECK(first[0].objective == "LINK_OPTIMIZE:a->b");
    CHECK_FALSE(first[0].config.bits.empty());
    CHECK(table.size() >= 1);

    // A budget too small for any search proves the second emit is pure lookup.
    const auto again = emit_commands(plan, *path, false, 2.4e9, table, 1, seq);
    REQUIRE(again.size() == first.size());
    CHECK(again[0].config.bits == first[0].config.bits);
    CHECK(again[0].seq == first.back().seq + 1);
}

TEST_CASE("apply_block absorbs what the rogue can see") {
    Floorplan plan = corridor();
    plan.devices.push_back(dev("m", {3.0, 1.0}, DeviceRole::Blocked, -30.0));

    const auto fns = apply_block(plan, plan.devices[0], {});
    REQUIRE_FALSE(fns.empty());
    const auto fan = fan_first_hit_distance(plan.devices[0], plan);
    for (const auto& [tid, fn] : fns) {
        CHECK(fn.kind == EmKind::Absorb);
        CHECK(fan.count(tid) == 1);
        // Incidence recorded for the table key matches the fan geometry.
        CHECK(std::abs(fn.incident_angle) < kPi / 2.0);
    }

    SUBCASE("claimed tiles are left alone") {
        const int claimed_tile = fns.begin()->first;
        const auto rest = apply_block(plan, plan.devices[0], {claimed_tile});
        CHECK(rest.count(claimed_tile) == 0);
        CHECK(rest.size() == fns.size() - 1);
    }

    SUBCASE("a strict threshold silences the whole fan") {
        const auto none = apply_block(plan, plan.devices[0], {}, /*p_min_dbm=*/-20.0);
        CHECK(none.empty());
    }

    SUBCASE("the silent default power blocks nothing") {
        Device mute = plan.devices[0];
        mute.tx_power_dbm = -std::numeric_limits<double>::infinity();
        CHECK(apply_block(plan, mute, {}).empty());
    }
}

namespace {

Floorplan controller_room() {
    // Corridor with a short divider; a must bounce to reach b.
    Floorplan plan = corridor();
    add_wall(plan, 2, {3.0, 0.5}, {3.0, 3.5}, false);
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 20.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    plan.devices.push_back(dev("m", {1.0, 1.0}, DeviceRole::Blocked, -40.0));
    return plan;
}

} // namespace

TEST_CASE("control_step claims tiles by priority and stays idempotent") {
    Floorplan plan = controller_room();
    Controller ctl(plan);

    std::vector<Objective> objectives{
        {ObjectiveKind::LinkOptimize, "a", "b", 1.0},
        {ObjectiveKind::Block, "m", "", 1.0},
    };

    const auto step = ctl.control_step(objectives);
    REQUIRE_FALSE(step.commands.empty());
    CHECK(step.unserved.empty());
    CHECK(step.served.size() == 2);

    // The block claims the low tiles near the rogue, so in tile order the
    // first command is one of its absorbs.
    CHECK(step.commands.front().objective == "BLOCK:m");
    CHECK(step.commands.front().fn.kind == EmKind::Absorb);
    bool saw_steer = false;
    for (const auto& cmd : step.commands) {
        if (cmd.objective == "LINK_OPTIMIZE:a->b") {
            CHECK(cmd.fn.kind == EmKind::Steer);
            saw_steer = true;
        }
        CHECK(cmd.config.columns() == plan.tile(cmd.tile_id)->columns);
    }
    CHECK(saw_steer);

    // Sequence numbers are dense and start at 1.
    for (size_t i = 0; i < step.commands.size(); ++i)
        CHECK(step.commands[i].seq == static_cast<int>(i) + 1);
    CHECK(ctl.last_seq() == static_cast<int>(step.commands.size()));

    // The link path can not run through blocked tiles.
    REQUIRE(step.paths.size() == 1);
    std::set<int> absorbing;
    for (const auto& cmd : step.commands)
        if (cmd.fn.kind == EmKind::Absorb) absorbing.insert(cmd.tile_id);
    for (int tid : step.paths[0].tiles) CHECK(absorbing.count(tid) == 0);

    // Same objectives again: nothing changes, nothing is emitted.
    const auto again = ctl.control_step(objectives);
    CHECK(again.commands.empty());
    CHECK(again.served.size() == 2);
    CHECK(ctl.last_seq() == static_cast<int>(step.commands.size()));

    // Dropping every objective releases the claimed tiles back to specular.
    const auto release = ctl.control_step({});
    CHECK(release.commands.size() == step.commands.size());
    for (const auto& cmd : release.commands) {
        CHECK(cmd.fn.kind == EmKind::Specular);
        CHECK(cmd.objective == "RELEASE");
        CHECK(cmd.seq > ctl.last_seq() - static_cast<int>(release.commands.size()));
    }
    CHECK(ctl.state().empty());
}

TEST_CASE("control_step reports unserved objectives") {
    Floorplan plan;
    plan.interior_point = {3.0, 2.0};
    add_wall(plan, 0, {0.0, 0.0}, {6.0, 0.0}, false); // nothing coated
    add_wall(plan, 1, {3.0, 0.5}, {3.0, 3.5}, false);
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 20.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));

    Controller ctl(plan);
    const auto step = ctl.control_step({{ObjectiveKind::LinkOptimize, "a", "b", 1.0}});
    CHECK(step.commands.empty());
    CHECK(step.served.empty());
    REQUIRE(step.unserved.size() == 1);
    CHECK(step.unserved[0] == "LINK_OPTIMIZE:a->b");
}

TEST_CASE("control_step is deterministic for a fixed seed") {
    Floorplan plan = controller_room();
    Controller one(plan);
    Controller two(plan);
    const std::vector<Objective> objectives{
        {ObjectiveKind::LinkOptimize, "a", "b", 1.0},
        {ObjectiveKind::Block, "m", "", 1.0},
    };
    const auto r1 = one.control_step(objectives);
    const auto r2 = two.control_step(objectives);
    REQUIRE(r1.commands.size() == r2.commands.size());
    for (size_t i = 0; i < r1.commands.size(); ++i)
        CHECK(r1.commands[i] == r2.commands[i]);
}

TEST_CASE("power transfer ends on a focusing tile") {
    Floorplan plan = corridor();
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 20.0));
    plan.devices.push_back(dev("f", {5.0, 2.0}, DeviceRole::Idle));

    Controller ctl(plan);
    const auto step =
        ctl.control_step({{ObjectiveKind::PowerTransfer, "a", "f", 1.0}});
    // Direct sight exists, but the transfer still must claim a tile.
    REQUIRE(step.paths.size() == 1);
    REQUIRE_FALSE(step.paths[0].tiles.empty());
    REQUIRE_FALSE(step.commands.empty());
    CHECK(step.commands.back().fn.kind == EmKind::Focus);
    CHECK(step.commands.back().fn.focus_target.x == doctest::Approx(5.0));
}

TEST_CASE("secure link avoids the eavesdropper with room to spare") {
    Floorplan plan = corridor();
    plan.devices.push_back(dev("a", {1.0, 2.0}, DeviceRole::Tx, 20.0));
    plan.devices.push_back(dev("b", {5.0, 2.0}, DeviceRole::Rx));
    plan.devices.push_back(dev("e", {3.0, 2.0}, DeviceRole::Eavesdropper));

    Controller ctl(plan);
    const auto step =
        ctl.control_step({{ObjectiveKind::SecureLink, "a", "b", 0.75}});
    REQUIRE(step.paths.size() == 1);
    const auto& path = step.paths[0];
    REQUIRE_FALSE(path.tiles.empty()); // the direct line runs through e

    std::vector<Vec2> points{{1.0, 2.0}};
    for (int tid : path.tiles) points.push_back(plan.tile(tid)->center);
    points.push_back({5.0, 2.0});
    for (size_t i = 0; i + 1 < points.size(); ++i)
        CHECK(point_segment_distance({3.0, 2.0}, points[i], points[i + 1]) > 0.75);
}

TEST_SUITE_END();
