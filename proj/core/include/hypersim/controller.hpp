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
// Centralized controller: builds a connectivity graph over devices and
// coated tiles, routes high level objectives onto bounce paths, and turns
// the winning paths into per-tile wave function commands with compiled
// switch configurations attached.
//
// Routing is exact at desk scale. For each bounce count k up to the limit
// the search enumerates every distinct sequence of k mutually visible coated
// tiles linking src to dst and keeps the candidate with the smallest
// end-to-end loss
//
//     total_loss_db = FSPL(sum of segment lengths) + sum of per-tile losses
//
// which treats the tiles as re-collimating mirrors: power decays with the
// unfolded path length, not per segment. Ties prefer fewer bounces, then the
// lexicographically smallest tile sequence, so results are reproducible.

#ifndef HYPERSIM_CONTROLLER_HPP
#define HYPERSIM_CONTROLLER_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hypersim/emcompiler.hpp"
#include "hypersim/geometry.hpp"
#include "hypersim/propagation.hpp"

namespace hypersim {

enum class ObjectiveKind { LinkOptimize, SecureLink, PowerTransfer, Block };

std::string_view to_string(ObjectiveKind kind);
std::optional<ObjectiveKind> objective_kind_from_string(std::string_view s);

// Smaller rank is served first. BLOCK claims its tiles before anything else
// routes, SECURE_LINK beats POWER_TRANSFER beats LINK_OPTIMIZE.
int objective_rank(ObjectiveKind kind);

struct Objective {
    ObjectiveKind kind = ObjectiveKind::LinkOptimize;
    std::string src;          // BLOCK: the rogue transmitter, dst unused
    std::string dst;
    double avoid_radius = 1.0; // m, SECURE_LINK keep-out around eavesdroppers

    // Human readable label used in commands, reports and error messages.
    std::string label() const;
};

// A routed reflection path. tiles lists the bounce sequence (may be empty for
// a direct link), segment_lengths has tiles.size() + 1 entries.
struct AirPath {
    std::string src;
    std::string dst;
    std::string objective; // label of the objective this path serves
    std::vector<int> tiles;
    std::vector<double> segment_lengths;
    double total_length = 0.0;
    double total_loss_db = 0.0;
};

// Southbound instruction for one tile: the wave function to perform and the
// switch configuration compiled for it. seq numbers are strictly increasing
// per controller, starting at 1, so stale frames can be told from fresh ones.
struct TileCommand {
    int seq = 0;
    int tile_id = 0;
    EmFunction fn;
    SwitchConfig config;
    std::string objective; // label of the objective that claimed the tile

    bool operator==(const TileCommand&) const = default;
};

// Static visibility graph between devices and coated tiles. Uncoated walls
// still block rays but expose no controllable nodes.
struct TileGraph {
    std::vector<int> tiles; // coated tile ids, ascending
    std::map<std::string, std::vector<int>> device_tiles;
    std::map<int, std::vector<int>> tile_tiles;
    std::map<std::string, std::vector<std::string>> device_devices;
};

// Visibility rules: a tile participates through its front side only, two
// tiles on the same wall never see each other, and the connecting segment
// must clear every other wall.
TileGraph build_tile_graph(const Floorplan& plan);

// Per-bounce command loss used for routing weights. Steered or focused tiles
// keep kSteerEfficiency of the power.
double tile_loss_db();

struct RouteQuery {
    std::string src;
    std::string dst;
    int max_bounces = 3;
    double frequency_hz = 2.4e9;
    // Tiles already claimed by other objectives; the path may not use them.
    std::set<int> exclude_tiles;
    // Reject the zero-bounce direct link. Power transfer needs a tile to
    // focus, so a route that never touches the surface is useless to it.
    bool require_tile = false;
    // Keep-out constraint: every segment, direct links included, must pass
    // strictly farther than avoid_radius from each avoid point.
    std::vector<Vec2> avoid_points;
    double avoid_radius = 0.0;
};

// Exhaustive minimum-loss route, or nullopt when no compliant path exists
// within the bounce limit.
std::optional<AirPath> compute_airpath(const Floorplan& plan, const TileGraph& graph,
                                       const RouteQuery& query);

// Wave functions realizing a path: STEER on every bounce tile with the exact
// incident and outgoing angles from the path geometry, except that
// `focus_last` turns the final tile into FOCUS on the destination point.
std::map<int, EmFunction> path_functions(const Floorplan& plan, const AirPath& path,
                                         bool focus_last);

// Commands for every bounce tile of a path, in path order, seq numbers taken
// from next_seq. Configurations come from the table when a quantized match
// exists; misses are compiled with `budget` evaluations and stored back, so
// emitting the same path twice compiles nothing the second time.
std::vector<TileCommand> emit_commands(const Floorplan& plan, const AirPath& path,
                                       bool focus_last, double frequency_hz,
                                       LookupTable& table, int budget, int& next_seq);

// Tiles a rogue transmitter illuminates above p_min_dbm, determined with a
// fan of first-hit rays: each coated, front-face tile whose first-contact
// power clears the threshold is told to absorb at its observed incidence.
// Tiles in `claimed` are left alone. A transmitter with no power (silent
// default) illuminates nothing.
std::map<int, EmFunction> apply_block(const Floorplan& plan, const Device& rogue,
                                      const std::set<int>& claimed,
                                      double p_min_dbm = -90.0, int n_rays = 3600);

struct ControllerConfig {
    int max_bounces = 3;
    double p_min_dbm = -90.0;  // BLOCK illumination threshold
    int n_rays = 3600;         // BLOCK fan resolution
    int compile_budget = 20000;
    unsigned rng_seed = 0;
};

// Outcome of one control round. paths holds the routed paths of served
// link-style objectives; unserved lists objective labels no compliant path
// could realize.
struct StepResult {
    std::vector<TileCommand> commands;
    std::vector<AirPath> paths;
    std::vector<std::string> served;
    std::vector<std::string> unserved;
};

// Stateful objective scheduler. Each control_step() resolves the objective
// set against the current tile state and emits only the commands needed to
// reach the new configuration, so repeating a step is a no-op. Tiles released
// by a step are reset to their natural specular behavior. Conflicts are
// settled by rank: once a tile is claimed, later objectives route around it.
class Controller {
public:
    explicit Controller(const Floorplan& plan, ControllerConfig cfg = {},
                        LookupTable table = {});

    StepResult control_step(const std::vector<Objective>& objectives);

    const TileGraph& graph() const { return graph_; }
    // Current commanded functions; tiles absent from the map sit in their
    // natural specular state.
    const TileFunctionMap& state() const { return state_; }
    LookupTable& table() { return table_; }
    int last_seq() const { return next_seq_ - 1; }

private:
    const Floorplan& plan_;
    ControllerConfig cfg_;
    TileGraph graph_;
    TileFunctionMap state_;
    LookupTable table_;
    int next_seq_ = 1;
};

} // namespace hypersim

#endif // HYPERSIM_CONTROLLER_HPP
