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

#include "hypersim/controller.hpp"

#include <algorithm>
#include <cmath>

#include "hypersim/errors.hpp"

namespace hypersim {

std::string_view to_string(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::LinkOptimize: return "LINK_OPTIMIZE";
        case ObjectiveKind::SecureLink: return "SECURE_LINK";
        case ObjectiveKind::PowerTransfer: return "POWER_TRANSFER";
        case ObjectiveKind::Block: return "BLOCK";
    }
    return "?";
}

std::optional<ObjectiveKind> objective_kind_from_string(std::string_view s) {
    if (s == "LINK_OPTIMIZE") return ObjectiveKind::LinkOptimize;
    if (s == "SECURE_LINK") return ObjectiveKind::SecureLink;
    if (s == "POWER_TRANSFER") return ObjectiveKind::PowerTransfer;
    if (s == "BLOCK") return ObjectiveKind::Block;
    return std::nullopt;
}

int objective_rank(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::Block: return 0;
        case ObjectiveKind::SecureLink: return 1;
        case ObjectiveKind::PowerTransfer: return 2;
        case ObjectiveKind::LinkOptimize: return 3;
    }
    return 4;
}

std::string Objective::label() const {
    std::string out(to_string(kind));
    out += ':';
    out += src;
    if (kind != ObjectiveKind::Block) {
        out += "->";
        out += dst;
    }
    return out;
}

double tile_loss_db() { return -10.0 * std::log10(kSteerEfficiency); }

namespace {

bool front_of(const Tile& tile, Vec2 p) {
    return (p - tile.center).dot(tile.normal) > kGeomEps;
}

const Device& require_device(const Floorplan& plan, const std::string& id,
                             const std::string& context) {
    const Device* dev = plan.device(id);
    if (dev == nullptr)
        throw ValidationError(context + ": unknown device '" + id + "'");
    return *dev;
}

TileModel model_for(const Floorplan& plan, const Tile& tile) {
    TileModel model;
    model.columns = tile.columns;
    model.spacing = plan.tile_size / plan.columns_per_tile;
    return model;
}

SwitchConfig config_for(const Floorplan& plan, const Tile& tile, const EmFunction& fn,
                        double f, LookupTable& table, int budget, unsigned rng_seed) {
    const CompileRequest req = make_request(fn, &tile);
    const TileModel model = model_for(plan, tile);
    if (auto hit = table.get(req, model.columns, f)) return *hit;
    SwitchConfig cfg = compile(model, req, f, budget, rng_seed);
    table.put(req, model.columns, f, cfg);
    return cfg;
}

} // namespace

TileGraph build_tile_graph(const Floorplan& plan) {
    TileGraph graph;
    for (const Tile& t : plan.tiles) {
        const Wall* w = plan.wall(t.wall_id);
        if (w != nullptr && w->coated) graph.tiles.push_back(t.id);
    }
    std::sort(graph.tiles.begin(), graph.tiles.end());

    std::vector<const Device*> devices;
    for (const Device& d : plan.devices) devices.push_back(&d);
    std::sort(devices.begin(), devices.end(),
              [](const Device* a, const Device* b) { return a->id < b->id; });

    for (const Device* d : devices) {
        auto& seen = graph.device_tiles[d->id];
        for (int tid : graph.tiles) {
            const Tile& t = *plan.tile(tid);
            if (!front_of(t, d->position)) continue;
            if (line_of_sight(d->position, t.center, plan, t.wall_id))
                seen.push_back(tid);
        }
    }

    for (size_t i = 0; i < graph.tiles.size(); ++i) {
        const Tile& a = *plan.tile(graph.tiles[i]);
        for (size_t j = i + 1; j < graph.tiles.size(); ++j) {
            const Tile& b = *plan.tile(graph.tiles[j]);
            if (a.wall_id == b.wall_id) continue;
            if (!front_of(a, b.center) || !front_of(b, a.center)) continue;
            if (!line_of_sight(a.center, b.center, plan, a.wall_id, b.wall_id)) continue;
            graph.tile_tiles[a.id].push_back(b.id);
            graph.tile_tiles[b.id].push_back(a.id);
        }
    }
    for (auto& [id, adj] : graph.tile_tiles) std::sort(adj.begin(), adj.end());

    for (const Device* a : devices) {
        auto& adj = graph.device_devices[a->id];
        for (const Device* b : devices) {
            if (a == b) continue;
            if (line_of_sight(a->position, b->position, plan)) adj.push_back(b->id);
        }
    }
    return graph;
}

namespace {

struct RouteState {
    const Floorplan& plan;
    const TileGraph& graph;
    const RouteQuery& query;
    Vec2 src_pos;
    Vec2 dst_pos;
    std::set<int> dst_tiles; // tiles the destination can see

    std::optional<AirPath> best;
    std::vector<int> stack;
    std::vector<double> lengths;

    bool segment_ok(Vec2 p, Vec2 q) const {
        for (const Vec2& avoid : query.avoid_points)
            if (point_segment_distance(avoid, p, q) <= query.avoid_radius) return false;
        return true;
    }

    void offer(double total_length) {
        AirPath cand;
        cand.src = query.src;
        cand.dst = query.dst;
        cand.tiles = stack;
        cand.segment_lengths = lengths;
        cand.total_length = total_length;
        cand.total_loss_db = free_space_loss_db(total_length, query.frequency_hz) +
                             static_cast<double>(stack.size()) * tile_loss_db();
        if (!best) {
            best = std::move(cand);
            return;
        }
        if (cand.total_loss_db != best->total_loss_db) {
            if (cand.total_loss_db < best->total_loss_db) best = std::move(cand);
            return;
        }
        if (cand.tiles.size() != best->tiles.size()) {
            if (cand.tiles.size() < best->tiles.size()) best = std::move(cand);
            return;
        }
        if (cand.tiles < best->tiles) best = std::move(cand);
    }

    // Depth-first walk over distinct coated tiles. `here` is the center of the
    // last tile on the stack, `acc` the unfolded length so far.
    void extend(Vec2 here, double acc, int remaining) {
        const int tid = stack.back();
        if (dst_tiles.count(tid) != 0 && segment_ok(here, dst_pos)) {
            lengths.push_back((dst_pos - here).norm());
            offer(acc + lengths.back());
            lengths.pop_back();
        }
        if (remaining == 0) return;
        const auto it = graph.tile_tiles.find(tid);
        if (it == graph.tile_tiles.end()) return;
        for (int next : it->second) {
            if (query.exclude_tiles.count(next) != 0) continue;
            if (std::find(stack.begin(), stack.end(), next) != stack.end()) continue;
            const Vec2 c = plan.tile(next)->center;
            if (!segment_ok(here, c)) continue;
            stack.push_back(next);
            lengths.push_back((c - here).norm());
            extend(c, acc + lengths.back(), remaining - 1);
            lengths.pop_back();
            stack.pop_back();
        }
    }
};

} // namespace

std::optional<AirPath> compute_airpath(const Floorplan& plan, const TileGraph& graph,
                                       const RouteQuery& query) {
    const Device& src = require_device(plan, query.src, "compute_airpath");
    const Device& dst = require_device(plan, query.dst, "compute_airpath");
    if (query.src == query.dst)
        throw ValidationError("compute_airpath: src and dst are both '" + query.src + "'");

    RouteState state{plan, graph, query, src.position, dst.position, {}, {}, {}, {}};
    if (const auto it = graph.device_tiles.find(query.dst); it != graph.device_tiles.end())
        state.dst_tiles.insert(it->second.begin(), it->second.end());

    // Direct link, zero bounces.
    if (!query.require_tile &&
        [&] {
            const auto it = graph.device_devices.find(query.src);
            return it != graph.device_devices.end() &&
                   std::find(it->second.begin(), it->second.end(), query.dst) !=
                       it->second.end();
        }() &&
        state.segment_ok(src.position, dst.position)) {
        state.lengths.push_back((dst.position - src.position).norm());
        state.offer(state.lengths.back());
        state.lengths.pop_back();
    }

    if (query.max_bounces > 0) {
        if (const auto it = graph.device_tiles.find(query.src);
            it != graph.device_tiles.end()) {
            for (int first : it->second) {
                if (query.exclude_tiles.count(first) != 0) continue;
                const Vec2 c = plan.tile(first)->center;
                if (!state.segment_ok(src.position, c)) continue;
                state.stack.push_back(first);
                state.lengths.push_back((c - src.position).norm());
                state.extend(c, state.lengths.back(), query.max_bounces - 1);
                state.lengths.pop_back();
                state.stack.pop_back();
            }
        }
    }
    return state.best;
}

std::map<int, EmFunction> path_functions(const Floorplan& plan, const AirPath& path,
                                         bool focus_last) {
    std::map<int, EmFunction> out;
    if (path.tiles.empty()) return out;
    const Device& src = require_device(plan, path.src, "path_functions");
    const Device& dst = require_device(plan, path.dst, "path_functions");

    for (size_t i = 0; i < path.tiles.size(); ++i) {
        const Tile& tile = *plan.tile(path.tiles[i]);
        const Vec2 prev =
            i == 0 ? src.position : plan.tile(path.tiles[i - 1])->center;
        const Vec2 next = i + 1 == path.tiles.size()
                              ? dst.position
                              : plan.tile(path.tiles[i + 1])->center;
        const double incident =
            angle_in_frame(tile.center, prev, tile.tangent, tile.normal);
        const double target =
            angle_in_frame(tile.center, next, tile.tangent, tile.normal);

        EmFunction fn;
        if (focus_last && i + 1 == path.tiles.size()) {
            fn = EmFunction::focus(dst.position);
            fn.incident_angle = incident;
        } else {
            fn = EmFunction::steer(incident, target);
        }
        out.emplace(tile.id, fn);
    }
    return out;
}

std::vector<TileCommand> emit_commands(const Floorplan& plan, const AirPath& path,
                                       bool focus_last, double frequency_hz,
                                       LookupTable& table, int budget, int& next_seq) {
    std::vector<TileCommand> out;
    const auto fns = path_functions(plan, path, focus_last);
    for (int tid : path.tiles) {
        const Tile& tile = *plan.tile(tid);
        const EmFunction& fn = fns.at(tid);
        TileCommand cmd;
        cmd.seq = next_seq++;
        cmd.tile_id = tid;
        cmd.fn = fn;
        cmd.config = config_for(plan, tile, fn, frequency_hz, table, budget, 0);
        cmd.objective = path.objective;
        out.push_back(std::move(cmd));
    }
    return out;
}

std::map<int, EmFunction> apply_block(const Floorplan& plan, const Device& rogue,
                                      const std::set<int>& claimed, double p_min_dbm,
                                      int n_rays) {
    std::map<int, EmFunction> out;
    if (std::isinf(rogue.tx_power_dbm) && rogue.tx_power_dbm < 0.0) return out;
    std::map<int, double> closest;
    const double f = rogue.frequency_hz > 0.0 ? rogue.frequency_hz : 2.4e9;
    for (int i = 0; i < n_rays; ++i) {
        const double ang = 2.0 * kPi * i / n_rays;
        const auto hit =
            trace_ray(rogue.position, Vec2{std::cos(ang), std::sin(ang)}, plan);
        if (!hit || !hit->front) continue;
        if (claimed.count(hit->tile_id) != 0) continue;
        const Wall* wall = plan.wall(plan.tile(hit->tile_id)->wall_id);
        if (wall == nullptr || !wall->coated) continue;
        if (rogue.tx_power_dbm - free_space_loss_db(hit->distance, f) < p_min_dbm)
            continue;
        const auto it = closest.find(hit->tile_id);
        if (it != closest.end() && it->second <= hit->distance) continue;
        closest[hit->tile_id] = hit->distance;
        EmFunction fn = EmFunction::absorb();
        fn.incident_angle = hit->incidence;
        out[hit->tile_id] = fn;
    }
    return out;
}

Controller::Controller(const Floorplan& plan, ControllerConfig cfg, LookupTable table)
    : plan_(plan), cfg_(cfg), graph_(build_tile_graph(plan)), table_(std::move(table)) {
    if (table_.size() == 0) {
        TileModel base;
        base.columns = plan.columns_per_tile;
        base.spacing = plan.tile_size / plan.columns_per_tile;
        table_ = LookupTable(base);
    }
}

StepResult Controller::control_step(const std::vector<Objective>& objectives) {
    std::vector<const Objective*> order;
    for (const Objective& obj : objectives) order.push_back(&obj);
    std::stable_sort(order.begin(), order.end(),
                     [](const Objective* a, const Objective* b) {
                         const int ra = objective_rank(a->kind);
                         const int rb = objective_rank(b->kind);
                         if (ra != rb) return ra < rb;
                         if (a->src != b->src) return a->src < b->src;
                         return a->dst < b->dst;
                     });

    StepResult result;
    struct Want {
        EmFunction fn;
        double frequency;
        std::string label;
    };
    std::map<int, Want> desired;
    std::set<int> claimed;

    auto merge = [&](const std::map<int, EmFunction>& funcs, double f,
                     const std::string& label) {
        for (const auto& [tid, fn] : funcs) {
            desired[tid] = Want{fn, f, label};
            claimed.insert(tid);
        }
    };

    for (const Objective* obj : order) {
        const std::string label = obj->label();
        if (obj->kind == ObjectiveKind::Block) {
            const Device& rogue = require_device(plan_, obj->src, label);
            const double f = rogue.frequency_hz > 0.0 ? rogue.frequency_hz : 2.4e9;
            merge(apply_block(plan_, rogue, claimed, cfg_.p_min_dbm, cfg_.n_rays), f,
                  label);
            result.served.push_back(label);
            continue;
        }

        const Device& src = require_device(plan_, obj->src, label);
        require_device(plan_, obj->dst, label);

        RouteQuery query;
        query.src = obj->src;
        query.dst = obj->dst;
        query.max_bounces = cfg_.max_bounces;
        query.frequency_hz = src.frequency_hz > 0.0 ? src.frequency_hz : 2.4e9;
        query.exclude_tiles = claimed;
        query.require_tile = obj->kind == ObjectiveKind::PowerTransfer;
        if (obj->kind == ObjectiveKind::SecureLink) {
            for (const Device& d : plan_.devices)
                if (d.role == DeviceRole::Eavesdropper)
                    query.avoid_points.push_back(d.position);
            query.avoid_radius = obj->avoid_radius;
        }

        auto path = compute_airpath(plan_, graph_, query);
        if (!path) {
            result.unserved.push_back(label);
            continue;
        }
        path->objective = label;
        merge(path_functions(plan_, *path, obj->kind == ObjectiveKind::PowerTransfer),
              query.frequency_hz, label);
        result.paths.push_back(std::move(*path));
        result.served.push_back(label);
    }

    // Delta against the live state: commands only where the function changes,
    // plus a specular reset for every tile the new plan no longer uses.
    // Compiling only the delta keeps repeated steps free of search work.
    for (const auto& [tid, want] : desired) {
        const auto it = state_.find(tid);
        if (it != state_.end() && it->second == want.fn) continue;
        const Tile& tile = *plan_.tile(tid);
        TileCommand cmd;
        cmd.seq = next_seq_++;
        cmd.tile_id = tid;
        cmd.fn = want.fn;
        cmd.config = config_for(plan_, tile, want.fn, want.frequency, table_,
                                cfg_.compile_budget, cfg_.rng_seed);
        cmd.objective = want.label;
        result.commands.push_back(std::move(cmd));
    }
    for (const auto& [tid, fn] : state_) {
        if (desired.count(tid) != 0) continue;
        const Tile& tile = *plan_.tile(tid);
        const EmFunction reset = EmFunction::specular();
        TileCommand cmd;
        cmd.seq = next_seq_++;
        cmd.tile_id = tid;
        cmd.fn = reset;
        cmd.config = config_for(plan_, tile, reset, 2.4e9, table_, cfg_.compile_budget,
                                cfg_.rng_seed);
        cmd.objective = "RELEASE";
        result.commands.push_back(std::move(cmd));
    }

    state_.clear();
    for (const auto& [tid, want] : desired) state_[tid] = want.fn;
    return result;
}

} // namespace hypersim
