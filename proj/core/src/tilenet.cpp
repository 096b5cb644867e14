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

#include "hypersim/tilenet.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "hypersim/errors.hpp"

namespace hypersim {

std::string_view to_string(FrameType type) {
    return type == FrameType::Set ? "SET" : "ACK";
}

int elect_representative(const std::vector<int>& tiles) {
    if (tiles.empty()) throw EmptyObject("elect_representative: no tiles");
    return *std::min_element(tiles.begin(), tiles.end());
}

std::vector<std::pair<int, int>> chain_links(const std::vector<int>& ids) {
    std::vector<std::pair<int, int>> links;
    for (size_t i = 1; i < ids.size(); ++i) links.emplace_back(ids[i - 1], ids[i]);
    return links;
}

std::vector<std::pair<int, Frame>> apply_frame(TileNode& node, const Frame& frame) {
    std::vector<std::pair<int, Frame>> out;
    if (frame.type == FrameType::Set) {
        if (frame.seq <= node.last_seq) return out; // duplicate, drop silently
        node.last_seq = frame.seq;

        if (frame.target == kBroadcast || frame.target == node.tile_id)
            for (const TileCommand& cmd : frame.commands)
                if (cmd.tile_id == node.tile_id) node.applied = cmd;

        for (int child : node.children) {
            Frame fwd = frame;
            fwd.origin = node.tile_id;
            out.emplace_back(child, fwd);
        }

        node.ack_buffer = {node.tile_id};
        node.pending = static_cast<int>(node.children.size());
        if (node.pending == 0 && node.parent != -1) {
            Frame ack;
            ack.type = FrameType::Ack;
            ack.seq = frame.seq;
            ack.origin = node.tile_id;
            ack.target = node.parent;
            ack.acked = node.ack_buffer;
            out.emplace_back(node.parent, ack);
        }
        return out;
    }

    // ACK: merge the child's subtree report; forward once all children spoke.
    if (frame.seq != node.last_seq) return out; // stale wave, ignore
    node.ack_buffer.insert(frame.acked.begin(), frame.acked.end());
    if (node.pending > 0) --node.pending;
    if (node.pending == 0 && node.parent != -1) {
        Frame ack;
        ack.type = FrameType::Ack;
        ack.seq = frame.seq;
        ack.origin = node.tile_id;
        ack.target = node.parent;
        ack.acked = node.ack_buffer;
        out.emplace_back(node.parent, ack);
    }
    return out;
}

TileObject::TileObject(const std::vector<int>& tile_ids,
                       const std::vector<std::pair<int, int>>& links) {
    rep_ = elect_representative(tile_ids); // throws EmptyObject first
    members_ = tile_ids;
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());

    for (int id : members_) {
        TileNode node;
        node.tile_id = id;
        nodes_.emplace(id, std::move(node));
    }
    for (const auto& [a, b] : links) {
        if (a == b)
            throw ValidationError("tile links: self link on tile " + std::to_string(a));
        if (nodes_.count(a) == 0 || nodes_.count(b) == 0)
            throw ValidationError("tile links: link " + std::to_string(a) + "-" +
                                  std::to_string(b) + " leaves the object");
        nodes_[a].neighbors.push_back(b);
        nodes_[b].neighbors.push_back(a);
    }
    for (auto& [id, node] : nodes_) {
        std::sort(node.neighbors.begin(), node.neighbors.end());
        node.neighbors.erase(std::unique(node.neighbors.begin(), node.neighbors.end()),
                             node.neighbors.end());
    }

    // Breadth-first spanning tree rooted at the representative; ascending
    // neighbor order makes parents and depths reproducible.
    depth_[rep_] = 0;
    std::deque<int> queue{rep_};
    while (!queue.empty()) {
        const int here = queue.front();
        queue.pop_front();
        for (int next : nodes_[here].neighbors) {
            if (depth_.count(next) != 0) continue;
            depth_[next] = depth_[here] + 1;
            nodes_[next].parent = here;
            nodes_[here].children.push_back(next);
            queue.push_back(next);
        }
    }
}

TileObject TileObject::for_wall(const Floorplan& plan, int wall_id) {
    std::vector<int> ids;
    for (const Tile& t : plan.tiles)
        if (t.wall_id == wall_id) ids.push_back(t.id);
    if (ids.empty())
        throw EmptyObject("tile object: wall " + std::to_string(wall_id) +
                          " has no tiles");
    std::sort(ids.begin(), ids.end());

    std::vector<std::pair<int, int>> links;
    for (const auto& [a, b] : plan.tile_topology) {
        const bool a_in = std::binary_search(ids.begin(), ids.end(), a);
        const bool b_in = std::binary_search(ids.begin(), ids.end(), b);
        if (a_in && b_in) links.emplace_back(a, b);
    }
    if (links.empty()) links = chain_links(ids);
    return TileObject(ids, links);
}

int TileObject::depth(int tile_id) const {
    const auto it = depth_.find(tile_id);
    return it == depth_.end() ? -1 : it->second;
}

int TileObject::eccentricity() const {
    int ecc = 0;
    for (const auto& [id, d] : depth_) ecc = std::max(ecc, d);
    return ecc;
}

const TileNode& TileObject::node(int tile_id) const {
    const auto it = nodes_.find(tile_id);
    if (it == nodes_.end())
        throw ValidationError("tile object: tile " + std::to_string(tile_id) +
                              " is not a member");
    return it->second;
}

const EmFunction* TileObject::function(int tile_id) const {
    const TileNode& n = node(tile_id);
    return n.applied ? &n.applied->fn : nullptr;
}

DisseminateResult TileObject::disseminate(const std::vector<TileCommand>& cmds) {
    DisseminateResult result;
    if (cmds.empty()) {
        result.acks_complete = true;
        return result;
    }

    int seq = 0;
    for (const TileCommand& cmd : cmds) {
        if (nodes_.count(cmd.tile_id) == 0)
            throw ValidationError("disseminate: tile " + std::to_string(cmd.tile_id) +
                                  " is not a member of this object");
        if (depth_.count(cmd.tile_id) == 0)
            throw PartitionError("disseminate: tile " + std::to_string(cmd.tile_id) +
                                 " is unreachable from representative " +
                                 std::to_string(rep_));
        seq = std::max(seq, cmd.seq);
    }

    Frame set;
    set.type = FrameType::Set;
    set.seq = seq;
    set.origin = rep_;
    set.target = kBroadcast;
    set.commands = cmds;

    // The representative injects the batch locally in round zero; every
    // further hop costs one round.
    std::vector<std::tuple<int, int, Frame>> wave; // (from, to, frame)
    bool launched = false;
    {
        TileNode& rep = nodes_[rep_];
        const int before = rep.applied ? rep.applied->seq : 0;
        launched = set.seq > rep.last_seq;
        auto out = apply_frame(rep, set);
        if (launched) {
            result.delivery[rep_] = 0;
            if (rep.applied && rep.applied->seq > before)
                result.applied.push_back(rep_);
        }
        for (auto& [to, frame] : out) wave.emplace_back(rep_, to, std::move(frame));
    }

    int round = 0;
    while (!wave.empty()) {
        ++round;
        std::vector<std::tuple<int, int, Frame>> next;
        for (auto& [from, to, frame] : wave) {
            result.trace.push_back(TraceEvent{round, from, to, frame.type, frame.seq});
            TileNode& node = nodes_[to];
            const int before = node.applied ? node.applied->seq : 0;
            const bool fresh = frame.type == FrameType::Set && frame.seq > node.last_seq;
            auto out = apply_frame(node, frame);
            if (fresh) {
                result.delivery[to] = depth_.at(to);
                if (node.applied && node.applied->seq > before)
                    result.applied.push_back(to);
            }
            for (auto& [dest, fwd] : out) next.emplace_back(to, dest, std::move(fwd));
        }
        wave = std::move(next);
    }

    result.rounds = round;
    std::sort(result.applied.begin(), result.applied.end());
    std::set<int> reachable;
    for (const auto& [id, d] : depth_) reachable.insert(id);
    result.acks_complete = launched && nodes_[rep_].ack_buffer == reachable;
    return result;
}

} // namespace hypersim
