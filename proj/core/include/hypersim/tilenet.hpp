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
// Intra-object wired network simulation. The tiles of one object (a wall)
// form a wired mesh; the minimum tile id is elected representative and
// receives command batches from the controller. Dissemination floods the
// batch over a breadth-first spanning tree in synchronous rounds: one hop
// per round on the way down, acknowledgment bitmaps merging per round on the
// way back up. A connected object therefore completes in exactly
// 2 * eccentricity(representative) rounds regardless of batch size.

#ifndef HYPERSIM_TILENET_HPP
#define HYPERSIM_TILENET_HPP

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hypersim/controller.hpp"
#include "hypersim/geometry.hpp"

namespace hypersim {

inline constexpr int kBroadcast = -1;

enum class FrameType { Set, Ack };

std::string_view to_string(FrameType type);

// One message on the wired mesh. SET frames carry the command batch downward;
// ACK frames carry the set of tiles heard from so far upward.
struct Frame {
    FrameType type = FrameType::Set;
    int seq = 0;    // highest command seq in the batch; ACKs echo it
    int origin = 0; // sender tile
    int target = kBroadcast;
    std::vector<TileCommand> commands;
    std::set<int> acked;
};

// Protocol state of one tile. neighbors describe the physical wiring;
// parent/children the spanning tree actually used for forwarding.
struct TileNode {
    int tile_id = 0;
    std::vector<int> neighbors;
    int parent = -1; // -1 at the representative
    std::vector<int> children;
    int last_seq = 0; // highest frame seq seen; lower or equal means duplicate
    std::optional<TileCommand> applied;

    // Aggregation state of the acknowledgment wave in flight.
    int pending = 0;
    std::set<int> ack_buffer;
};

// Per-node protocol step: returns the frames the node sends next round, each
// paired with its destination. Duplicate SET frames (seq already seen) are
// dropped without state change or acknowledgment. Fresh SET frames update
// last_seq, apply any command addressed to this tile, forward to all
// spanning-tree children, and open the acknowledgment count; a node with no
// children acknowledges immediately. ACK frames merge into the buffer and
// travel upward once every child has reported.
std::vector<std::pair<int, Frame>> apply_frame(TileNode& node, const Frame& frame);

// Minimum tile id. Throws EmptyObject on an empty set.
int elect_representative(const std::vector<int>& tiles);

// Consecutive links in the given order, the default wiring of a wall.
std::vector<std::pair<int, int>> chain_links(const std::vector<int>& ids);

struct TraceEvent {
    int round = 0;
    int from = 0;
    int to = 0;
    FrameType type = FrameType::Set;
    int seq = 0;
};

struct DisseminateResult {
    std::map<int, int> delivery; // tile id -> hop count from the representative
    bool acks_complete = false;
    int rounds = 0;
    std::vector<int> applied; // tiles whose state changed, ascending
    std::vector<TraceEvent> trace;
};

// The tiles of one object plus their wiring. Construction elects the
// representative and builds the spanning tree (breadth-first from the
// representative, neighbors in ascending id order).
class TileObject {
public:
    TileObject(const std::vector<int>& tile_ids,
               const std::vector<std::pair<int, int>>& links);

    // The tiles of one wall, wired per the plan's tile_topology entries that
    // stay within the wall, or as a chain in id order when none are given.
    static TileObject for_wall(const Floorplan& plan, int wall_id);

    int representative() const { return rep_; }
    const std::vector<int>& members() const { return members_; }
    // Spanning tree depth, -1 when the tile cannot be reached from the
    // representative over the wiring.
    int depth(int tile_id) const;
    int eccentricity() const;

    // Floods one command batch and runs the full acknowledgment wave.
    // Commands for tiles outside the object raise ValidationError, commands
    // for unreachable tiles raise PartitionError. An empty batch is a no-op.
    DisseminateResult disseminate(const std::vector<TileCommand>& cmds);

    const TileNode& node(int tile_id) const;
    // Wave function a tile currently performs, nullptr when never commanded.
    const EmFunction* function(int tile_id) const;

private:
    std::vector<int> members_;
    std::map<int, TileNode> nodes_;
    std::map<int, int> depth_;
    int rep_ = 0;
};

} // namespace hypersim

#endif // HYPERSIM_TILENET_HPP
