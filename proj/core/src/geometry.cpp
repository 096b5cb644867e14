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

#include "hypersim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypersim {

std::string_view to_string(DeviceRole role) {
    switch (role) {
        case DeviceRole::Tx: return "TX";
        case DeviceRole::Rx: return "RX";
        case DeviceRole::Eavesdropper: return "EAVESDROPPER";
        case DeviceRole::Blocked: return "BLOCKED";
        case DeviceRole::Idle: return "IDLE";
    }
    return "IDLE";
}

std::optional<DeviceRole> device_role_from_string(std::string_view s) {
    if (s == "TX") return DeviceRole::Tx;
    if (s == "RX") return DeviceRole::Rx;
    if (s == "EAVESDROPPER") return DeviceRole::Eavesdropper;
    if (s == "BLOCKED") return DeviceRole::Blocked;
    if (s == "IDLE") return DeviceRole::Idle;
    return std::nullopt;
}

const Wall* Floorplan::wall(int id) const {
    for (const Wall& w : walls)
        if (w.id == id) return &w;
    return nullptr;
}

const Tile* Floorplan::tile(int id) const {
    for (const Tile& t : tiles)
        if (t.id == id) return &t;
    return nullptr;
}

const Device* Floorplan::device(std::string_view id) const {
    for (const Device& d : devices)
        if (d.id == id) return &d;
    return nullptr;
}

void Floorplan::bounds(Vec2& lo, Vec2& hi) const {
    lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    auto grow = [&](Vec2 p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    };
    for (const Wall& w : walls) {
        grow(w.a);
        grow(w.b);
    }
    for (const Device& d : devices) grow(d.position);
    if (walls.empty() && devices.empty()) {
        lo = {0.0, 0.0};
        hi = {0.0, 0.0};
    }
}

std::vector<Tile> tessellate(const Wall& wall, double tile_size, int columns_per_tile,
                             Vec2 interior_point, int first_tile_id) {
    const double len = wall.length();
    const Vec2 tangent = (wall.b - wall.a).normalized();
    Vec2 normal = tangent.perp();
    // Face the interior. On the carrier line exactly, keep the +90 degree side.
    if (normal.dot(interior_point - wall.a) < 0.0) normal = -normal;

    const double spacing = tile_size / static_cast<double>(columns_per_tile);
    const int full = static_cast<int>(std::floor(len / tile_size + kGeomEps));
    const double remainder = len - full * tile_size;

    std::vector<Tile> tiles;
    tiles.reserve(static_cast<size_t>(full) + 1);
    int id = first_tile_id;
    for (int i = 0; i < full; ++i) {
        Tile t;
        t.id = id++;
        t.wall_id = wall.id;
        t.width = tile_size;
        t.center = wall.a + tangent * ((i + 0.5) * tile_size);
        t.tangent = tangent;
        t.normal = normal;
        t.partial = false;
        t.columns = columns_per_tile;
        tiles.push_back(t);
    }
    if (remainder > kGeomEps) {
        Tile t;
        t.id = id++;
        t.wall_id = wall.id;
        t.width = remainder;
        t.center = wall.a + tangent * (full * tile_size + remainder / 2.0);
        t.tangent = tangent;
        t.normal = normal;
        t.partial = true;
        t.columns = std::max(1, static_cast<int>(std::llround(remainder / spacing)));
        tiles.push_back(t);
    }
    return tiles;
}

std::optional<RayHit> trace_ray(Vec2 origin, Vec2 direction, const Floorplan& plan,
                                int exclude_tile, double eps) {
    const Vec2 d = direction.normalized();
    std::optional<RayHit> best;
    for (const Tile& tile : plan.tiles) {
        if (tile.id == exclude_tile) continue;
        const Vec2 p0 = tile.endpoint_a();
        const Vec2 e = tile.endpoint_b() - p0;
        const double denom = d.cross(e);
        if (std::abs(denom) < 1e-15) continue; // parallel: no usable reflection
        const Vec2 w = p0 - origin;
        const double t = w.cross(e) / denom;
        const double u = w.cross(d) / denom;
        if (t <= eps || u < 0.0 || u > 1.0) continue;
        // Ties within 1e-12 m go to the smaller tile id so that rays crossing a
        // shared tile boundary resolve deterministically.
        if (best && t > best->distance - 1e-12 && t < best->distance + 1e-12) {
            if (tile.id > best->tile_id) continue;
        } else if (best && t >= best->distance) {
            continue;
        }
        RayHit hit;
        hit.tile_id = tile.id;
        hit.point = origin + d * t;
        hit.distance = t;
        hit.incidence = std::atan2((-d).dot(tile.tangent), (-d).dot(tile.normal));
        hit.front = (-d).dot(tile.normal) > 0.0;
        best = hit;
    }
    return best;
}

bool line_of_sight(Vec2 p, Vec2 q, const Floorplan& plan,
                   int ignore_wall_a, int ignore_wall_b) {
    for (const Wall& w : plan.walls) {
        if (w.id == ignore_wall_a || w.id == ignore_wall_b) continue;
        if (segment_segment_distance(p, q, w.a, w.b) <= kGeomEps) return false;
    }
    return true;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 <= 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

namespace {

// Proper crossing test for the interior of two segments via orientations;
// the distance fallback below covers touching and collinear cases.
bool segments_cross(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2) {
    auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); };
    const double o1 = orient(p1, q1, p2);
    const double o2 = orient(p1, q1, q2);
    const double o3 = orient(p2, q2, p1);
    const double o4 = orient(p2, q2, q1);
    return ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) &&
           o1 != 0.0 && o2 != 0.0 && o3 != 0.0 && o4 != 0.0;
}

} // namespace

double segment_segment_distance(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2) {
    if (segments_cross(p1, q1, p2, q2)) return 0.0;
    double d = point_segment_distance(p1, p2, q2);
    d = std::min(d, point_segment_distance(q1, p2, q2));
    d = std::min(d, point_segment_distance(p2, p1, q1));
    d = std::min(d, point_segment_distance(q2, p1, q1));
    return d;
}

double angle_in_frame(Vec2 origin, Vec2 target, Vec2 tangent, Vec2 normal) {
    const Vec2 v = target - origin;
    return std::atan2(v.dot(tangent), v.dot(normal));
}

} // namespace hypersim
