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
// 2-D scene model: walls, their tessellation into software-controlled tiles,
// devices, and the ray/segment primitives everything above is built on.
// All lengths are meters, all angles radians unless a name says otherwise.

#ifndef HYPERSIM_GEOMETRY_HPP
#define HYPERSIM_GEOMETRY_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hypersim {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Tolerance for "on top of each other" geometry decisions: self-hit rejection
// when re-launching from a surface, grazing contact in visibility tests,
// device-on-wall validation. Scene coordinates are desk-to-room scale, so a
// nanometer is far below anything physical.
inline constexpr double kGeomEps = 1e-9; // m

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    // z-component of the 3-D cross product; sign = which side o is on.
    constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }

    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    // 90 degree counter-clockwise rotation.
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

// Mirror direction d across a surface with unit normal n.
inline Vec2 reflect(Vec2 d, Vec2 n) { return d - 2.0 * d.dot(n) * n; }

// Straight wall segment from a to b. Coated walls carry controllable tiles;
// uncoated walls are plain construction material. Both block and reflect.
struct Wall {
    int id = 0;
    Vec2 a;
    Vec2 b;
    bool coated = false;

    double length() const { return (b - a).norm(); }
};

// One controllable surface patch. tangent points from the wall's a endpoint
// toward b; normal = tangent rotated +90 degrees, flipped if needed so that it
// faces the scenario interior. Only the normal side interacts with waves.
struct Tile {
    int id = 0;
    int wall_id = 0;
    Vec2 center;
    Vec2 tangent;      // unit
    Vec2 normal;       // unit, perpendicular to tangent
    double width = 0.0;
    bool partial = false; // remainder patch shorter than the nominal tile size
    int columns = 0;      // meta-atom columns across the width

    Vec2 endpoint_a() const { return center - tangent * (width / 2.0); }
    Vec2 endpoint_b() const { return center + tangent * (width / 2.0); }
};

enum class DeviceRole { Tx, Rx, Eavesdropper, Blocked, Idle };

std::string_view to_string(DeviceRole role);
std::optional<DeviceRole> device_role_from_string(std::string_view s);

struct Device {
    std::string id;
    Vec2 position;
    DeviceRole role = DeviceRole::Idle;
    // Transmit power for Tx and Blocked roles. Defaults to silent so a device
    // never radiates unless the scenario gave it power.
    double tx_power_dbm = -std::numeric_limits<double>::infinity();
    double frequency_hz = 0.0;
};

// The fully derived scene: input walls/devices plus the tile tessellation.
struct Floorplan {
    double tile_size = 0.5;
    int columns_per_tile = 8;
    Vec2 interior_point;
    std::vector<Wall> walls;
    std::vector<Tile> tiles;
    std::vector<Device> devices;
    // Optional wired adjacency overrides between tiles of the same wall,
    // symmetric pairs. Empty means chain order along each wall.
    std::vector<std::pair<int, int>> tile_topology;

    const Wall* wall(int id) const;
    const Tile* tile(int id) const;
    const Device* device(std::string_view id) const;
    // Smallest axis-aligned box containing all walls and devices.
    void bounds(Vec2& lo, Vec2& hi) const;
};

// Result of a ray/tile intersection. incidence is the signed angle between the
// reversed ray direction and the tile normal, positive toward the tangent, and
// lies in (-pi/2, pi/2) whenever front is true. For back-face hits incidence
// is still reported with the same formula but has no physical meaning.
struct RayHit {
    int tile_id = 0;
    Vec2 point;
    double distance = 0.0;
    double incidence = 0.0;
    bool front = false;
};

// Split a wall into floor(length/tile_size) full tiles walking a -> b, plus a
// flagged partial tile if a remainder longer than kGeomEps is left over.
// Normals face the side of the wall that interior_point lies on; if the point
// is exactly on the wall's carrier line the +90 degree side is kept.
// Column counts keep the meta-atom density of a full tile: spacing is
// tile_size/columns_per_tile and a partial tile gets round(width/spacing),
// never less than one.
// Tile ids are assigned first_tile_id, first_tile_id+1, ... in walk order.
std::vector<Tile> tessellate(const Wall& wall, double tile_size, int columns_per_tile,
                             Vec2 interior_point, int first_tile_id);

// Nearest tile intersected strictly ahead of origin (distance > eps).
// exclude_tile skips one tile id (use after a bounce). Distance ties are
// broken toward the smaller tile id. Returns nullopt if the ray escapes.
std::optional<RayHit> trace_ray(Vec2 origin, Vec2 direction, const Floorplan& plan,
                                int exclude_tile = -1, double eps = kGeomEps);

// True when the open segment p-q crosses no wall. Grazing contact within
// kGeomEps of a wall counts as blocked. Walls whose ids appear in
// ignore_wall_a/_b are skipped (used for visibility from a point that lies on
// a wall, e.g. a tile center).
bool line_of_sight(Vec2 p, Vec2 q, const Floorplan& plan,
                   int ignore_wall_a = -1, int ignore_wall_b = -1);

// Smallest distance between point p and segment a-b.
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Smallest distance between two segments; 0 when they intersect.
double segment_segment_distance(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2);

// Signed angle of (target - origin) measured from `normal`, positive toward
// `tangent`. Used to express directions in a tile's local frame.
double angle_in_frame(Vec2 origin, Vec2 target, Vec2 tangent, Vec2 normal);

} // namespace hypersim

#endif // HYPERSIM_GEOMETRY_HPP
