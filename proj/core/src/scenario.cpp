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

#include "hypersim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hypersim/errors.hpp"

namespace hypersim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
    for (const auto& [key, value] : obj.items())
        if (allowed.count(key) == 0) fail(path + "." + key, "unknown field");
}

const json& require(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double number_at(const json& value, const std::string& path) {
    if (!value.is_number()) fail(path, "expected a number");
    const double d = value.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
}

int integer_at(const json& value, const std::string& path) {
    if (!value.is_number_integer()) fail(path, "expected an integer");
    return value.get<int>();
}

std::string string_at(const json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

bool bool_at(const json& value, const std::string& path) {
    if (!value.is_boolean()) fail(path, "expected a boolean");
    return value.get<bool>();
}

Vec2 point_at(const json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 2) fail(path, "expected [x, y]");
    return Vec2{number_at(value[0], path + "[0]"), number_at(value[1], path + "[1]")};
}

Wall wall_at(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected an object");
    reject_unknown(value, {"id", "a", "b", "coated"}, path);
    Wall wall;
    wall.id = integer_at(require(value, "id", path), path + ".id");
    wall.a = point_at(require(value, "a", path), path + ".a");
    wall.b = point_at(require(value, "b", path), path + ".b");
    wall.coated = bool_at(require(value, "coated", path), path + ".coated");
    if (wall.length() <= kGeomEps) fail(path, "wall has zero length");
    return wall;
}

Device device_at(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected an object");
    reject_unknown(value, {"id", "position", "role", "tx_power_dbm", "frequency_hz"},
                   path);
    Device dev;
    dev.id = string_at(require(value, "id", path), path + ".id");
    if (dev.id.empty()) fail(path + ".id", "device id must not be empty");
    dev.position = point_at(require(value, "position", path), path + ".position");

    const std::string role = string_at(require(value, "role", path), path + ".role");
    const auto parsed = device_role_from_string(role);
    if (!parsed) fail(path + ".role", "unknown role '" + role + "'");
    dev.role = *parsed;

    dev.frequency_hz =
        number_at(require(value, "frequency_hz", path), path + ".frequency_hz");
    if (dev.frequency_hz <= 0.0) fail(path + ".frequency_hz", "must be > 0");

    const bool may_transmit =
        dev.role == DeviceRole::Tx || dev.role == DeviceRole::Blocked;
    if (const auto it = value.find("tx_power_dbm"); it != value.end()) {
        if (!may_transmit)
            fail(path + ".tx_power_dbm", "only TX and BLOCKED devices transmit");
        dev.tx_power_dbm = number_at(*it, path + ".tx_power_dbm");
    } else if (dev.role == DeviceRole::Tx) {
        fail(path + ".tx_power_dbm", "missing required field");
    }
    return dev;
}

Objective objective_at(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected an object");
    Objective obj;
    const std::string kind = string_at(require(value, "kind", path), path + ".kind");
    const auto parsed = objective_kind_from_string(kind);
    if (!parsed) fail(path + ".kind", "unknown objective kind '" + kind + "'");
    obj.kind = *parsed;

    if (obj.kind == ObjectiveKind::Block) {
        reject_unknown(value, {"kind", "src"}, path);
        obj.src = string_at(require(value, "src", path), path + ".src");
        return obj;
    }

    if (obj.kind == ObjectiveKind::SecureLink)
        reject_unknown(value, {"kind", "src", "dst", "avoid_radius"}, path);
    else
        reject_unknown(value, {"kind", "src", "dst"}, path);
    obj.src = string_at(require(value, "src", path), path + ".src");
    obj.dst = string_at(require(value, "dst", path), path + ".dst");
    if (obj.src == obj.dst) fail(path, "src and dst must differ");
    if (const auto it = value.find("avoid_radius"); it != value.end()) {
        obj.avoid_radius = number_at(*it, path + ".avoid_radius");
        if (obj.avoid_radius < 0.0) fail(path + ".avoid_radius", "must be >= 0");
    }
    return obj;
}

} // namespace

Scenario parse_scenario(std::string_view text, const std::string& name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(name + ": " + e.what());
    }
    if (!doc.is_object()) fail(name, "expected a JSON object");
    reject_unknown(doc,
                   {"tile_size", "columns_per_tile", "interior_point", "walls",
                    "devices", "objectives", "tile_topology"},
                   name);

    Scenario scenario;
    Floorplan& plan = scenario.plan;

    if (const auto it = doc.find("tile_size"); it != doc.end()) {
        plan.tile_size = number_at(*it, name + ".tile_size");
        if (plan.tile_size <= 0.0) fail(name + ".tile_size", "must be > 0");
    }
    if (const auto it = doc.find("columns_per_tile"); it != doc.end()) {
        plan.columns_per_tile = integer_at(*it, name + ".columns_per_tile");
        if (plan.columns_per_tile < 1) fail(name + ".columns_per_tile", "must be >= 1");
    }
    plan.interior_point =
        point_at(require(doc, "interior_point", name), name + ".interior_point");

    if (const auto it = doc.find("walls"); it != doc.end()) {
        if (!it->is_array()) fail(name + ".walls", "expected an array");
        std::set<int> wall_ids;
        for (size_t i = 0; i < it->size(); ++i) {
            const std::string path = name + ".walls[" + std::to_string(i) + "]";
            Wall wall = wall_at((*it)[i], path);
            if (!wall_ids.insert(wall.id).second)
                fail(path + ".id", "duplicate wall id " + std::to_string(wall.id));
            plan.walls.push_back(wall);
        }
    }

    int next_tile_id = 0;
    for (const Wall& wall : plan.walls) {
        auto tiles = tessellate(wall, plan.tile_size, plan.columns_per_tile,
                                plan.interior_point, next_tile_id);
        next_tile_id += static_cast<int>(tiles.size());
        plan.tiles.insert(plan.tiles.end(), tiles.begin(), tiles.end());
    }

    if (const auto it = doc.find("devices"); it != doc.end()) {
        if (!it->is_array()) fail(name + ".devices", "expected an array");
        std::set<std::string> device_ids;
        for (size_t i = 0; i < it->size(); ++i) {
            const std::string path = name + ".devices[" + std::to_string(i) + "]";
            Device dev = device_at((*it)[i], path);
            if (!device_ids.insert(dev.id).second)
                fail(path + ".id", "duplicate device id '" + dev.id + "'");
            for (const Wall& wall : plan.walls)
                if (point_segment_distance(dev.position, wall.a, wall.b) <= kGeomEps)
                    fail(path + ".position", "device '" + dev.id + "' lies on wall " +
                                                 std::to_string(wall.id));
            plan.devices.push_back(std::move(dev));
        }
    }

    if (const auto it = doc.find("tile_topology"); it != doc.end()) {
        if (!it->is_array()) fail(name + ".tile_topology", "expected an array");
        for (size_t i = 0; i < it->size(); ++i) {
            const std::string path = name + ".tile_topology[" + std::to_string(i) + "]";
            const json& pair = (*it)[i];
            if (!pair.is_array() || pair.size() != 2)
                fail(path, "expected [tile_id, tile_id]");
            const int a = integer_at(pair[0], path + "[0]");
            const int b = integer_at(pair[1], path + "[1]");
            const Tile* ta = plan.tile(a);
            const Tile* tb = plan.tile(b);
            if (ta == nullptr) fail(path + "[0]", "unknown tile " + std::to_string(a));
            if (tb == nullptr) fail(path + "[1]", "unknown tile " + std::to_string(b));
            if (a == b) fail(path, "self link");
            if (ta->wall_id != tb->wall_id)
                fail(path, "link crosses walls " + std::to_string(ta->wall_id) +
                               " and " + std::to_string(tb->wall_id) +
                               "; wiring stays within one object");
            plan.tile_topology.emplace_back(a, b);
        }
    }

    if (const auto it = doc.find("objectives"); it != doc.end()) {
        if (!it->is_array()) fail(name + ".objectives", "expected an array");
        for (size_t i = 0; i < it->size(); ++i) {
            const std::string path = name + ".objectives[" + std::to_string(i) + "]";
            Objective obj = objective_at((*it)[i], path);
            if (plan.device(obj.src) == nullptr)
                fail(path + ".src", "unknown device '" + obj.src + "'");
            if (obj.kind != ObjectiveKind::Block && plan.device(obj.dst) == nullptr)
                fail(path + ".dst", "unknown device '" + obj.dst + "'");
            scenario.objectives.push_back(std::move(obj));
        }
    }

    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.filename().string());
}

} // namespace hypersim
