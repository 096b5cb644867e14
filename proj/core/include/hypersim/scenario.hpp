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
// Scenario files describe a scene and what the controller should do with it:
//
//   {
//     "tile_size": 0.5,             // optional, meters
//     "columns_per_tile": 8,        // optional
//     "interior_point": [x, y],     // side of the walls that is "the room"
//     "walls": [{"id": 0, "a": [x,y], "b": [x,y], "coated": true}, ...],
//     "devices": [{"id": "AP", "position": [x,y], "role": "TX",
//                  "tx_power_dbm": 20.0, "frequency_hz": 2.4e9}, ...],
//     "objectives": [{"kind": "SECURE_LINK", "src": "AP", "dst": "A",
//                     "avoid_radius": 1.0}, ...],
//     "tile_topology": [[3, 4], ...] // optional wired links within a wall
//   }
//
// Loading is strict: unknown fields, missing required fields, or invariant
// breaches raise ValidationError naming the offending path; malformed JSON
// raises ParseError. The returned floorplan is fully tessellated.

#ifndef HYPERSIM_SCENARIO_HPP
#define HYPERSIM_SCENARIO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hypersim/controller.hpp"
#include "hypersim/geometry.hpp"

namespace hypersim {

struct Scenario {
    Floorplan plan;
    std::vector<Objective> objectives;
};

// Parse scenario JSON text. `name` labels error messages (usually the file).
Scenario parse_scenario(std::string_view text, const std::string& name = "scenario");

Scenario load_scenario(const std::filesystem::path& path);

} // namespace hypersim

#endif // HYPERSIM_SCENARIO_HPP
