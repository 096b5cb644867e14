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
// Deterministic SVG 1.1 rendering of a floorplan: walls as lines, coated
// tiles as ticks colored by their commanded function, devices as labeled
// circles, and routed air paths as polylines colored by objective kind.

#ifndef HYPERSIM_RENDER_HPP
#define HYPERSIM_RENDER_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hypersim/controller.hpp"
#include "hypersim/geometry.hpp"
#include "hypersim/propagation.hpp"

namespace hypersim {

// Tile tick colors by wave function.
inline constexpr std::string_view kColorSteer = "#2e8b57";
inline constexpr std::string_view kColorAbsorb = "#c0392b";
inline constexpr std::string_view kColorFocus = "#e67e22";
inline constexpr std::string_view kColorSpecular = "#888888";

// Air-path stroke colors by objective kind (BLOCK emits no path).
inline constexpr std::string_view kColorLinkPath = "#2e8b57";
inline constexpr std::string_view kColorSecurePath = "#8e44ad";
inline constexpr std::string_view kColorPowerPath = "#e67e22";

std::string_view function_color(EmKind kind);
std::string_view path_color(ObjectiveKind kind);

struct RenderPath {
    ObjectiveKind kind = ObjectiveKind::LinkOptimize;
    std::string label;
    std::vector<Vec2> points; // src, tile centers..., dst
};

struct RenderInput {
    std::map<int, EmKind> tile_functions; // commanded tiles; others draw gray
    std::vector<RenderPath> paths;
};

// Pure string rendering; identical inputs give identical bytes.
std::string render_svg(const Floorplan& plan, const RenderInput& input);

} // namespace hypersim

#endif // HYPERSIM_RENDER_HPP
