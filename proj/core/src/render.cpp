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

#include "hypersim/render.hpp"

#include <cstdio>
#include <sstream>

namespace hypersim {

std::string_view function_color(EmKind kind) {
    switch (kind) {
        case EmKind::Steer: return kColorSteer;
        case EmKind::Absorb: return kColorAbsorb;
        case EmKind::Focus: return kColorFocus;
        case EmKind::Specular: return kColorSpecular;
    }
    return kColorSpecular;
}

std::string_view path_color(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::LinkOptimize: return kColorLinkPath;
        case ObjectiveKind::SecureLink: return kColorSecurePath;
        case ObjectiveKind::PowerTransfer: return kColorPowerPath;
        case ObjectiveKind::Block: return kColorAbsorb;
    }
    return kColorSpecular;
}

namespace {

constexpr double kScale = 100.0; // px per meter
constexpr double kMargin = 0.6;  // m of canvas around the scene

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    // Avoid the "-0.00" artifact so equal scenes render equal bytes.
    if (std::string_view(buf) == "-0.00") return "0.00";
    return buf;
}

std::string css_class(EmKind kind) {
    switch (kind) {
        case EmKind::Steer: return "steer";
        case EmKind::Absorb: return "absorb";
        case EmKind::Focus: return "focus";
        case EmKind::Specular: return "specular";
    }
    return "specular";
}

std::string css_class(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::LinkOptimize: return "link_optimize";
        case ObjectiveKind::SecureLink: return "secure_link";
        case ObjectiveKind::PowerTransfer: return "power_transfer";
        case ObjectiveKind::Block: return "block";
    }
    return "link_optimize";
}

std::string escape_text(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const Floorplan& plan, const RenderInput& input) {
    Vec2 lo, hi;
    plan.bounds(lo, hi);
    lo = lo - Vec2{kMargin, kMargin};
    hi = hi + Vec2{kMargin, kMargin};
    const double width = (hi.x - lo.x) * kScale;
    const double height = (hi.y - lo.y) * kScale;

    // Scene coordinates have y up; SVG has y down.
    auto sx = [&](double x) { return (x - lo.x) * kScale; };
    auto sy = [&](double y) { return (hi.y - y) * kScale; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << num(width) << "\" height=\"" << num(height) << "\" viewBox=\"0 0 "
        << num(width) << " " << num(height) << "\">\n"
        << "<rect class=\"canvas\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    svg << "<g class=\"walls\">\n";
    for (const Wall& wall : plan.walls) {
        svg << "<line class=\"wall " << (wall.coated ? "coated" : "bare") << "\" x1=\""
            << num(sx(wall.a.x)) << "\" y1=\"" << num(sy(wall.a.y)) << "\" x2=\""
            << num(sx(wall.b.x)) << "\" y2=\"" << num(sy(wall.b.y))
            << "\" stroke=\"#222222\" stroke-width=\"3\"/>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"tiles\">\n";
    for (const Tile& tile : plan.tiles) {
        const Wall* wall = plan.wall(tile.wall_id);
        if (wall == nullptr || !wall->coated) continue;
        EmKind kind = EmKind::Specular;
        if (const auto it = input.tile_functions.find(tile.id);
            it != input.tile_functions.end())
            kind = it->second;
        // Tick: the tile's span drawn just inside the room, so function
        // colors stay visible next to the wall stroke.
        const Vec2 inset = tile.normal * 0.05;
        const Vec2 a = tile.endpoint_a() + inset;
        const Vec2 b = tile.endpoint_b() + inset;
        svg << "<line class=\"tile " << css_class(kind) << "\" x1=\"" << num(sx(a.x))
            << "\" y1=\"" << num(sy(a.y)) << "\" x2=\"" << num(sx(b.x)) << "\" y2=\""
            << num(sy(b.y)) << "\" stroke=\"" << function_color(kind)
            << "\" stroke-width=\"5\"/>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"airpaths\" fill=\"none\">\n";
    for (const RenderPath& path : input.paths) {
        if (path.points.size() < 2) continue;
        svg << "<polyline class=\"airpath " << css_class(path.kind) << "\" points=\"";
        for (size_t i = 0; i < path.points.size(); ++i) {
            if (i != 0) svg << ' ';
            svg << num(sx(path.points[i].x)) << ',' << num(sy(path.points[i].y));
        }
        svg << "\" stroke=\"" << path_color(path.kind)
            << "\" stroke-width=\"2\" stroke-dasharray=\"6 3\"/>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"devices\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (const Device& dev : plan.devices) {
        svg << "<circle class=\"device\" cx=\"" << num(sx(dev.position.x)) << "\" cy=\""
            << num(sy(dev.position.y))
            << "\" r=\"6\" fill=\"#1a5276\" stroke=\"#ffffff\" stroke-width=\"1.5\"/>\n"
            << "<text x=\"" << num(sx(dev.position.x) + 9.0) << "\" y=\""
            << num(sy(dev.position.y) + 4.0) << "\" fill=\"#1a5276\">"
            << escape_text(dev.id) << " (" << to_string(dev.role) << ")</text>\n";
    }
    svg << "</g>\n";

    // Legend: function colors, then path colors.
    svg << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    struct LegendRow {
        std::string_view label;
        std::string_view color;
    };
    const LegendRow rows[] = {
        {"STEER", kColorSteer},           {"ABSORB", kColorAbsorb},
        {"FOCUS", kColorFocus},           {"SPECULAR", kColorSpecular},
        {"LINK path", kColorLinkPath},    {"SECURE path", kColorSecurePath},
        {"POWER path", kColorPowerPath},
    };
    double y = 16.0;
    for (const LegendRow& row : rows) {
        svg << "<rect x=\"8\" y=\"" << num(y - 9.0)
            << "\" width=\"12\" height=\"12\" fill=\"" << row.color << "\"/>\n"
            << "<text x=\"26\" y=\"" << num(y + 1.0) << "\" fill=\"#222222\">"
            << row.label << "</text>\n";
        y += 16.0;
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace hypersim
