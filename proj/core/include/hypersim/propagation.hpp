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
// Deterministic 2-D ray launching over a tiled floorplan.
//
// Model in one paragraph: a transmitter emits a uniform fan of rays. Each ray
// bounces off tile front faces according to the tile's configured wave
// function and is credited to every device it passes close to. Spreading loss
// is applied once, on the unfolded total path length (tiles re-collimate the
// beam, lens-like, so per-segment spreading does not compound); tile
// efficiencies multiply on top. Received power is the coherent or incoherent
// combination over all credited paths.

#ifndef HYPERSIM_PROPAGATION_HPP
#define HYPERSIM_PROPAGATION_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypersim/geometry.hpp"

namespace hypersim {

inline constexpr double kPi = 3.14159265358979323846;

enum class EmKind { Specular, Steer, Absorb, Focus };

std::string_view to_string(EmKind kind);
std::optional<EmKind> em_kind_from_string(std::string_view s);

// Default power efficiencies per wave function. An uncommanded (natural) wall
// patch behaves like Specular at kSpecularEfficiency.
inline constexpr double kSpecularEfficiency = 0.7;
inline constexpr double kSteerEfficiency = 0.8;
inline constexpr double kAbsorbLeakage = 0.01;
inline constexpr double kFocusEfficiency = 0.8;

// The wave interaction a tile is asked to perform.
//  Specular  mirror reflection.
//  Steer     reflect toward target_angle for waves arriving near
//            incident_angle; off-design arrivals degrade to Specular.
//  Absorb    soak up the wave; `efficiency` is the residual leakage that
//            still leaves along the mirror direction.
//  Focus     redirect toward the fixed point focus_target.
// Angles are in the tile's local frame (signed, from the normal, positive
// toward the tangent) and must lie in (-pi/2, pi/2).
struct EmFunction {
    EmKind kind = EmKind::Specular;
    double incident_angle = 0.0;
    double target_angle = 0.0;
    Vec2 focus_target;
    double efficiency = kSpecularEfficiency;

    bool operator==(const EmFunction&) const = default;

    static EmFunction specular(double eff = kSpecularEfficiency);
    static EmFunction steer(double incident, double target, double eff = kSteerEfficiency);
    static EmFunction absorb(double leakage = kAbsorbLeakage);
    static EmFunction focus(Vec2 target, double eff = kFocusEfficiency);
};

// Outgoing ray produced by a tile interaction.
struct Outgoing {
    Vec2 origin;
    Vec2 direction;      // unit
    double gain_factor;  // linear power fraction kept by this bounce
    double phase_shift;  // radians added by this bounce
};

// One credited propagation path from a transmitter to a device.
// segment_lengths always holds hops.size() + 1 entries; the last segment ends
// at the closest approach to the receiving device.
struct PropPath {
    std::string rx_device;
    std::vector<int> hops; // tile ids in bounce order
    std::vector<double> segment_lengths;
    double total_length = 0.0;
    double gain = 0.0;  // linear power fraction of the transmit power
    double phase = 0.0; // radians: -2*pi*f*delay + sum of bounce phase shifts
    double delay = 0.0; // seconds
};

struct PdpTap {
    double delay_s = 0.0;
    double power_w = 0.0;
};

// Power delay profile: taps sorted by delay, with the contributing paths kept
// alongside for inspection.
struct Pdp {
    std::vector<PdpTap> taps;
    std::vector<PropPath> paths;
};

struct ReceivedPower {
    double coherent_dbm;
    double incoherent_dbm;
};

struct LaunchParams {
    int max_bounces = 3;
    int n_rays = 3600;
    double capture_radius = 0.05;                  // m
    double steer_acceptance = 10.0 * kPi / 180.0;  // rad around the design incidence
    double reflection_phase = kPi;                 // rad added per bounce
    double min_distance = 0.1;                     // m, spreading-loss clamp
};

// Free-space path loss in dB at distance d (clamped below to min_distance):
// 20*log10(4*pi*d*f/c).
double free_space_loss_db(double distance_m, double frequency_hz,
                          double min_distance_m = 0.1);

// Linear power gain equivalent, 10^(-loss/10).
double free_space_gain(double distance_m, double frequency_hz,
                       double min_distance_m = 0.1);

// dBm <-> linear milliwatts.
double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Apply `fn` to a front-face hit on `tile`. Returns nullopt only when the
// function keeps no energy at all (efficiency exactly 0). Throws BackFaceHit
// if hit.front is false; callers terminate such rays before interacting.
std::optional<Outgoing> interact(const Tile& tile, const EmFunction& fn,
                                 const RayHit& hit, const LaunchParams& params = {});

// Per-tile wave functions for a launch; tiles absent from the map act as
// natural specular reflectors.
using TileFunctionMap = std::map<int, EmFunction>;

// Launch a uniform fan of params.n_rays rays from tx and credit every device
// other than tx that a ray passes within params.capture_radius of. Duplicate
// credits with the same (device, hop sequence) are merged keeping the
// shortest. Deterministic: output order follows (first crediting ray, order
// of credit within the ray).
std::vector<PropPath> launch(const Device& tx, const Floorplan& plan,
                             const TileFunctionMap& config,
                             const LaunchParams& params = {});

// Paths credited to one device, in stable order.
std::vector<PropPath> paths_to(std::span<const PropPath> paths, std::string_view device_id);

// Coherent and incoherent combination of the given paths at tx_power_dbm.
// phase_offsets, when non-empty, must match paths in length and is added to
// each path's phase (used for binary phase crafting). No paths -> -inf dBm.
ReceivedPower received_power(std::span<const PropPath> paths, double tx_power_dbm,
                             std::span<const double> phase_offsets = {});

// Power delay profile of the given paths at tx_power_dbm, taps in watts
// sorted by delay (ties merged by summing power).
Pdp power_delay_profile(std::span<const PropPath> paths, double tx_power_dbm);

// RMS delay spread (second central moment) of a profile; 0 for empty input.
double rms_delay_spread(const Pdp& pdp);

// Pick a binary phase offset (0 or pi) per path maximizing coherent power.
// Exhaustive for up to kAlignExhaustiveLimit paths, greedy by descending gain
// beyond that. Never returns a combination worse than all-zero offsets.
inline constexpr int kAlignExhaustiveLimit = 20;
std::vector<double> align_phases(std::span<const PropPath> paths);

// Distance from `tx` to the first front-face hit per tile over a uniform fan
// of n_rays rays, ignoring tile functions (used for jamming containment).
std::map<int, double> fan_first_hit_distance(const Device& tx, const Floorplan& plan,
                                             int n_rays = 3600);

} // namespace hypersim

#endif // HYPERSIM_PROPAGATION_HPP
