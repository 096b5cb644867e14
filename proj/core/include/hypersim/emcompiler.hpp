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
// Maps requested wave interactions to binary meta-atom switch states.
//
// A tile is modelled as a uniform line array of N columns with two switches
// per column: an amplitude switch a_n (on/off) and a phase switch p_n
// (0 or pi). The far-field array factor for a wave arriving at theta_in and
// leaving at theta_out is
//
//   AF = (1/N) * sum_n a_n * exp(i * (pi*p_n + k*s*n*(sin theta_out + sin theta_in)))
//
// with k = 2*pi*f/c and s the column spacing. Configurations are scored on a
// uniform 1 degree grid over (-90, 90) degrees and searched exhaustively when
// the budget covers 2^(2N) evaluations, otherwise with a small genetic
// algorithm seeded from the quantized analytic phase profile.
//
// Note a hard physical limit of binary phase control: coefficients are real,
// so |AF| is symmetric about the specular direction and every steered beam
// has an equal-strength image lobe mirrored across it. main_lobe_angles_deg
// therefore reports the argmax set, not a single angle.

#ifndef HYPERSIM_EMCOMPILER_HPP
#define HYPERSIM_EMCOMPILER_HPP

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypersim/geometry.hpp"
#include "hypersim/propagation.hpp"

namespace hypersim {

// Scoring grid: integer degrees -89..89 inclusive.
inline constexpr int kQualityGridHalfSpanDeg = 89;
inline constexpr double kQualityEps = 1e-12;

// Angle quantization step for lookup-table keys.
inline constexpr int kTableAngleStepDeg = 5;

// Genetic search parameters. generations = budget / kGaPopulation.
inline constexpr int kGaPopulation = 32;
inline constexpr int kGaTournament = 2;
inline constexpr double kGaCrossoverRate = 0.9;
inline constexpr int kGaElites = 2;

struct TileModel {
    int columns = 8;
    double spacing = 0.0;          // m, 0 means half the design wavelength
    double design_frequency = 2.4e9; // Hz

    double effective_spacing() const {
        return spacing > 0.0 ? spacing : kSpeedOfLight / design_frequency / 2.0;
    }
    bool operator==(const TileModel&) const = default;
};

// Binary switch state of one tile: 2N bits, interleaved per column as
// (amplitude, phase), i.e. bits[2n] = a_n and bits[2n+1] = p_n.
struct SwitchConfig {
    std::vector<std::uint8_t> bits;
    double quality = 0.0;

    int columns() const { return static_cast<int>(bits.size() / 2); }
    bool amp(int n) const { return bits[2 * static_cast<size_t>(n)] != 0; }
    bool phase_flip(int n) const { return bits[2 * static_cast<size_t>(n) + 1] != 0; }

    std::string bit_string() const;
    static SwitchConfig from_bit_string(const std::string& s, double quality = 0.0);
    bool operator==(const SwitchConfig&) const = default;
};

// Canonical compile input. theta_in / theta_target are in the tile's local
// frame, radians, inside (-pi/2, pi/2). For Absorb the target is ignored.
// For Focus the caller resolves the focal point to a local target angle
// (make_request does this); the point itself rides along for reporting.
struct CompileRequest {
    EmKind kind = EmKind::Specular;
    double theta_in = 0.0;
    double theta_target = 0.0;
    std::optional<Vec2> focus_point;
};

// Build a CompileRequest from a wave function. Focus requires the tile whose
// geometry resolves the focal point; Specular derives its mirror target.
CompileRequest make_request(const EmFunction& fn, const Tile* tile = nullptr);

std::complex<double> array_factor(const TileModel& model, const SwitchConfig& cfg,
                                  double theta_in, double theta_out, double f);

// Reusable scorer for one (model, request, frequency): precomputes the column
// phasors over the grid so a single evaluation costs O(N * grid).
class QualityEvaluator {
public:
    QualityEvaluator(const TileModel& model, const CompileRequest& request, double f);

    double quality(const std::vector<std::uint8_t>& bits) const;
    int grid_size() const { return static_cast<int>(grid_.size()); }

private:
    bool absorb_ = false;
    int columns_ = 0;
    int target_index_ = 0;
    double full_reflection_power_ = 0.0; // grid power of the all-on uniform config
    std::vector<double> grid_;           // sin(theta_g) + sin(theta_in) terms baked in
    std::vector<std::complex<double>> phasor_; // [n * grid + g]
};

// Fraction of the grid's reflected power that lands on the grid cell nearest
// theta_target. 1 is a perfect pencil beam, 0 an all-off array.
double steering_quality(const TileModel& model, const SwitchConfig& cfg,
                        double theta_in, double theta_target, double f);

// 1 minus the grid power relative to a full specular reflector; 1 means all
// incident energy is soaked up.
double absorption_quality(const TileModel& model, const SwitchConfig& cfg,
                          double theta_in, double f);

// Grid angles (degrees) whose |AF| ties the maximum within a relative 1e-9.
std::vector<int> main_lobe_angles_deg(const TileModel& model, const SwitchConfig& cfg,
                                      double theta_in, double f);

// All columns on, phase bits from the quantized ideal profile
// p_n = round((( -k*s*n*(sin theta_target + sin theta_in)) mod 2pi) / pi) mod 2.
SwitchConfig analytic_seed(const TileModel& model, double theta_in,
                           double theta_target, double f);

// Best switch configuration for the request. Exhaustive over all 2^(2N)
// configurations when that fits the budget, genetic search otherwise.
// Absorb short-circuits to the all-off config, which is exact under this
// model. Throws BudgetTooSmall if budget < kGaPopulation on the GA route and
// ValidationError for angles outside (-pi/2, pi/2).
SwitchConfig compile(const TileModel& model, const CompileRequest& request, double f,
                     int budget, unsigned rng_seed = 0);

// Compiled-configuration cache, keyed by (kind, quantized incidence,
// quantized target, column count, frequency). put keeps the better quality.
class LookupTable {
public:
    struct Key {
        std::string kind;
        int theta_in_deg = 0;   // quantized to kTableAngleStepDeg
        std::string target;     // quantized target angle, or "-" for absorb
        int columns = 0;
        double frequency = 0.0;
        auto operator<=>(const Key&) const = default;
    };

    LookupTable() = default;
    explicit LookupTable(TileModel base) : base_(base) {}

    static Key make_key(const CompileRequest& request, int columns, double f);

    std::optional<SwitchConfig> get(const CompileRequest& request, int columns,
                                    double f) const;
    // Insert or replace when strictly better; returns true if stored.
    bool put(const CompileRequest& request, int columns, double f,
             const SwitchConfig& cfg);

    size_t size() const { return entries_.size(); }
    const TileModel& base_model() const { return base_; }

    // JSON persistence. load() recomputes entry qualities from the bits so a
    // hand-edited file cannot carry stale scores.
    void save(const std::filesystem::path& path) const;
    static LookupTable load(const std::filesystem::path& path);

private:
    TileModel base_;
    std::map<Key, SwitchConfig> entries_;
};

} // namespace hypersim

#endif // HYPERSIM_EMCOMPILER_HPP
