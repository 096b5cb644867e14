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

#include "hypersim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <tuple>

#include "hypersim/errors.hpp"

namespace hypersim {

std::string_view to_string(EmKind kind) {
    switch (kind) {
        case EmKind::Specular: return "SPECULAR";
        case EmKind::Steer: return "STEER";
        case EmKind::Absorb: return "ABSORB";
        case EmKind::Focus: return "FOCUS";
    }
    return "SPECULAR";
}

std::optional<EmKind> em_kind_from_string(std::string_view s) {
    if (s == "SPECULAR") return EmKind::Specular;
    if (s == "STEER") return EmKind::Steer;
    if (s == "ABSORB") return EmKind::Absorb;
    if (s == "FOCUS") return EmKind::Focus;
    return std::nullopt;
}

EmFunction EmFunction::specular(double eff) {
    EmFunction fn;
    fn.kind = EmKind::Specular;
    fn.efficiency = eff;
    return fn;
}

EmFunction EmFunction::steer(double incident, double target, double eff) {
    EmFunction fn;
    fn.kind = EmKind::Steer;
    fn.incident_angle = incident;
    fn.target_angle = target;
    fn.efficiency = eff;
    return fn;
}

EmFunction EmFunction::absorb(double leakage) {
    EmFunction fn;
    fn.kind = EmKind::Absorb;
    fn.efficiency = leakage;
    return fn;
}

EmFunction EmFunction::focus(Vec2 target, double eff) {
    EmFunction fn;
    fn.kind = EmKind::Focus;
    fn.focus_target = target;
    fn.efficiency = eff;
    return fn;
}

double free_space_loss_db(double distance_m, double frequency_hz, double min_distance_m) {
    const double d = std::max(distance_m, min_distance_m);
    return 20.0 * std::log10(4.0 * kPi * d * frequency_hz / kSpeedOfLight);
}

double free_space_gain(double distance_m, double frequency_hz, double min_distance_m) {
    return std::pow(10.0, -free_space_loss_db(distance_m, frequency_hz, min_distance_m) / 10.0);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
    if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mw);
}

std::optional<Outgoing> interact(const Tile& tile, const EmFunction& fn,
                                 const RayHit& hit, const LaunchParams& params) {
    if (!hit.front)
        throw BackFaceHit("interact: back-face hit on tile " + std::to_string(tile.id));

    auto local_dir = [&](double angle) {
        return tile.tangent * std::sin(angle) + tile.normal * std::cos(angle);
    };
    const double mirror_angle = -hit.incidence;

    Outgoing out;
    out.origin = hit.point;
    out.phase_shift = params.reflection_phase;
    switch (fn.kind) {
        case EmKind::Specular:
            out.direction = local_dir(mirror_angle);
            out.gain_factor = fn.efficiency;
            break;
        case EmKind::Steer:
            if (std::abs(hit.incidence - fn.incident_angle) <= params.steer_acceptance) {
                out.direction = local_dir(fn.target_angle);
                out.gain_factor = fn.efficiency;
            } else {
                // Off the design incidence the pattern falls apart and the tile
                // is no better than a plain reflector.
                out.direction = local_dir(mirror_angle);
                out.gain_factor = kSpecularEfficiency;
            }
            break;
        case EmKind::Absorb:
            out.direction = local_dir(mirror_angle);
            out.gain_factor = fn.efficiency;
            break;
        case EmKind::Focus:
            out.direction = (fn.focus_target - hit.point).normalized();
            out.gain_factor = fn.efficiency;
            break;
    }
    if (out.gain_factor <= 0.0) return std::nullopt;
    return out;
}

namespace {

struct PathKey {
    std::string rx;
    std::vector<int> hops;
    bool operator<(const PathKey& o) const {
        return std::tie(rx, hops) < std::tie(o.rx, o.hops);
    }
};

} // namespace

std::vector<PropPath> launch(const Device& tx, const Floorplan& plan,
                             const TileFunctionMap& config, const LaunchParams& params) {
    Vec2 lo, hi;
    plan.bounds(lo, hi);
    const double escape = 2.0 * (hi - lo).norm() + 1.0;

    std::vector<PropPath> result;
    std::map<PathKey, size_t> index; // (device, hop sequence) -> result slot

    const double f = tx.frequency_hz;
    for (int k = 0; k < params.n_rays; ++k) {
        const double alpha = 2.0 * kPi * k / params.n_rays;
        Vec2 pos = tx.position;
        Vec2 dir{std::cos(alpha), std::sin(alpha)};

        std::vector<int> hops;
        std::vector<double> seg_lengths;
        double travelled = 0.0;
        double gain_product = 1.0;
        double phase_sum = 0.0;
        int last_tile = -1;

        for (int bounce = 0; bounce <= params.max_bounces; ++bounce) {
            const auto hit = trace_ray(pos, dir, plan, last_tile);
            const double seg_len = hit ? hit->distance : escape;

            // Credit devices passed along this segment.
            for (const Device& dev : plan.devices) {
                if (dev.id == tx.id) continue;
                const double along = std::clamp((dev.position - pos).dot(dir), 0.0, seg_len);
                const Vec2 closest = pos + dir * along;
                if ((closest - dev.position).norm() > params.capture_radius) continue;

                const double total = travelled + along;
                PropPath path;
                path.rx_device = dev.id;
                path.hops = hops;
                path.segment_lengths = seg_lengths;
                path.segment_lengths.push_back(along);
                path.total_length = total;
                path.delay = total / kSpeedOfLight;
                path.gain = free_space_gain(total, f, params.min_distance) * gain_product;
                path.phase = -2.0 * kPi * f * path.delay + phase_sum;

                PathKey key{dev.id, hops};
                auto it = index.find(key);
                if (it == index.end()) {
                    index.emplace(std::move(key), result.size());
                    result.push_back(std::move(path));
                } else if (path.total_length < result[it->second].total_length) {
                    result[it->second] = std::move(path);
                }
            }

            if (!hit) break;                       // escaped the scene
            if (!hit->front) break;                // back faces absorb silently
            if (bounce == params.max_bounces) break;

            const Tile* tile = plan.tile(hit->tile_id);
            auto cfg = config.find(hit->tile_id);
            const EmFunction fn =
                cfg != config.end() ? cfg->second : EmFunction::specular();
            const auto out = interact(*tile, fn, *hit, params);
            if (!out) break;

            travelled += hit->distance;
            gain_product *= out->gain_factor;
            phase_sum += out->phase_shift;
            hops.push_back(hit->tile_id);
            seg_lengths.push_back(hit->distance);
            pos = out->origin;
            dir = out->direction;
            last_tile = hit->tile_id;
        }
    }
    return result;
}

std::vector<PropPath> paths_to(std::span<const PropPath> paths, std::string_view device_id) {
    std::vector<PropPath> out;
    for (const PropPath& p : paths)
        if (p.rx_device == device_id) out.push_back(p);
    return out;
}

ReceivedPower received_power(std::span<const PropPath> paths, double tx_power_dbm,
                             std::span<const double> phase_offsets) {
    if (paths.empty()) {
        const double ninf = -std::numeric_limits<double>::infinity();
        return {ninf, ninf};
    }
    const double ptx_mw = dbm_to_mw(tx_power_dbm);
    std::complex<double> field;
    double incoherent = 0.0;
    for (size_t k = 0; k < paths.size(); ++k) {
        const double offset = phase_offsets.empty() ? 0.0 : phase_offsets[k];
        field += std::sqrt(paths[k].gain) *
                 std::exp(std::complex<double>(0.0, paths[k].phase + offset));
        incoherent += paths[k].gain;
    }
    return {mw_to_dbm(ptx_mw * std::norm(field)), mw_to_dbm(ptx_mw * incoherent)};
}

Pdp power_delay_profile(std::span<const PropPath> paths, double tx_power_dbm) {
    const double ptx_w = dbm_to_mw(tx_power_dbm) * 1e-3;
    std::map<double, double> taps; // delay -> summed linear watts
    Pdp pdp;
    for (const PropPath& p : paths) {
        taps[p.delay] += ptx_w * p.gain;
        pdp.paths.push_back(p);
    }
    pdp.taps.reserve(taps.size());
    for (const auto& [delay, power] : taps) pdp.taps.push_back({delay, power});
    return pdp;
}

double rms_delay_spread(const Pdp& pdp) {
    double ptotal = 0.0, m1 = 0.0, m2 = 0.0;
    for (const PdpTap& tap : pdp.taps) {
        ptotal += tap.power_w;
        m1 += tap.power_w * tap.delay_s;
        m2 += tap.power_w * tap.delay_s * tap.delay_s;
    }
    if (ptotal <= 0.0) return 0.0;
    const double mean = m1 / ptotal;
    const double var = m2 / ptotal - mean * mean;
    return std::sqrt(std::max(var, 0.0));
}

namespace {

double coherent_mag2(std::span<const PropPath> paths, const std::vector<double>& offsets) {
    std::complex<double> field;
    for (size_t k = 0; k < paths.size(); ++k)
        field += std::sqrt(paths[k].gain) *
                 std::exp(std::complex<double>(0.0, paths[k].phase + offsets[k]));
    return std::norm(field);
}

} // namespace

std::vector<double> align_phases(std::span<const PropPath> paths) {
    const size_t n = paths.size();
    std::vector<double> best(n, 0.0);
    if (n == 0) return best;

    if (n <= static_cast<size_t>(kAlignExhaustiveLimit)) {
        double best_mag = coherent_mag2(paths, best);
        std::vector<double> candidate(n, 0.0);
        for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
            for (size_t k = 0; k < n; ++k)
                candidate[k] = (mask >> k) & 1 ? kPi : 0.0;
            const double mag = coherent_mag2(paths, candidate);
            if (mag > best_mag) {
                best_mag = mag;
                best = candidate;
            }
        }
        return best;
    }

    // Greedy: strongest paths anchor the phasor sum, each weaker path joins
    // with whichever flip grows the running magnitude more.
    std::vector<size_t> order(n);
    for (size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (paths[a].gain != paths[b].gain) return paths[a].gain > paths[b].gain;
        return a < b;
    });
    std::complex<double> sum;
    std::vector<double> greedy(n, 0.0);
    for (size_t k : order) {
        const std::complex<double> v =
            std::sqrt(paths[k].gain) * std::exp(std::complex<double>(0.0, paths[k].phase));
        if (std::abs(sum + v) >= std::abs(sum - v)) {
            greedy[k] = 0.0;
            sum += v;
        } else {
            greedy[k] = kPi;
            sum -= v;
        }
    }
    // The greedy pass must never lose to doing nothing.
    if (coherent_mag2(paths, greedy) >= coherent_mag2(paths, best)) return greedy;
    return best;
}

std::map<int, double> fan_first_hit_distance(const Device& tx, const Floorplan& plan,
                                             int n_rays) {
    std::map<int, double> first;
    for (int k = 0; k < n_rays; ++k) {
        const double alpha = 2.0 * kPi * k / n_rays;
        const Vec2 dir{std::cos(alpha), std::sin(alpha)};
        const auto hit = trace_ray(tx.position, dir, plan);
        if (!hit || !hit->front) continue;
        auto it = first.find(hit->tile_id);
        if (it == first.end() || hit->distance < it->second)
            first[hit->tile_id] = hit->distance;
    }
    return first;
}

} // namespace hypersim
