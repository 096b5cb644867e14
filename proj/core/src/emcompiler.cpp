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

#include "hypersim/emcompiler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "hypersim/errors.hpp"

namespace hypersim {

namespace {

constexpr int kGridSize = 2 * kQualityGridHalfSpanDeg + 1; // -89..89 deg

double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

int clamp_grid_deg(double deg) {
    const long idx = std::lround(deg);
    return static_cast<int>(
        std::clamp<long>(idx, -kQualityGridHalfSpanDeg, kQualityGridHalfSpanDeg));
}

bool lex_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void require_local_angle(double angle, const char* what) {
    if (!(std::abs(angle) < kPi / 2.0))
        throw ValidationError(std::string(what) + ": angle " + std::to_string(angle) +
                              " rad outside (-pi/2, pi/2)");
}

} // namespace

std::string SwitchConfig::bit_string() const {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

SwitchConfig SwitchConfig::from_bit_string(const std::string& s, double quality) {
    SwitchConfig cfg;
    cfg.quality = quality;
    cfg.bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw ValidationError("bits: expected a 0/1 string, got '" + s + "'");
        cfg.bits.push_back(c == '1' ? 1 : 0);
    }
    if (cfg.bits.size() % 2 != 0)
        throw ValidationError("bits: length must be even (two switches per column)");
    return cfg;
}

CompileRequest make_request(const EmFunction& fn, const Tile* tile) {
    CompileRequest req;
    req.kind = fn.kind;
    req.theta_in = fn.incident_angle;
    switch (fn.kind) {
        case EmKind::Specular:
            req.theta_target = -fn.incident_angle;
            break;
        case EmKind::Steer:
            req.theta_target = fn.target_angle;
            break;
        case EmKind::Absorb:
            req.theta_target = 0.0;
            break;
        case EmKind::Focus:
            if (tile == nullptr)
                throw ValidationError("make_request: FOCUS needs the tile frame to "
                                      "resolve the focal point");
            req.theta_target =
                angle_in_frame(tile->center, fn.focus_target, tile->tangent, tile->normal);
            req.focus_point = fn.focus_target;
            break;
    }
    return req;
}

std::complex<double> array_factor(const TileModel& model, const SwitchConfig& cfg,
                                  double theta_in, double theta_out, double f) {
    const double k = 2.0 * kPi * f / kSpeedOfLight;
    const double s = model.effective_spacing();
    const double u = std::sin(theta_out) + std::sin(theta_in);
    std::complex<double> sum;
    const int n_cols = cfg.columns();
    for (int n = 0; n < n_cols; ++n) {
        if (!cfg.amp(n)) continue;
        const double phase = (cfg.phase_flip(n) ? kPi : 0.0) + k * s * n * u;
        sum += std::exp(std::complex<double>(0.0, phase));
    }
    return sum / static_cast<double>(std::max(model.columns, 1));
}

QualityEvaluator::QualityEvaluator(const TileModel& model, const CompileRequest& request,
                                   double f) {
    columns_ = model.columns;
    absorb_ = request.kind == EmKind::Absorb;
    target_index_ =
        clamp_grid_deg(rad2deg(request.theta_target)) + kQualityGridHalfSpanDeg;

    const double k = 2.0 * kPi * f / kSpeedOfLight;
    const double s = model.effective_spacing();
    const double sin_in = std::sin(request.theta_in);

    grid_.resize(kGridSize);
    phasor_.resize(static_cast<size_t>(columns_) * kGridSize);
    for (int g = 0; g < kGridSize; ++g) {
        const double theta = deg2rad(g - kQualityGridHalfSpanDeg);
        grid_[g] = std::sin(theta) + sin_in;
    }
    for (int n = 0; n < columns_; ++n)
        for (int g = 0; g < kGridSize; ++g)
            phasor_[static_cast<size_t>(n) * kGridSize + g] =
                std::exp(std::complex<double>(0.0, k * s * n * grid_[g]));

    // Grid power of the all-on uniform configuration, the absorption baseline.
    full_reflection_power_ = 0.0;
    for (int g = 0; g < kGridSize; ++g) {
        std::complex<double> af;
        for (int n = 0; n < columns_; ++n)
            af += phasor_[static_cast<size_t>(n) * kGridSize + g];
        full_reflection_power_ += std::norm(af / static_cast<double>(columns_));
    }
}

double QualityEvaluator::quality(const std::vector<std::uint8_t>& bits) const {
    double total = 0.0;
    double at_target = 0.0;
    for (int g = 0; g < kGridSize; ++g) {
        std::complex<double> af;
        for (int n = 0; n < columns_; ++n) {
            if (!bits[2 * static_cast<size_t>(n)]) continue;
            const auto& ph = phasor_[static_cast<size_t>(n) * kGridSize + g];
            if (bits[2 * static_cast<size_t>(n) + 1])
                af -= ph;
            else
                af += ph;
        }
        const double p = std::norm(af / static_cast<double>(columns_));
        total += p;
        if (g == target_index_) at_target = p;
    }
    if (absorb_) {
        const double ratio = total / std::max(full_reflection_power_, kQualityEps);
        return std::clamp(1.0 - ratio, 0.0, 1.0);
    }
    return at_target / std::max(total, kQualityEps);
}

double steering_quality(const TileModel& model, const SwitchConfig& cfg,
                        double theta_in, double theta_target, double f) {
    CompileRequest req;
    req.kind = EmKind::Steer;
    req.theta_in = theta_in;
    req.theta_target = theta_target;
    return QualityEvaluator(model, req, f).quality(cfg.bits);
}

double absorption_quality(const TileModel& model, const SwitchConfig& cfg,
                          double theta_in, double f) {
    CompileRequest req;
    req.kind = EmKind::Absorb;
    req.theta_in = theta_in;
    return QualityEvaluator(model, req, f).quality(cfg.bits);
}

std::vector<int> main_lobe_angles_deg(const TileModel& model, const SwitchConfig& cfg,
                                      double theta_in, double f) {
    double peak = 0.0;
    std::vector<double> mag(kGridSize);
    for (int g = 0; g < kGridSize; ++g) {
        const double theta = deg2rad(g - kQualityGridHalfSpanDeg);
        mag[g] = std::abs(array_factor(model, cfg, theta_in, theta, f));
        peak = std::max(peak, mag[g]);
    }
    std::vector<int> lobes;
    for (int g = 0; g < kGridSize; ++g)
        if (mag[g] >= peak * (1.0 - 1e-9)) lobes.push_back(g - kQualityGridHalfSpanDeg);
    return lobes;
}

SwitchConfig analytic_seed(const TileModel& model, double theta_in,
                           double theta_target, double f) {
    const double k = 2.0 * kPi * f / kSpeedOfLight;
    const double s = model.effective_spacing();
    const double slope = -k * s * (std::sin(theta_target) + std::sin(theta_in));

    SwitchConfig cfg;
    cfg.bits.assign(2 * static_cast<size_t>(model.columns), 0);
    for (int n = 0; n < model.columns; ++n) {
        double ideal = std::fmod(slope * n, 2.0 * kPi);
        if (ideal < 0.0) ideal += 2.0 * kPi;
        const int p = static_cast<int>(std::lround(ideal / kPi)) % 2;
        cfg.bits[2 * static_cast<size_t>(n)] = 1;
        cfg.bits[2 * static_cast<size_t>(n) + 1] = static_cast<std::uint8_t>(p);
    }
    return cfg;
}

namespace {

SwitchConfig exhaustive_compile(const QualityEvaluator& eval, int columns) {
    const int nbits = 2 * columns;
    std::vector<std::uint8_t> bits(nbits, 0);
    std::vector<std::uint8_t> best_bits = bits;
    double best_q = eval.quality(bits);
    const std::uint64_t count = std::uint64_t{1} << nbits;
    for (std::uint64_t mask = 1; mask < count; ++mask) {
        for (int j = 0; j < nbits; ++j) bits[j] = (mask >> j) & 1;
        const double q = eval.quality(bits);
        if (q > best_q || (q == best_q && lex_less(bits, best_bits))) {
            best_q = q;
            best_bits = bits;
        }
    }
    SwitchConfig out;
    out.bits = std::move(best_bits);
    out.quality = best_q;
    return out;
}

SwitchConfig ga_compile(const QualityEvaluator& eval, const TileModel& model,
                        const CompileRequest& request, double f, int budget,
                        unsigned rng_seed) {
    if (budget < kGaPopulation)
        throw BudgetTooSmall("compile: budget " + std::to_string(budget) +
                             " below population size " + std::to_string(kGaPopulation));

    const int nbits = 2 * model.columns;
    const int generations = budget / kGaPopulation;
    const double mutation_rate = 1.0 / nbits;
    std::mt19937 rng(rng_seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, kGaPopulation - 1);
    std::uniform_int_distribution<int> cut(1, nbits - 1);

    using Genome = std::vector<std::uint8_t>;
    std::vector<Genome> pop(kGaPopulation, Genome(nbits, 0));
    pop[0] = analytic_seed(model, request.theta_in, request.theta_target, f).bits;
    for (int n = 0; n < model.columns; ++n) pop[1][2 * static_cast<size_t>(n)] = 1;
    for (int i = 2; i < kGaPopulation; ++i)
        for (int j = 0; j < nbits; ++j) pop[i][j] = coin(rng) < 0.5 ? 1 : 0;

    std::vector<double> fitness(kGaPopulation);
    for (int i = 0; i < kGaPopulation; ++i) fitness[i] = eval.quality(pop[i]);

    Genome best_bits = pop[0];
    double best_q = fitness[0];
    auto consider = [&](const Genome& g, double q) {
        if (q > best_q || (q == best_q && lex_less(g, best_bits))) {
            best_q = q;
            best_bits = g;
        }
    };
    for (int i = 1; i < kGaPopulation; ++i) consider(pop[i], fitness[i]);

    std::vector<int> rank(kGaPopulation);
    for (int gen = 1; gen < generations; ++gen) {
        for (int i = 0; i < kGaPopulation; ++i) rank[i] = i;
        std::sort(rank.begin(), rank.end(), [&](int a, int b) {
            if (fitness[a] != fitness[b]) return fitness[a] > fitness[b];
            return lex_less(pop[a], pop[b]);
        });

        std::vector<Genome> next;
        next.reserve(kGaPopulation);
        for (int e = 0; e < kGaElites; ++e) next.push_back(pop[rank[e]]);

        auto tournament = [&]() -> const Genome& {
            int winner = pick(rng);
            for (int t = 1; t < kGaTournament; ++t) {
                const int challenger = pick(rng);
                if (fitness[challenger] > fitness[winner]) winner = challenger;
            }
            return pop[winner];
        };

        while (static_cast<int>(next.size()) < kGaPopulation) {
            Genome a = tournament();
            Genome b = tournament();
            if (coin(rng) < kGaCrossoverRate) {
                const int point = cut(rng);
                for (int j = point; j < nbits; ++j) std::swap(a[j], b[j]);
            }
            for (Genome* child : {&a, &b}) {
                for (int j = 0; j < nbits; ++j)
                    if (coin(rng) < mutation_rate) (*child)[j] ^= 1;
                if (static_cast<int>(next.size()) < kGaPopulation)
                    next.push_back(std::move(*child));
            }
        }

        pop = std::move(next);
        for (int i = 0; i < kGaPopulation; ++i) {
            fitness[i] = eval.quality(pop[i]);
            consider(pop[i], fitness[i]);
        }
    }

    SwitchConfig out;
    out.bits = std::move(best_bits);
    out.quality = best_q;
    return out;
}

} // namespace

SwitchConfig compile(const TileModel& model, const CompileRequest& request, double f,
                     int budget, unsigned rng_seed) {
    if (model.columns < 1)
        throw ValidationError("compile: tile model needs at least one column");
    require_local_angle(request.theta_in, "compile: theta_in");

    CompileRequest req = request;
    if (req.kind == EmKind::Specular) req.theta_target = -req.theta_in;

    if (req.kind == EmKind::Absorb) {
        // All switches off reflects nothing; exact optimum for absorption.
        SwitchConfig cfg;
        cfg.bits.assign(2 * static_cast<size_t>(model.columns), 0);
        cfg.quality = QualityEvaluator(model, req, f).quality(cfg.bits);
        return cfg;
    }

    require_local_angle(req.theta_target, "compile: theta_target");
    const QualityEvaluator eval(model, req, f);
    const int nbits = 2 * model.columns;
    if (nbits <= 62 && (std::uint64_t{1} << nbits) <= static_cast<std::uint64_t>(budget))
        return exhaustive_compile(eval, model.columns);
    return ga_compile(eval, model, req, f, budget, rng_seed);
}

// ─── lookup table ────────────────────────────────────────────────────────

namespace {

int quantize_deg(double rad) {
    return kTableAngleStepDeg *
           static_cast<int>(std::lround(rad2deg(rad) / kTableAngleStepDeg));
}

} // namespace

LookupTable::Key LookupTable::make_key(const CompileRequest& request, int columns,
                                       double f) {
    Key key;
    key.kind = std::string(to_string(request.kind));
    key.theta_in_deg = quantize_deg(request.theta_in);
    key.columns = columns;
    key.frequency = f;
    if (request.kind == EmKind::Absorb)
        key.target = "-";
    else
        key.target = std::to_string(quantize_deg(request.theta_target));
    return key;
}

std::optional<SwitchConfig> LookupTable::get(const CompileRequest& request, int columns,
                                             double f) const {
    const auto it = entries_.find(make_key(request, columns, f));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool LookupTable::put(const CompileRequest& request, int columns, double f,
                      const SwitchConfig& cfg) {
    const Key key = make_key(request, columns, f);
    auto it = entries_.find(key);
    if (it != entries_.end() && it->second.quality >= cfg.quality) return false;
    entries_[key] = cfg;
    return true;
}

void LookupTable::save(const std::filesystem::path& path) const {
    nlohmann::json doc;
    doc["model"] = {{"columns", base_.columns},
                    {"spacing", base_.effective_spacing()},
                    {"design_frequency_hz", base_.design_frequency}};
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, cfg] : entries_) {
        nlohmann::json e;
        e["kind"] = key.kind;
        e["theta_in_deg"] = key.theta_in_deg;
        if (key.target == "-")
            e["target"] = nullptr;
        else
            e["target"] = std::stoi(key.target);
        e["bits"] = cfg.bit_string();
        e["quality"] = cfg.quality;
        e["columns"] = key.columns;
        e["frequency_hz"] = key.frequency;
        entries.push_back(std::move(e));
    }
    doc["entries"] = std::move(entries);

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ParseError("lookup table: cannot write " + path.string());
        out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

LookupTable LookupTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("lookup table: cannot read " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("lookup table: " + std::string(e.what()));
    }
    if (!doc.is_object() || !doc.contains("model") || !doc.contains("entries"))
        throw ValidationError("lookup table: expected {model, entries}");

    const auto& jm = doc["model"];
    TileModel base;
    base.columns = jm.at("columns").get<int>();
    base.spacing = jm.at("spacing").get<double>();
    base.design_frequency = jm.at("design_frequency_hz").get<double>();
    LookupTable table(base);

    for (const auto& e : doc["entries"]) {
        CompileRequest req;
        const auto kind = em_kind_from_string(e.at("kind").get<std::string>());
        if (!kind)
            throw ValidationError("lookup table: entries[].kind: unknown kind '" +
                                  e.at("kind").get<std::string>() + "'");
        req.kind = *kind;
        req.theta_in = deg2rad(e.at("theta_in_deg").get<double>());
        if (!e.at("target").is_null())
            req.theta_target = deg2rad(e.at("target").get<double>());

        TileModel entry_model = base;
        entry_model.columns = e.at("columns").get<int>();
        const double f = e.at("frequency_hz").get<double>();

        SwitchConfig cfg = SwitchConfig::from_bit_string(e.at("bits").get<std::string>());
        if (cfg.columns() != entry_model.columns)
            throw ValidationError("lookup table: entries[].bits length does not match "
                                  "entries[].columns");
        // Scores are recomputed from the bits; the stored value is advisory.
        cfg.quality = QualityEvaluator(entry_model, req, f).quality(cfg.bits);
        table.entries_[make_key(req, entry_model.columns, f)] = std::move(cfg);
    }
    return table;
}

} // namespace hypersim
