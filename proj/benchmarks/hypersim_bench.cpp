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
// Microbenchmarks for the hot paths: ray fans, switch-quality scoring,
// the genetic compiler, and route enumeration.

#include <benchmark/benchmark.h>

#include <limits>
#include <random>
#include <vector>

#include "hypersim/controller.hpp"
#include "hypersim/emcompiler.hpp"
#include "hypersim/geometry.hpp"
#include "hypersim/propagation.hpp"

namespace {

using namespace hypersim;

Floorplan bench_room() {
    constexpr double kSilent = -std::numeric_limits<double>::infinity();
    Floorplan plan;
    plan.interior_point = {3.0, 2.0};
    plan.walls.push_back({0, {0.0, 0.0}, {6.0, 0.0}, true});
    plan.walls.push_back({1, {0.0, 4.0}, {6.0, 4.0}, true});
    plan.walls.push_back({2, {0.0, 0.0}, {0.0, 4.0}, false});
    int next = 0;
    for (const Wall& wall : plan.walls) {
        auto tiles = tessellate(wall, plan.tile_size, plan.columns_per_tile,
                                plan.interior_point, next);
        next += static_cast<int>(tiles.size());
        plan.tiles.insert(plan.tiles.end(), tiles.begin(), tiles.end());
    }
    plan.devices.push_back({"a", {1.0, 1.0}, DeviceRole::Tx, 20.0, 2.4e9});
    plan.devices.push_back({"b", {5.0, 3.0}, DeviceRole::Rx, kSilent, 2.4e9});
    plan.devices.push_back({"c", {3.0, 3.5}, DeviceRole::Rx, kSilent, 2.4e9});
    return plan;
}

void BM_LaunchFan(benchmark::State& state) {
    const Floorplan plan = bench_room();
    LaunchParams lp;
    lp.n_rays = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto paths = launch(plan.devices[0], plan, {}, lp);
        benchmark::DoNotOptimize(paths);
    }
}
BENCHMARK(BM_LaunchFan)->Arg(360)->Arg(3600);

void BM_SwitchQuality(benchmark::State& state) {
    TileModel model;
    CompileRequest request;
    request.kind = EmKind::Steer;
    request.theta_in = 0.2;
    request.theta_target = -0.4;
    const QualityEvaluator eval(model, request, 2.4e9);

    std::mt19937 rng(1);
    std::vector<std::uint8_t> bits(16);
    for (auto& b : bits) b = rng() & 1u;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval.quality(bits));
    }
}
BENCHMARK(BM_SwitchQuality);

void BM_GeneticCompile(benchmark::State& state) {
    TileModel model;
    CompileRequest request;
    request.kind = EmKind::Steer;
    request.theta_in = 0.1;
    request.theta_target = 0.6;
    const int budget = static_cast<int>(state.range(0));
    unsigned seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compile(model, request, 2.4e9, budget, seed++));
    }
}
BENCHMARK(BM_GeneticCompile)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_RouteEnumeration(benchmark::State& state) {
    const Floorplan plan = bench_room();
    const TileGraph graph = build_tile_graph(plan);
    RouteQuery query;
    query.src = "a";
    query.dst = "b";
    query.max_bounces = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_airpath(plan, graph, query));
    }
}
BENCHMARK(BM_RouteEnumeration)->Arg(2)->Arg(3);

} // namespace

BENCHMARK_MAIN();
