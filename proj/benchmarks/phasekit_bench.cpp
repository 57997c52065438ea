/*
 * Copyright (c) 2026, the phasekit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "phasekit/core.hpp"
#include "phasekit/oracles.hpp"
#include "phasekit/ordering.hpp"
#include "phasekit/tracekit.hpp"

using namespace phasekit;

namespace {

PhaserState lockstep_state(std::int64_t members) {
  PhaserState p;
  for (std::int64_t i = 0; i < members; ++i) {
    p = p.with(TaskId{static_cast<std::uint64_t>(i)}, TaskView{1, 0, Mode::SW});
  }
  return p;
}

void BM_ViewRelations(benchmark::State& state) {
  const TaskView a{3, 2, Mode::SW};
  const TaskView b{4, 4, Mode::SW};
  for (auto _ : state) {
    benchmark::DoNotOptimize(view_hb(a, b));
    benchmark::DoNotOptimize(view_chb(b, a));
  }
}
BENCHMARK(BM_ViewRelations);

void BM_ApplyBarrierRound(benchmark::State& state) {
  const std::int64_t members = state.range(0);
  const PhaserState initial = lockstep_state(members);
  for (auto _ : state) {
    PhaserState p = initial;
    for (std::int64_t i = 0; i < members; ++i) {
      p = state_of(apply(p, TaskId{static_cast<std::uint64_t>(i)}, Wait{}));
    }
    for (std::int64_t i = 0; i < members; ++i) {
      p = state_of(apply(p, TaskId{static_cast<std::uint64_t>(i)}, Signal{}));
    }
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations() * members * 2);
}
BENCHMARK(BM_ApplyBarrierRound)->Arg(2)->Arg(8)->Arg(32);

void BM_PhaserChb(benchmark::State& state) {
  const PhaserState p = lockstep_state(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(phaser_chb(p, p));
  }
}
BENCHMARK(BM_PhaserChb)->Arg(2)->Arg(8)->Arg(32);

void BM_RandomTrace(benchmark::State& state) {
  oracles::TraceGenConfig cfg;
  cfg.max_steps = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(oracles::random_trace(cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RandomTrace)->Arg(64)->Arg(256);

void BM_ReplayTwoTaskTrace(benchmark::State& state) {
  const char* text =
      "new t1 ph SW\n"
      "reg t1 t2 ph SW\n"
      "signal t2 ph\n"
      "write t2 y\n"
      "write t1 x\n"
      "signal t1 ph\n"
      "wait t1 ph\n"
      "wait t2 ph\n"
      "read t2 x\n"
      "read t1 y\n"
      "drop t2 ph\n"
      "drop t1 ph\n";
  const tracekit::Trace tr =
      std::get<tracekit::Trace>(tracekit::parse(text));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracekit::replay(tr));
  }
}
BENCHMARK(BM_ReplayTwoTaskTrace);

void BM_ExploreTwoTasks(benchmark::State& state) {
  const char* text =
      "new t1 ph SW\n"
      "reg t1 t2 ph SW\n"
      "signal t2 ph\n"
      "write t2 y\n"
      "write t1 x\n"
      "signal t1 ph\n"
      "wait t1 ph\n"
      "wait t2 ph\n"
      "read t2 x\n"
      "read t1 y\n"
      "drop t2 ph\n"
      "drop t1 ph\n";
  const auto programs = tracekit::programs_of(
      std::get<tracekit::Trace>(tracekit::parse(text)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracekit::explore(programs));
  }
}
BENCHMARK(BM_ExploreTwoTasks);

}  // namespace

BENCHMARK_MAIN();
