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

// Acceptance suite: end-to-end checks of the library's contract, one
// pass/fail line per criterion, each with a wall-clock budget. Exits
// non-zero if any criterion fails.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "phasekit/core.hpp"
#include "phasekit/oracles.hpp"
#include "phasekit/ordering.hpp"
#include "phasekit/racecheck.hpp"
#include "phasekit/runtime.hpp"
#include "phasekit/tracekit.hpp"
#include "test_support.hpp"

namespace {

using namespace phasekit;
using phasekit::testing::state;
using phasekit::testing::view;

struct Check {
  std::ostringstream notes;
  bool passed = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      passed = false;
      notes << "\n    failed: " << what;
    }
  }
};

using Hist = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

// 1: the two-task trace replays to the annotated view table and the
// detector reports exactly one race (y) and one ordered pair (x).
void criterion_trace_reproduction(Check& c) {
  const tracekit::Trace tr = testing::load_trace("two_task_race.trace");
  const tracekit::ReplayResult res = tracekit::replay(tr);
  c.expect(res.complete(), "replay completes");
  if (!res.complete()) return;

  c.expect(testing::view_history(res, "ph", "t1") ==
               Hist{{0, 0}, {1, 0}, {1, 1}},
           "t1 views progress (0,0) -> (1,0) -> (1,1)");
  c.expect(testing::view_history(res, "ph", "t2") ==
               Hist{{0, 0}, {1, 0}, {1, 1}},
           "t2 views progress (0,0) -> (1,0) -> (1,1)");

  const auto report = racecheck::detect(res);
  c.expect(report.has_value(), "detector runs on the completed replay");
  if (!report.has_value()) return;
  c.expect(report->races.size() == 1, "exactly one race");
  if (report->races.size() == 1) {
    c.expect(report->races[0].a.var == "y", "the race is on y");
    c.expect(report->races[0].a.task_name == "t2" &&
                 report->races[0].b.task_name == "t1",
             "the race pairs t2's write with t1's read");
  }
  c.expect(report->ordered.size() == 1, "exactly one ordered pair");
  if (report->ordered.size() == 1) {
    const racecheck::OrderedPair& p = report->ordered[0];
    c.expect(p.a.var == "x", "the ordered pair is on x");
    c.expect(p.a.task_name == "t1" && p.b.task_name == "t2" &&
                 p.witness.direction == racecheck::Direction::AToB,
             "x is ordered t1 -> t2");
    c.expect(p.witness.phaser == "ph", "the witness names the phaser");
  }
}

// 2: dynamic membership moves the observable phase exactly as the
// three-signaler counting scenario prescribes.
void criterion_counting(Check& c) {
  PhaserState p = state({{1, view(3, 0, Mode::SW)},
                         {2, view(4, 0, Mode::SW)},
                         {3, view(10, 0, Mode::SW)}});
  c.expect(await_phase(p, 3), "phase 3 observable at counts 3/4/10");
  c.expect(!await_phase(p, 4), "phase 4 not observable at counts 3/4/10");
  p = testing::expect_state(
      apply(p, TaskId{1}, Register{TaskId{4}, Mode::SW}));
  c.expect(!await_phase(p, 4), "registration defers phase 4 further");
  p = testing::expect_state(apply(p, TaskId{1}, Drop{}));
  p = testing::expect_state(apply(p, TaskId{4}, Drop{}));
  c.expect(await_phase(p, 4), "after both drops phase 4 is observable");
}

// 3: view_hb and the negation of view_chb agree over all view pairs
// with phases <= 4.
void criterion_duality(Check& c) {
  const oracles::CheckReport r = oracles::check_duality(oracles::EnumBound{4});
  c.expect(r.instances == 5625, "5625 view pairs checked");
  c.expect(r.passed(), "0 duality violations");
}

// 4: causality (transitive, irreflexive, asymmetric) exhaustively over
// well-formed views with phases <= 3 and over states with <= 2 members
// and phases <= 2.
void criterion_causality(Check& c) {
  const oracles::CheckReport views =
      oracles::check_view_causality(oracles::EnumBound{3});
  c.expect(views.passed(), "view causality has 0 violations");
  const oracles::CheckReport states =
      oracles::check_phaser_causality(oracles::EnumBound{2}, 2);
  c.expect(states.passed(), "phaser causality has 0 violations");
}

// 5: preservation and ordering along 10,000 seeded random reduction
// steps, plus every prefix of 1,000 full traces.
void criterion_random_suites(Check& c) {
  oracles::TraceGenConfig cfg;
  cfg.seed = 2026;
  const oracles::CheckReport wf = oracles::check_wf_preservation(cfg, 10000);
  c.expect(wf.passed() && wf.instances >= 10000,
           "well-formedness preserved across 10,000 steps");
  const oracles::CheckReport wo = oracles::check_wo_preservation(cfg, 10000);
  c.expect(wo.passed() && wo.instances >= 10000,
           "well-orderedness preserved across 10,000 steps");
  const oracles::CheckReport step = oracles::check_step_ordering(cfg, 10000);
  c.expect(step.passed() && step.instances >= 10000,
           "single-step ordering holds across 10,000 steps");
  const oracles::CheckReport multi =
      oracles::check_multi_step_ordering(cfg, 1000);
  c.expect(multi.passed(), "multi-step ordering holds across 1,000 traces");
}

// 6: the concrete signal-then-wait triple shows that parallelism is
// not transitive.
void criterion_mhp_witness(Check& c) {
  const oracles::CheckReport r = oracles::check_mhp_non_transitivity();
  c.expect(r.passed(), "witness triple behaves as stated");

  const PhaserState p = state({{0, view(0, 0, Mode::SW)}});
  const PhaserState q = testing::expect_state(apply(p, TaskId{0}, Signal{}));
  const PhaserState s = testing::expect_state(apply(q, TaskId{0}, Wait{}));
  c.expect(q == state({{0, view(1, 0, Mode::SW)}}), "Q = {t:(1,0,SW)}");
  c.expect(s == state({{0, view(1, 1, Mode::SW)}}), "R = {t:(1,1,SW)}");
  c.expect(phaser_mhp(p, q), "P || Q");
  c.expect(phaser_mhp(q, s), "Q || R");
  c.expect(phaser_hb(p, s).has_value(), "P happens before R");
}

// 7: the detector agrees with exhaustive exploration on the two-task
// fixture (every legal schedule) and on 50 seeded random programs.
void criterion_detector_explorer_agreement(Check& c) {
  auto racy_of_detect = [](const tracekit::Trace& sched) {
    const auto report = racecheck::detect(tracekit::replay(sched));
    std::set<tracekit::RacyPair> out;
    if (report.has_value()) {
      for (const racecheck::RacePair& p : report->races) {
        out.insert(tracekit::RacyPair{p.a.var, p.a.line, p.b.line});
      }
    }
    return out;
  };

  const tracekit::Trace fig = testing::load_trace("two_task_race.trace");
  const auto programs = tracekit::programs_of(fig);
  const tracekit::ExploreResult explored = tracekit::explore(programs);
  const std::vector<tracekit::Trace> schedules =
      testing::legal_schedules(programs);
  c.expect(!schedules.empty(), "the fixture has legal schedules");
  c.expect(explored.completed == schedules.size(),
           "explorer count matches the independent enumeration");
  std::uint64_t disagreements = 0;
  for (const tracekit::Trace& sched : schedules) {
    if (racy_of_detect(sched) != explored.racy) ++disagreements;
  }

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const tracekit::Trace tr = testing::random_two_task_trace(seed);
    const auto res = tracekit::explore(tracekit::programs_of(tr));
    if (racy_of_detect(tr) != res.racy) ++disagreements;
  }
  c.expect(disagreements == 0, "0 disagreements between detect and explore");
}

// 8: the blocking runtime: an 8-thread barrier for 100 rounds whose log
// replays through the model with every wait observing its phase, plus
// the dynamic-membership scenario with a blocked observer.
void criterion_runtime(Check& c) {
  using runtime::PhaserHandle;

  // The criterion demands deadlock-free completion within 10 s.
  std::atomic<bool> done{false};
  std::thread watchdog([&done] {
    for (int i = 0; i < 100; ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      if (done.load()) return;
    }
    std::cout << "criterion 8: FAIL - runtime scenario timed out (10 s)\n";
    std::_Exit(1);
  });

  {
    constexpr int kThreads = 8;
    constexpr int kRounds = 100;
    PhaserHandle root = runtime::create(Mode::SW);
    std::vector<PhaserHandle> handles{root};
    for (int i = 1; i < kThreads; ++i) {
      auto reg = root.register_task(Mode::SW);
      if (reg.index() != 0) {
        c.expect(false, "registration of barrier members");
        break;
      }
      handles.push_back(std::get<PhaserHandle>(reg));
    }

    std::atomic<int> errors{0};
    std::vector<std::thread> threads;
    threads.reserve(handles.size());
    for (PhaserHandle& h : handles) {
      threads.emplace_back([&errors, h]() mutable {
        for (int r = 0; r < kRounds; ++r) {
          if (h.signal().has_value() || h.wait().has_value()) {
            errors.fetch_add(1);
            return;
          }
        }
      });
    }
    for (std::thread& t : threads) t.join();
    c.expect(errors.load() == 0, "no runtime errors in the barrier");

    const runtime::OperationLog log = root.log();
    const std::optional<PhaserState> replayed = log.replay();
    c.expect(replayed.has_value(), "the log replays cleanly");
    if (replayed.has_value()) {
      c.expect(*replayed == root.snapshot(),
               "replayed state equals the live state");
      for (const auto& [t, v] : replayed->members()) {
        c.expect(v == TaskView{kRounds, kRounds, Mode::SW},
                 "every member finished at (" + std::to_string(kRounds) +
                     "," + std::to_string(kRounds) + ")");
      }
    }
    // Barrier safety, re-verified from the log: at each wait commit the
    // awaited phase was observable.
    PhaserState cur = state_of(new_phaser(log.creator, log.mode));
    bool all_waits_observable = true;
    for (const runtime::LogEntry& e : log.entries) {
      if (std::holds_alternative<Wait>(e.op)) {
        const TaskView* v = cur.find(e.task);
        if (v == nullptr || !await_phase(cur, v->wait_phase + 1)) {
          all_waits_observable = false;
        }
      }
      const ApplyResult next = apply(cur, e.task, e.op);
      if (!ok(next)) {
        all_waits_observable = false;
        break;
      }
      cur = state_of(next);
    }
    c.expect(all_waits_observable,
             "every wait returned with its phase observable");
  }

  {
    // Three signalers at counts 3/4/10; a wait-only observer blocks on
    // phase 4 until the lagging signalers drop.
    PhaserHandle h1 = runtime::create(Mode::SW);
    auto r2 = h1.register_task(Mode::SW);
    auto r3 = h1.register_task(Mode::SO);
    c.expect(r2.index() == 0 && r3.index() == 0, "signaler registration");
    if (r2.index() != 0 || r3.index() != 0) {
      done.store(true);
      watchdog.join();
      return;
    }
    PhaserHandle h2 = std::get<PhaserHandle>(r2);
    PhaserHandle h3 = std::get<PhaserHandle>(r3);

    for (int i = 0; i < 10; ++i) {
      c.expect(!h3.signal().has_value(), "t3 signal");
    }
    for (int round = 0; round < 3; ++round) {
      c.expect(!h1.signal().has_value(), "t1 signal");
      c.expect(!h2.signal().has_value(), "t2 signal");
      c.expect(!h1.wait().has_value(), "t1 wait");
      c.expect(!h2.wait().has_value(), "t2 wait");
    }
    c.expect(!h2.signal().has_value(), "t2 fourth signal");
    // Counts now 3 / 4 / 10.
    c.expect(!await_phase(h1.snapshot(), 4), "phase 4 not yet observable");

    auto robs = h2.register_task(Mode::WO);
    c.expect(robs.index() == 0, "observer registration");
    if (robs.index() != 0) {
      done.store(true);
      watchdog.join();
      return;
    }
    PhaserHandle observer = std::get<PhaserHandle>(robs);

    std::atomic<bool> returned{false};
    std::thread obs_thread([&observer, &returned, &c] {
      c.expect(!observer.wait().has_value(), "observer wait returns cleanly");
      returned.store(true);
    });

    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    c.expect(!returned.load(), "observer blocks while phase 4 is missing");

    auto r4 = h1.register_task(Mode::SW);
    c.expect(r4.index() == 0, "t4 registration");
    c.expect(!h1.drop().has_value(), "t1 drops");
    c.expect(!returned.load(), "observer still blocked on t4's signal");
    if (r4.index() == 0) {
      PhaserHandle h4 = std::get<PhaserHandle>(r4);
      c.expect(!h4.drop().has_value(), "t4 drops");
    }
    obs_thread.join();
    c.expect(returned.load(), "observer returns once phase 4 is observable");

    const PhaserState snap = observer.snapshot();
    const TaskView* v = snap.find(observer.task());
    c.expect(v != nullptr && *v == TaskView{4, 4, Mode::WO},
             "observer finished at (4,4,WO)");
    c.expect(h2.log().replay().has_value(), "scenario log replays cleanly");
  }

  done.store(true);
  watchdog.join();
}

// 9: each documented semantics mutation trips at least one suite.
void criterion_mutation_sensitivity(Check& c) {
  oracles::TraceGenConfig sw_only_gen;
  sw_only_gen.mode_weights = {1, 0, 0};
  const oracles::CheckReport m1 = oracles::check_wf_preservation(
      sw_only_gen, 500, testing::mutant_double_signal());
  c.expect(!m1.passed(), "double-advancing signal trips wf-preservation");

  const oracles::CheckReport m2 = oracles::check_duality(
      oracles::EnumBound{4}, testing::mutant_chb_without_wo());
  c.expect(!m2.passed(), "dropped WO clause trips duality");

  oracles::TraceGenConfig reg_gen;
  reg_gen.seed = 0;
  reg_gen.mode_weights = {2, 2, 1};
  const oracles::CheckReport m3 = oracles::check_wo_preservation(
      reg_gen, 10000, testing::mutant_register_unchecked());
  c.expect(!m3.passed(), "unchecked registration trips wo-preservation");
}

struct Criterion {
  int id;
  std::string label;
  double budget_s;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "two-task trace replay and race report", 1.0,
       criterion_trace_reproduction},
      {2, "three-signaler counting with dynamic membership", 1.0,
       criterion_counting},
      {3, "happens-before / cannot-happen-before duality", 5.0,
       criterion_duality},
      {4, "causality over views and states", 60.0, criterion_causality},
      {5, "preservation and ordering along random traces", 60.0,
       criterion_random_suites},
      {6, "may-happen-in-parallel non-transitivity witness", 60.0,
       criterion_mhp_witness},
      {7, "detector and explorer agree on race pairs", 60.0,
       criterion_detector_explorer_agreement},
      {8, "blocking runtime barrier and dynamic membership", 10.0,
       criterion_runtime},
      {9, "mutation sensitivity of the suites", 60.0,
       criterion_mutation_sensitivity},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs >= cr.budget_s) {
      check.expect(false, "over time budget");
    }
    const bool pass = check.passed;
    std::cout << "criterion " << cr.id << ": " << (pass ? "PASS" : "FAIL")
              << " - " << cr.label << " (" << std::fixed
              << std::setprecision(2) << secs << " s, budget " << cr.budget_s
              << " s)" << check.notes.str() << "\n";
    if (!pass) ++failures;
  }
  std::cout << (failures == 0
                    ? std::string("all criteria passed")
                    : std::to_string(failures) + " criterion(s) failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
