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

#include "phasekit/oracles.hpp"

#include <random>

namespace phasekit::oracles {

namespace {

// Reports stay small even against a badly broken semantics.
constexpr std::size_t kMaxRecordedViolations = 64;

constexpr std::array<Mode, 3> kModes{Mode::SW, Mode::WO, Mode::SO};

void add_violation(CheckReport& r, std::string instance, std::string expected,
                   std::string actual) {
  if (r.violations.size() < kMaxRecordedViolations) {
    r.violations.push_back(
        {std::move(instance), std::move(expected), std::move(actual)});
  }
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  std::chrono::microseconds elapsed() const {
    return std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start_);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// splitmix64 step; decorrelates per-trace sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Engine-independent draw; uniform_int_distribution is not pinned down
// across standard libraries, and reports must be seed-reproducible.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

std::string step_str(const ReductionStep& s) {
  return to_string(s.before) + " --" + to_string(s.task) + ":" +
         to_string(s.op) + "--> " + to_string(s.after);
}

}  // namespace

Semantics Semantics::standard() {
  Semantics s;
  s.apply_fn = [](const PhaserState& p, TaskId t, const PhaserOp& op,
                  SemanticsVariant v) { return apply(p, t, op, v); };
  s.view_hb_fn = [](const TaskView& a, const TaskView& b) {
    return view_hb(a, b);
  };
  s.view_chb_fn = [](const TaskView& a, const TaskView& b) {
    return view_chb(a, b);
  };
  return s;
}

bool Semantics::state_chb(const PhaserState& p, const PhaserState& q) const {
  for (const auto& [t1, v1] : p.members()) {
    for (const auto& [t2, v2] : q.members()) {
      if (!view_chb_fn(v1, v2)) return false;
    }
  }
  return true;
}

bool Semantics::state_hb(const PhaserState& p, const PhaserState& q) const {
  for (const auto& [t1, v1] : p.members()) {
    for (const auto& [t2, v2] : q.members()) {
      if (view_hb_fn(v1, v2)) return true;
    }
  }
  return false;
}

std::vector<TaskView> enumerate_views(EnumBound b, bool only_well_formed) {
  std::vector<TaskView> out;
  for (std::uint64_t sp = 0; sp <= b.max_phase; ++sp) {
    for (std::uint64_t wp = 0; wp <= b.max_phase; ++wp) {
      for (Mode m : kModes) {
        TaskView v{sp, wp, m};
        if (only_well_formed && !well_formed(v)) continue;
        out.push_back(v);
      }
    }
  }
  return out;
}

std::vector<PhaserState> enumerate_states(EnumBound b,
                                          std::size_t max_members) {
  const std::vector<TaskView> views = enumerate_views(b, false);
  std::vector<PhaserState> out;
  std::function<void(std::size_t, const PhaserState&)> rec =
      [&](std::size_t idx, const PhaserState& acc) {
        if (idx == max_members) {
          out.push_back(acc);
          return;
        }
        rec(idx + 1, acc);
        for (const TaskView& v : views) {
          rec(idx + 1, acc.with(TaskId{idx}, v));
        }
      };
  rec(0, PhaserState{});
  return out;
}

CheckReport check_duality(EnumBound b, const Semantics& sem) {
  Timer timer;
  CheckReport r;
  r.property = "duality";
  const std::vector<TaskView> views = enumerate_views(b, false);
  for (const TaskView& v1 : views) {
    for (const TaskView& v2 : views) {
      ++r.instances;
      const bool hb = sem.view_hb_fn(v1, v2);
      const bool chb = sem.view_chb_fn(v1, v2);
      if (hb == chb) {
        add_violation(r, "v1=" + to_string(v1) + " v2=" + to_string(v2),
                      "view_hb == !view_chb",
                      "view_hb=" + std::to_string(hb) +
                          " view_chb=" + std::to_string(chb));
      }
    }
  }
  r.elapsed = timer.elapsed();
  return r;
}

CheckReport check_view_causality(EnumBound b, const Semantics& sem) {
  Timer timer;
  CheckReport r;
  r.property = "view-causality";
  const std::vector<TaskView> all = enumerate_views(b, false);
  const std::vector<TaskView> wf = enumerate_views(b, true);

  for (const TaskView& v : wf) {
    ++r.instances;
    if (sem.view_hb_fn(v, v)) {
      add_violation(r, "v=" + to_string(v), "!view_hb(v, v)", "view_hb(v, v)");
    }
  }
  for (const TaskView& v1 : wf) {
    for (const TaskView& v2 : wf) {
      ++r.instances;
      if (sem.view_hb_fn(v1, v2) && sem.view_hb_fn(v2, v1)) {
        add_violation(r, "v1=" + to_string(v1) + " v2=" + to_string(v2),
                      "asymmetry", "view_hb holds both ways");
      }
    }
  }
  // Transitivity needs only the middle view well formed.
  for (const TaskView& v1 : all) {
    for (const TaskView& v2 : wf) {
      for (const TaskView& v3 : all) {
        ++r.instances;
        if (sem.view_hb_fn(v1, v2) && sem.view_hb_fn(v2, v3) &&
            !sem.view_hb_fn(v1, v3)) {
          add_violation(r,
                        "v1=" + to_string(v1) + " v2=" + to_string(v2) +
                            " v3=" + to_string(v3),
                        "transitivity", "view_hb(v1, v3) fails");
        }
      }
    }
  }
  r.elapsed = timer.elapsed();
  return r;
}

CheckReport check_phaser_causality(EnumBound b, std::size_t max_members,
                                   const Semantics& sem) {
  Timer timer;
  CheckReport r;
  r.property = "phaser-causality";
  const std::vector<PhaserState> states = enumerate_states(b, max_members);
  const std::size_t n = states.size();

  std::vector<std::uint8_t> wo(n);
  std::vector<std::size_t> wo_idx;
  for (std::size_t i = 0; i < n; ++i) {
    wo[i] = sem.state_chb(states[i], states[i]) ? 1 : 0;
    if (wo[i]) wo_idx.push_back(i);
  }
  std::vector<std::uint8_t> hb(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      hb[i * n + j] = sem.state_hb(states[i], states[j]) ? 1 : 0;
    }
  }

  for (std::size_t i : wo_idx) {
    ++r.instances;
    if (hb[i * n + i]) {
      add_violation(r, "P=" + to_string(states[i]), "!phaser_hb(P, P)",
                    "phaser_hb(P, P)");
    }
  }
  for (std::size_t i : wo_idx) {
    for (std::size_t j : wo_idx) {
      ++r.instances;
      if (hb[i * n + j] && hb[j * n + i]) {
        add_violation(r,
                      "P=" + to_string(states[i]) +
                          " Q=" + to_string(states[j]),
                      "asymmetry", "phaser_hb holds both ways");
      }
    }
  }
  // Transitivity needs only the middle state well ordered.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : wo_idx) {
      r.instances += n;
      if (!hb[i * n + j]) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (hb[j * n + k] && !hb[i * n + k]) {
          add_violation(r,
                        "P=" + to_string(states[i]) +
                            " Q=" + to_string(states[j]) +
                            " R=" + to_string(states[k]),
                        "transitivity", "phaser_hb(P, R) fails");
        }
      }
    }
  }
  r.elapsed = timer.elapsed();
  return r;
}

CheckReport check_mhp_non_transitivity() {
  Timer timer;
  CheckReport r;
  r.property = "mhp-non-transitivity";
  r.instances = 1;

  const TaskId t{0};
  const PhaserState p = PhaserState::singleton(t, TaskView{0, 0, Mode::SW});
  const ApplyResult q_res = apply(p, t, Signal{});
  const ApplyResult s_res = apply(state_of(q_res), t, Wait{});
  const PhaserState& q = state_of(q_res);
  const PhaserState& s = state_of(s_res);

  const std::string instance =
      "P=" + to_string(p) + " Q=" + to_string(q) + " R=" + to_string(s);
  if (!phaser_mhp(p, q)) {
    add_violation(r, instance, "P || Q", "not parallel");
  }
  if (!phaser_mhp(q, s)) {
    add_violation(r, instance, "Q || R", "not parallel");
  }
  const std::optional<OrderingWitness> w = phaser_hb(p, s);
  if (!w.has_value() || !(*w == OrderingWitness{t, t})) {
    add_violation(r, instance, "phaser_hb(P, R) with witness (t0, t0)",
                  w ? "wrong witness" : "absent");
  }
  r.elapsed = timer.elapsed();
  return r;
}

GeneratedTrace random_trace(const TraceGenConfig& cfg, const Semantics& sem) {
  std::mt19937_64 rng(cfg.seed);

  Mode init = Mode::SW;
  if (cfg.variant == SemanticsVariant::Habanero) {
    const std::uint64_t w_sw = cfg.mode_weights[0];
    const std::uint64_t w_so = cfg.mode_weights[2];
    if (w_sw + w_so > 0) {
      init = draw(rng, w_sw + w_so) < w_sw ? Mode::SW : Mode::SO;
    }
  }

  GeneratedTrace out;
  out.initial = state_of(new_phaser(TaskId{0}, init, cfg.variant));
  PhaserState cur = out.initial;
  std::uint64_t minted = 1;

  enum : int { kSignal, kWait, kDrop, kRegister };
  struct Candidate {
    TaskId task;
    int kind;
  };
  std::vector<Candidate> cands;
  std::vector<Mode> reg_modes;

  for (std::uint32_t step = 0; step < cfg.max_steps; ++step) {
    cands.clear();
    for (const auto& [t, v] : cur.members()) {
      if (ok(sem.apply_fn(cur, t, Signal{}, cfg.variant))) {
        cands.push_back({t, kSignal});
      }
      if (ok(sem.apply_fn(cur, t, Wait{}, cfg.variant))) {
        cands.push_back({t, kWait});
      }
      // Policy: the sole member never drops, so traces stay alive.
      if (cur.size() >= 2 && ok(sem.apply_fn(cur, t, Drop{}, cfg.variant))) {
        cands.push_back({t, kDrop});
      }
      if (minted < cfg.max_tasks) {
        for (std::size_t mi = 0; mi < kModes.size(); ++mi) {
          if (cfg.mode_weights[mi] == 0) continue;
          if (ok(sem.apply_fn(cur, t, Register{TaskId{minted}, kModes[mi]},
                              cfg.variant))) {
            cands.push_back({t, kRegister});
            break;
          }
        }
      }
    }
    if (cands.empty()) {
      out.end = TraceEnd::Stuck;
      return out;
    }

    const Candidate c = cands[draw(rng, cands.size())];
    PhaserOp op;
    switch (c.kind) {
      case kSignal:
        op = Signal{};
        break;
      case kWait:
        op = Wait{};
        break;
      case kDrop:
        op = Drop{};
        break;
      default: {
        reg_modes.clear();
        std::uint64_t total = 0;
        for (std::size_t mi = 0; mi < kModes.size(); ++mi) {
          if (cfg.mode_weights[mi] == 0) continue;
          if (!ok(sem.apply_fn(cur, c.task, Register{TaskId{minted}, kModes[mi]},
                               cfg.variant))) {
            continue;
          }
          for (std::uint32_t w = 0; w < cfg.mode_weights[mi]; ++w) {
            reg_modes.push_back(kModes[mi]);
          }
          total += cfg.mode_weights[mi];
        }
        op = Register{TaskId{minted}, reg_modes[draw(rng, total)]};
        ++minted;
        break;
      }
    }
    ApplyResult res = sem.apply_fn(cur, c.task, op, cfg.variant);
    if (!ok(res)) {
      // Unreachable with a deterministic step function; bail out rather
      // than record a bogus step.
      out.end = TraceEnd::Stuck;
      return out;
    }
    out.steps.push_back({cur, c.task, op, state_of(res)});
    cur = std::move(std::get<PhaserState>(res));
  }
  return out;
}

namespace {

// Shared driver: generate traces until total steps reach the budget and
// run per-trace / per-step assertions supplied by the caller.
template <typename PerTrace, typename PerStep>
CheckReport run_trace_suite(const std::string& property,
                            const TraceGenConfig& cfg,
                            std::uint64_t min_total_steps, const Semantics& sem,
                            PerTrace per_trace, PerStep per_step) {
  Timer timer;
  CheckReport r;
  r.property = property;
  if (cfg.max_steps == 0) {
    r.elapsed = timer.elapsed();
    return r;
  }
  std::uint64_t trace_index = 0;
  while (r.instances < min_total_steps) {
    TraceGenConfig sub = cfg;
    sub.seed = mix_seed(cfg.seed, trace_index++);
    const GeneratedTrace tr = random_trace(sub, sem);
    per_trace(r, tr);
    for (const ReductionStep& s : tr.steps) {
      ++r.instances;
      per_step(r, s);
    }
    if (tr.steps.empty()) ++r.instances;  // degenerate config guard
  }
  r.elapsed = timer.elapsed();
  return r;
}

}  // namespace

CheckReport check_wf_preservation(const TraceGenConfig& cfg,
                                  std::uint64_t min_total_steps,
                                  const Semantics& sem) {
  return run_trace_suite(
      "wf-preservation", cfg, min_total_steps, sem,
      [](CheckReport& r, const GeneratedTrace& tr) {
        if (!tr.initial.all_well_formed()) {
          add_violation(r, "initial=" + to_string(tr.initial),
                        "all views well-formed", "ill-formed view");
        }
      },
      [](CheckReport& r, const ReductionStep& s) {
        if (!s.after.all_well_formed()) {
          add_violation(r, step_str(s), "all views well-formed",
                        "ill-formed view in post-state");
        }
      });
}

CheckReport check_wo_preservation(const TraceGenConfig& cfg,
                                  std::uint64_t min_total_steps,
                                  const Semantics& sem) {
  return run_trace_suite(
      "wo-preservation", cfg, min_total_steps, sem,
      [&sem](CheckReport& r, const GeneratedTrace& tr) {
        if (!sem.state_chb(tr.initial, tr.initial)) {
          add_violation(r, "initial=" + to_string(tr.initial), "well-ordered",
                        "scheduling constraint within initial state");
        }
      },
      [&sem](CheckReport& r, const ReductionStep& s) {
        if (!sem.state_chb(s.after, s.after)) {
          add_violation(r, step_str(s), "post-state well-ordered",
                        "scheduling constraint within post-state");
        }
      });
}

CheckReport check_step_ordering(const TraceGenConfig& cfg,
                                std::uint64_t min_total_steps,
                                const Semantics& sem) {
  return run_trace_suite(
      "step-ordering", cfg, min_total_steps, sem,
      [](CheckReport&, const GeneratedTrace&) {},
      [&sem](CheckReport& r, const ReductionStep& s) {
        if (!sem.state_chb(s.after, s.before)) {
          add_violation(r, step_str(s), "phaser_chb(after, before)",
                        "post-state may happen before pre-state");
        }
        if (!(sem.state_chb(s.before, s.after) &&
              sem.state_chb(s.after, s.before))) {
          add_violation(r, step_str(s), "phaser_mhp(before, after)",
                        "pre- and post-state not parallel");
        }
      });
}

CheckReport check_multi_step_ordering(const TraceGenConfig& cfg,
                                      std::uint64_t num_traces,
                                      const Semantics& sem) {
  Timer timer;
  CheckReport r;
  r.property = "multi-step-ordering";
  for (std::uint64_t i = 0; i < num_traces; ++i) {
    TraceGenConfig sub = cfg;
    sub.seed = mix_seed(cfg.seed, i);
    const GeneratedTrace tr = random_trace(sub, sem);
    // Empty prefix first: a well-ordered state cannot precede itself.
    ++r.instances;
    if (!sem.state_chb(tr.initial, tr.initial)) {
      add_violation(r, "initial=" + to_string(tr.initial),
                    "phaser_chb(initial, initial)", "fails");
    }
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
      ++r.instances;
      if (!sem.state_chb(tr.steps[k].after, tr.initial)) {
        add_violation(r,
                      "initial=" + to_string(tr.initial) + " after " +
                          std::to_string(k + 1) +
                          " steps: " + to_string(tr.steps[k].after),
                      "phaser_chb(reached, initial)",
                      "reached state may happen before initial");
      }
    }
  }
  r.elapsed = timer.elapsed();
  return r;
}

}  // namespace phasekit::oracles
