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

#ifndef PHASEKIT_ORACLES_HPP_
#define PHASEKIT_ORACLES_HPP_

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phasekit/core.hpp"
#include "phasekit/ordering.hpp"

namespace phasekit::oracles {

/// Inclusive bound on signal and wait phases during enumeration.
struct EnumBound {
  std::uint64_t max_phase = 4;
};

/**
 * Configuration for random reduction-sequence generation.
 *
 * mode_weights biases the registration mode of spawned members and of
 * the initial member, indexed as {SW, WO, SO}; a zero weight disables
 * the mode. max_steps caps one trace; suite-level volume is a separate
 * argument of each check.
 */
struct TraceGenConfig {
  std::uint64_t seed = 0;
  std::uint32_t max_tasks = 5;
  std::uint32_t max_steps = 40;
  std::array<std::uint32_t, 3> mode_weights{4, 1, 1};
  SemanticsVariant variant = SemanticsVariant::Habanero;
};

struct Violation {
  std::string instance;  // enough to reconstruct the failing input
  std::string expected;
  std::string actual;
};

struct CheckReport {
  std::string property;
  std::uint64_t instances = 0;
  std::vector<Violation> violations;
  std::chrono::microseconds elapsed{0};

  bool passed() const { return violations.empty(); }
};

/**
 * The relations and the step function a check runs against. Checks take
 * this by argument so a test can rerun a suite against a deliberately
 * broken semantics and confirm the suite notices.
 */
struct Semantics {
  std::function<ApplyResult(const PhaserState&, TaskId, const PhaserOp&,
                            SemanticsVariant)>
      apply_fn;
  std::function<bool(const TaskView&, const TaskView&)> view_hb_fn;
  std::function<bool(const TaskView&, const TaskView&)> view_chb_fn;

  static Semantics standard();

  bool state_chb(const PhaserState& p, const PhaserState& q) const;
  bool state_hb(const PhaserState& p, const PhaserState& q) const;
};

/**
 * All views with both phases <= b.max_phase, optionally restricted to
 * the well-formed ones. Order: signal phase, then wait phase, then mode
 * (SW, WO, SO).
 */
std::vector<TaskView> enumerate_views(EnumBound b, bool only_well_formed);

/**
 * All states over a pool of max_members fixed tasks whose views stay
 * within the bound (every subset of the pool, every view assignment).
 */
std::vector<PhaserState> enumerate_states(EnumBound b,
                                          std::size_t max_members);

/// view_hb and the negation of view_chb agree on every view pair.
CheckReport check_duality(EnumBound b,
                          const Semantics& sem = Semantics::standard());

/**
 * view_hb is a strict partial order on views: irreflexive and
 * asymmetric over well-formed views, transitive whenever the middle
 * view is well formed (the end views range over all views in bound).
 */
CheckReport check_view_causality(EnumBound b,
                                 const Semantics& sem = Semantics::standard());

/**
 * phaser_hb is a strict partial order on states: irreflexive and
 * asymmetric over well-ordered states, transitive whenever the middle
 * state is well ordered.
 */
CheckReport check_phaser_causality(
    EnumBound b, std::size_t max_members,
    const Semantics& sem = Semantics::standard());

/**
 * The fixed singleton witness that may-happen-in-parallel is not
 * transitive: signal then wait yields P || Q and Q || R with P before R.
 */
CheckReport check_mhp_non_transitivity();

struct ReductionStep {
  PhaserState before;
  TaskId task;
  PhaserOp op;
  PhaserState after;
};

enum class TraceEnd : std::uint8_t {
  StepLimit,  // max_steps reached
  Stuck,      // non-empty state with no enabled operation
};

struct GeneratedTrace {
  PhaserState initial;
  std::vector<ReductionStep> steps;
  TraceEnd end = TraceEnd::StepLimit;
};

/**
 * Random legal reduction sequence: starts from a fresh phaser whose
 * creator gets a signal-capable mode, then repeatedly applies one
 * uniformly chosen enabled (member, operation) pair. Registration picks
 * the child mode by weight among the modes the registrar may grant; a
 * member never drops while it is the sole member, so a trace only gets
 * stuck when every remaining member is a waiter at its signal bound.
 * Deterministic for a fixed config.
 */
GeneratedTrace random_trace(const TraceGenConfig& cfg,
                            const Semantics& sem = Semantics::standard());

/**
 * Every view of every state reached along generated traces is well
 * formed. Generates traces (seeded from cfg.seed, one sub-seed per
 * trace) until at least min_total_steps steps were checked.
 */
CheckReport check_wf_preservation(const TraceGenConfig& cfg,
                                  std::uint64_t min_total_steps = 10000,
                                  const Semantics& sem = Semantics::standard());

/// Every state reached along generated traces stays well ordered.
CheckReport check_wo_preservation(const TraceGenConfig& cfg,
                                  std::uint64_t min_total_steps = 10000,
                                  const Semantics& sem = Semantics::standard());

/**
 * Across every generated single step P -> Q: Q cannot happen before P,
 * and P may happen in parallel with Q.
 */
CheckReport check_step_ordering(const TraceGenConfig& cfg,
                                std::uint64_t min_total_steps = 10000,
                                const Semantics& sem = Semantics::standard());

/**
 * Across whole traces: no state reached after any number of steps can
 * happen before the initial state (checked on every prefix, including
 * the empty one).
 */
CheckReport check_multi_step_ordering(
    const TraceGenConfig& cfg, std::uint64_t num_traces = 1000,
    const Semantics& sem = Semantics::standard());

}  // namespace phasekit::oracles

#endif  // PHASEKIT_ORACLES_HPP_
