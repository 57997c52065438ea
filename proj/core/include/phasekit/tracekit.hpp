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

#ifndef PHASEKIT_TRACEKIT_HPP_
#define PHASEKIT_TRACEKIT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phasekit/core.hpp"
#include "phasekit/racecheck.hpp"

namespace phasekit::tracekit {

// One event per line; tasks, phasers and variables are bare tokens.
//
//   new <task> <phaser> <SW|WO|SO>
//   signal <task> <phaser>
//   wait <task> <phaser>
//   reg <task> <newtask> <phaser> <SW|WO|SO>
//   drop <task> <phaser>
//   read <task> <var>
//   write <task> <var>
//
// '#' starts a comment, blank lines are ignored.

struct NewEvent {
  std::string task, phaser;
  Mode mode = Mode::SW;
  friend bool operator==(const NewEvent&, const NewEvent&) = default;
};
struct SignalEvent {
  std::string task, phaser;
  friend bool operator==(const SignalEvent&, const SignalEvent&) = default;
};
struct WaitEvent {
  std::string task, phaser;
  friend bool operator==(const WaitEvent&, const WaitEvent&) = default;
};
struct RegEvent {
  std::string task, new_task, phaser;
  Mode mode = Mode::SW;
  friend bool operator==(const RegEvent&, const RegEvent&) = default;
};
struct DropEvent {
  std::string task, phaser;
  friend bool operator==(const DropEvent&, const DropEvent&) = default;
};
struct ReadEvent {
  std::string task, var;
  friend bool operator==(const ReadEvent&, const ReadEvent&) = default;
};
struct WriteEvent {
  std::string task, var;
  friend bool operator==(const WriteEvent&, const WriteEvent&) = default;
};

using EventBody = std::variant<NewEvent, SignalEvent, WaitEvent, RegEvent,
                               DropEvent, ReadEvent, WriteEvent>;

struct TraceEvent {
  EventBody body;
  std::uint32_t line = 0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Task issuing the event (for reg, the registrar).
const std::string& event_task(const TraceEvent& ev);

struct Trace {
  std::vector<TraceEvent> events;
  friend bool operator==(const Trace&, const Trace&) = default;
};

struct ParseError {
  std::uint32_t line = 0;
  std::string token;
  std::string message;
};

std::variant<Trace, ParseError> parse(std::string_view text);

/// Canonical one-event-per-line form: single spaces, '\n' endings.
std::string render(const TraceEvent& ev);
std::string render(const Trace& tr);

enum class ReplayErrorCode : std::uint8_t {
  UnknownPhaser,
  DuplicatePhaser,
  Apply,
};

struct ReplayError {
  std::uint32_t line = 0;
  ReplayErrorCode code = ReplayErrorCode::Apply;
  std::optional<ApplyError> apply_error;  // set when code == Apply
  std::string message;
};

/// All live phaser states after one event.
struct ReplayStep {
  std::map<std::string, PhaserState> states;
};

/**
 * Result of sequentially replaying a trace: the fold of the semantics
 * over the events, stopping at the first error. A wait that is not yet
 * observable is an error here — a sequential trace claims to be a
 * schedule. Reads and writes record the issuing task's view snapshot.
 */
struct ReplayResult {
  std::vector<std::string> task_names;  // indexed by TaskId value
  std::vector<ReplayStep> steps;        // one per executed event
  std::map<std::string, PhaserState> final_states;
  std::vector<racecheck::AccessSnapshot> accesses;
  std::optional<ReplayError> error;

  bool complete() const { return !error.has_value(); }
};

ReplayResult replay(const Trace& tr,
                    SemanticsVariant variant = SemanticsVariant::Habanero);

/// Per-task slice of a trace: that task's events in trace order.
struct TaskProgram {
  std::string task;
  std::vector<TraceEvent> events;
};

std::vector<TaskProgram> programs_of(const Trace& tr);

struct BlockedWait {
  std::string task, phaser;
  std::uint64_t phase = 0;  // phase the wait is awaiting
  auto operator<=>(const BlockedWait&) const = default;
};

/**
 * Terminal state of one explored interleaving. Deadlock lists the
 * blocked waiters; tasks that were never started (their registration
 * never executed) are listed separately.
 */
struct Outcome {
  enum class Kind : std::uint8_t { Completed, Deadlock, IllegalOp } kind =
      Kind::Completed;
  std::vector<BlockedWait> blocked;        // Deadlock
  std::vector<std::string> never_started;  // Deadlock
  std::uint32_t line = 0;                  // IllegalOp
  std::string event;                       // IllegalOp
  std::string error;                       // IllegalOp
  auto operator<=>(const Outcome&) const = default;
};

std::string to_string(const Outcome& o);

/// Conflicting access pair found racy on some explored path.
struct RacyPair {
  std::string var;
  std::uint32_t line_a = 0;  // lower line
  std::uint32_t line_b = 0;
  auto operator<=>(const RacyPair&) const = default;
};

struct ExploreResult {
  std::uint64_t interleavings = 0;  // terminal paths reached
  std::uint64_t completed = 0;
  bool bound_exceeded = false;
  std::set<Outcome> outcomes;
  std::set<RacyPair> racy;

  std::set<std::string> racy_vars() const;
};

/**
 * Depth-first enumeration of the interleavings of per-task programs, up
 * to max_interleavings terminals. A task runs its next event only when
 * the event is enabled; a wait that is not observable defers the task.
 * A task first named as a registration target starts only once that
 * registration ran. Illegal events (anything other than a blocked wait)
 * terminate their branch. Racy access pairs are collected along every
 * explored path.
 */
ExploreResult explore(const std::vector<TaskProgram>& programs,
                      std::uint64_t max_interleavings = 100000,
                      SemanticsVariant variant = SemanticsVariant::Habanero);

}  // namespace phasekit::tracekit

#endif  // PHASEKIT_TRACEKIT_HPP_
