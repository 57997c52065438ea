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

#ifndef PHASEKIT_CORE_HPP_
#define PHASEKIT_CORE_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace phasekit {

/**
 * Registration mode of a phaser member.
 *
 * SW members signal and wait (barrier style), WO members only observe
 * phases, SO members only produce them.
 */
enum class Mode : std::uint8_t { SW, WO, SO };

constexpr bool can_signal(Mode m) { return m == Mode::SO || m == Mode::SW; }
constexpr bool can_wait(Mode m) { return m == Mode::WO || m == Mode::SW; }

const char* to_string(Mode m);
std::optional<Mode> mode_from_token(std::string_view token);

/// Opaque task identifier with a stable total order.
struct TaskId {
  std::uint64_t value = 0;
  auto operator<=>(const TaskId&) const = default;
};

std::string to_string(TaskId t);

/**
 * A member's local knowledge of one phaser: how many signals it issued
 * and how many phases it observed, plus its registration mode.
 */
struct TaskView {
  std::uint64_t signal_phase = 0;
  std::uint64_t wait_phase = 0;
  Mode mode = Mode::SW;

  friend bool operator==(const TaskView&, const TaskView&) = default;
};

std::string to_string(const TaskView& v);

/**
 * A view is well formed when the wait count never overtakes the signal
 * count and, for members that can wait, trails it by at most one.
 */
bool well_formed(const TaskView& v);

/**
 * State of one phaser: a finite map from members to their views.
 *
 * Value type; mutations return a new state. Iteration follows the
 * TaskId order, so rendering a state is deterministic.
 */
class PhaserState {
 public:
  PhaserState() = default;

  static PhaserState singleton(TaskId t, const TaskView& v);

  const TaskView* find(TaskId t) const;
  bool contains(TaskId t) const { return members_.count(t) != 0; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }

  /// Copy of this state with t bound to v (inserted or replaced).
  PhaserState with(TaskId t, const TaskView& v) const;
  /// Copy of this state with t removed.
  PhaserState without(TaskId t) const;

  const std::map<TaskId, TaskView>& members() const { return members_; }

  /// True when every member view is well formed.
  bool all_well_formed() const;

  friend bool operator==(const PhaserState&, const PhaserState&) = default;

 private:
  std::map<TaskId, TaskView> members_;
};

std::string to_string(const PhaserState& p);

// Phaser operations, issued by a registered member.
struct Signal {};
struct Wait {};
struct Register {
  TaskId new_task;
  Mode mode;
};
struct Drop {};
using PhaserOp = std::variant<Signal, Wait, Register, Drop>;

std::string to_string(const PhaserOp& op);

/**
 * Habanero admits all three registration modes; SwOnly restricts every
 * mode to SW, which models Java phasers and X10 clocks.
 */
enum class SemanticsVariant : std::uint8_t { Habanero, SwOnly };

/**
 * Why an operation was rejected. WouldBlock is special: it marks a wait
 * whose enabling condition may become true after other members act, so
 * schedulers treat it as "retry later" rather than as an error.
 */
enum class ApplyError : std::uint8_t {
  MemberAbsent,      // issuing task is not registered
  AlreadyRegistered, // register target is already a member
  ModeForbidden,     // capability predicate fails
  PhaseProtocol,     // signal/wait alternation violated
  WouldBlock,        // wait not yet observable
  VariantForbidden,  // non-SW mode under SwOnly
};

const char* to_string(ApplyError e);

using ApplyResult = std::variant<PhaserState, ApplyError>;

inline bool ok(const ApplyResult& r) { return r.index() == 0; }
inline const PhaserState& state_of(const ApplyResult& r) {
  return std::get<PhaserState>(r);
}
inline ApplyError error_of(const ApplyResult& r) {
  return std::get<ApplyError>(r);
}

/// Phase n is observable once every member that can signal reached n.
bool await_phase(const PhaserState& p, std::uint64_t n);

/**
 * Enabling condition for t's next wait: trivially true for SO members,
 * otherwise the next wait phase must be observable. Absent member
 * yields nullopt (MemberAbsent).
 */
std::optional<bool> sync(const PhaserState& p, TaskId t);

/**
 * One small step of the phaser semantics.
 *
 * Signal:   member can signal; an SW member must have waited since its
 *           last signal. Increments the signal phase.
 * Wait:     member can wait, its wait phase must trail its signal phase
 *           by exactly one, and the awaited phase must be observable
 *           (otherwise WouldBlock). Increments the wait phase.
 * Register: target not yet a member; the issuer must hold every
 *           capability it grants. The new member inherits both of the
 *           issuer's counts with the mode replaced.
 * Drop:     removes the issuing member.
 */
ApplyResult apply(const PhaserState& p, TaskId t, const PhaserOp& op,
                  SemanticsVariant variant = SemanticsVariant::Habanero);

/// Fresh phaser whose creator is registered at (0, 0, m).
ApplyResult new_phaser(TaskId creator, Mode m,
                       SemanticsVariant variant = SemanticsVariant::Habanero);

}  // namespace phasekit

#endif  // PHASEKIT_CORE_HPP_
