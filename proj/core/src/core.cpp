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

#include "phasekit/core.hpp"

#include <sstream>

namespace phasekit {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::SW: return "SW";
    case Mode::WO: return "WO";
    case Mode::SO: return "SO";
  }
  return "?";
}

std::optional<Mode> mode_from_token(std::string_view token) {
  if (token == "SW") return Mode::SW;
  if (token == "WO") return Mode::WO;
  if (token == "SO") return Mode::SO;
  return std::nullopt;
}

std::string to_string(TaskId t) { return "t" + std::to_string(t.value); }

std::string to_string(const TaskView& v) {
  std::ostringstream os;
  os << "(sp:" << v.signal_phase << ",wp:" << v.wait_phase << ","
     << to_string(v.mode) << ")";
  return os.str();
}

bool well_formed(const TaskView& v) {
  if (v.wait_phase > v.signal_phase) return false;
  if (can_wait(v.mode) && v.signal_phase - v.wait_phase > 1) return false;
  return true;
}

PhaserState PhaserState::singleton(TaskId t, const TaskView& v) {
  PhaserState p;
  p.members_.emplace(t, v);
  return p;
}

const TaskView* PhaserState::find(TaskId t) const {
  auto it = members_.find(t);
  return it == members_.end() ? nullptr : &it->second;
}

PhaserState PhaserState::with(TaskId t, const TaskView& v) const {
  PhaserState p = *this;
  p.members_[t] = v;
  return p;
}

PhaserState PhaserState::without(TaskId t) const {
  PhaserState p = *this;
  p.members_.erase(t);
  return p;
}

bool PhaserState::all_well_formed() const {
  for (const auto& [t, v] : members_) {
    if (!well_formed(v)) return false;
  }
  return true;
}

std::string to_string(const PhaserState& p) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [t, v] : p.members()) {
    if (!first) os << ", ";
    first = false;
    os << to_string(t) << ":" << to_string(v);
  }
  os << "}";
  return os.str();
}

std::string to_string(const PhaserOp& op) {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Signal>) {
          return "signal";
        } else if constexpr (std::is_same_v<T, Wait>) {
          return "wait";
        } else if constexpr (std::is_same_v<T, Register>) {
          return "register " + to_string(o.new_task) + " " +
                 to_string(o.mode);
        } else {
          return "drop";
        }
      },
      op);
}

const char* to_string(ApplyError e) {
  switch (e) {
    case ApplyError::MemberAbsent: return "member absent";
    case ApplyError::AlreadyRegistered: return "already registered";
    case ApplyError::ModeForbidden: return "mode forbidden";
    case ApplyError::PhaseProtocol: return "phase protocol violation";
    case ApplyError::WouldBlock: return "would block";
    case ApplyError::VariantForbidden: return "mode not allowed by variant";
  }
  return "?";
}

bool await_phase(const PhaserState& p, std::uint64_t n) {
  for (const auto& [t, v] : p.members()) {
    if (can_signal(v.mode) && v.signal_phase < n) return false;
  }
  return true;
}

std::optional<bool> sync(const PhaserState& p, TaskId t) {
  const TaskView* v = p.find(t);
  if (v == nullptr) return std::nullopt;
  if (v->mode == Mode::SO) return true;
  return can_wait(v->mode) && await_phase(p, v->wait_phase + 1);
}

namespace {

ApplyResult apply_signal(const PhaserState& p, TaskId t) {
  const TaskView* v = p.find(t);
  if (v == nullptr) return ApplyError::MemberAbsent;
  if (!can_signal(v->mode)) return ApplyError::ModeForbidden;
  if (v->mode == Mode::SW && v->wait_phase != v->signal_phase) {
    return ApplyError::PhaseProtocol;
  }
  TaskView next = *v;
  next.signal_phase += 1;
  return p.with(t, next);
}

ApplyResult apply_wait(const PhaserState& p, TaskId t) {
  const TaskView* v = p.find(t);
  if (v == nullptr) return ApplyError::MemberAbsent;
  if (!can_wait(v->mode)) return ApplyError::ModeForbidden;
  // Every waiter advances exactly one phase at a time: the next wait is
  // legal only when the wait count trails the signal count by one. For
  // SW members this is the signal/wait alternation; for WO members the
  // signal count is inherited at registration and bounds their waits.
  // The weaker SW-only guard breaks preservation of well-formedness (a
  // WO member could overtake its own signal count).
  if (v->wait_phase + 1 != v->signal_phase) return ApplyError::PhaseProtocol;
  if (!await_phase(p, v->wait_phase + 1)) return ApplyError::WouldBlock;
  TaskView next = *v;
  next.wait_phase += 1;
  return p.with(t, next);
}

ApplyResult apply_register(const PhaserState& p, TaskId t, const Register& r,
                           SemanticsVariant variant) {
  const TaskView* v = p.find(t);
  if (v == nullptr) return ApplyError::MemberAbsent;
  if (variant == SemanticsVariant::SwOnly && r.mode != Mode::SW) {
    return ApplyError::VariantForbidden;
  }
  if (p.contains(r.new_task)) return ApplyError::AlreadyRegistered;
  // The registrar can only grant capabilities it holds itself.
  if (can_wait(r.mode) && !can_wait(v->mode)) return ApplyError::ModeForbidden;
  if (can_signal(r.mode) && !can_signal(v->mode)) {
    return ApplyError::ModeForbidden;
  }
  TaskView child = *v;
  child.mode = r.mode;
  return p.with(r.new_task, child);
}

ApplyResult apply_drop(const PhaserState& p, TaskId t) {
  if (!p.contains(t)) return ApplyError::MemberAbsent;
  return p.without(t);
}

}  // namespace

ApplyResult apply(const PhaserState& p, TaskId t, const PhaserOp& op,
                  SemanticsVariant variant) {
  return std::visit(
      [&](const auto& o) -> ApplyResult {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Signal>) {
          return apply_signal(p, t);
        } else if constexpr (std::is_same_v<T, Wait>) {
          return apply_wait(p, t);
        } else if constexpr (std::is_same_v<T, Register>) {
          return apply_register(p, t, o, variant);
        } else {
          return apply_drop(p, t);
        }
      },
      op);
}

ApplyResult new_phaser(TaskId creator, Mode m, SemanticsVariant variant) {
  if (variant == SemanticsVariant::SwOnly && m != Mode::SW) {
    return ApplyError::VariantForbidden;
  }
  return PhaserState::singleton(creator, TaskView{0, 0, m});
}

}  // namespace phasekit
