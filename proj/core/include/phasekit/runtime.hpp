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

#ifndef PHASEKIT_RUNTIME_HPP_
#define PHASEKIT_RUNTIME_HPP_

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "phasekit/core.hpp"

namespace phasekit::runtime {

enum class Error : std::uint8_t {
  MemberAbsent,
  AlreadyRegistered,
  ModeForbidden,
  PhaseProtocol,
  HandleDropped,
};

const char* to_string(Error e);

struct LogEntry {
  TaskId task;
  PhaserOp op;
};

/**
 * Completion-ordered record of every committed operation, suitable for
 * replaying through the model to validate a concurrent run.
 */
struct OperationLog {
  TaskId creator;
  Mode mode = Mode::SW;
  std::vector<LogEntry> entries;

  /// Folds the model over the log; nullopt if any entry is rejected.
  std::optional<PhaserState> replay() const;
};

class SharedPhaser;

/**
 * A task's handle onto a shared blocking phaser. wait() suspends the
 * calling thread until the awaited phase becomes observable; every
 * committed operation wakes all blocked waiters for re-evaluation,
 * since registration and drop both change which signals are awaited.
 *
 * Handles may move between threads; one logical task drives a handle
 * at a time. After drop() the handle is inert.
 */
class PhaserHandle {
 public:
  std::optional<Error> signal();
  std::optional<Error> wait();
  /// Registers a freshly minted task and returns its handle.
  std::variant<PhaserHandle, Error> register_task(Mode child_mode);
  std::optional<Error> drop();

  TaskId task() const { return task_; }
  bool dropped() const { return dropped_; }

  /// Consistent copy of the current phaser state.
  PhaserState snapshot() const;
  /// Copy of the operation log up to now.
  OperationLog log() const;

 private:
  friend PhaserHandle create(Mode m);
  PhaserHandle(std::shared_ptr<SharedPhaser> cell, TaskId task);

  std::shared_ptr<SharedPhaser> cell_;
  TaskId task_;
  bool dropped_ = false;
};

/// Fresh phaser with the calling task registered at (0, 0, m).
PhaserHandle create(Mode m);

}  // namespace phasekit::runtime

#endif  // PHASEKIT_RUNTIME_HPP_
