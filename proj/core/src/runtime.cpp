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

#include "phasekit/runtime.hpp"

#include <condition_variable>
#include <mutex>

namespace phasekit::runtime {

const char* to_string(Error e) {
  switch (e) {
    case Error::MemberAbsent: return "member absent";
    case Error::AlreadyRegistered: return "already registered";
    case Error::ModeForbidden: return "mode forbidden";
    case Error::PhaseProtocol: return "phase protocol violation";
    case Error::HandleDropped: return "handle dropped";
  }
  return "?";
}

std::optional<PhaserState> OperationLog::replay() const {
  ApplyResult cur = new_phaser(creator, mode);
  if (!ok(cur)) return std::nullopt;
  PhaserState state = state_of(cur);
  for (const LogEntry& e : entries) {
    ApplyResult next = apply(state, e.task, e.op);
    if (!ok(next)) return std::nullopt;
    state = std::move(std::get<PhaserState>(next));
  }
  return state;
}

namespace {

Error from_apply(ApplyError e) {
  switch (e) {
    case ApplyError::MemberAbsent: return Error::MemberAbsent;
    case ApplyError::AlreadyRegistered: return Error::AlreadyRegistered;
    case ApplyError::ModeForbidden: return Error::ModeForbidden;
    case ApplyError::PhaseProtocol: return Error::PhaseProtocol;
    // WouldBlock is consumed by the wait loop; VariantForbidden cannot
    // arise (the runtime always runs the unrestricted semantics).
    case ApplyError::WouldBlock:
    case ApplyError::VariantForbidden: return Error::ModeForbidden;
  }
  return Error::ModeForbidden;
}

}  // namespace

/**
 * The shared cell: the model state guarded by one mutex, a broadcast
 * wakeup for blocked waiters, and the commit log.
 */
class SharedPhaser {
 public:
  explicit SharedPhaser(Mode m)
      : state_(state_of(new_phaser(TaskId{0}, m))), log_{TaskId{0}, m, {}} {}

  std::optional<Error> run(TaskId t, const PhaserOp& op) {
    std::unique_lock<std::mutex> lock(mu_);
    ApplyResult res = apply(state_, t, op);
    if (!ok(res)) return from_apply(error_of(res));
    commit(t, op, std::get<PhaserState>(std::move(res)));
    return std::nullopt;
  }

  std::optional<Error> wait(TaskId t) {
    std::unique_lock<std::mutex> lock(mu_);
    for (;;) {
      ApplyResult res = apply(state_, t, Wait{});
      if (ok(res)) {
        commit(t, Wait{}, std::get<PhaserState>(std::move(res)));
        return std::nullopt;
      }
      const ApplyError e = error_of(res);
      // Protocol violations fail fast instead of deadlocking; only a
      // not-yet-observable phase is worth sleeping on.
      if (e != ApplyError::WouldBlock) return from_apply(e);
      cv_.wait(lock);
    }
  }

  std::variant<TaskId, Error> register_child(TaskId parent, Mode m) {
    std::unique_lock<std::mutex> lock(mu_);
    const TaskId child{next_task_};
    ApplyResult res = apply(state_, parent, Register{child, m});
    if (!ok(res)) return from_apply(error_of(res));
    ++next_task_;
    commit(parent, Register{child, m}, std::get<PhaserState>(std::move(res)));
    return child;
  }

  PhaserState snapshot() {
    std::unique_lock<std::mutex> lock(mu_);
    return state_;
  }

  OperationLog log_copy() {
    std::unique_lock<std::mutex> lock(mu_);
    return log_;
  }

 private:
  void commit(TaskId t, const PhaserOp& op, PhaserState next) {
    state_ = std::move(next);
    log_.entries.push_back(LogEntry{t, op});
    // Any committed operation may change what a waiter awaits.
    cv_.notify_all();
  }

  std::mutex mu_;
  std::condition_variable cv_;
  PhaserState state_;
  std::uint64_t next_task_ = 1;
  OperationLog log_;
};

PhaserHandle::PhaserHandle(std::shared_ptr<SharedPhaser> cell, TaskId task)
    : cell_(std::move(cell)), task_(task) {}

std::optional<Error> PhaserHandle::signal() {
  if (dropped_) return Error::HandleDropped;
  return cell_->run(task_, Signal{});
}

std::optional<Error> PhaserHandle::wait() {
  if (dropped_) return Error::HandleDropped;
  return cell_->wait(task_);
}

std::variant<PhaserHandle, Error> PhaserHandle::register_task(Mode child_mode) {
  if (dropped_) return Error::HandleDropped;
  std::variant<TaskId, Error> res = cell_->register_child(task_, child_mode);
  if (res.index() == 1) return std::get<Error>(res);
  return PhaserHandle(cell_, std::get<TaskId>(res));
}

std::optional<Error> PhaserHandle::drop() {
  if (dropped_) return Error::HandleDropped;
  std::optional<Error> err = cell_->run(task_, Drop{});
  if (!err.has_value()) dropped_ = true;
  return err;
}

PhaserState PhaserHandle::snapshot() const { return cell_->snapshot(); }

OperationLog PhaserHandle::log() const { return cell_->log_copy(); }

PhaserHandle create(Mode m) {
  return PhaserHandle(std::make_shared<SharedPhaser>(m), TaskId{0});
}

}  // namespace phasekit::runtime
