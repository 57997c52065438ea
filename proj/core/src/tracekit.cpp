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

#include "phasekit/tracekit.hpp"

#include <algorithm>
#include <sstream>

namespace phasekit::tracekit {

const std::string& event_task(const TraceEvent& ev) {
  return std::visit([](const auto& e) -> const std::string& { return e.task; },
                    ev.body);
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::variant<Trace, ParseError> parse(std::string_view text) {
  Trace tr;
  std::uint32_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(
        start, nl == std::string_view::npos ? std::string_view::npos
                                            : nl - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::vector<std::string_view> tok = tokenize(line);
    if (!tok.empty()) {
      const std::string_view kw = tok[0];
      auto arity_error = [&](const char* usage) -> ParseError {
        return ParseError{line_no, std::string(kw),
                          std::string("expected: ") + usage};
      };
      auto parse_mode = [&](std::string_view t)
          -> std::variant<Mode, ParseError> {
        if (std::optional<Mode> m = mode_from_token(t)) return *m;
        return ParseError{line_no, std::string(t),
                          "invalid mode (want SW, WO or SO)"};
      };
      if (kw == "new") {
        if (tok.size() != 4) return arity_error("new <task> <phaser> <mode>");
        auto m = parse_mode(tok[3]);
        if (m.index() == 1) return std::get<ParseError>(m);
        tr.events.push_back({NewEvent{std::string(tok[1]), std::string(tok[2]),
                                      std::get<Mode>(m)},
                             line_no});
      } else if (kw == "signal") {
        if (tok.size() != 3) return arity_error("signal <task> <phaser>");
        tr.events.push_back(
            {SignalEvent{std::string(tok[1]), std::string(tok[2])}, line_no});
      } else if (kw == "wait") {
        if (tok.size() != 3) return arity_error("wait <task> <phaser>");
        tr.events.push_back(
            {WaitEvent{std::string(tok[1]), std::string(tok[2])}, line_no});
      } else if (kw == "reg") {
        if (tok.size() != 5) {
          return arity_error("reg <task> <newtask> <phaser> <mode>");
        }
        auto m = parse_mode(tok[4]);
        if (m.index() == 1) return std::get<ParseError>(m);
        tr.events.push_back({RegEvent{std::string(tok[1]), std::string(tok[2]),
                                      std::string(tok[3]), std::get<Mode>(m)},
                             line_no});
      } else if (kw == "drop") {
        if (tok.size() != 3) return arity_error("drop <task> <phaser>");
        tr.events.push_back(
            {DropEvent{std::string(tok[1]), std::string(tok[2])}, line_no});
      } else if (kw == "read") {
        if (tok.size() != 3) return arity_error("read <task> <var>");
        tr.events.push_back(
            {ReadEvent{std::string(tok[1]), std::string(tok[2])}, line_no});
      } else if (kw == "write") {
        if (tok.size() != 3) return arity_error("write <task> <var>");
        tr.events.push_back(
            {WriteEvent{std::string(tok[1]), std::string(tok[2])}, line_no});
      } else {
        return ParseError{line_no, std::string(kw), "unknown keyword"};
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return tr;
}

std::string render(const TraceEvent& ev) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, NewEvent>) {
          return "new " + e.task + " " + e.phaser + " " + to_string(e.mode);
        } else if constexpr (std::is_same_v<T, SignalEvent>) {
          return "signal " + e.task + " " + e.phaser;
        } else if constexpr (std::is_same_v<T, WaitEvent>) {
          return "wait " + e.task + " " + e.phaser;
        } else if constexpr (std::is_same_v<T, RegEvent>) {
          return "reg " + e.task + " " + e.new_task + " " + e.phaser + " " +
                 to_string(e.mode);
        } else if constexpr (std::is_same_v<T, DropEvent>) {
          return "drop " + e.task + " " + e.phaser;
        } else if constexpr (std::is_same_v<T, ReadEvent>) {
          return "read " + e.task + " " + e.var;
        } else {
          return "write " + e.task + " " + e.var;
        }
      },
      ev.body);
}

std::string render(const Trace& tr) {
  std::string out;
  for (const TraceEvent& ev : tr.events) {
    out += render(ev);
    out += '\n';
  }
  return out;
}

namespace {

struct NameTable {
  std::vector<std::string> names;
  std::map<std::string, TaskId, std::less<>> ids;

  TaskId intern(const std::string& n) {
    auto it = ids.find(n);
    if (it != ids.end()) return it->second;
    const TaskId id{names.size()};
    names.push_back(n);
    ids.emplace(n, id);
    return id;
  }
};

struct StepResult {
  enum class Kind : std::uint8_t { Ok, Blocked, Error } kind = Kind::Ok;
  ReplayError error;
  std::uint64_t awaited_phase = 0;
  std::optional<racecheck::AccessSnapshot> access;
};

racecheck::AccessSnapshot make_snapshot(
    const std::map<std::string, PhaserState>& phasers, TaskId id,
    const std::string& name, const std::string& var, racecheck::AccessKind kind,
    std::uint32_t line) {
  racecheck::AccessSnapshot s;
  s.task = id;
  s.task_name = name;
  s.var = var;
  s.kind = kind;
  s.line = line;
  for (const auto& [ph, st] : phasers) {
    if (const TaskView* v = st.find(id)) s.views.emplace(ph, *v);
  }
  return s;
}

// Applies one event to the phaser map. Blocked is reserved for waits
// that are not yet observable; everything else either commits or fails.
StepResult step_event(std::map<std::string, PhaserState>& phasers,
                      NameTable& table, const TraceEvent& ev,
                      SemanticsVariant variant) {
  StepResult r;
  auto fail = [&](ReplayErrorCode code, std::optional<ApplyError> ae,
                  std::string msg) {
    r.kind = StepResult::Kind::Error;
    r.error = ReplayError{ev.line, code, ae, std::move(msg)};
  };
  auto run_op = [&](const std::string& task, const std::string& phaser,
                    const PhaserOp& op) {
    auto it = phasers.find(phaser);
    if (it == phasers.end()) {
      fail(ReplayErrorCode::UnknownPhaser, std::nullopt,
           "unknown phaser '" + phaser + "'");
      return;
    }
    const TaskId t = table.intern(task);
    ApplyResult res = apply(it->second, t, op, variant);
    if (ok(res)) {
      it->second = std::move(std::get<PhaserState>(res));
      return;
    }
    const ApplyError e = error_of(res);
    if (e == ApplyError::WouldBlock) {
      r.kind = StepResult::Kind::Blocked;
      r.awaited_phase = it->second.find(t)->wait_phase + 1;
      return;
    }
    fail(ReplayErrorCode::Apply, e, to_string(e));
  };

  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, NewEvent>) {
          if (phasers.count(e.phaser) != 0) {
            fail(ReplayErrorCode::DuplicatePhaser, std::nullopt,
                 "duplicate phaser '" + e.phaser + "'");
            return;
          }
          ApplyResult res = new_phaser(table.intern(e.task), e.mode, variant);
          if (!ok(res)) {
            fail(ReplayErrorCode::Apply, error_of(res),
                 to_string(error_of(res)));
            return;
          }
          phasers.emplace(e.phaser, std::get<PhaserState>(std::move(res)));
        } else if constexpr (std::is_same_v<T, SignalEvent>) {
          run_op(e.task, e.phaser, Signal{});
        } else if constexpr (std::is_same_v<T, WaitEvent>) {
          run_op(e.task, e.phaser, Wait{});
        } else if constexpr (std::is_same_v<T, RegEvent>) {
          run_op(e.task, e.phaser,
                 Register{table.intern(e.new_task), e.mode});
        } else if constexpr (std::is_same_v<T, DropEvent>) {
          run_op(e.task, e.phaser, Drop{});
        } else if constexpr (std::is_same_v<T, ReadEvent>) {
          r.access = make_snapshot(phasers, table.intern(e.task), e.task,
                                   e.var, racecheck::AccessKind::Read,
                                   ev.line);
        } else {
          r.access = make_snapshot(phasers, table.intern(e.task), e.task,
                                   e.var, racecheck::AccessKind::Write,
                                   ev.line);
        }
      },
      ev.body);
  return r;
}

}  // namespace

ReplayResult replay(const Trace& tr, SemanticsVariant variant) {
  ReplayResult out;
  std::map<std::string, PhaserState> phasers;
  NameTable table;
  for (const TraceEvent& ev : tr.events) {
    StepResult sr = step_event(phasers, table, ev, variant);
    if (sr.kind == StepResult::Kind::Blocked) {
      out.error = ReplayError{
          ev.line, ReplayErrorCode::Apply, ApplyError::WouldBlock,
          "wait would block: phase " + std::to_string(sr.awaited_phase) +
              " not observable (trace is not a schedule)"};
      break;
    }
    if (sr.kind == StepResult::Kind::Error) {
      out.error = std::move(sr.error);
      break;
    }
    if (sr.access.has_value()) out.accesses.push_back(*std::move(sr.access));
    out.steps.push_back(ReplayStep{phasers});
  }
  out.final_states = std::move(phasers);
  out.task_names = std::move(table.names);
  return out;
}

std::vector<TaskProgram> programs_of(const Trace& tr) {
  std::vector<TaskProgram> out;
  std::map<std::string, std::size_t> index;
  for (const TraceEvent& ev : tr.events) {
    const std::string& t = event_task(ev);
    auto [it, fresh] = index.try_emplace(t, out.size());
    if (fresh) out.push_back(TaskProgram{t, {}});
    out[it->second].events.push_back(ev);
  }
  return out;
}

std::string to_string(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Completed:
      return "completed";
    case Outcome::Kind::Deadlock: {
      std::ostringstream os;
      os << "deadlock:";
      bool first = true;
      for (const BlockedWait& b : o.blocked) {
        os << (first ? " " : ", ") << b.task << " awaits " << b.phaser
           << " phase " << b.phase;
        first = false;
      }
      if (!o.never_started.empty()) {
        os << (first ? " " : "; ") << "never started:";
        for (std::size_t i = 0; i < o.never_started.size(); ++i) {
          os << (i == 0 ? " " : ", ") << o.never_started[i];
        }
      }
      return os.str();
    }
    case Outcome::Kind::IllegalOp: {
      std::ostringstream os;
      os << "illegal op at line " << o.line << ": " << o.event << " ("
         << o.error << ")";
      return os.str();
    }
  }
  return "?";
}

std::set<std::string> ExploreResult::racy_vars() const {
  std::set<std::string> out;
  for (const RacyPair& p : racy) out.insert(p.var);
  return out;
}

namespace {

struct Explorer {
  const std::vector<TaskProgram>& programs;
  std::uint64_t bound;
  SemanticsVariant variant;
  NameTable table;
  std::set<std::string> gated;  // tasks that exist only after their reg ran
  ExploreResult result;
  std::vector<racecheck::AccessSnapshot> path;

  struct Node {
    std::map<std::string, PhaserState> phasers;
    std::vector<std::size_t> pos;
    std::set<std::string> started;
  };

  explicit Explorer(const std::vector<TaskProgram>& progs, std::uint64_t b,
                    SemanticsVariant v)
      : programs(progs), bound(b), variant(v) {
    for (const TaskProgram& p : programs) {
      for (const TraceEvent& ev : p.events) {
        if (const auto* reg = std::get_if<RegEvent>(&ev.body)) {
          if (reg->new_task != p.task) gated.insert(reg->new_task);
        }
      }
    }
  }

  bool at_bound() {
    if (result.interleavings >= bound) {
      result.bound_exceeded = true;
      return true;
    }
    return false;
  }

  void terminal(Outcome o) {
    result.interleavings += 1;
    if (o.kind == Outcome::Kind::Completed) result.completed += 1;
    result.outcomes.insert(std::move(o));
  }

  void record_racy(const racecheck::AccessSnapshot& a) {
    for (const racecheck::AccessSnapshot& b : path) {
      if (b.var != a.var || b.task == a.task) continue;
      if (b.kind != racecheck::AccessKind::Write &&
          a.kind != racecheck::AccessKind::Write) {
        continue;
      }
      if (!racecheck::ordered(b, a).has_value()) {
        result.racy.insert(RacyPair{a.var, std::min(a.line, b.line),
                                    std::max(a.line, b.line)});
      }
    }
  }

  void dfs(const Node& node) {
    if (at_bound()) return;
    bool progress = false;
    bool unfinished = false;
    std::vector<BlockedWait> blocked;
    std::vector<std::string> pending;
    for (std::size_t p = 0; p < programs.size(); ++p) {
      if (node.pos[p] >= programs[p].events.size()) continue;
      unfinished = true;
      const std::string& tname = programs[p].task;
      if (gated.count(tname) != 0 && node.started.count(tname) == 0) {
        pending.push_back(tname);
        continue;
      }
      const TraceEvent& ev = programs[p].events[node.pos[p]];
      Node child = node;
      StepResult sr = step_event(child.phasers, table, ev, variant);
      if (sr.kind == StepResult::Kind::Blocked) {
        blocked.push_back(BlockedWait{
            tname, std::get<WaitEvent>(ev.body).phaser, sr.awaited_phase});
        continue;
      }
      if (sr.kind == StepResult::Kind::Error) {
        if (at_bound()) return;
        Outcome o;
        o.kind = Outcome::Kind::IllegalOp;
        o.line = ev.line;
        o.event = render(ev);
        o.error = sr.error.message;
        terminal(std::move(o));
        progress = true;
        continue;
      }
      progress = true;
      child.pos[p] += 1;
      if (const auto* reg = std::get_if<RegEvent>(&ev.body)) {
        child.started.insert(reg->new_task);
      }
      bool pushed = false;
      if (sr.access.has_value()) {
        record_racy(*sr.access);
        path.push_back(*std::move(sr.access));
        pushed = true;
      }
      if (!at_bound()) dfs(child);
      if (pushed) path.pop_back();
    }
    if (!progress) {
      if (!unfinished) {
        terminal(Outcome{});
        return;
      }
      Outcome o;
      o.kind = Outcome::Kind::Deadlock;
      std::sort(blocked.begin(), blocked.end());
      std::sort(pending.begin(), pending.end());
      o.blocked = std::move(blocked);
      o.never_started = std::move(pending);
      terminal(std::move(o));
    }
  }
};

}  // namespace

ExploreResult explore(const std::vector<TaskProgram>& programs,
                      std::uint64_t max_interleavings,
                      SemanticsVariant variant) {
  Explorer ex(programs, max_interleavings, variant);
  Explorer::Node root;
  root.pos.assign(programs.size(), 0);
  ex.dfs(root);
  return std::move(ex.result);
}

}  // namespace phasekit::tracekit
