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

// phasekit: replay phaser traces, detect data races, explore
// interleavings, and run the property suites.
//
// Exit codes: 0 clean, 1 findings (races, violations, deadlocks,
// replay failures), 2 usage or parse errors.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasekit/core.hpp"
#include "phasekit/oracles.hpp"
#include "phasekit/racecheck.hpp"
#include "phasekit/tracekit.hpp"

namespace {

using nlohmann::ordered_json;
using namespace phasekit;

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;

struct InputError {
  std::string message;
};

std::variant<std::string, InputError> slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return InputError{"cannot open '" + path + "'"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::variant<tracekit::Trace, int> load_trace(const std::string& path) {
  auto text = slurp(path);
  if (text.index() == 1) {
    std::cerr << "error: " << std::get<InputError>(text).message << "\n";
    return kExitUsage;
  }
  auto parsed = tracekit::parse(std::get<std::string>(text));
  if (parsed.index() == 1) {
    const auto& e = std::get<tracekit::ParseError>(parsed);
    std::cerr << "parse error at line " << e.line << ": " << e.message
              << " (near '" << e.token << "')\n";
    return kExitUsage;
  }
  return std::get<tracekit::Trace>(std::move(parsed));
}

ordered_json view_json(const TaskView& v) {
  return ordered_json{{"sp", v.signal_phase},
                      {"wp", v.wait_phase},
                      {"mode", to_string(v.mode)}};
}

ordered_json states_json(const std::map<std::string, PhaserState>& states,
                         const std::vector<std::string>& names) {
  ordered_json out = ordered_json::object();
  for (const auto& [ph, st] : states) {
    ordered_json members = ordered_json::object();
    for (const auto& [t, v] : st.members()) {
      members[names[t.value]] = view_json(v);
    }
    out[ph] = std::move(members);
  }
  return out;
}

std::string cell(const PhaserState& st, TaskId t) {
  const TaskView* v = st.find(t);
  if (v == nullptr) return "-";
  return "sp:" + std::to_string(v->signal_phase) +
         ",wp:" + std::to_string(v->wait_phase);
}

int run_replay(const tracekit::Trace& tr, SemanticsVariant variant,
               bool json_output) {
  const tracekit::ReplayResult res = tracekit::replay(tr, variant);

  if (json_output) {
    ordered_json out;
    out["steps"] = ordered_json::array();
    for (std::size_t i = 0; i < res.steps.size(); ++i) {
      const tracekit::TraceEvent& ev = tr.events[i];
      out["steps"].push_back(
          ordered_json{{"line", ev.line},
                       {"event", tracekit::render(ev)},
                       {"states", states_json(res.steps[i].states,
                                              res.task_names)}});
    }
    out["final"] = states_json(res.final_states, res.task_names);
    if (res.error.has_value()) {
      out["error"] = ordered_json{{"line", res.error->line},
                                  {"message", res.error->message}};
    } else {
      out["error"] = nullptr;
    }
    std::cout << out.dump(2) << "\n";
    return res.complete() ? kExitClean : kExitFindings;
  }

  // Column per (phaser, member) pair, in name order.
  std::vector<std::pair<std::string, TaskId>> columns;
  for (const tracekit::ReplayStep& step : res.steps) {
    for (const auto& [ph, st] : step.states) {
      for (const auto& [t, v] : st.members()) {
        if (std::find(columns.begin(), columns.end(),
                      std::make_pair(ph, t)) == columns.end()) {
          columns.emplace_back(ph, t);
        }
      }
    }
  }
  std::sort(columns.begin(), columns.end());

  std::vector<std::string> headers{"line", "event"};
  for (const auto& [ph, t] : columns) {
    headers.push_back(ph + "." + res.task_names[t.value]);
  }
  std::vector<std::size_t> widths;
  for (const std::string& h : headers) widths.push_back(h.size());

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    const tracekit::TraceEvent& ev = tr.events[i];
    std::vector<std::string> row{std::to_string(ev.line),
                                 tracekit::render(ev)};
    for (const auto& [ph, t] : columns) {
      auto it = res.steps[i].states.find(ph);
      row.push_back(it == res.steps[i].states.end() ? "-"
                                                    : cell(it->second, t));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
    rows.push_back(std::move(row));
  }

  auto print_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::cout << std::left << std::setw(static_cast<int>(widths[c]) + 2)
                << row[c];
    }
    std::cout << "\n";
  };
  print_row(headers);
  for (const auto& row : rows) print_row(row);

  if (res.error.has_value()) {
    std::cout << "error at line " << res.error->line << ": "
              << res.error->message << "\n";
    return kExitFindings;
  }
  return kExitClean;
}

int run_race(const tracekit::Trace& tr, SemanticsVariant variant,
             bool json_output) {
  const tracekit::ReplayResult res = tracekit::replay(tr, variant);
  const std::optional<racecheck::RaceReport> report = racecheck::detect(res);
  if (!report.has_value()) {
    if (json_output) {
      ordered_json out;
      out["error"] = ordered_json{{"line", res.error->line},
                                  {"message", res.error->message}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "incomplete replay at line " << res.error->line << ": "
                << res.error->message << "\n";
    }
    return kExitFindings;
  }
  std::cout << (json_output ? racecheck::to_json(*report)
                            : racecheck::to_text(*report));
  return report->races.empty() ? kExitClean : kExitFindings;
}

int run_explore(const tracekit::Trace& tr, std::uint64_t bound,
                SemanticsVariant variant, bool json_output) {
  const std::vector<tracekit::TaskProgram> programs = tracekit::programs_of(tr);
  const tracekit::ExploreResult res = tracekit::explore(programs, bound,
                                                        variant);
  bool findings = !res.racy.empty();
  for (const tracekit::Outcome& o : res.outcomes) {
    if (o.kind != tracekit::Outcome::Kind::Completed) findings = true;
  }

  if (json_output) {
    ordered_json out;
    out["tasks"] = programs.size();
    out["interleavings"] = res.interleavings;
    out["completed"] = res.completed;
    out["bound_exceeded"] = res.bound_exceeded;
    out["outcomes"] = ordered_json::array();
    for (const tracekit::Outcome& o : res.outcomes) {
      out["outcomes"].push_back(tracekit::to_string(o));
    }
    out["racy"] = ordered_json::array();
    for (const tracekit::RacyPair& p : res.racy) {
      out["racy"].push_back(ordered_json{
          {"var", p.var}, {"line_a", p.line_a}, {"line_b", p.line_b}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "tasks: " << programs.size() << "\n";
    std::cout << "interleavings: " << res.interleavings << " (completed "
              << res.completed << ")\n";
    if (res.bound_exceeded) {
      std::cout << "bound exceeded: partial result\n";
    }
    std::cout << "outcomes:\n";
    for (const tracekit::Outcome& o : res.outcomes) {
      std::cout << "  " << tracekit::to_string(o) << "\n";
    }
    std::cout << "racy pairs:\n";
    if (res.racy.empty()) std::cout << "  (none)\n";
    for (const tracekit::RacyPair& p : res.racy) {
      std::cout << "  " << p.var << ": line " << p.line_a << " ~ line "
                << p.line_b << "\n";
    }
  }
  return findings ? kExitFindings : kExitClean;
}

struct PropOptions {
  std::uint64_t seed = 0;
  std::uint64_t steps = 10000;
  std::uint64_t traces = 1000;
  std::uint64_t max_phase = 4;
  std::uint32_t max_tasks = 5;
  bool sw_only = false;
};

int run_prop(const PropOptions& opt, bool json_output) {
  oracles::TraceGenConfig cfg;
  cfg.seed = opt.seed;
  cfg.max_tasks = opt.max_tasks;
  cfg.variant = opt.sw_only ? SemanticsVariant::SwOnly
                            : SemanticsVariant::Habanero;

  const oracles::EnumBound views{opt.max_phase};
  const oracles::EnumBound states{std::min<std::uint64_t>(opt.max_phase, 2)};

  std::vector<oracles::CheckReport> reports;
  reports.push_back(oracles::check_duality(views));
  reports.push_back(oracles::check_view_causality(views));
  reports.push_back(oracles::check_phaser_causality(states, 2));
  reports.push_back(oracles::check_mhp_non_transitivity());
  reports.push_back(oracles::check_wf_preservation(cfg, opt.steps));
  reports.push_back(oracles::check_wo_preservation(cfg, opt.steps));
  reports.push_back(oracles::check_step_ordering(cfg, opt.steps));
  reports.push_back(oracles::check_multi_step_ordering(cfg, opt.traces));

  bool failed = false;
  if (json_output) {
    ordered_json out = ordered_json::array();
    for (const oracles::CheckReport& r : reports) {
      if (!r.passed()) failed = true;
      ordered_json violations = ordered_json::array();
      for (const oracles::Violation& v : r.violations) {
        violations.push_back(ordered_json{{"instance", v.instance},
                                          {"expected", v.expected},
                                          {"actual", v.actual}});
      }
      out.push_back(ordered_json{{"property", r.property},
                                 {"instances", r.instances},
                                 {"violations", std::move(violations)}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const oracles::CheckReport& r : reports) {
      if (!r.passed()) failed = true;
      std::cout << (r.passed() ? "ok    " : "FAIL  ") << std::left
                << std::setw(24) << r.property
                << " instances=" << std::setw(10) << r.instances
                << " violations=" << r.violations.size() << "\n";
      for (const oracles::Violation& v : r.violations) {
        std::cout << "      " << v.instance << "\n"
                  << "        expected: " << v.expected << "\n"
                  << "        actual:   " << v.actual << "\n";
      }
    }
  }
  return failed ? kExitFindings : kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phaser semantics toolkit: trace replay, race detection, "
               "interleaving exploration, and property suites"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string input;
  bool sw_only = false;
  std::uint64_t interleavings = 100000;
  PropOptions prop;

  auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  CLI::App* replay = app.add_subcommand("replay",
                                        "Replay a trace and print per-step "
                                        "phase tables");
  replay->add_option("input", input, "Trace file, or - for stdin")
      ->required();
  replay->add_flag("--sw-only", sw_only, "Restrict every mode to SW");
  add_format(replay);

  CLI::App* race = app.add_subcommand("race",
                                      "Replay a trace and report data races");
  race->add_option("input", input, "Trace file, or - for stdin")->required();
  race->add_flag("--sw-only", sw_only, "Restrict every mode to SW");
  add_format(race);

  CLI::App* explore = app.add_subcommand("explore",
                                         "Explore the interleavings of a "
                                         "trace's per-task programs");
  explore->add_option("input", input, "Trace file, or - for stdin")
      ->required();
  explore->add_option("--interleavings", interleavings,
                      "Interleaving bound")
      ->capture_default_str();
  explore->add_flag("--sw-only", sw_only, "Restrict every mode to SW");
  add_format(explore);

  CLI::App* prop_cmd = app.add_subcommand("prop", "Run the property suites");
  prop_cmd->add_option("--seed", prop.seed, "Generator seed")
      ->capture_default_str();
  prop_cmd->add_option("--steps", prop.steps,
                       "Total random reduction steps per suite")
      ->capture_default_str();
  prop_cmd->add_option("--traces", prop.traces,
                       "Trace count for the multi-step suite")
      ->capture_default_str();
  prop_cmd->add_option("--max-phase", prop.max_phase,
                       "Phase bound for exhaustive suites")
      ->capture_default_str();
  prop_cmd->add_option("--max-tasks", prop.max_tasks,
                       "Task bound for generated traces")
      ->capture_default_str();
  prop_cmd->add_flag("--sw-only", prop.sw_only,
                     "Restrict every mode to SW");
  add_format(prop_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const bool json_output = format == "json";
  const SemanticsVariant variant =
      sw_only ? SemanticsVariant::SwOnly : SemanticsVariant::Habanero;

  if (prop_cmd->parsed()) return run_prop(prop, json_output);

  auto trace = load_trace(input);
  if (trace.index() == 1) return std::get<int>(trace);
  const tracekit::Trace& tr = std::get<tracekit::Trace>(trace);

  if (replay->parsed()) return run_replay(tr, variant, json_output);
  if (race->parsed()) return run_race(tr, variant, json_output);
  if (explore->parsed()) return run_explore(tr, interleavings, variant,
                                            json_output);
  return kExitUsage;
}
