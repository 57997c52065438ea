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

#include "phasekit/racecheck.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "phasekit/ordering.hpp"
#include "phasekit/tracekit.hpp"

namespace phasekit::racecheck {

const char* to_string(AccessKind k) {
  return k == AccessKind::Read ? "read" : "write";
}

std::optional<OrderWitness> ordered(const AccessSnapshot& a,
                                    const AccessSnapshot& b) {
  // Walk shared phaser names in lexicographic order.
  for (const auto& [ph, va] : a.views) {
    auto it = b.views.find(ph);
    if (it == b.views.end()) continue;
    if (view_hb(va, it->second)) return OrderWitness{ph, Direction::AToB};
    if (view_hb(it->second, va)) return OrderWitness{ph, Direction::BToA};
  }
  return std::nullopt;
}

std::optional<RaceReport> detect(const tracekit::ReplayResult& result) {
  if (!result.complete()) return std::nullopt;
  RaceReport rep;
  const std::vector<AccessSnapshot>& acc = result.accesses;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    for (std::size_t j = i + 1; j < acc.size(); ++j) {
      const AccessSnapshot& a = acc[i].line <= acc[j].line ? acc[i] : acc[j];
      const AccessSnapshot& b = acc[i].line <= acc[j].line ? acc[j] : acc[i];
      if (a.var != b.var || a.task == b.task) continue;
      if (a.kind != AccessKind::Write && b.kind != AccessKind::Write) continue;
      if (std::optional<OrderWitness> w = ordered(a, b)) {
        rep.ordered.push_back(OrderedPair{a, b, *w});
      } else {
        rep.races.push_back(RacePair{a, b});
      }
    }
  }
  auto key = [](const auto& p) {
    return std::make_tuple(std::cref(p.a.var), p.a.line, p.b.line);
  };
  std::sort(rep.races.begin(), rep.races.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
  std::sort(rep.ordered.begin(), rep.ordered.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
  return rep;
}

std::string to_text(const RaceReport& report) {
  std::ostringstream os;
  os << "races:\n";
  if (report.races.empty()) os << "  (none)\n";
  for (const RacePair& p : report.races) {
    os << "  " << p.a.var << ": " << to_string(p.a.kind) << " by "
       << p.a.task_name << " (line " << p.a.line << ") ~ "
       << to_string(p.b.kind) << " by " << p.b.task_name << " (line "
       << p.b.line << ")\n";
  }
  os << "ordered:\n";
  if (report.ordered.empty()) os << "  (none)\n";
  for (const OrderedPair& p : report.ordered) {
    const char* arrow = p.witness.direction == Direction::AToB ? "->" : "<-";
    os << "  " << p.a.var << ": " << to_string(p.a.kind) << " by "
       << p.a.task_name << " (line " << p.a.line << ") " << arrow << " "
       << to_string(p.b.kind) << " by " << p.b.task_name << " (line "
       << p.b.line << ") [" << p.witness.phaser << "]\n";
  }
  return os.str();
}

std::string to_json(const RaceReport& report) {
  using json = nlohmann::ordered_json;
  auto access = [](const AccessSnapshot& a) {
    return json{{"task", a.task_name}, {"line", a.line},
                {"kind", to_string(a.kind)}};
  };
  json out;
  out["races"] = json::array();
  for (const RacePair& p : report.races) {
    out["races"].push_back(
        json{{"var", p.a.var}, {"a", access(p.a)}, {"b", access(p.b)}});
  }
  out["ordered"] = json::array();
  for (const OrderedPair& p : report.ordered) {
    out["ordered"].push_back(json{
        {"var", p.a.var},
        {"a", access(p.a)},
        {"b", access(p.b)},
        {"phaser", p.witness.phaser},
        {"direction", p.witness.direction == Direction::AToB ? "a->b"
                                                             : "b->a"}});
  }
  return out.dump(2) + "\n";
}

}  // namespace phasekit::racecheck
