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

#ifndef PHASEKIT_RACECHECK_HPP_
#define PHASEKIT_RACECHECK_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasekit/core.hpp"

namespace phasekit::tracekit {
struct ReplayResult;
}  // namespace phasekit::tracekit

namespace phasekit::racecheck {

enum class AccessKind : std::uint8_t { Read, Write };

const char* to_string(AccessKind k);

/**
 * A memory access tagged with the issuing task's views over every
 * phaser it was registered with at access time. Two snapshots can be
 * ordered without replaying anything else.
 */
struct AccessSnapshot {
  TaskId task;
  std::string task_name;
  std::string var;
  AccessKind kind = AccessKind::Read;
  std::uint32_t line = 0;
  std::map<std::string, TaskView> views;  // phaser name -> view
};

enum class Direction : std::uint8_t { AToB, BToA };

struct OrderWitness {
  std::string phaser;
  Direction direction = Direction::AToB;

  friend bool operator==(const OrderWitness&, const OrderWitness&) = default;
};

/**
 * Phase ordering lifted to accesses: the first shared phaser (by name)
 * whose views order the two accesses, in either direction. Absent when
 * no shared phaser orders them — including when the tasks share no
 * phaser at all. Requires a.task != b.task.
 */
std::optional<OrderWitness> ordered(const AccessSnapshot& a,
                                    const AccessSnapshot& b);

struct RacePair {
  AccessSnapshot a;  // lower line
  AccessSnapshot b;
};

struct OrderedPair {
  AccessSnapshot a;  // lower line
  AccessSnapshot b;
  OrderWitness witness;
};

/**
 * All conflicting access pairs of a replayed trace: cross-task accesses
 * to the same variable with at least one write, split into unordered
 * (races) and ordered pairs. Sorted by (variable, line, line); each
 * pair is stored once with the lower line first.
 */
struct RaceReport {
  std::vector<RacePair> races;
  std::vector<OrderedPair> ordered;
};

/**
 * Race detection over a completed replay. Returns nullopt when the
 * replay stopped at an error (incomplete replays have no verdict).
 */
std::optional<RaceReport> detect(const tracekit::ReplayResult& result);

std::string to_text(const RaceReport& report);
std::string to_json(const RaceReport& report);

}  // namespace phasekit::racecheck

#endif  // PHASEKIT_RACECHECK_HPP_
