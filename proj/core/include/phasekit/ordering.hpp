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

#ifndef PHASEKIT_ORDERING_HPP_
#define PHASEKIT_ORDERING_HPP_

#include <optional>

#include "phasekit/core.hpp"

namespace phasekit {

/**
 * Phase ordering on views: v1 must have happened before v2 when v1 can
 * still influence a phase that v2 already observed, i.e. v1 can signal,
 * v2 can wait, and v1's signal count is below v2's observed phase.
 */
bool view_hb(const TaskView& v1, const TaskView& v2);

/**
 * Constructive negation of view_hb: v1 cannot happen before v2 when v1
 * never signals, or v1 already signalled up to v2's observed phase, or
 * v2 never observes.
 */
bool view_chb(const TaskView& v1, const TaskView& v2);

/// Mutual cannot-happen-before: the two views may run in parallel.
bool view_mhp(const TaskView& v1, const TaskView& v2);

/// Member pair that established happens-before between two states.
struct OrderingWitness {
  TaskId in_first;   // member of the earlier state
  TaskId in_second;  // member of the later state

  friend bool operator==(const OrderingWitness&,
                         const OrderingWitness&) = default;
};

/**
 * Happens-before on states: present iff some member of p happens before
 * some member of q. Returns the first witness pair in TaskId order, so
 * reports can name the members responsible.
 */
std::optional<OrderingWitness> phaser_hb(const PhaserState& p,
                                         const PhaserState& q);

/**
 * Cannot-happen-before on states: every member pair satisfies view_chb.
 * Vacuously true when either state is empty, or when the states share
 * no ordering constraint at all; callers deciding "ordered vs racy"
 * must additionally require a shared phaser.
 */
bool phaser_chb(const PhaserState& p, const PhaserState& q);

/// Mutual cannot-happen-before on states.
bool phaser_mhp(const PhaserState& p, const PhaserState& q);

/**
 * A state is well ordered when it may happen in parallel with itself:
 * no scheduling constraint exists between any two of its views.
 */
bool well_ordered(const PhaserState& p);

}  // namespace phasekit

#endif  // PHASEKIT_ORDERING_HPP_
