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

#include "phasekit/ordering.hpp"

namespace phasekit {

bool view_hb(const TaskView& v1, const TaskView& v2) {
  return can_signal(v1.mode) && v1.signal_phase < v2.wait_phase &&
         can_wait(v2.mode);
}

bool view_chb(const TaskView& v1, const TaskView& v2) {
  return v1.mode == Mode::WO || v1.signal_phase >= v2.wait_phase ||
         v2.mode == Mode::SO;
}

bool view_mhp(const TaskView& v1, const TaskView& v2) {
  return view_chb(v1, v2) && view_chb(v2, v1);
}

std::optional<OrderingWitness> phaser_hb(const PhaserState& p,
                                         const PhaserState& q) {
  for (const auto& [t1, v1] : p.members()) {
    for (const auto& [t2, v2] : q.members()) {
      if (view_hb(v1, v2)) return OrderingWitness{t1, t2};
    }
  }
  return std::nullopt;
}

bool phaser_chb(const PhaserState& p, const PhaserState& q) {
  for (const auto& [t1, v1] : p.members()) {
    for (const auto& [t2, v2] : q.members()) {
      if (!view_chb(v1, v2)) return false;
    }
  }
  return true;
}

bool phaser_mhp(const PhaserState& p, const PhaserState& q) {
  return phaser_chb(p, q) && phaser_chb(q, p);
}

bool well_ordered(const PhaserState& p) { return phaser_chb(p, p); }

}  // namespace phasekit
