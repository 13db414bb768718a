// Copyright 2026 The rrlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Constraint deviations, the weighted soft objective and incremental deltas.
//
// All quantities are exact integers. A constraint's deviation is the amount by
// which it is violated; the objective is the penalty-weighted sum of soft
// deviations and the hard violation is the plain sum of hard deviations.

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "rrlab/model.hpp"
#include "rrlab/moves.hpp"

namespace rrlab {

enum class BreakKind : std::int8_t { None, HomeBreak, AwayBreak };

// Per (team, slot) views of a compact 2RR.
class HomeAwayTables {
 public:
  HomeAwayTables() = default;
  // Throws StructuralError if some team does not play exactly once per slot.
  explicit HomeAwayTables(const Timetable& tt);

  int n_teams() const { return n_; }
  int n_slots() const { return slots_; }

  bool home(TeamId t, SlotId s) const { return home_[at(t, s)] != 0; }
  TeamId opponent(TeamId t, SlotId s) const { return opponent_[at(t, s)]; }
  // Home games of t in slots 0..s inclusive.
  int home_prefix(TeamId t, SlotId s) const { return prefix_[at(t, s)]; }
  // Break of t at slot s (always None at s = 0).
  BreakKind break_at(TeamId t, SlotId s) const { return breaks_[at(t, s)]; }

  // Recomputes the row of team t from `tt`.
  void rebuild_team(const Timetable& tt, TeamId t);

  friend bool operator==(const HomeAwayTables&, const HomeAwayTables&) = default;

 private:
  std::size_t at(TeamId t, SlotId s) const { return static_cast<std::size_t>(t) * slots_ + s; }
  void derive_row(TeamId t);

  int n_ = 0;
  int slots_ = 0;
  std::vector<std::int8_t> home_;
  std::vector<TeamId> opponent_;
  std::vector<int> prefix_;
  std::vector<BreakKind> breaks_;
};

struct EvaluationReport {
  long long hard_violation = 0;
  long long objective = 0;
  int phased_violations = 0;  // only counted for phased instances
  std::vector<std::pair<int, int>> per_constraint;  // (constraint index, deviation)
  std::array<long long, kNumConstraintTypes> per_type_hard{};
  bool feasible = true;
};

// Deviation of a single constraint on a structurally valid timetable.
int deviation(const Constraint& c, const Timetable& tt, const HomeAwayTables& aux);

// Throws StructuralError unless `tt` is a compact 2RR for `inst`. A phased
// violation is not a structural error; it makes the report infeasible.
EvaluationReport evaluate(const Timetable& tt, const Instance& inst);

struct Delta {
  long long hard = 0;
  long long objective = 0;
  int phased = 0;
  friend bool operator==(const Delta&, const Delta&) = default;
};

// Change of (hard violation, objective, phased violations) caused by `move`.
// Throws MoveError if the move does not apply to `tt`.
Delta delta_evaluate(const Timetable& tt, const HomeAwayTables& aux, const Move& move,
                     const Instance& inst);

// Keeps a timetable, its tables and per-constraint deviations in sync so that
// moves are scored by recomputing only the constraints whose teams changed.
class IncrementalEvaluator {
 public:
  IncrementalEvaluator(const Instance& inst, Timetable tt);

  const Instance& instance() const { return *inst_; }
  const Timetable& timetable() const { return tt_; }
  const HomeAwayTables& tables() const { return aux_; }

  long long hard() const { return hard_; }
  long long objective() const { return objective_; }
  int phased() const { return phased_; }
  // Hard violation plus phased violations: zero iff feasible.
  long long infeasibility() const { return hard_ + phased_; }
  std::array<long long, kNumConstraintTypes> hard_by_type() const;

  // Scores `move` without changing the observable state.
  Delta delta(const Move& move);
  void apply(const Move& move);

  void reset(Timetable tt);
  EvaluationReport report() const;

 private:
  struct Scored {
    Delta delta;
    std::vector<std::pair<int, int>> new_deviations;  // (constraint, deviation)
  };
  Scored score(const Move& move, bool keep);
  void collect_relevant(const std::vector<TeamId>& teams);

  const Instance* inst_;
  Timetable tt_;
  HomeAwayTables aux_;
  std::vector<int> deviation_;
  std::vector<std::vector<int>> by_team_;  // constraints reading the row of a team
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  std::vector<int> relevant_;
  long long hard_ = 0;
  long long objective_ = 0;
  int phased_ = 0;
};

}  // namespace rrlab
