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

// Domain types for compact double round-robin timetabling instances.
//
// Teams and slots are dense 0-based indices. An instance with n teams (n even)
// always has 2n - 2 slots; a compact double round robin (2RR) schedules every
// ordered pair (home, away) exactly once so that every team plays exactly one
// game in every slot.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rrlab {

using TeamId = int;
using SlotId = int;

enum class ConstraintType { CA1, CA2, CA3, CA4, GA1, BR1, BR2, FA2, SE1 };
inline constexpr int kNumConstraintTypes = 9;
inline constexpr std::array<ConstraintType, kNumConstraintTypes> kAllConstraintTypes = {
    ConstraintType::CA1, ConstraintType::CA2, ConstraintType::CA3,
    ConstraintType::CA4, ConstraintType::GA1, ConstraintType::BR1,
    ConstraintType::BR2, ConstraintType::FA2, ConstraintType::SE1};

enum class Hardness { Hard, Soft };

// Which games of a team are counted: home games, away games, or all games.
// For break constraints the same enum selects home breaks, away breaks or both.
enum class VenueMode { Home, Away, Any };

enum class Ca4Scope { Global, PerSlot };

std::string_view to_string(ConstraintType t);
std::string_view to_string(VenueMode m);
std::optional<ConstraintType> constraint_type_from_string(std::string_view s);

// Games of `team` in `slots` matching `mode`, regardless of the opponent.
struct Ca1 {
  TeamId team = 0;
  std::vector<SlotId> slots;
  VenueMode mode = VenueMode::Home;
  int min = 0;
  int max = 0;
  friend bool operator==(const Ca1&, const Ca1&) = default;
};

// Games of `team` against `opponents` in `slots` matching `mode`.
struct Ca2 {
  TeamId team = 0;
  std::vector<TeamId> opponents;
  std::vector<SlotId> slots;
  VenueMode mode = VenueMode::Any;
  int min = 0;
  int max = 0;
  friend bool operator==(const Ca2&, const Ca2&) = default;
};

// Games of `team` against `opponents` within every window of `window`
// consecutive slots.
struct Ca3 {
  TeamId team = 0;
  std::vector<TeamId> opponents;
  VenueMode mode = VenueMode::Any;
  int min = 0;
  int max = 0;
  int window = 1;
  friend bool operator==(const Ca3&, const Ca3&) = default;
};

// Games between `teams1` and `teams2` (venue seen from teams1) in `slots`,
// either summed over all slots or bounded slot by slot.
struct Ca4 {
  std::vector<TeamId> teams1;
  std::vector<TeamId> teams2;
  std::vector<SlotId> slots;
  VenueMode mode = VenueMode::Any;
  Ca4Scope scope = Ca4Scope::Global;
  int min = 0;
  int max = 0;
  friend bool operator==(const Ca4&, const Ca4&) = default;
};

// Number of the listed (home, away) games scheduled in `slots`.
struct Ga1 {
  std::vector<std::pair<TeamId, TeamId>> games;
  std::vector<SlotId> slots;
  int min = 0;
  int max = 0;
  friend bool operator==(const Ga1&, const Ga1&) = default;
};

// Breaks of `team` at `slots`; a break at slot s > 0 means the venue of s
// equals the venue of s - 1.
struct Br1 {
  TeamId team = 0;
  std::vector<SlotId> slots;
  VenueMode mode = VenueMode::Any;
  int max_breaks = 0;
  friend bool operator==(const Br1&, const Br1&) = default;
};

// Total breaks of `teams` at `slots`.
struct Br2 {
  std::vector<TeamId> teams;
  std::vector<SlotId> slots;
  int max_breaks = 0;
  friend bool operator==(const Br2&, const Br2&) = default;
};

// Home-game balance: for every pair of `teams`, the difference in played home
// games after any slot in `slots` stays within `bound`.
struct Fa2 {
  std::vector<TeamId> teams;
  std::vector<SlotId> slots;
  int bound = 2;
  friend bool operator==(const Fa2&, const Fa2&) = default;
};

// Every pair of `teams` has at least `min_separation` slots between its two
// meetings.
struct Se1 {
  std::vector<TeamId> teams;
  int min_separation = 10;
  friend bool operator==(const Se1&, const Se1&) = default;
};

using ConstraintParams = std::variant<Ca1, Ca2, Ca3, Ca4, Ga1, Br1, Br2, Fa2, Se1>;

struct Constraint {
  Hardness hardness = Hardness::Hard;
  int penalty = 1;
  ConstraintParams params;

  ConstraintType type() const { return static_cast<ConstraintType>(params.index()); }
  bool hard() const { return hardness == Hardness::Hard; }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Instance {
  std::string id;
  int n_teams = 0;
  bool phased = false;
  std::vector<Constraint> constraints;
  std::vector<std::string> team_names;
  std::vector<std::string> slot_names;

  int n_slots() const { return 2 * n_teams - 2; }
  // Slots [0, leg_length) form the first leg, the rest the second leg.
  int leg_length() const { return n_teams - 1; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws InvalidInstance when the team count is odd or < 2, an index is out of
// range, a bound is negative, min > max, or a soft constraint has no penalty.
void check_instance(const Instance& inst);

// Assignment of ordered pairs (home, away) to slots. Pairs may be unscheduled
// while a timetable is being read; validate_structure() decides whether the
// result is a compact 2RR.
class Timetable {
 public:
  static constexpr SlotId kUnscheduled = -1;

  Timetable() = default;
  explicit Timetable(int n_teams)
      : n_(n_teams), slot_(static_cast<std::size_t>(n_teams) * n_teams, kUnscheduled) {}

  int n_teams() const { return n_; }

  SlotId slot(TeamId home, TeamId away) const { return slot_[index(home, away)]; }
  void set_slot(TeamId home, TeamId away, SlotId s) { slot_[index(home, away)] = s; }
  bool scheduled(TeamId home, TeamId away) const { return slot(home, away) != kUnscheduled; }

  // Number of scheduled ordered pairs.
  int size() const;

  struct Entry {
    TeamId home;
    TeamId away;
    SlotId slot;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  // Scheduled entries in (home, away) order.
  std::vector<Entry> entries() const;

  friend bool operator==(const Timetable&, const Timetable&) = default;

 private:
  std::size_t index(TeamId h, TeamId a) const { return static_cast<std::size_t>(h) * n_ + a; }

  int n_ = 0;
  std::vector<SlotId> slot_;
};

enum class ViolationKind {
  WrongTeamCount,  // timetable sized for a different instance
  MissingPair,     // ordered pair not scheduled
  DoubleBooked,    // team plays more than one game in a slot
  IdleSlot,        // team plays no game in a slot
  Phased,          // pair does not meet exactly once in the first leg
};

struct StructuralViolation {
  ViolationKind kind;
  TeamId team = -1;
  TeamId other = -1;
  SlotId slot = -1;
  std::string message;
};

// Empty iff `tt` is a compact 2RR for `inst` (and phased when required).
// Throws MalformedTimetable for slot indices outside [0, n_slots).
std::vector<StructuralViolation> validate_structure(const Timetable& tt, const Instance& inst);

// Number of unordered pairs that do not meet exactly once in the first leg.
// Only meaningful for structurally complete timetables.
int phased_violations(const Timetable& tt, int n_teams);

}  // namespace rrlab
