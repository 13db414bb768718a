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

#include "rrlab/model.hpp"

#include <algorithm>
#include <sstream>

#include "rrlab/errors.hpp"

namespace rrlab {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MalformedXml: return "malformed XML";
    case ParseErrorKind::UnknownConstraint: return "unknown constraint";
    case ParseErrorKind::OutOfRange: return "out-of-range reference";
    case ParseErrorKind::OddTeamCount: return "odd team count";
    case ParseErrorKind::DuplicatePair: return "duplicate pair";
    case ParseErrorKind::UnknownReference: return "unknown reference";
    case ParseErrorKind::BadValue: return "bad value";
    case ParseErrorKind::MissingField: return "missing field";
    case ParseErrorKind::NegativeObjective: return "negative objective";
    case ParseErrorKind::UnknownColumn: return "unknown column";
  }
  return "parse error";
}

std::string_view to_string(ConstraintType t) {
  static constexpr std::array<std::string_view, kNumConstraintTypes> names = {
      "CA1", "CA2", "CA3", "CA4", "GA1", "BR1", "BR2", "FA2", "SE1"};
  return names[static_cast<int>(t)];
}

std::string_view to_string(VenueMode m) {
  switch (m) {
    case VenueMode::Home: return "H";
    case VenueMode::Away: return "A";
    case VenueMode::Any: return "HA";
  }
  return "?";
}

std::optional<ConstraintType> constraint_type_from_string(std::string_view s) {
  for (ConstraintType t : kAllConstraintTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInstance(msg);
}

void check_teams(const std::vector<TeamId>& teams, int n, const char* what) {
  for (TeamId t : teams) require(t >= 0 && t < n, std::string(what) + ": team index out of range");
}

void check_slots(const std::vector<SlotId>& slots, int n_slots, const char* what) {
  for (SlotId s : slots)
    require(s >= 0 && s < n_slots, std::string(what) + ": slot index out of range");
}

void check_bounds(int min, int max, const char* what) {
  require(min >= 0 && max >= 0, std::string(what) + ": negative bound");
  require(min <= max, std::string(what) + ": min exceeds max");
}

struct ParamChecker {
  int n;
  int slots;

  void operator()(const Ca1& c) const {
    check_teams({c.team}, n, "CA1");
    check_slots(c.slots, slots, "CA1");
    check_bounds(c.min, c.max, "CA1");
  }
  void operator()(const Ca2& c) const {
    check_teams({c.team}, n, "CA2");
    check_teams(c.opponents, n, "CA2");
    check_slots(c.slots, slots, "CA2");
    check_bounds(c.min, c.max, "CA2");
  }
  void operator()(const Ca3& c) const {
    check_teams({c.team}, n, "CA3");
    check_teams(c.opponents, n, "CA3");
    check_bounds(c.min, c.max, "CA3");
    require(c.window >= 1, "CA3: window must be positive");
  }
  void operator()(const Ca4& c) const {
    check_teams(c.teams1, n, "CA4");
    check_teams(c.teams2, n, "CA4");
    check_slots(c.slots, slots, "CA4");
    check_bounds(c.min, c.max, "CA4");
  }
  void operator()(const Ga1& c) const {
    for (auto [h, a] : c.games) {
      check_teams({h, a}, n, "GA1");
      require(h != a, "GA1: game with identical teams");
    }
    check_slots(c.slots, slots, "GA1");
    check_bounds(c.min, c.max, "GA1");
  }
  void operator()(const Br1& c) const {
    check_teams({c.team}, n, "BR1");
    check_slots(c.slots, slots, "BR1");
    require(c.max_breaks >= 0, "BR1: negative bound");
  }
  void operator()(const Br2& c) const {
    check_teams(c.teams, n, "BR2");
    check_slots(c.slots, slots, "BR2");
    require(c.max_breaks >= 0, "BR2: negative bound");
  }
  void operator()(const Fa2& c) const {
    check_teams(c.teams, n, "FA2");
    check_slots(c.slots, slots, "FA2");
    require(c.bound >= 0, "FA2: negative bound");
  }
  void operator()(const Se1& c) const {
    check_teams(c.teams, n, "SE1");
    require(c.min_separation >= 0, "SE1: negative separation");
  }
};

}  // namespace

void check_instance(const Instance& inst) {
  require(inst.n_teams >= 2, "instance needs at least two teams");
  require(inst.n_teams % 2 == 0, "odd team count");
  ParamChecker checker{inst.n_teams, inst.n_slots()};
  for (const Constraint& c : inst.constraints) {
    require(c.penalty >= 0, "negative penalty");
    require(c.hard() || c.penalty > 0, "soft constraint without penalty");
    std::visit(checker, c.params);
  }
}

int Timetable::size() const {
  return static_cast<int>(std::count_if(slot_.begin(), slot_.end(),
                                        [](SlotId s) { return s != kUnscheduled; }));
}

std::vector<Timetable::Entry> Timetable::entries() const {
  std::vector<Entry> out;
  out.reserve(slot_.size());
  for (TeamId h = 0; h < n_; ++h)
    for (TeamId a = 0; a < n_; ++a)
      if (h != a && scheduled(h, a)) out.push_back({h, a, slot(h, a)});
  return out;
}

int phased_violations(const Timetable& tt, int n_teams) {
  const int leg = n_teams - 1;
  int count = 0;
  for (TeamId i = 0; i < n_teams; ++i)
    for (TeamId j = i + 1; j < n_teams; ++j) {
      int first_leg = 0;
      if (tt.scheduled(i, j) && tt.slot(i, j) < leg) ++first_leg;
      if (tt.scheduled(j, i) && tt.slot(j, i) < leg) ++first_leg;
      if (first_leg != 1) ++count;
    }
  return count;
}

std::vector<StructuralViolation> validate_structure(const Timetable& tt, const Instance& inst) {
  std::vector<StructuralViolation> out;
  const int n = inst.n_teams;
  const int n_slots = inst.n_slots();
  if (tt.n_teams() != n) {
    std::ostringstream msg;
    msg << "timetable has " << tt.n_teams() << " teams, instance has " << n;
    out.push_back({ViolationKind::WrongTeamCount, -1, -1, -1, msg.str()});
    return out;
  }

  std::vector<int> games(static_cast<std::size_t>(n) * n_slots, 0);
  for (TeamId h = 0; h < n; ++h)
    for (TeamId a = 0; a < n; ++a) {
      if (h == a) continue;
      const SlotId s = tt.slot(h, a);
      if (s == Timetable::kUnscheduled) {
        std::ostringstream msg;
        msg << "game " << h << "-" << a << " is not scheduled";
        out.push_back({ViolationKind::MissingPair, h, a, -1, msg.str()});
        continue;
      }
      if (s < 0 || s >= n_slots) {
        std::ostringstream msg;
        msg << "game " << h << "-" << a << " scheduled in slot " << s << " outside [0, " << n_slots
            << ")";
        throw MalformedTimetable(msg.str());
      }
      ++games[static_cast<std::size_t>(h) * n_slots + s];
      ++games[static_cast<std::size_t>(a) * n_slots + s];
    }

  for (TeamId t = 0; t < n; ++t)
    for (SlotId s = 0; s < n_slots; ++s) {
      const int g = games[static_cast<std::size_t>(t) * n_slots + s];
      if (g == 1) continue;
      std::ostringstream msg;
      if (g == 0) {
        msg << "team " << t << " has no game in slot " << s;
        out.push_back({ViolationKind::IdleSlot, t, -1, s, msg.str()});
      } else {
        msg << "team " << t << " plays " << g << " games in slot " << s;
        out.push_back({ViolationKind::DoubleBooked, t, -1, s, msg.str()});
      }
    }

  if (inst.phased) {
    const int leg = inst.leg_length();
    for (TeamId i = 0; i < n; ++i)
      for (TeamId j = i + 1; j < n; ++j) {
        int first_leg = 0;
        if (tt.scheduled(i, j) && tt.slot(i, j) < leg) ++first_leg;
        if (tt.scheduled(j, i) && tt.slot(j, i) < leg) ++first_leg;
        if (first_leg == 1) continue;
        std::ostringstream msg;
        msg << "teams " << i << " and " << j << " meet " << first_leg
            << " times in the first leg";
        out.push_back({ViolationKind::Phased, i, j, -1, msg.str()});
      }
  }
  return out;
}

}  // namespace rrlab
