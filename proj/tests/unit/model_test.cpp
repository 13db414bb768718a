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

#include <gtest/gtest.h>

#include "generators.hpp"
#include "naive_evaluator.hpp"
#include "rrlab/model.hpp"
#include "rrlab/moves.hpp"

namespace rrlab {
namespace {

Instance bare(int n, bool phased = false) {
  Instance inst;
  inst.id = "bare";
  inst.n_teams = n;
  inst.phased = phased;
  return inst;
}

// Every team exactly once per slot, every ordered pair once: counted directly.
bool is_compact_2rr(const Timetable& tt, int n) {
  for (int h = 0; h < n; ++h)
    for (int a = 0; a < n; ++a)
      if (h != a && (tt.slot(h, a) < 0 || tt.slot(h, a) >= 2 * n - 2)) return false;
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < 2 * n - 2; ++s) {
      int games = 0;
      for (int o = 0; o < n; ++o)
        if (o != t) games += (tt.slot(t, o) == s) + (tt.slot(o, t) == s);
      if (games != 1) return false;
    }
  return true;
}

TEST(Structure, CanonicalFourTeamsIsValid) {
  const Timetable tt = canonical_schedule(4, true);
  EXPECT_TRUE(is_compact_2rr(tt, 4));
  EXPECT_TRUE(validate_structure(tt, bare(4, true)).empty());
  EXPECT_EQ(tt.size(), 12);
}

TEST(Structure, TwoTeams) {
  const Timetable tt = canonical_schedule(2, true);
  EXPECT_EQ(tt.slot(0, 1) + tt.slot(1, 0), 1);
  EXPECT_TRUE(validate_structure(tt, bare(2, true)).empty());
}

TEST(Structure, DoubleBookingNamesTeamAndSlot) {
  Timetable tt = canonical_schedule(4, true);
  // Move one game of team 0 onto another slot where it already plays.
  const auto entries = tt.entries();
  const auto first = *std::find_if(entries.begin(), entries.end(),
                                   [](const auto& e) { return e.home == 0 && e.slot != 0; });
  tt.set_slot(first.home, first.away, 0);
  const auto v = validate_structure(tt, bare(4));
  const auto it = std::find_if(v.begin(), v.end(), [](const StructuralViolation& x) {
    return x.kind == ViolationKind::DoubleBooked && x.team == 0 && x.slot == 0;
  });
  EXPECT_NE(it, v.end());
}

TEST(Structure, MissingPairReported) {
  Timetable tt = canonical_schedule(4, true);
  tt.set_slot(2, 3, Timetable::kUnscheduled);
  const auto v = validate_structure(tt, bare(4));
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const StructuralViolation& x) {
    return x.kind == ViolationKind::MissingPair && x.team == 2 && x.other == 3;
  }));
}

TEST(Structure, PhasedViolationReportedSeparately) {
  // Pair (0,1) meets twice in the first leg after swapping two rounds across legs.
  Timetable tt = canonical_schedule(4, true);
  const SlotId s01 = tt.slot(0, 1) < 3 ? tt.slot(0, 1) : tt.slot(1, 0);
  const SlotId later = tt.slot(0, 1) < 3 ? tt.slot(1, 0) : tt.slot(0, 1);
  // Exchange the slot holding the second meeting with some other first-leg slot.
  const SlotId other = s01 == 0 ? 1 : 0;
  for (const auto& e : tt.entries()) {
    if (e.slot == later) tt.set_slot(e.home, e.away, other);
    if (e.slot == other) tt.set_slot(e.home, e.away, later);
  }
  ASSERT_TRUE(is_compact_2rr(tt, 4));
  EXPECT_TRUE(validate_structure(tt, bare(4, false)).empty());
  const auto v = validate_structure(tt, bare(4, true));
  ASSERT_FALSE(v.empty());
  for (const auto& x : v) EXPECT_EQ(x.kind, ViolationKind::Phased);
  EXPECT_EQ(static_cast<int>(v.size()), phased_violations(tt, 4));
}

TEST(Structure, SlotOutOfRangeThrows) {
  Timetable tt = canonical_schedule(4, true);
  tt.set_slot(0, 1, 6);
  EXPECT_THROW(validate_structure(tt, bare(4)), MalformedTimetable);
}

TEST(Structure, WrongTeamCount) {
  const auto v = validate_structure(canonical_schedule(4, true), bare(6));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::WrongTeamCount);
}

TEST(Canonical, ValidPhasedAndBreakMinimalUpToTwenty) {
  for (int n = 2; n <= 20; n += 2) {
    const Timetable tt = canonical_schedule(n, true);
    ASSERT_TRUE(is_compact_2rr(tt, n)) << n;
    EXPECT_TRUE(validate_structure(tt, bare(n, true)).empty()) << n;
    EXPECT_EQ(phased_violations(tt, n), 0) << n;
    // Breaks inside each half.
    for (int half = 0; half < 2; ++half) {
      int breaks = 0;
      for (int t = 0; t < n; ++t)
        for (int s = half * (n - 1) + 1; s < (half + 1) * (n - 1); ++s) {
          auto home = [&](int slot) {
            for (int o = 0; o < n; ++o)
              if (o != t && tt.slot(t, o) == slot) return true;
            return false;
          };
          breaks += home(s) == home(s - 1);
        }
      EXPECT_EQ(breaks, n - 2) << "n=" << n << " half=" << half;
    }
  }
}

TEST(Canonical, OddTeamCountRejected) { EXPECT_THROW(canonical_schedule(5, true), Error); }

TEST(Instance, Checks) {
  Instance inst = bare(4);
  EXPECT_NO_THROW(check_instance(inst));
  inst.n_teams = 7;
  EXPECT_THROW(check_instance(inst), InvalidInstance);
  inst.n_teams = 4;
  Constraint c;
  c.params = Ca1{0, {0, 1}, VenueMode::Home, 2, 1};
  inst.constraints = {c};
  EXPECT_THROW(check_instance(inst), InvalidInstance);  // min > max
  c.params = Ca1{4, {0}, VenueMode::Home, 0, 0};
  inst.constraints = {c};
  EXPECT_THROW(check_instance(inst), InvalidInstance);  // team out of range
  c.params = Ca1{0, {6}, VenueMode::Home, 0, 0};
  inst.constraints = {c};
  EXPECT_THROW(check_instance(inst), InvalidInstance);  // slot out of range
  c.params = Ca1{0, {0}, VenueMode::Home, 0, 0};
  c.hardness = Hardness::Soft;
  c.penalty = 0;
  inst.constraints = {c};
  EXPECT_THROW(check_instance(inst), InvalidInstance);  // soft without penalty
}

TEST(Property, OneGamePerTeamPerSlotForRandomTimetables) {
  Rng rng(7);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 4 + 2 * static_cast<int>(rng() % 4);
    const bool phased = rng() % 2 == 0;
    const Timetable tt = test::random_timetable(rng, n, phased, 80);
    EXPECT_TRUE(validate_structure(tt, bare(n, phased)).empty());
    EXPECT_TRUE(is_compact_2rr(tt, n));
  }
}

}  // namespace
}  // namespace rrlab
