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

// Local-search neighbourhoods over compact double round robins.
//
// Every move is materialized as the complete list of ordered pairs whose slot
// changes (the primary swap plus its repair chain). Applying that list to a
// compact 2RR yields a compact 2RR; the inverse move replays the list
// backwards.

#pragma once

#include <array>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "rrlab/model.hpp"

namespace rrlab {

class HomeAwayTables;

enum class MoveKind {
  SwapHomes,
  SwapTeams,
  SwapRounds,
  PartialSwapTeams,
  PartialSwapRounds,
  PartialSwapTeamsPhased,
};
inline constexpr std::array<MoveKind, 6> kAllMoveKinds = {
    MoveKind::SwapHomes,         MoveKind::SwapTeams,         MoveKind::SwapRounds,
    MoveKind::PartialSwapTeams,  MoveKind::PartialSwapRounds, MoveKind::PartialSwapTeamsPhased};

std::string_view to_string(MoveKind kind);

struct PairChange {
  TeamId home;
  TeamId away;
  SlotId from;
  SlotId to;
  friend bool operator==(const PairChange&, const PairChange&) = default;
};

struct Move {
  MoveKind kind = MoveKind::SwapHomes;
  // Operands; unused ones stay -1.
  //   SwapHomes(team1, team2), SwapTeams(team1, team2), SwapRounds(slot1, slot2),
  //   PartialSwapRounds(team1, slot1, slot2), PartialSwapTeams(team1, team2, slot1),
  //   PartialSwapTeamsPhased(team1, team2, slot1).
  TeamId team1 = -1;
  TeamId team2 = -1;
  SlotId slot1 = -1;
  SlotId slot2 = -1;
  // Every ordered pair that changes slot, sorted by (home, away).
  std::vector<PairChange> changes;

  std::vector<TeamId> affected_teams() const;
  Move inverse() const;
  friend bool operator==(const Move&, const Move&) = default;
};

// Throws MoveError when a change does not match the current slot of its pair.
void apply_move(Timetable& tt, const Move& move);

using Rng = std::mt19937_64;

// Builds the move for explicit operands, or nullopt when the operands are
// degenerate (identical teams, a repair chain that cannot close, no change).
std::optional<Move> make_move(MoveKind kind, const Timetable& tt, const HomeAwayTables& aux,
                              TeamId team1, TeamId team2, SlotId slot1, SlotId slot2);

// Samples operands uniformly until a non-degenerate move of `kind` is found.
// Returns nullopt only if none was found after a bounded number of draws
// (e.g. SwapTeams with two teams).
std::optional<Move> random_move(MoveKind kind, const Timetable& tt, const HomeAwayTables& aux,
                                Rng& rng);

// Circle-method single round robin mirrored into a second leg with reversed
// venues. The result is a phased compact 2RR regardless of `phased`.
Timetable canonical_schedule(int n_teams, bool phased = true);

}  // namespace rrlab
