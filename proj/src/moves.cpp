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

#include "rrlab/moves.hpp"

#include <algorithm>
#include <tuple>

#include "rrlab/errors.hpp"
#include "rrlab/evaluator.hpp"

namespace rrlab {

std::string_view to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::SwapHomes: return "SwapHomes";
    case MoveKind::SwapTeams: return "SwapTeams";
    case MoveKind::SwapRounds: return "SwapRounds";
    case MoveKind::PartialSwapTeams: return "PartialSwapTeams";
    case MoveKind::PartialSwapRounds: return "PartialSwapRounds";
    case MoveKind::PartialSwapTeamsPhased: return "PartialSwapTeamsPhased";
  }
  return "?";
}

std::vector<TeamId> Move::affected_teams() const {
  std::vector<TeamId> teams;
  teams.reserve(2 * changes.size());
  for (const PairChange& c : changes) {
    teams.push_back(c.home);
    teams.push_back(c.away);
  }
  std::sort(teams.begin(), teams.end());
  teams.erase(std::unique(teams.begin(), teams.end()), teams.end());
  return teams;
}

Move Move::inverse() const {
  Move inv = *this;
  for (PairChange& c : inv.changes) std::swap(c.from, c.to);
  return inv;
}

void apply_move(Timetable& tt, const Move& move) {
  for (const PairChange& c : move.changes)
    if (tt.slot(c.home, c.away) != c.from)
      throw MoveError("move " + std::string(to_string(move.kind)) + " expects game " +
                      std::to_string(c.home) + "-" + std::to_string(c.away) + " in slot " +
                      std::to_string(c.from));
  for (const PairChange& c : move.changes) tt.set_slot(c.home, c.away, c.to);
}

namespace {

struct Game {
  TeamId home;
  TeamId away;
  SlotId slot;
};

// Game of `team` in `slot` with the given opponent and venue.
Game game_for(TeamId team, TeamId opponent, bool home, SlotId slot) {
  return home ? Game{team, opponent, slot} : Game{opponent, team, slot};
}

// Turns the new placement of some games into a move. Games that keep their
// slot are dropped; a move without changes is degenerate.
std::optional<Move> finish(Move move, const Timetable& tt, const std::vector<Game>& games) {
  move.changes.clear();
  for (const Game& g : games) {
    const SlotId from = tt.slot(g.home, g.away);
    if (from != g.slot) move.changes.push_back({g.home, g.away, from, g.slot});
  }
  std::sort(move.changes.begin(), move.changes.end(), [](const PairChange& a, const PairChange& b) {
    return std::tie(a.home, a.away) < std::tie(b.home, b.away);
  });
  move.changes.erase(std::unique(move.changes.begin(), move.changes.end()), move.changes.end());
  if (move.changes.empty()) return std::nullopt;
  return move;
}

std::optional<Move> swap_homes(Move m, const Timetable& tt) {
  const TeamId i = m.team1, j = m.team2;
  if (i == j) return std::nullopt;
  return finish(m, tt, {{j, i, tt.slot(i, j)}, {i, j, tt.slot(j, i)}});
}

std::optional<Move> swap_rounds(Move m, const Timetable& tt, const HomeAwayTables& aux) {
  const SlotId r1 = m.slot1, r2 = m.slot2;
  if (r1 == r2) return std::nullopt;
  std::vector<Game> games;
  for (TeamId t = 0; t < aux.n_teams(); ++t) {
    if (aux.home(t, r1)) games.push_back({t, aux.opponent(t, r1), r2});
    if (aux.home(t, r2)) games.push_back({t, aux.opponent(t, r2), r1});
  }
  return finish(m, tt, games);
}

std::optional<Move> swap_teams(Move m, const Timetable& tt, const HomeAwayTables& aux) {
  const TeamId i = m.team1, j = m.team2;
  if (i == j) return std::nullopt;
  std::vector<Game> games;
  for (SlotId s = 0; s < aux.n_slots(); ++s) {
    if (aux.opponent(i, s) == j) continue;
    games.push_back(game_for(i, aux.opponent(j, s), aux.home(j, s), s));
    games.push_back(game_for(j, aux.opponent(i, s), aux.home(i, s), s));
  }
  return finish(m, tt, games);
}

// Swaps the games of team1 between slot1 and slot2, closing the set of teams
// so that every team still plays once per slot.
std::optional<Move> partial_swap_rounds(Move m, const Timetable& tt, const HomeAwayTables& aux) {
  const SlotId r1 = m.slot1, r2 = m.slot2;
  if (r1 == r2) return std::nullopt;
  std::vector<char> in_set(static_cast<std::size_t>(aux.n_teams()), 0);
  std::vector<TeamId> queue{m.team1};
  in_set[m.team1] = 1;
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (SlotId r : {r1, r2}) {
      const TeamId o = aux.opponent(queue[k], r);
      if (!in_set[o]) {
        in_set[o] = 1;
        queue.push_back(o);
      }
    }
  std::vector<Game> games;
  for (TeamId t : queue) {
    if (aux.home(t, r1)) games.push_back({t, aux.opponent(t, r1), r2});
    if (aux.home(t, r2)) games.push_back({t, aux.opponent(t, r2), r1});
  }
  return finish(m, tt, games);
}

// Exchanges the games of team1 and team2 in slot1 and follows the ejection
// chain through the slots where team1 already played the game it receives.
std::optional<Move> partial_swap_teams(Move m, const Timetable& tt, const HomeAwayTables& aux) {
  const TeamId i = m.team1, j = m.team2;
  const SlotId r0 = m.slot1;
  if (i == j || aux.opponent(i, r0) == j) return std::nullopt;
  const TeamId start_opp = aux.opponent(i, r0);
  const bool start_home = aux.home(i, r0);

  std::vector<SlotId> chain{r0};
  std::vector<char> in_chain(static_cast<std::size_t>(aux.n_slots()), 0);
  in_chain[r0] = 1;
  for (SlotId cur = r0;;) {
    const TeamId o = aux.opponent(j, cur);
    const bool h = aux.home(j, cur);
    if (o == i) return std::nullopt;
    if (o == start_opp && h == start_home) break;
    const SlotId next = h ? tt.slot(i, o) : tt.slot(o, i);
    if (in_chain[next]) return std::nullopt;
    in_chain[next] = 1;
    chain.push_back(next);
    cur = next;
  }

  std::vector<Game> games;
  for (SlotId r : chain) {
    games.push_back(game_for(i, aux.opponent(j, r), aux.home(j, r), r));
    games.push_back(game_for(j, aux.opponent(i, r), aux.home(i, r), r));
  }
  return finish(m, tt, games);
}

// Partial swap restricted to the leg of slot1: the chain follows opponents
// only, so every pair keeps its number of meetings per leg. Venues of the
// swapped games are then repaired so that each pair meets once at each venue.
std::optional<Move> partial_swap_teams_phased(Move m, const Timetable& tt,
                                              const HomeAwayTables& aux) {
  const TeamId i = m.team1, j = m.team2;
  const SlotId r0 = m.slot1;
  if (i == j || aux.opponent(i, r0) == j) return std::nullopt;
  const int leg = aux.n_teams() - 1;
  const SlotId leg_begin = r0 < leg ? 0 : leg;
  const SlotId leg_end = leg_begin + leg;
  auto in_leg = [&](SlotId s) { return s >= leg_begin && s < leg_end; };
  const TeamId start_opp = aux.opponent(i, r0);

  std::vector<SlotId> chain{r0};
  std::vector<char> in_chain(static_cast<std::size_t>(aux.n_slots()), 0);
  in_chain[r0] = 1;
  for (SlotId cur = r0;;) {
    const TeamId o = aux.opponent(j, cur);
    if (o == i) return std::nullopt;
    if (o == start_opp) break;
    SlotId next = -1;
    for (SlotId s : {tt.slot(i, o), tt.slot(o, i)})
      if (in_leg(s) && !in_chain[s] && (next < 0 || s < next)) next = s;
    if (next < 0) return std::nullopt;
    in_chain[next] = 1;
    chain.push_back(next);
    cur = next;
  }

  // New rows of i and j over the chain, initially taking each other's venues.
  struct Cell {
    TeamId team;
    SlotId slot;
    TeamId opp;
    bool home;
  };
  std::vector<Cell> cells;
  for (SlotId r : chain) {
    cells.push_back({i, r, aux.opponent(j, r), aux.home(j, r)});
    cells.push_back({j, r, aux.opponent(i, r), aux.home(i, r)});
  }
  // Each affected pair must meet once at home and once away.
  for (std::size_t k = 0; k < cells.size(); ++k) {
    Cell& c = cells[k];
    const bool other_in_chain = [&] {
      for (std::size_t q = 0; q < cells.size(); ++q)
        if (q != k && cells[q].team == c.team && cells[q].opp == c.opp) return true;
      return false;
    }();
    if (other_in_chain) {
      // Both meetings moved inside the chain: fix the later one.
      for (std::size_t q = 0; q < k; ++q)
        if (cells[q].team == c.team && cells[q].opp == c.opp && cells[q].home == c.home) {
          if (cells[q].slot < c.slot)
            c.home = !c.home;
          else
            cells[q].home = !cells[q].home;
        }
      continue;
    }
    // The other meeting lies outside the chain and is unchanged.
    SlotId other = -1;
    for (SlotId s : {tt.slot(c.team, c.opp), tt.slot(c.opp, c.team)})
      if (!in_chain[s]) other = s;
    if (other < 0) return std::nullopt;
    const bool other_home = aux.home(c.team, other);
    if (other_home == c.home) c.home = !c.home;
  }

  std::vector<Game> games;
  for (const Cell& c : cells) games.push_back(game_for(c.team, c.opp, c.home, c.slot));
  return finish(m, tt, games);
}

}  // namespace

std::optional<Move> make_move(MoveKind kind, const Timetable& tt, const HomeAwayTables& aux,
                              TeamId team1, TeamId team2, SlotId slot1, SlotId slot2) {
  Move m;
  m.kind = kind;
  m.team1 = team1;
  m.team2 = team2;
  m.slot1 = slot1;
  m.slot2 = slot2;
  switch (kind) {
    case MoveKind::SwapHomes: return swap_homes(m, tt);
    case MoveKind::SwapTeams: return swap_teams(m, tt, aux);
    case MoveKind::SwapRounds: return swap_rounds(m, tt, aux);
    case MoveKind::PartialSwapRounds: return partial_swap_rounds(m, tt, aux);
    case MoveKind::PartialSwapTeams: return partial_swap_teams(m, tt, aux);
    case MoveKind::PartialSwapTeamsPhased: return partial_swap_teams_phased(m, tt, aux);
  }
  return std::nullopt;
}

std::optional<Move> random_move(MoveKind kind, const Timetable& tt, const HomeAwayTables& aux,
                                Rng& rng) {
  const int n = aux.n_teams();
  const int slots = aux.n_slots();
  std::uniform_int_distribution<int> team(0, n - 1);
  std::uniform_int_distribution<int> slot(0, slots - 1);
  auto distinct_pair = [&](std::uniform_int_distribution<int>& dist) {
    const int a = dist(rng);
    int b = dist(rng);
    while (b == a) b = dist(rng);
    return std::pair{a, b};
  };

  constexpr int kMaxDraws = 100;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    std::optional<Move> m;
    switch (kind) {
      case MoveKind::SwapHomes:
      case MoveKind::SwapTeams: {
        auto [i, j] = distinct_pair(team);
        if (i > j) std::swap(i, j);
        m = make_move(kind, tt, aux, i, j, -1, -1);
        break;
      }
      case MoveKind::SwapRounds: {
        auto [r1, r2] = distinct_pair(slot);
        if (r1 > r2) std::swap(r1, r2);
        m = make_move(kind, tt, aux, -1, -1, r1, r2);
        break;
      }
      case MoveKind::PartialSwapRounds: {
        const TeamId t = team(rng);
        auto [r1, r2] = distinct_pair(slot);
        if (r1 > r2) std::swap(r1, r2);
        m = make_move(kind, tt, aux, t, -1, r1, r2);
        break;
      }
      case MoveKind::PartialSwapTeams:
      case MoveKind::PartialSwapTeamsPhased: {
        auto [i, j] = distinct_pair(team);
        if (i > j) std::swap(i, j);
        m = make_move(kind, tt, aux, i, j, slot(rng), -1);
        break;
      }
    }
    if (m) return m;
  }
  return std::nullopt;
}

Timetable canonical_schedule(int n_teams, [[maybe_unused]] bool phased) {
  if (n_teams < 2 || n_teams % 2 != 0)
    throw InvalidInstance("canonical schedule needs an even number of teams >= 2");
  const int n = n_teams;
  const int leg = n - 1;
  Timetable tt(n);
  auto place = [&](TeamId h, TeamId a, SlotId r) {
    tt.set_slot(h, a, r);
    tt.set_slot(a, h, r + leg);
  };
  for (SlotId r = 0; r < leg; ++r) {
    if (r % 2 == 0)
      place(r, n - 1, r);
    else
      place(n - 1, r, r);
    for (int k = 1; k < n / 2; ++k) {
      const TeamId a = (r + k) % leg;
      const TeamId b = (r + leg - k) % leg;
      if (k % 2 == 0)
        place(a, b, r);
      else
        place(b, a, r);
    }
  }
  return tt;
}

}  // namespace rrlab
