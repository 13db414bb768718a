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

#include "rrlab/evaluator.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "rrlab/errors.hpp"

namespace rrlab {

HomeAwayTables::HomeAwayTables(const Timetable& tt)
    : n_(tt.n_teams()), slots_(2 * tt.n_teams() - 2) {
  const std::size_t cells = static_cast<std::size_t>(n_) * slots_;
  home_.assign(cells, 0);
  opponent_.assign(cells, -1);
  prefix_.assign(cells, 0);
  breaks_.assign(cells, BreakKind::None);

  std::vector<int> games(cells, 0);
  for (TeamId h = 0; h < n_; ++h)
    for (TeamId a = 0; a < n_; ++a) {
      if (h == a) continue;
      const SlotId s = tt.slot(h, a);
      if (s < 0 || s >= slots_)
        throw StructuralError("game " + std::to_string(h) + "-" + std::to_string(a) +
                              " is not scheduled in a valid slot");
      ++games[at(h, s)];
      ++games[at(a, s)];
      home_[at(h, s)] = 1;
      opponent_[at(h, s)] = a;
      home_[at(a, s)] = 0;
      opponent_[at(a, s)] = h;
    }
  for (std::size_t i = 0; i < cells; ++i)
    if (games[i] != 1) {
      std::ostringstream msg;
      msg << "team " << i / slots_ << " plays " << games[i] << " games in slot " << i % slots_;
      throw StructuralError(msg.str());
    }
  for (TeamId t = 0; t < n_; ++t) derive_row(t);
}

void HomeAwayTables::rebuild_team(const Timetable& tt, TeamId t) {
  for (TeamId o = 0; o < n_; ++o) {
    if (o == t) continue;
    const SlotId sh = tt.slot(t, o);
    home_[at(t, sh)] = 1;
    opponent_[at(t, sh)] = o;
    const SlotId sa = tt.slot(o, t);
    home_[at(t, sa)] = 0;
    opponent_[at(t, sa)] = o;
  }
  derive_row(t);
}

void HomeAwayTables::derive_row(TeamId t) {
  int homes = 0;
  for (SlotId s = 0; s < slots_; ++s) {
    const bool h = home_[at(t, s)] != 0;
    homes += h ? 1 : 0;
    prefix_[at(t, s)] = homes;
    if (s == 0 || (home_[at(t, s - 1)] != 0) != h)
      breaks_[at(t, s)] = BreakKind::None;
    else
      breaks_[at(t, s)] = h ? BreakKind::HomeBreak : BreakKind::AwayBreak;
  }
}

namespace {

std::vector<char> mask_of(const std::vector<int>& ids, int size) {
  std::vector<char> mask(static_cast<std::size_t>(size), 0);
  for (int id : ids) mask[id] = 1;
  return mask;
}

std::vector<int> unique_sorted(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool venue_matches(VenueMode mode, bool home) {
  switch (mode) {
    case VenueMode::Home: return home;
    case VenueMode::Away: return !home;
    case VenueMode::Any: return true;
  }
  return false;
}

bool break_matches(VenueMode mode, BreakKind b) {
  switch (mode) {
    case VenueMode::Home: return b == BreakKind::HomeBreak;
    case VenueMode::Away: return b == BreakKind::AwayBreak;
    case VenueMode::Any: return b != BreakKind::None;
  }
  return false;
}

int range_excess(int count, int min, int max) {
  return std::max(0, count - max) + std::max(0, min - count);
}

struct DeviationVisitor {
  const Timetable& tt;
  const HomeAwayTables& aux;

  int operator()(const Ca1& c) const {
    int count = 0;
    for (SlotId s : unique_sorted(c.slots))
      if (venue_matches(c.mode, aux.home(c.team, s))) ++count;
    return range_excess(count, c.min, c.max);
  }

  int operator()(const Ca2& c) const {
    const auto opp = mask_of(c.opponents, aux.n_teams());
    int count = 0;
    for (SlotId s : unique_sorted(c.slots))
      if (opp[aux.opponent(c.team, s)] && venue_matches(c.mode, aux.home(c.team, s))) ++count;
    return range_excess(count, c.min, c.max);
  }

  int operator()(const Ca3& c) const {
    const auto opp = mask_of(c.opponents, aux.n_teams());
    const int slots = aux.n_slots();
    if (c.window > slots) return 0;
    std::vector<int> hit(static_cast<std::size_t>(slots), 0);
    for (SlotId s = 0; s < slots; ++s)
      hit[s] = opp[aux.opponent(c.team, s)] && venue_matches(c.mode, aux.home(c.team, s));
    int window_count = 0;
    for (SlotId s = 0; s < c.window; ++s) window_count += hit[s];
    int dev = range_excess(window_count, c.min, c.max);
    for (SlotId start = 1; start + c.window <= slots; ++start) {
      window_count += hit[start + c.window - 1] - hit[start - 1];
      dev += range_excess(window_count, c.min, c.max);
    }
    return dev;
  }

  int operator()(const Ca4& c) const {
    const auto t2 = mask_of(c.teams2, aux.n_teams());
    const auto teams1 = unique_sorted(c.teams1);
    const auto slots = unique_sorted(c.slots);
    auto games_in = [&](SlotId s) {
      int count = 0;
      for (TeamId t : teams1)
        if (t2[aux.opponent(t, s)] && venue_matches(c.mode, aux.home(t, s))) ++count;
      return count;
    };
    if (c.scope == Ca4Scope::Global) {
      int count = 0;
      for (SlotId s : slots) count += games_in(s);
      return range_excess(count, c.min, c.max);
    }
    int dev = 0;
    for (SlotId s : slots) dev += range_excess(games_in(s), c.min, c.max);
    return dev;
  }

  int operator()(const Ga1& c) const {
    const auto in_slots = mask_of(c.slots, aux.n_slots());
    auto games = c.games;
    std::sort(games.begin(), games.end());
    games.erase(std::unique(games.begin(), games.end()), games.end());
    int count = 0;
    for (auto [h, a] : games)
      if (in_slots[tt.slot(h, a)]) ++count;
    return range_excess(count, c.min, c.max);
  }

  int operator()(const Br1& c) const {
    int breaks = 0;
    for (SlotId s : unique_sorted(c.slots))
      if (break_matches(c.mode, aux.break_at(c.team, s))) ++breaks;
    return std::max(0, breaks - c.max_breaks);
  }

  int operator()(const Br2& c) const {
    const auto slots = unique_sorted(c.slots);
    int breaks = 0;
    for (TeamId t : unique_sorted(c.teams))
      for (SlotId s : slots)
        if (aux.break_at(t, s) != BreakKind::None) ++breaks;
    return std::max(0, breaks - c.max_breaks);
  }

  int operator()(const Fa2& c) const {
    const auto teams = unique_sorted(c.teams);
    const auto slots = unique_sorted(c.slots);
    int dev = 0;
    for (std::size_t i = 0; i < teams.size(); ++i)
      for (std::size_t j = i + 1; j < teams.size(); ++j) {
        int spread = 0;
        for (SlotId s : slots)
          spread = std::max(spread, std::abs(aux.home_prefix(teams[i], s) -
                                             aux.home_prefix(teams[j], s)));
        dev += std::max(0, spread - c.bound);
      }
    return dev;
  }

  int operator()(const Se1& c) const {
    const auto teams = unique_sorted(c.teams);
    int dev = 0;
    for (std::size_t i = 0; i < teams.size(); ++i)
      for (std::size_t j = i + 1; j < teams.size(); ++j) {
        const int gap = std::abs(tt.slot(teams[i], teams[j]) - tt.slot(teams[j], teams[i])) - 1;
        dev += std::max(0, c.min_separation - gap);
      }
    return dev;
  }
};

// Teams whose HomeAwayTables row determines the deviation of `c`.
std::vector<TeamId> row_dependencies(const Constraint& c) {
  struct Deps {
    std::vector<TeamId> operator()(const Ca1& x) const { return {x.team}; }
    std::vector<TeamId> operator()(const Ca2& x) const { return {x.team}; }
    std::vector<TeamId> operator()(const Ca3& x) const { return {x.team}; }
    std::vector<TeamId> operator()(const Ca4& x) const { return x.teams1; }
    std::vector<TeamId> operator()(const Ga1& x) const {
      std::vector<TeamId> out;
      for (auto [h, a] : x.games) out.push_back(h);
      return out;
    }
    std::vector<TeamId> operator()(const Br1& x) const { return {x.team}; }
    std::vector<TeamId> operator()(const Br2& x) const { return x.teams; }
    std::vector<TeamId> operator()(const Fa2& x) const { return x.teams; }
    std::vector<TeamId> operator()(const Se1& x) const { return x.teams; }
  };
  return unique_sorted(std::visit(Deps{}, c.params));
}

void check_applicable(const Timetable& tt, const Move& move) {
  for (const PairChange& ch : move.changes)
    if (ch.home < 0 || ch.home >= tt.n_teams() || ch.away < 0 || ch.away >= tt.n_teams() ||
        tt.slot(ch.home, ch.away) != ch.from)
      throw MoveError("move " + std::string(to_string(move.kind)) +
                      " does not apply to the current timetable");
}

// Unordered pairs touched by a move, as (min, max).
std::vector<std::pair<TeamId, TeamId>> touched_pairs(const Move& move) {
  std::vector<std::pair<TeamId, TeamId>> pairs;
  pairs.reserve(move.changes.size());
  for (const PairChange& ch : move.changes)
    pairs.emplace_back(std::min(ch.home, ch.away), std::max(ch.home, ch.away));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

int phased_violations_of(const Timetable& tt, const std::vector<std::pair<TeamId, TeamId>>& pairs,
                         int leg) {
  int count = 0;
  for (auto [i, j] : pairs) {
    const int first = (tt.slot(i, j) < leg ? 1 : 0) + (tt.slot(j, i) < leg ? 1 : 0);
    if (first != 1) ++count;
  }
  return count;
}

long long weighted(const Constraint& c, int dev) {
  return c.hard() ? 0 : static_cast<long long>(c.penalty) * dev;
}

}  // namespace

int deviation(const Constraint& c, const Timetable& tt, const HomeAwayTables& aux) {
  return std::visit(DeviationVisitor{tt, aux}, c.params);
}

EvaluationReport evaluate(const Timetable& tt, const Instance& inst) {
  for (const StructuralViolation& v : validate_structure(tt, inst))
    if (v.kind != ViolationKind::Phased) throw StructuralError(v.message);

  const HomeAwayTables aux(tt);
  EvaluationReport report;
  report.per_constraint.reserve(inst.constraints.size());
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    const Constraint& c = inst.constraints[i];
    const int dev = deviation(c, tt, aux);
    report.per_constraint.emplace_back(static_cast<int>(i), dev);
    if (c.hard()) {
      report.hard_violation += dev;
      report.per_type_hard[static_cast<int>(c.type())] += dev;
    } else {
      report.objective += weighted(c, dev);
    }
  }
  report.phased_violations = inst.phased ? phased_violations(tt, inst.n_teams) : 0;
  report.feasible = report.hard_violation == 0 && report.phased_violations == 0;
  return report;
}

Delta delta_evaluate(const Timetable& tt, const HomeAwayTables& aux, const Move& move,
                     const Instance& inst) {
  check_applicable(tt, move);
  const std::vector<TeamId> teams = move.affected_teams();
  std::vector<char> touched(static_cast<std::size_t>(inst.n_teams), 0);
  for (TeamId t : teams) touched[t] = 1;

  Timetable after_tt = tt;
  apply_move(after_tt, move);
  HomeAwayTables after_aux = aux;
  for (TeamId t : teams) after_aux.rebuild_team(after_tt, t);

  Delta d;
  for (const Constraint& c : inst.constraints) {
    const auto deps = row_dependencies(c);
    if (std::none_of(deps.begin(), deps.end(), [&](TeamId t) { return touched[t] != 0; }))
      continue;
    const int before = deviation(c, tt, aux);
    const int after = deviation(c, after_tt, after_aux);
    if (c.hard())
      d.hard += after - before;
    else
      d.objective += weighted(c, after) - weighted(c, before);
  }
  if (inst.phased) {
    const auto pairs = touched_pairs(move);
    d.phased = phased_violations_of(after_tt, pairs, inst.leg_length()) -
               phased_violations_of(tt, pairs, inst.leg_length());
  }
  return d;
}

IncrementalEvaluator::IncrementalEvaluator(const Instance& inst, Timetable tt)
    : inst_(&inst), by_team_(static_cast<std::size_t>(inst.n_teams)) {
  for (std::size_t i = 0; i < inst.constraints.size(); ++i)
    for (TeamId t : row_dependencies(inst.constraints[i])) by_team_[t].push_back(static_cast<int>(i));
  stamp_.assign(inst.constraints.size(), 0);
  reset(std::move(tt));
}

void IncrementalEvaluator::reset(Timetable tt) {
  for (const StructuralViolation& v : validate_structure(tt, *inst_))
    if (v.kind != ViolationKind::Phased) throw StructuralError(v.message);
  tt_ = std::move(tt);
  aux_ = HomeAwayTables(tt_);
  deviation_.assign(inst_->constraints.size(), 0);
  hard_ = 0;
  objective_ = 0;
  for (std::size_t i = 0; i < inst_->constraints.size(); ++i) {
    const Constraint& c = inst_->constraints[i];
    deviation_[i] = deviation(c, tt_, aux_);
    if (c.hard())
      hard_ += deviation_[i];
    else
      objective_ += weighted(c, deviation_[i]);
  }
  phased_ = inst_->phased ? phased_violations(tt_, inst_->n_teams) : 0;
}

std::array<long long, kNumConstraintTypes> IncrementalEvaluator::hard_by_type() const {
  std::array<long long, kNumConstraintTypes> out{};
  for (std::size_t i = 0; i < deviation_.size(); ++i)
    if (inst_->constraints[i].hard())
      out[static_cast<int>(inst_->constraints[i].type())] += deviation_[i];
  return out;
}

void IncrementalEvaluator::collect_relevant(const std::vector<TeamId>& teams) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    epoch_ = 1;
  }
  relevant_.clear();
  for (TeamId t : teams)
    for (int c : by_team_[t])
      if (stamp_[c] != epoch_) {
        stamp_[c] = epoch_;
        relevant_.push_back(c);
      }
}

IncrementalEvaluator::Scored IncrementalEvaluator::score(const Move& move, bool keep) {
  check_applicable(tt_, move);
  const std::vector<TeamId> teams = move.affected_teams();
  collect_relevant(teams);

  std::vector<std::pair<TeamId, TeamId>> pairs;
  int phased_before = 0;
  if (inst_->phased) {
    pairs = touched_pairs(move);
    phased_before = phased_violations_of(tt_, pairs, inst_->leg_length());
  }

  apply_move(tt_, move);
  for (TeamId t : teams) aux_.rebuild_team(tt_, t);

  Scored out;
  out.new_deviations.reserve(relevant_.size());
  for (int idx : relevant_) {
    const Constraint& c = inst_->constraints[idx];
    const int after = deviation(c, tt_, aux_);
    const int before = deviation_[idx];
    if (c.hard())
      out.delta.hard += after - before;
    else
      out.delta.objective += weighted(c, after) - weighted(c, before);
    out.new_deviations.emplace_back(idx, after);
  }
  if (inst_->phased)
    out.delta.phased = phased_violations_of(tt_, pairs, inst_->leg_length()) - phased_before;

  if (!keep) {
    apply_move(tt_, move.inverse());
    for (TeamId t : teams) aux_.rebuild_team(tt_, t);
  }
  return out;
}

Delta IncrementalEvaluator::delta(const Move& move) { return score(move, false).delta; }

void IncrementalEvaluator::apply(const Move& move) {
  Scored s = score(move, true);
  for (auto [idx, dev] : s.new_deviations) deviation_[idx] = dev;
  hard_ += s.delta.hard;
  objective_ += s.delta.objective;
  phased_ += s.delta.phased;
}

EvaluationReport IncrementalEvaluator::report() const {
  EvaluationReport r;
  for (std::size_t i = 0; i < deviation_.size(); ++i) {
    r.per_constraint.emplace_back(static_cast<int>(i), deviation_[i]);
    if (inst_->constraints[i].hard())
      r.per_type_hard[static_cast<int>(inst_->constraints[i].type())] += deviation_[i];
  }
  r.hard_violation = hard_;
  r.objective = objective_;
  r.phased_violations = phased_;
  r.feasible = hard_ == 0 && phased_ == 0;
  return r;
}

}  // namespace rrlab
