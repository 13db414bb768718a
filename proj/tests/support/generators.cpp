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

#include "generators.hpp"

#include <algorithm>
#include <numeric>

#include "rrlab/evaluator.hpp"

namespace rrlab::test {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

VenueMode random_mode(Rng& rng) {
  static constexpr VenueMode modes[] = {VenueMode::Home, VenueMode::Away, VenueMode::Any};
  return modes[uniform(rng, 0, 2)];
}

std::pair<int, int> random_range(Rng& rng, int top) {
  const int min = coin(rng, 0.3) ? uniform(rng, 0, std::max(0, top / 2)) : 0;
  const int max = uniform(rng, min, std::max(min, top));
  return {min, max};
}

}  // namespace

std::vector<int> random_subset(Rng& rng, int range, int lo, int hi) {
  hi = std::min(hi, range);
  lo = std::min(lo, hi);
  std::vector<int> all(static_cast<std::size_t>(range));
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(uniform(rng, lo, hi)));
  std::sort(all.begin(), all.end());
  return all;
}

Constraint random_constraint(Rng& rng, ConstraintType type, int n) {
  const int slots = 2 * n - 2;
  Constraint c;
  c.hardness = coin(rng) ? Hardness::Hard : Hardness::Soft;
  c.penalty = c.hard() ? 1 : uniform(rng, 1, 10);
  auto others = [&](int team, int lo, int hi) {
    auto v = random_subset(rng, n, lo + 1, hi + 1);
    v.erase(std::remove(v.begin(), v.end(), team), v.end());
    if (v.empty()) v.push_back((team + 1) % n);
    return v;
  };
  switch (type) {
    case ConstraintType::CA1: {
      Ca1 p;
      p.team = uniform(rng, 0, n - 1);
      p.slots = random_subset(rng, slots, 1, slots);
      p.mode = coin(rng, 0.8) ? (coin(rng) ? VenueMode::Home : VenueMode::Away) : VenueMode::Any;
      std::tie(p.min, p.max) = random_range(rng, static_cast<int>(p.slots.size()));
      c.params = p;
      break;
    }
    case ConstraintType::CA2: {
      Ca2 p;
      p.team = uniform(rng, 0, n - 1);
      p.opponents = others(p.team, 1, n - 1);
      p.slots = random_subset(rng, slots, 1, slots);
      p.mode = random_mode(rng);
      std::tie(p.min, p.max) = random_range(rng, 3);
      c.params = p;
      break;
    }
    case ConstraintType::CA3: {
      Ca3 p;
      p.team = uniform(rng, 0, n - 1);
      p.opponents = others(p.team, 1, n - 1);
      p.mode = random_mode(rng);
      p.window = uniform(rng, 1, std::min(slots + 1, 5));
      std::tie(p.min, p.max) = random_range(rng, 2);
      c.params = p;
      break;
    }
    case ConstraintType::CA4: {
      Ca4 p;
      p.teams1 = random_subset(rng, n, 1, n);
      p.teams2 = random_subset(rng, n, 1, n);
      p.slots = random_subset(rng, slots, 1, slots);
      p.mode = random_mode(rng);
      p.scope = coin(rng) ? Ca4Scope::Global : Ca4Scope::PerSlot;
      std::tie(p.min, p.max) = random_range(rng, p.scope == Ca4Scope::Global ? 6 : 2);
      c.params = p;
      break;
    }
    case ConstraintType::GA1: {
      Ga1 p;
      const int games = uniform(rng, 1, std::min(3, n * (n - 1)));
      while (static_cast<int>(p.games.size()) < games) {
        const int h = uniform(rng, 0, n - 1);
        const int a = uniform(rng, 0, n - 1);
        if (h != a && std::find(p.games.begin(), p.games.end(), std::pair{h, a}) == p.games.end())
          p.games.emplace_back(h, a);
      }
      p.slots = random_subset(rng, slots, 1, slots);
      std::tie(p.min, p.max) = random_range(rng, games);
      c.params = p;
      break;
    }
    case ConstraintType::BR1: {
      Br1 p;
      p.team = uniform(rng, 0, n - 1);
      p.slots = random_subset(rng, slots, 1, slots);
      p.mode = random_mode(rng);
      p.max_breaks = uniform(rng, 0, 3);
      c.params = p;
      break;
    }
    case ConstraintType::BR2: {
      Br2 p;
      p.teams = random_subset(rng, n, 1, n);
      p.slots = random_subset(rng, slots, 1, slots);
      p.max_breaks = uniform(rng, 0, 2 * n);
      c.params = p;
      break;
    }
    case ConstraintType::FA2: {
      Fa2 p;
      p.teams = random_subset(rng, n, 2, n);
      p.slots = random_subset(rng, slots, 1, slots);
      p.bound = uniform(rng, 0, 3);
      c.params = p;
      break;
    }
    case ConstraintType::SE1: {
      Se1 p;
      p.teams = random_subset(rng, n, 2, n);
      p.min_separation = uniform(rng, 0, slots);
      c.params = p;
      break;
    }
  }
  return c;
}

Instance random_instance(Rng& rng, int n, int count, bool phased) {
  Instance inst;
  inst.id = "rand-" + std::to_string(n) + "-" + std::to_string(rng() % 100000);
  inst.n_teams = n;
  inst.phased = phased;
  for (int i = 0; i < count; ++i)
    inst.constraints.push_back(random_constraint(rng, kAllConstraintTypes[uniform(rng, 0, 8)], n));
  return inst;
}

Timetable random_timetable(Rng& rng, int n, bool phased, int moves) {
  const Timetable base = canonical_schedule(n, true);
  std::vector<TeamId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Timetable tt(n);
  for (const auto& e : base.entries()) tt.set_slot(perm[e.home], perm[e.away], e.slot);

  static constexpr MoveKind kPhaseSafe[] = {MoveKind::SwapHomes, MoveKind::SwapTeams,
                                            MoveKind::PartialSwapTeamsPhased};
  HomeAwayTables aux(tt);
  for (int i = 0; i < moves; ++i) {
    const MoveKind kind = phased ? kPhaseSafe[uniform(rng, 0, 2)] : kAllMoveKinds[uniform(rng, 0, 5)];
    const auto m = random_move(kind, tt, aux, rng);
    if (!m) continue;
    apply_move(tt, *m);
    for (TeamId t : m->affected_teams()) aux.rebuild_team(tt, t);
  }
  return tt;
}

void add_random_names(Rng& rng, Instance& inst) {
  static const char* kParts[] = {"Ajax", "Club <A>", "R&D", "\"Quoted\"", "Sao Paulo", "x'y"};
  inst.team_names.clear();
  inst.slot_names.clear();
  for (int t = 0; t < inst.n_teams; ++t)
    inst.team_names.push_back(std::string(kParts[uniform(rng, 0, 5)]) + " " + std::to_string(t));
  for (int s = 0; s < inst.n_slots(); ++s) inst.slot_names.push_back("Round " + std::to_string(s + 1));
}

MetadataTable random_metadata(Rng& rng, int instances, int algorithms, bool with_features) {
  static const char* kNames[] = {"DES", "DITUoIArta", "UoS", "Goal", "FBHS", "Udine", "Reprobate", "MODAL"};
  std::uniform_real_distribution<double> minutes(0.0, 2000.0);
  MetadataTable t;
  for (int i = 0; i < instances; ++i) {
    const std::string id = "inst_" + std::to_string(i);
    for (int a = 0; a < algorithms; ++a) {
      PerformanceRecord r;
      r.instance_id = id;
      r.algorithm = a < 8 ? kNames[a] : "alg" + std::to_string(a);
      r.clock_ratio = clock_speed_ratio(r.algorithm);
      r.feasible = coin(rng, 0.8);
      if (r.feasible) r.objective = uniform(rng, 0, 40) * 25;
      r.wall_minutes = minutes(rng);
      r.cpu_minutes = coin(rng, 0.1) ? 0.0 : minutes(rng);
      t.rows.push_back(r);
    }
    if (with_features) {
      FeatureVector fv;
      fv["f_T"] = 2 * uniform(rng, 1, 10);
      fv["phi_ip_obj_mean"] = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      fv["z1"] = std::normal_distribution<double>()(rng);
      t.feature_rows.emplace_back(id, fv);
    }
  }
  return t;
}

GapMatrix gap_matrix_from(const Eigen::MatrixXd& gap) {
  GapMatrix g;
  for (Eigen::Index i = 0; i < gap.rows(); ++i) g.instances.push_back("i" + std::to_string(i));
  for (Eigen::Index a = 0; a < gap.cols(); ++a) g.algorithms.push_back("a" + std::to_string(a));
  g.gap = gap;
  g.feasible = (gap.array() < 1.0).matrix();
  g.good = (gap.array() <= 0.05).matrix();
  g.best.resize(gap.rows(), gap.cols());
  for (Eigen::Index i = 0; i < gap.rows(); ++i) {
    const double lo = gap.row(i).minCoeff();
    for (Eigen::Index a = 0; a < gap.cols(); ++a) g.best(i, a) = gap(i, a) == lo && gap(i, a) < 1.0;
  }
  g.best_objective.assign(static_cast<std::size_t>(gap.rows()), std::nullopt);
  return g;
}

}  // namespace rrlab::test
