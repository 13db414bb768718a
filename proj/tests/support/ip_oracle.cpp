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

#include "ip_oracle.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace rrlab::test {

namespace {

template <class T>
long long distinct(const std::vector<T>& v) {
  return static_cast<long long>(std::set<T>(v.begin(), v.end()).size());
}

long long venues(VenueMode m) { return m == VenueMode::Any ? 2 : 1; }

struct Counter {
  const Instance& inst;
  IpCounts out;

  // One row with `nnz` structural entries, owned by constraint c (or none).
  void row(long long nnz, const Constraint* c) {
    ++out.rows;
    out.nonzeros += nnz;
    if (c != nullptr && !c->hard()) {
      ++out.nonzeros;
      ++out.slack_columns;
      out.objective_sum += c->penalty;
    }
  }
  void range(long long nnz, int min, const Constraint& c) {
    row(nnz, &c);
    if (min > 0) row(nnz, &c);
  }
};

// x variables touched by games of `teams1` against `teams2` under `mode`.
long long pair_vars(const std::vector<TeamId>& teams1, const std::vector<TeamId>& teams2,
                    VenueMode mode) {
  std::set<std::pair<TeamId, TeamId>> vars;
  for (TeamId t : teams1)
    for (TeamId o : teams2) {
      if (o == t) continue;
      if (mode != VenueMode::Away) vars.emplace(t, o);
      if (mode != VenueMode::Home) vars.emplace(o, t);
    }
  return static_cast<long long>(vars.size());
}

}  // namespace

IpCounts count_ip(const Instance& inst) {
  const long long n = inst.n_teams;
  const long long S = inst.n_slots();
  Counter k{inst, {}};

  k.out.columns = n * (n - 1) * S;
  for (long long i = 0; i < n * S; ++i) k.row(2 * (n - 1), nullptr);
  for (long long i = 0; i < n * (n - 1); ++i) k.row(S, nullptr);
  if (inst.phased)
    for (long long i = 0; i < n * (n - 1) / 2; ++i) k.row(2 * (n - 1), nullptr);

  std::set<std::tuple<int, int, int>> break_vars;
  std::vector<TeamId> everyone;
  for (int t = 0; t < n; ++t) everyone.push_back(t);

  for (const Constraint& c : inst.constraints) {
    switch (c.type()) {
      case ConstraintType::CA1: {
        const auto& p = std::get<Ca1>(c.params);
        const long long per_slot = (n - 1) * venues(p.mode);
        const long long ks = distinct(p.slots);
        if (p.max == 0)
          for (long long s = 0; s < ks; ++s) k.row(per_slot, &c);
        else
          k.range(per_slot * ks, p.min, c);
        break;
      }
      case ConstraintType::CA2: {
        const auto& p = std::get<Ca2>(c.params);
        k.range(pair_vars({p.team}, p.opponents, p.mode) * distinct(p.slots), p.min, c);
        break;
      }
      case ConstraintType::CA3: {
        const auto& p = std::get<Ca3>(c.params);
        for (long long w = 0; w + p.window <= S; ++w)
          k.range(pair_vars({p.team}, p.opponents, p.mode) * p.window, p.min, c);
        break;
      }
      case ConstraintType::CA4: {
        const auto& p = std::get<Ca4>(c.params);
        const long long per_slot = pair_vars(p.teams1, p.teams2, p.mode);
        if (p.scope == Ca4Scope::PerSlot)
          for (long long s = 0; s < distinct(p.slots); ++s) k.range(per_slot, p.min, c);
        else
          k.range(per_slot * distinct(p.slots), p.min, c);
        break;
      }
      case ConstraintType::GA1: {
        const auto& p = std::get<Ga1>(c.params);
        const long long cells = distinct(p.games) * distinct(p.slots);
        if (p.max == 0)
          for (long long i = 0; i < cells; ++i) k.row(1, &c);
        else
          k.range(cells, p.min, c);
        break;
      }
      case ConstraintType::BR1: {
        const auto& p = std::get<Br1>(c.params);
        long long nnz = 0;
        for (SlotId s : std::set<SlotId>(p.slots.begin(), p.slots.end())) {
          if (s == 0) continue;
          nnz += venues(p.mode);
          if (p.mode != VenueMode::Away) break_vars.emplace(p.team, s, 0);
          if (p.mode != VenueMode::Home) break_vars.emplace(p.team, s, 1);
        }
        k.row(nnz, &c);
        break;
      }
      case ConstraintType::BR2: {
        const auto& p = std::get<Br2>(c.params);
        long long nnz = 0;
        for (TeamId t : std::set<TeamId>(p.teams.begin(), p.teams.end()))
          for (SlotId s : std::set<SlotId>(p.slots.begin(), p.slots.end())) {
            if (s == 0) continue;
            nnz += 2;
            break_vars.emplace(t, s, 0);
            break_vars.emplace(t, s, 1);
          }
        k.row(nnz, &c);
        break;
      }
      case ConstraintType::FA2: {
        const auto& p = std::get<Fa2>(c.params);
        const long long pairs = distinct(p.teams) * (distinct(p.teams) - 1) / 2;
        for (long long i = 0; i < pairs; ++i)
          for (SlotId s : std::set<SlotId>(p.slots.begin(), p.slots.end())) {
            k.row(2 * (n - 1) * (s + 1), &c);
            k.row(2 * (n - 1) * (s + 1), &c);
          }
        break;
      }
      case ConstraintType::SE1: {
        const auto& p = std::get<Se1>(c.params);
        if (p.min_separation <= 0) break;
        const long long len = std::min<long long>(p.min_separation + 1, S);
        const long long pairs = distinct(p.teams) * (distinct(p.teams) - 1) / 2;
        for (long long i = 0; i < pairs * (S - len + 1); ++i) k.row(2 * len, &c);
        break;
      }
    }
  }

  // Break definitions: both neighbouring slots of one venue, plus b itself.
  for (std::size_t i = 0; i < break_vars.size(); ++i) k.row(2 * (n - 1) + 1, nullptr);
  k.out.break_columns = static_cast<long long>(break_vars.size());
  k.out.columns += k.out.break_columns + k.out.slack_columns;
  return k.out;
}

}  // namespace rrlab::test
