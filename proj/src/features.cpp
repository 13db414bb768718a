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

#include "rrlab/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "rrlab/solver.hpp"

namespace rrlab {

namespace {

template <typename T>
std::vector<T> unique_sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <typename T>
int distinct(const std::vector<T>& v) {
  return static_cast<int>(unique_sorted(v).size());
}

}  // namespace

int elementary_size(const Constraint& c) {
  switch (c.type()) {
    case ConstraintType::CA1: {
      const auto& p = std::get<Ca1>(c.params);
      return p.max == 0 ? distinct(p.slots) : 1;
    }
    case ConstraintType::CA4: {
      const auto& p = std::get<Ca4>(c.params);
      return p.scope == Ca4Scope::PerSlot ? distinct(p.slots) : 1;
    }
    case ConstraintType::GA1: {
      const auto& p = std::get<Ga1>(c.params);
      return p.max == 0 ? distinct(p.games) * distinct(p.slots) : 1;
    }
    default: return 1;
  }
}

FeatureVector elementary_count(const Instance& inst) {
  FeatureVector fv;
  for (auto name : kProblemTypeFeatures) fv[std::string(name)] = 0.0;
  fv["f_T"] = inst.n_teams;
  fv["f_P"] = inst.phased ? 1.0 : 0.0;
  for (const Constraint& c : inst.constraints) {
    const std::string name = std::string(c.hard() ? "fH_" : "fS_") + std::string(to_string(c.type()));
    fv[name] += elementary_size(c);
  }
  return fv;
}

// ---------------------------------------------------------------------------
// Integer programming model

namespace {

enum class Sense { Le, Ge, Eq };

class ModelBuilder {
 public:
  explicit ModelBuilder(const Instance& inst)
      : inst_(inst), n_(inst.n_teams), slots_(inst.n_slots()) {
    x_columns_ = static_cast<long long>(n_) * (n_ - 1) * slots_;
    collect_break_columns();
  }

  IpModel build() {
    structure_rows();
    for (const Constraint& c : inst_.constraints) constraint_rows(c);
    break_definition_rows();

    const long long cols = x_columns_ + static_cast<long long>(break_index_.size()) +
                           static_cast<long long>(slack_penalty_.size());
    IpModel m;
    m.x_columns = x_columns_;
    m.break_columns = static_cast<long long>(break_index_.size());
    m.slack_columns = static_cast<long long>(slack_penalty_.size());
    m.matrix.resize(static_cast<Eigen::Index>(rhs_.size()), static_cast<Eigen::Index>(cols));
    m.matrix.setFromTriplets(triplets_.begin(), triplets_.end());
    m.matrix.makeCompressed();
    m.rhs = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
    m.objective = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < slack_penalty_.size(); ++k)
      m.objective(static_cast<Eigen::Index>(slack_column(static_cast<long long>(k)))) =
          slack_penalty_[k];
    return m;
  }

 private:
  using Row = std::map<long long, double>;

  long long x(TeamId h, TeamId a, SlotId s) const {
    const long long pair = static_cast<long long>(h) * (n_ - 1) + (a < h ? a : a - 1);
    return pair * slots_ + s;
  }
  long long slack_column(long long k) const {
    return x_columns_ + static_cast<long long>(break_index_.size()) + k;
  }

  // Break variables exist only for (team, slot, venue) triples some break
  // constraint reads, numbered in (team, slot, venue) order.
  void collect_break_columns() {
    std::set<std::tuple<TeamId, SlotId, int>> keys;
    auto want = [&](TeamId t, SlotId s, VenueMode m) {
      if (s < 1) return;
      if (m != VenueMode::Away) keys.emplace(t, s, 0);
      if (m != VenueMode::Home) keys.emplace(t, s, 1);
    };
    for (const Constraint& c : inst_.constraints) {
      if (const auto* p = std::get_if<Br1>(&c.params))
        for (SlotId s : p->slots) want(p->team, s, p->mode);
      if (const auto* p = std::get_if<Br2>(&c.params))
        for (TeamId t : p->teams)
          for (SlotId s : p->slots) want(t, s, VenueMode::Any);
    }
    long long next = 0;
    for (const auto& k : keys) break_index_[k] = x_columns_ + next++;
  }

  long long break_var(TeamId t, SlotId s, int away) const {
    return break_index_.at({t, s, away});
  }

  void add_row(const Row& row, Sense sense, double rhs, const Constraint* owner) {
    const auto r = static_cast<int>(rhs_.size());
    for (const auto& [col, coef] : row)
      if (coef != 0.0) triplets_.emplace_back(r, static_cast<int>(col), coef);
    if (owner != nullptr && !owner->hard()) {
      const long long col = slack_column(static_cast<long long>(slack_penalty_.size()));
      triplets_.emplace_back(r, static_cast<int>(col), sense == Sense::Ge ? 1.0 : -1.0);
      slack_penalty_.push_back(owner->penalty);
    }
    rhs_.push_back(rhs);
  }

  // Adds count rows: <= max always, >= min when min > 0.
  void add_range(const Row& row, int min, int max, const Constraint& owner) {
    add_row(row, Sense::Le, max, &owner);
    if (min > 0) add_row(row, Sense::Ge, min, &owner);
  }

  // Games of `t` at slot `s` against `opponents` with the venue seen from t.
  void add_games(Row& row, TeamId t, const std::vector<TeamId>& opponents, SlotId s,
                 VenueMode mode) const {
    for (TeamId o : opponents) {
      if (o == t) continue;
      if (mode != VenueMode::Away) row[x(t, o, s)] = 1.0;
      if (mode != VenueMode::Home) row[x(o, t, s)] = 1.0;
    }
  }

  std::vector<TeamId> all_teams() const {
    std::vector<TeamId> v(n_);
    for (int t = 0; t < n_; ++t) v[t] = t;
    return v;
  }

  void structure_rows() {
    for (TeamId t = 0; t < n_; ++t)
      for (SlotId s = 0; s < slots_; ++s) {
        Row row;
        add_games(row, t, all_teams(), s, VenueMode::Any);
        add_row(row, Sense::Eq, 1.0, nullptr);
      }
    for (TeamId h = 0; h < n_; ++h)
      for (TeamId a = 0; a < n_; ++a) {
        if (h == a) continue;
        Row row;
        for (SlotId s = 0; s < slots_; ++s) row[x(h, a, s)] = 1.0;
        add_row(row, Sense::Eq, 1.0, nullptr);
      }
    if (!inst_.phased) return;
    for (TeamId i = 0; i < n_; ++i)
      for (TeamId j = i + 1; j < n_; ++j) {
        Row row;
        for (SlotId s = 0; s < inst_.leg_length(); ++s) {
          row[x(i, j, s)] = 1.0;
          row[x(j, i, s)] = 1.0;
        }
        add_row(row, Sense::Eq, 1.0, nullptr);
      }
  }

  void break_definition_rows() {
    // b >= venue(s - 1) + venue(s) - 1, written as sum - b <= 1.
    for (const auto& [key, col] : break_index_) {
      const auto [t, s, away] = key;
      const VenueMode m = away ? VenueMode::Away : VenueMode::Home;
      Row row;
      add_games(row, t, all_teams(), s - 1, m);
      add_games(row, t, all_teams(), s, m);
      row[col] = -1.0;
      add_row(row, Sense::Le, 1.0, nullptr);
    }
  }

  void constraint_rows(const Constraint& c) {
    std::visit([&](const auto& p) { rows_for(p, c); }, c.params);
  }

  void rows_for(const Ca1& p, const Constraint& c) {
    const auto slots = unique_sorted(p.slots);
    if (p.max == 0) {
      for (SlotId s : slots) {
        Row row;
        add_games(row, p.team, all_teams(), s, p.mode);
        add_row(row, Sense::Le, 0.0, &c);
      }
      return;
    }
    Row row;
    for (SlotId s : slots) add_games(row, p.team, all_teams(), s, p.mode);
    add_range(row, p.min, p.max, c);
  }

  void rows_for(const Ca2& p, const Constraint& c) {
    Row row;
    const auto opp = unique_sorted(p.opponents);
    for (SlotId s : unique_sorted(p.slots)) add_games(row, p.team, opp, s, p.mode);
    add_range(row, p.min, p.max, c);
  }

  void rows_for(const Ca3& p, const Constraint& c) {
    const auto opp = unique_sorted(p.opponents);
    for (SlotId w = 0; w + p.window <= slots_; ++w) {
      Row row;
      for (SlotId s = w; s < w + p.window; ++s) add_games(row, p.team, opp, s, p.mode);
      add_range(row, p.min, p.max, c);
    }
  }

  void ca4_slot(Row& row, const Ca4& p, const std::vector<TeamId>& t1,
                const std::vector<TeamId>& t2, SlotId s) const {
    for (TeamId t : t1) add_games(row, t, t2, s, p.mode);
  }

  void rows_for(const Ca4& p, const Constraint& c) {
    const auto t1 = unique_sorted(p.teams1);
    const auto t2 = unique_sorted(p.teams2);
    const auto slots = unique_sorted(p.slots);
    if (p.scope == Ca4Scope::PerSlot) {
      for (SlotId s : slots) {
        Row row;
        ca4_slot(row, p, t1, t2, s);
        add_range(row, p.min, p.max, c);
      }
      return;
    }
    Row row;
    for (SlotId s : slots) ca4_slot(row, p, t1, t2, s);
    add_range(row, p.min, p.max, c);
  }

  void rows_for(const Ga1& p, const Constraint& c) {
    const auto games = unique_sorted(p.games);
    const auto slots = unique_sorted(p.slots);
    if (p.max == 0) {
      for (const auto& [h, a] : games)
        for (SlotId s : slots) add_row(Row{{x(h, a, s), 1.0}}, Sense::Le, 0.0, &c);
      return;
    }
    Row row;
    for (const auto& [h, a] : games)
      for (SlotId s : slots) row[x(h, a, s)] = 1.0;
    add_range(row, p.min, p.max, c);
  }

  void rows_for(const Br1& p, const Constraint& c) {
    Row row;
    for (SlotId s : unique_sorted(p.slots)) {
      if (s < 1) continue;
      if (p.mode != VenueMode::Away) row[break_var(p.team, s, 0)] = 1.0;
      if (p.mode != VenueMode::Home) row[break_var(p.team, s, 1)] = 1.0;
    }
    add_row(row, Sense::Le, p.max_breaks, &c);
  }

  void rows_for(const Br2& p, const Constraint& c) {
    Row row;
    for (TeamId t : unique_sorted(p.teams))
      for (SlotId s : unique_sorted(p.slots)) {
        if (s < 1) continue;
        row[break_var(t, s, 0)] = 1.0;
        row[break_var(t, s, 1)] = 1.0;
      }
    add_row(row, Sense::Le, p.max_breaks, &c);
  }

  void rows_for(const Fa2& p, const Constraint& c) {
    const auto teams = unique_sorted(p.teams);
    const auto slots = unique_sorted(p.slots);
    for (std::size_t a = 0; a < teams.size(); ++a)
      for (std::size_t b = a + 1; b < teams.size(); ++b)
        for (SlotId s : slots) {
          // Home games of i minus home games of j over slots 0..s.
          Row row;
          for (SlotId q = 0; q <= s; ++q)
            for (TeamId o = 0; o < n_; ++o) {
              if (o != teams[a]) row[x(teams[a], o, q)] += 1.0;
              if (o != teams[b]) row[x(teams[b], o, q)] -= 1.0;
            }
          add_row(row, Sense::Le, p.bound, &c);
          add_row(row, Sense::Ge, -p.bound, &c);
        }
  }

  void rows_for(const Se1& p, const Constraint& c) {
    if (p.min_separation <= 0) return;
    const auto teams = unique_sorted(p.teams);
    // Two meetings closer than min_separation fall in a common window of
    // min_separation + 1 consecutive slots.
    const int len = std::min(p.min_separation + 1, slots_);
    for (std::size_t a = 0; a < teams.size(); ++a)
      for (std::size_t b = a + 1; b < teams.size(); ++b)
        for (SlotId w = 0; w + len <= slots_; ++w) {
          Row row;
          for (SlotId s = w; s < w + len; ++s) {
            row[x(teams[a], teams[b], s)] = 1.0;
            row[x(teams[b], teams[a], s)] = 1.0;
          }
          add_row(row, Sense::Le, 1.0, &c);
        }
  }

  const Instance& inst_;
  int n_;
  int slots_;
  long long x_columns_ = 0;
  std::map<std::tuple<TeamId, SlotId, int>, long long> break_index_;
  std::vector<Eigen::Triplet<double>> triplets_;
  std::vector<double> rhs_;
  std::vector<double> slack_penalty_;
};

}  // namespace

IpModel build_ip_model(const Instance& inst) {
  check_instance(inst);
  return ModelBuilder(inst).build();
}

IpModelStats ip_statistics(const IpModel& model) {
  IpModelStats st;
  const auto& a = model.matrix;
  st.rows = a.rows();
  st.columns = a.cols();
  st.nonzeros = a.nonZeros();
  if (st.columns > 0) {
    st.obj_mean = model.objective.mean();
    st.obj_std = std::sqrt((model.objective.array() - st.obj_mean).square().mean());
    st.var_degree_mean = static_cast<double>(st.nonzeros) / static_cast<double>(st.columns);
  }
  if (st.rows > 0) {
    Eigen::VectorXd degree(st.rows);
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      degree(r) = static_cast<double>(a.outerIndexPtr()[r + 1] - a.outerIndexPtr()[r]);
    st.cons_degree_max = degree.maxCoeff();
    st.cons_degree_mean = degree.mean();
  }
  if (st.nonzeros > 0) {
    const Eigen::Map<const Eigen::VectorXd> values(a.valuePtr(), a.nonZeros());
    const double mean_abs = values.cwiseAbs().mean();
    st.obj_mean_normed = mean_abs > 0.0 ? st.obj_mean / mean_abs : 0.0;
  }
  return st;
}

FeatureVector ip_model_stats(const Instance& inst) {
  const IpModelStats st = ip_statistics(build_ip_model(inst));
  return {{"phi_ip_nonzeros", static_cast<double>(st.nonzeros)},
          {"phi_ip_obj_std", st.obj_std},
          {"phi_ip_obj_mean", st.obj_mean},
          {"phi_ip_cons_degree_max", st.cons_degree_max},
          {"phi_ip_cons_degree_mean", st.cons_degree_mean},
          {"phi_ip_var_degree_mean", st.var_degree_mean},
          {"phi_ip_obj_mean_normed", st.obj_mean_normed}};
}

FeatureVector probe(const Instance& inst, std::uint64_t seed, const ProbeConfig& cfg) {
  SAConfig sa;
  sa.stage_evaluations = cfg.stage_evaluations;
  sa.seed = seed;
  const SolveResult r = solve(inst, sa);
  const auto& s2 = r.stages[1].best_hard_by_type;
  auto hard = [&](ConstraintType t) { return static_cast<double>(s2[static_cast<int>(t)]); };
  const double time =
      cfg.time_as_evaluations
          ? static_cast<double>(r.stages[0].evaluations + r.stages[1].evaluations)
          : r.stages[0].wall_seconds + r.stages[1].wall_seconds;
  return {{"phi_sa_ca2", hard(ConstraintType::CA2)},
          {"phi_sa_ca3", hard(ConstraintType::CA3)},
          {"phi_sa_ca4", hard(ConstraintType::CA4)},
          {"phi_sa_time_stage12", time},
          {"phi_sa_soft_cost_stage12", static_cast<double>(r.stages[1].best_objective)},
          {"phi_sa_soft_cost", static_cast<double>(r.stages[2].best_objective)}};
}

double pearson(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const Eigen::ArrayXd dx = x.array() - x.mean();
  const Eigen::ArrayXd dy = y.array() - y.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return (dx * dy).sum() / std::sqrt(sxx * syy);
}

std::vector<std::string> pearson_filter(const std::vector<FeatureVector>& features,
                                        const std::vector<std::vector<double>>& performance,
                                        double threshold) {
  const std::size_t m = features.size();
  if (m < 3) throw std::invalid_argument("pearson_filter: need at least three instances");
  for (const auto& col : performance)
    if (col.size() != m) throw std::invalid_argument("pearson_filter: length mismatch");

  std::vector<std::string> kept;
  for (const auto& [name, unused] : features.front()) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const auto it = features[i].find(name);
      if (it == features[i].end())
        throw std::invalid_argument("pearson_filter: feature '" + name + "' missing");
      x(static_cast<Eigen::Index>(i)) = it->second;
    }
    for (const auto& col : performance) {
      const Eigen::Map<const Eigen::VectorXd> y(col.data(), static_cast<Eigen::Index>(m));
      if (std::abs(pearson(x, y)) >= threshold) {
        kept.push_back(name);
        break;
      }
    }
  }
  return kept;
}

}  // namespace rrlab
