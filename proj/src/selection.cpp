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

#include "rrlab/selection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "rrlab/errors.hpp"

namespace rrlab {

double clock_speed_ratio(std::string_view algorithm) {
  // Processor clock relative to the fastest machine in the comparison.
  static const std::map<std::string, double, std::less<>> ratios = {
      {"DES", 3.9 / 3.9},  {"DITUoIArta", 3.2 / 3.9}, {"UoS", 2.0 / 3.9},
      {"Goal", 3.2 / 3.9}, {"FBHS", 2.6 / 3.9},       {"Udine", 2.4 / 3.9},
      {"Reprobate", 3.2 / 3.9}, {"MODAL", 2.8 / 3.9}};
  const auto it = ratios.find(algorithm);
  return it == ratios.end() ? 1.0 : it->second;
}

double relative_gap(long long objective, long long best) {
  if (best == 0) return objective == 0 ? 0.0 : 1.0;
  return std::min(1.0, static_cast<double>(objective - best) / static_cast<double>(best));
}

bool within_good_margin(long long objective, long long best) {
  // objective <= 1.05 best, in integers.
  return 100 * objective <= 105 * best;
}

int GapMatrix::algorithm_index(const std::string& name) const {
  const auto it = std::find(algorithms.begin(), algorithms.end(), name);
  return it == algorithms.end() ? -1 : static_cast<int>(it - algorithms.begin());
}

int GapMatrix::instance_index(const std::string& id) const {
  const auto it = std::find(instances.begin(), instances.end(), id);
  return it == instances.end() ? -1 : static_cast<int>(it - instances.begin());
}

GapMatrix compute_gaps(const std::vector<PerformanceRecord>& records) {
  GapMatrix g;
  std::map<std::string, int> row;
  std::map<std::string, int> col;
  for (const auto& r : records) {
    if (r.objective && *r.objective < 0)
      throw Error("negative objective for (" + r.instance_id + ", " + r.algorithm + ")");
    if (row.emplace(r.instance_id, static_cast<int>(g.instances.size())).second)
      g.instances.push_back(r.instance_id);
    if (col.emplace(r.algorithm, static_cast<int>(g.algorithms.size())).second)
      g.algorithms.push_back(r.algorithm);
  }
  const auto n = static_cast<Eigen::Index>(g.instances.size());
  const auto m = static_cast<Eigen::Index>(g.algorithms.size());
  std::vector<std::vector<std::optional<long long>>> obj(
      static_cast<std::size_t>(n), std::vector<std::optional<long long>>(static_cast<std::size_t>(m)));
  for (const auto& r : records)
    if (r.feasible && r.objective) obj[row[r.instance_id]][col[r.algorithm]] = r.objective;

  g.gap = Eigen::MatrixXd::Ones(n, m);
  g.feasible = BoolMatrix::Constant(n, m, false);
  g.good = BoolMatrix::Constant(n, m, false);
  g.best = BoolMatrix::Constant(n, m, false);
  g.best_objective.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& best = g.best_objective[static_cast<std::size_t>(i)];
    for (const auto& o : obj[static_cast<std::size_t>(i)])
      if (o && (!best || *o < *best)) best = o;
    if (!best) continue;
    for (Eigen::Index a = 0; a < m; ++a) {
      const auto& o = obj[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
      if (!o) continue;
      g.feasible(i, a) = true;
      g.gap(i, a) = relative_gap(*o, *best);
      g.good(i, a) = within_good_margin(*o, *best);
      g.best(i, a) = *o == *best;
    }
  }
  return g;
}

GapMatrix select_instances(const GapMatrix& gaps, const std::vector<std::string>& ids) {
  GapMatrix out;
  out.algorithms = gaps.algorithms;
  const auto n = static_cast<Eigen::Index>(ids.size());
  const auto m = static_cast<Eigen::Index>(gaps.algorithms.size());
  out.gap.resize(n, m);
  out.feasible.resize(n, m);
  out.good.resize(n, m);
  out.best.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int src = gaps.instance_index(ids[static_cast<std::size_t>(i)]);
    if (src < 0) throw Error("no performance data for instance '" + ids[static_cast<std::size_t>(i)] + "'");
    out.instances.push_back(ids[static_cast<std::size_t>(i)]);
    out.gap.row(i) = gaps.gap.row(src);
    out.feasible.row(i) = gaps.feasible.row(src);
    out.good.row(i) = gaps.good.row(src);
    out.best.row(i) = gaps.best.row(src);
    out.best_objective.push_back(gaps.best_objective[static_cast<std::size_t>(src)]);
  }
  return out;
}

double portfolio_gap(const std::vector<int>& portfolio, const GapMatrix& gaps) {
  if (portfolio.empty()) return 1.0;
  if (gaps.instance_count() == 0) return 0.0;
  Eigen::VectorXd best = Eigen::VectorXd::Ones(gaps.instance_count());
  for (int a : portfolio) best = best.cwiseMin(gaps.gap.col(a));
  return best.mean();
}

std::vector<Contribution> contribution_scores(const GapMatrix& gaps) {
  const int m = gaps.algorithm_count();
  if (m > kMaxExactShapley)
    throw std::invalid_argument("exact Shapley scores support at most " +
                                std::to_string(kMaxExactShapley) + " algorithms");
  const int n = gaps.instance_count();
  const std::size_t subsets = std::size_t{1} << m;

  // value[S] = portfolio gap of S. Per instance, the minimum over S comes from
  // S without its lowest member.
  std::vector<double> value(subsets, 0.0);
  std::vector<double> mins(subsets, 1.0);
  for (int i = 0; i < n; ++i) {
    for (std::size_t s = 1; s < subsets; ++s) {
      mins[s] = std::min(mins[s & (s - 1)], gaps.gap(i, std::countr_zero(s)));
      value[s] += mins[s];
    }
  }
  for (std::size_t s = 1; s < subsets; ++s) value[s] = n > 0 ? value[s] / n : 0.0;
  value[0] = 1.0;

  // w(s) = s! (m - 1 - s)! / m!
  std::vector<double> factorial(static_cast<std::size_t>(m) + 1, 1.0);
  for (int i = 1; i <= m; ++i) factorial[i] = factorial[i - 1] * i;
  std::vector<double> weight(static_cast<std::size_t>(std::max(m, 1)), 0.0);
  for (int s = 0; s < m; ++s) weight[s] = factorial[s] * factorial[m - 1 - s] / factorial[m];

  const std::size_t full = subsets - 1;
  std::vector<Contribution> out(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const std::size_t bit = std::size_t{1} << a;
    Contribution& c = out[static_cast<std::size_t>(a)];
    c.algorithm = gaps.algorithms[static_cast<std::size_t>(a)];
    c.standalone = value[bit];
    c.marginal = value[full & ~bit] - value[full];
    double phi = 0.0;
    for (std::size_t s = 0; s < subsets; ++s) {
      if (s & bit) continue;
      phi += weight[static_cast<std::size_t>(std::popcount(s))] * (value[s] - value[s | bit]);
    }
    c.shapley = phi;
  }
  return out;
}

Selector train_selector(std::vector<std::string> algorithms, std::vector<TrainingPoint> training,
                        int k) {
  if (training.empty()) throw std::invalid_argument("train_selector: empty training set");
  if (algorithms.empty()) throw std::invalid_argument("train_selector: no algorithms");
  if (k < 1) throw std::invalid_argument("train_selector: k must be positive");
  const std::size_t m = algorithms.size();
  for (const auto& p : training)
    if (p.good.size() != m || p.gap.size() != m)
      throw std::invalid_argument("train_selector: row length differs from the algorithm list");

  Selector sel;
  sel.algorithms = std::move(algorithms);
  sel.points = std::move(training);
  sel.k = std::min<int>(k, static_cast<int>(sel.points.size()));
  sel.standalone.assign(m, 0.0);
  for (const auto& p : sel.points)
    for (std::size_t a = 0; a < m; ++a) sel.standalone[a] += p.gap[a];
  for (double& s : sel.standalone) s /= static_cast<double>(sel.points.size());
  sel.single_best = 0;
  for (std::size_t a = 1; a < m; ++a) {
    const auto b = static_cast<std::size_t>(sel.single_best);
    if (std::tie(sel.standalone[a], sel.algorithms[a]) < std::tie(sel.standalone[b], sel.algorithms[b]))
      sel.single_best = static_cast<int>(a);
  }
  return sel;
}

std::vector<TrainingPoint> training_points(const GapMatrix& gaps,
                                           const std::vector<Eigen::Vector2d>& coords) {
  if (static_cast<int>(coords.size()) != gaps.instance_count())
    throw std::invalid_argument("training_points: one coordinate pair per instance needed");
  std::vector<TrainingPoint> out(coords.size());
  for (int i = 0; i < gaps.instance_count(); ++i) {
    TrainingPoint& p = out[static_cast<std::size_t>(i)];
    p.z = coords[static_cast<std::size_t>(i)];
    for (int a = 0; a < gaps.algorithm_count(); ++a) {
      p.good.push_back(gaps.good(i, a));
      p.gap.push_back(gaps.gap(i, a));
    }
  }
  return out;
}

std::vector<Recommendation> recommend(const Selector& sel, const Eigen::Vector2d& z) {
  const std::size_t m = sel.algorithms.size();
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(sel.points.size());
  for (std::size_t i = 0; i < sel.points.size(); ++i)
    dist.emplace_back((sel.points[i].z - z).norm(), i);
  const auto k = static_cast<std::size_t>(sel.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

  // Inverse-distance weights; neighbours at distance zero outvote the rest.
  const bool exact = dist.front().first == 0.0;
  std::vector<double> w(k);
  for (std::size_t j = 0; j < k; ++j)
    w[j] = exact ? (dist[j].first == 0.0 ? 1.0 : 0.0) : 1.0 / dist[j].first;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<Recommendation> out(m);
  for (std::size_t a = 0; a < m; ++a) {
    Recommendation& r = out[a];
    r.algorithm = static_cast<int>(a);
    double vote = 0.0;
    double gap = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const TrainingPoint& p = sel.points[dist[j].second];
      vote += p.good[a] ? w[j] : 0.0;
      gap += w[j] * p.gap[a];
    }
    r.good_vote = vote / total;
    r.neighbour_gap = gap / total;
    r.predicted_good = 2.0 * vote > total;
  }
  std::sort(out.begin(), out.end(), [&](const Recommendation& x, const Recommendation& y) {
    const auto xa = static_cast<std::size_t>(x.algorithm);
    const auto ya = static_cast<std::size_t>(y.algorithm);
    return std::make_tuple(!x.predicted_good, x.neighbour_gap, sel.standalone[xa],
                           std::cref(sel.algorithms[xa])) <
           std::make_tuple(!y.predicted_good, y.neighbour_gap, sel.standalone[ya],
                           std::cref(sel.algorithms[ya]));
  });
  if (!out.front().predicted_good) {
    const auto it = std::find_if(out.begin(), out.end(), [&](const Recommendation& r) {
      return r.algorithm == sel.single_best;
    });
    std::rotate(out.begin(), it, it + 1);
  }
  return out;
}

SelectionMetrics metrics_of(const GapMatrix& test, const std::vector<int>& choice) {
  SelectionMetrics s;
  const int n = test.instance_count();
  if (n == 0) return s;
  for (int i = 0; i < n; ++i) {
    const int a = choice[static_cast<std::size_t>(i)];
    if (a < 0) {
      s.mean_gap += 1.0;
      continue;
    }
    s.feasible_pct += test.feasible(i, a) ? 1.0 : 0.0;
    s.best_pct += test.best(i, a) ? 1.0 : 0.0;
    s.good_pct += test.good(i, a) ? 1.0 : 0.0;
    s.mean_gap += test.gap(i, a);
  }
  s.feasible_pct *= 100.0 / n;
  s.best_pct *= 100.0 / n;
  s.good_pct *= 100.0 / n;
  s.mean_gap /= n;
  return s;
}

SelectorEvaluation evaluate_selector(const Selector& sel, const GapMatrix& test,
                                     const std::vector<Eigen::Vector2d>& coords) {
  if (static_cast<int>(coords.size()) != test.instance_count())
    throw std::invalid_argument("evaluate_selector: one coordinate pair per test instance needed");
  const int n = test.instance_count();
  SelectorEvaluation ev;

  std::vector<int> pick(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto ranked = recommend(sel, coords[static_cast<std::size_t>(i)]);
    const std::string& name = sel.algorithms[static_cast<std::size_t>(ranked.front().algorithm)];
    ev.choices.push_back(name);
    pick[static_cast<std::size_t>(i)] = test.algorithm_index(name);
  }
  ev.selector = metrics_of(test, pick);

  // Single best on the test data itself, ties by column order.
  int single = -1;
  double single_gap = 0.0;
  for (int a = 0; a < test.algorithm_count(); ++a) {
    const double g = n > 0 ? test.gap.col(a).mean() : 0.0;
    if (single < 0 || g < single_gap) {
      single = a;
      single_gap = g;
    }
  }
  if (single >= 0) {
    ev.single_best_algorithm = test.algorithms[static_cast<std::size_t>(single)];
    ev.single_best = metrics_of(test, std::vector<int>(static_cast<std::size_t>(n), single));
  }

  std::vector<int> oracle(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (test.algorithm_count() == 0) break;
    Eigen::Index a = 0;
    test.gap.row(i).minCoeff(&a);
    oracle[static_cast<std::size_t>(i)] = static_cast<int>(a);
  }
  ev.oracle = metrics_of(test, oracle);
  return ev;
}

}  // namespace rrlab
