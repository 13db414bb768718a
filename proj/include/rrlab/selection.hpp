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

// Performance metrics over per-algorithm results, portfolio contribution
// scores and a nearest-neighbour algorithm selector on 2D coordinates.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rrlab/records.hpp"

namespace rrlab {

// Share of the best objective by which `objective` exceeds it, capped at 1.
// With best = 0 the gap is 0 for objective 0 and 1 otherwise.
double relative_gap(long long objective, long long best);

// Good: feasible and at most 5% above the best (only 0 when the best is 0).
bool within_good_margin(long long objective, long long best);

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Instances in rows, algorithms in columns, both in order of first
// appearance. A missing record counts as no solution.
struct GapMatrix {
  std::vector<std::string> instances;
  std::vector<std::string> algorithms;
  Eigen::MatrixXd gap;
  BoolMatrix feasible;
  BoolMatrix good;
  BoolMatrix best;
  std::vector<std::optional<long long>> best_objective;

  int instance_count() const { return static_cast<int>(instances.size()); }
  int algorithm_count() const { return static_cast<int>(algorithms.size()); }
  // -1 when absent.
  int algorithm_index(const std::string& name) const;
  int instance_index(const std::string& id) const;
};

// Throws rrlab::Error on a negative objective.
GapMatrix compute_gaps(const std::vector<PerformanceRecord>& records);

// Rows of `gaps` for the listed instances, in that order.
GapMatrix select_instances(const GapMatrix& gaps, const std::vector<std::string>& ids);

// Mean over instances of the smallest gap inside the portfolio; an empty
// portfolio scores 1.
double portfolio_gap(const std::vector<int>& portfolio, const GapMatrix& gaps);

struct Contribution {
  std::string algorithm;
  double standalone = 0.0;
  double marginal = 0.0;
  double shapley = 0.0;
};

inline constexpr int kMaxExactShapley = 20;

// Exact scores by enumerating all 2^m sub-portfolios. Throws
// std::invalid_argument beyond kMaxExactShapley algorithms.
std::vector<Contribution> contribution_scores(const GapMatrix& gaps);

struct TrainingPoint {
  Eigen::Vector2d z = Eigen::Vector2d::Zero();
  std::vector<bool> good;    // per algorithm
  std::vector<double> gap;   // per algorithm
};

struct Selector {
  std::vector<std::string> algorithms;
  std::vector<TrainingPoint> points;
  int k = 11;
  std::vector<double> standalone;  // mean training gap per algorithm
  int single_best = 0;
};

// Throws std::invalid_argument for an empty training set or rows whose length
// differs from the algorithm list. k is clamped to the number of points.
Selector train_selector(std::vector<std::string> algorithms, std::vector<TrainingPoint> training,
                        int k = 11);

// Training points built from a gap matrix and one coordinate pair per row.
std::vector<TrainingPoint> training_points(const GapMatrix& gaps,
                                           const std::vector<Eigen::Vector2d>& coords);

struct Recommendation {
  int algorithm = 0;
  bool predicted_good = false;
  double good_vote = 0.0;       // weighted share of neighbours where it is good
  double neighbour_gap = 0.0;   // weighted mean neighbour gap
};

// All algorithms, best first. Predicted-good algorithms lead, ordered by
// neighbour gap, then training standalone gap, then name. When nothing is
// predicted good the single best algorithm is moved to the front.
std::vector<Recommendation> recommend(const Selector& selector, const Eigen::Vector2d& z);

struct SelectionMetrics {
  double feasible_pct = 0.0;
  double best_pct = 0.0;
  double good_pct = 0.0;
  double mean_gap = 0.0;  // fraction, not percent
};

struct SelectorEvaluation {
  SelectionMetrics selector;
  SelectionMetrics single_best;
  SelectionMetrics oracle;
  std::string single_best_algorithm;
  std::vector<std::string> choices;  // selector pick per test instance
};

// Metrics of a fixed choice of algorithm column per instance.
SelectionMetrics metrics_of(const GapMatrix& test, const std::vector<int>& choice);

// Algorithms are matched by name; one the test data lacks counts as unsolved.
SelectorEvaluation evaluate_selector(const Selector& selector, const GapMatrix& test,
                                     const std::vector<Eigen::Vector2d>& coords);

}  // namespace rrlab
