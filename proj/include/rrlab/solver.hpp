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

// Three-stage multi-neighbourhood simulated annealing.
//
//   stage 1  minimizes infeasibility (hard deviation + phased violations),
//            starting from the canonical schedule;
//   stage 2  minimizes weight * infeasibility + objective and may wander
//            through infeasible timetables;
//   stage 3  minimizes the objective and rejects moves that add infeasibility.
//
// Each stage runs a fixed number of move evaluations and warm-starts from the
// best timetable of the previous stage. Runs are reproducible from the seed.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rrlab/evaluator.hpp"
#include "rrlab/model.hpp"

namespace rrlab {

struct SAConfig {
  std::array<long long, 3> stage_evaluations{100000, 100000, 10000};
  // <= 0: calibrated per stage so that about half of the sampled uphill moves
  // would be accepted at the start temperature.
  double initial_temperature = 0.0;
  double cooling_rate = 0.99;
  // <= 0: derived from the stage budget so that the schedule cools by three
  // orders of magnitude before the budget is spent.
  double iterations_per_temperature = 0.0;
  // Cool down early once this fraction of the iterations per temperature has
  // been accepted.
  double cutoff_fraction = 0.05;
  // <= 0: ten times the largest soft penalty (at least 10).
  double hard_weight_stage2 = 0.0;
  std::uint64_t seed = 1;
  // Moves sampled for temperature calibration, taken from the stage budget
  // and capped at a tenth of it.
  int calibration_samples = 1000;
  bool record_trace = false;
};

// Throws std::invalid_argument when a budget is negative, the cooling rate is
// outside (0, 1) or the cut-off fraction outside (0, 1].
void check_config(const SAConfig& cfg);

struct TracePoint {
  long long evaluations;  // cumulative over all stages
  int stage;              // 1-based
  long long infeasibility;
  long long objective;
  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct StageSummary {
  long long evaluations = 0;
  double wall_seconds = 0.0;
  // Best timetable of the stage, ranked by (infeasibility, objective).
  long long best_infeasibility = 0;
  long long best_objective = 0;
  std::array<long long, kNumConstraintTypes> best_hard_by_type{};
  friend bool operator==(const StageSummary& a, const StageSummary& b) {
    return a.evaluations == b.evaluations && a.best_infeasibility == b.best_infeasibility &&
           a.best_objective == b.best_objective && a.best_hard_by_type == b.best_hard_by_type;
  }
};

struct SolveResult {
  std::optional<Timetable> best_timetable;
  EvaluationReport best_report;
  std::array<long long, 3> evaluations_used{};
  double wall_time = 0.0;  // seconds
  std::array<StageSummary, 3> stages{};
  std::vector<TracePoint> trace;
};

double default_hard_weight(const Instance& inst);

SolveResult solve(const Instance& inst, const SAConfig& cfg);

}  // namespace rrlab
