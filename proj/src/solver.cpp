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

#include "rrlab/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rrlab/moves.hpp"

namespace rrlab {

void check_config(const SAConfig& cfg) {
  for (long long b : cfg.stage_evaluations)
    if (b < 0) throw std::invalid_argument("stage budgets must be non-negative");
  if (!(cfg.cooling_rate > 0.0 && cfg.cooling_rate < 1.0))
    throw std::invalid_argument("cooling rate must lie in (0, 1)");
  if (!(cfg.cutoff_fraction > 0.0 && cfg.cutoff_fraction <= 1.0))
    throw std::invalid_argument("cut-off fraction must lie in (0, 1]");
}

double default_hard_weight(const Instance& inst) {
  int max_soft = 1;
  for (const Constraint& c : inst.constraints)
    if (!c.hard()) max_soft = std::max(max_soft, c.penalty);
  return 10.0 * max_soft;
}

namespace {

using Clock = std::chrono::steady_clock;

// (infeasibility, objective), compared lexicographically.
struct Score {
  long long infeasibility;
  long long objective;
  bool operator<(const Score& o) const {
    return infeasibility != o.infeasibility ? infeasibility < o.infeasibility
                                            : objective < o.objective;
  }
};

Score score_of(const IncrementalEvaluator& ev) { return {ev.infeasibility(), ev.objective()}; }

// Temperature at which the mean acceptance probability of `uphill` is 1/2.
double calibrate_temperature(std::vector<double> uphill) {
  if (uphill.empty()) return 1.0;
  auto acceptance = [&](double t) {
    double sum = 0.0;
    for (double d : uphill) sum += std::exp(-d / t);
    return sum / static_cast<double>(uphill.size());
  };
  double lo = 1e-9;
  double hi = *std::max_element(uphill.begin(), uphill.end()) * 1e3;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (acceptance(mid) < 0.5)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

class Annealer {
 public:
  Annealer(const Instance& inst, const SAConfig& cfg)
      : inst_(inst), cfg_(cfg), rng_(cfg.seed), hard_weight_(cfg.hard_weight_stage2 > 0.0
                                                                    ? cfg.hard_weight_stage2
                                                                    : default_hard_weight(inst)) {}

  SolveResult run() {
    const auto t0 = Clock::now();
    IncrementalEvaluator ev(inst_, canonical_schedule(inst_.n_teams, inst_.phased));
    incumbent_ = ev.timetable();
    incumbent_score_ = score_of(ev);
    trace(1, incumbent_score_);

    Timetable start = ev.timetable();
    for (int stage = 0; stage < 3; ++stage) {
      const auto ts = Clock::now();
      ev.reset(start);
      start = run_stage(stage, ev);
      result_.stages[stage].wall_seconds =
          std::chrono::duration<double>(Clock::now() - ts).count();
      result_.evaluations_used[stage] = result_.stages[stage].evaluations;
    }

    result_.best_report = evaluate(incumbent_, inst_);
    result_.best_timetable = std::move(incumbent_);
    result_.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    return std::move(result_);
  }

 private:
  double stage_cost(int stage, const Delta& d) const {
    const double infeasibility = static_cast<double>(d.hard + d.phased);
    switch (stage) {
      case 0: return infeasibility;
      case 1: return hard_weight_ * infeasibility + static_cast<double>(d.objective);
      default: return static_cast<double>(d.objective);
    }
  }

  std::optional<Move> sample(const IncrementalEvaluator& ev) {
    std::uniform_int_distribution<int> kind(0, static_cast<int>(kAllMoveKinds.size()) - 1);
    // A timetable with two teams admits very few moves; bound the retries.
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto m = random_move(kAllMoveKinds[kind(rng_)], ev.timetable(), ev.tables(), rng_);
      if (m) return m;
    }
    return std::nullopt;
  }

  void trace(int stage, Score s) {
    if (cfg_.record_trace) result_.trace.push_back({evaluations_, stage, s.infeasibility, s.objective});
  }

  // Runs one stage from the evaluator's current timetable and returns the
  // best timetable the stage visited.
  Timetable run_stage(int stage, IncrementalEvaluator& ev) {
    StageSummary& summary = result_.stages[stage];
    const long long budget = cfg_.stage_evaluations[stage];
    long long used = 0;
    Timetable best = ev.timetable();
    Score best_score = score_of(ev);
    auto best_by_type = ev.hard_by_type();

    auto note_state = [&] {
      const Score s = score_of(ev);
      if (s < best_score) {
        best_score = s;
        best = ev.timetable();
        best_by_type = ev.hard_by_type();
      }
      if (s < incumbent_score_) {
        incumbent_score_ = s;
        incumbent_ = ev.timetable();
        trace(stage + 1, s);
      }
    };

    double temperature = cfg_.initial_temperature;
    if (budget > 0 && temperature <= 0.0) {
      const long long samples =
          std::min<long long>(cfg_.calibration_samples, std::max<long long>(1, budget / 10));
      std::vector<double> uphill;
      for (long long k = 0; k < samples; ++k) {
        auto m = sample(ev);
        if (!m) break;
        ++used;
        ++evaluations_;
        const Delta d = ev.delta(*m);
        if (stage == 2 && d.hard + d.phased > 0) continue;
        const double c = stage_cost(stage, d);
        if (c > 0.0) uphill.push_back(c);
      }
      temperature = calibrate_temperature(std::move(uphill));
    }

    const double remaining = static_cast<double>(std::max<long long>(1, budget - used));
    double per_temperature = cfg_.iterations_per_temperature;
    if (per_temperature <= 0.0) {
      const double steps = std::ceil(std::log(1e-3) / std::log(cfg_.cooling_rate));
      per_temperature = std::max(1.0, std::floor(remaining / steps));
    }
    const double cutoff = std::max(1.0, std::ceil(cfg_.cutoff_fraction * per_temperature));

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double sampled = 0.0;
    double accepted = 0.0;
    while (used < budget) {
      auto m = sample(ev);
      if (!m) break;
      ++used;
      ++evaluations_;
      const Delta d = ev.delta(*m);
      bool accept = false;
      if (!(stage == 2 && d.hard + d.phased > 0)) {
        const double c = stage_cost(stage, d);
        accept = c <= 0.0 || unit(rng_) < std::exp(-c / temperature);
      }
      if (accept) {
        ev.apply(*m);
        accepted += 1.0;
        note_state();
      }
      sampled += 1.0;
      if (sampled >= per_temperature || accepted >= cutoff) {
        temperature *= cfg_.cooling_rate;
        sampled = 0.0;
        accepted = 0.0;
      }
    }

    summary.evaluations = used;
    summary.best_infeasibility = best_score.infeasibility;
    summary.best_objective = best_score.objective;
    summary.best_hard_by_type = best_by_type;
    trace(stage + 1, incumbent_score_);
    return best;
  }

  const Instance& inst_;
  const SAConfig& cfg_;
  Rng rng_;
  double hard_weight_;
  long long evaluations_ = 0;
  Timetable incumbent_;
  Score incumbent_score_{0, 0};
  SolveResult result_;
};

}  // namespace

SolveResult solve(const Instance& inst, const SAConfig& cfg) {
  check_config(cfg);
  check_instance(inst);
  return Annealer(inst, cfg).run();
}

}  // namespace rrlab
