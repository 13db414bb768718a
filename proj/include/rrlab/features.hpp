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

// Instance features: problem-type counts, statistics of a 0-1 integer
// programming model, and probing features from a short annealing run.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "rrlab/model.hpp"
#include "rrlab/records.hpp"

namespace rrlab {

inline constexpr std::array<std::string_view, 18> kProblemTypeFeatures = {
    "f_T",    "f_P",    "fH_CA1", "fH_CA2", "fH_CA3", "fH_CA4", "fH_GA1", "fH_BR1", "fH_BR2",
    "fS_CA1", "fS_CA2", "fS_CA3", "fS_CA4", "fS_GA1", "fS_BR1", "fS_BR2", "fS_FA2", "fS_SE1"};

inline constexpr std::array<std::string_view, 14> kInstanceFeatures = {
    "phi_ip_nonzeros",         "phi_ip_obj_std",         "phi_ip_obj_mean",
    "phi_ip_cons_degree_max",  "phi_ip_cons_degree_mean", "phi_ip_var_degree_mean",
    "phi_ip_obj_mean_normed",  "phi_ip_lp_objective",     "phi_sa_ca2",
    "phi_sa_ca3",              "phi_sa_ca4",              "phi_sa_time_stage12",
    "phi_sa_soft_cost_stage12", "phi_sa_soft_cost"};

// Number of elementary constraints a single constraint stands for.
int elementary_size(const Constraint& c);

// f_T, f_P and one count per (hardness, type) listed above. Hard FA2 and SE1
// constraints have no column of their own; they appear as fH_FA2 / fH_SE1 only
// when present.
FeatureVector elementary_count(const Instance& inst);

// The 0-1 model described in docs/ip_formulation.md.
struct IpModel {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd objective;
  Eigen::VectorXd rhs;
  long long x_columns = 0;      // n (n - 1) (2n - 2)
  long long break_columns = 0;
  long long slack_columns = 0;
};

IpModel build_ip_model(const Instance& inst);

struct IpModelStats {
  long long rows = 0;
  long long columns = 0;
  long long nonzeros = 0;
  double obj_mean = 0.0;
  double obj_std = 0.0;
  double cons_degree_max = 0.0;
  double cons_degree_mean = 0.0;
  double var_degree_mean = 0.0;
  double obj_mean_normed = 0.0;
};

IpModelStats ip_statistics(const IpModel& model);

// phi_ip_* except phi_ip_lp_objective, which needs an LP solver.
FeatureVector ip_model_stats(const Instance& inst);

struct ProbeConfig {
  std::array<long long, 3> stage_evaluations{10000, 10000, 1000};
  // Report the evaluations spent in stages 1 and 2 instead of their wall
  // time, which makes phi_sa_time_stage12 reproducible.
  bool time_as_evaluations = false;
};

FeatureVector probe(const Instance& inst, std::uint64_t seed, const ProbeConfig& cfg = {});

// Pearson correlation; 0 when either side is constant.
double pearson(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

// Names of the features whose absolute correlation with at least one of the
// performance columns reaches `threshold`, in name order. Throws
// std::invalid_argument on length mismatches, fewer than three vectors or a
// feature missing from some vector.
std::vector<std::string> pearson_filter(const std::vector<FeatureVector>& features,
                                        const std::vector<std::vector<double>>& performance,
                                        double threshold = 0.4);

}  // namespace rrlab
