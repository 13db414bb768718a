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

// Two-dimensional instance spaces: feature normalization, linear projection
// and grid footprints.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rrlab/errors.hpp"
#include "rrlab/records.hpp"

namespace rrlab {

class MissingFeature : public Error {
 public:
  using Error::Error;
};

// Per-feature training statistics. `means` are means of the min-max scaled
// training values.
struct NormalizationStats {
  Eigen::VectorXd mins;
  Eigen::VectorXd maxs;
  Eigen::VectorXd means;
  std::vector<bool> degenerate;  // max == min
};

struct ProjectionModel {
  std::string name;
  std::vector<std::string> feature_names;
  NormalizationStats stats;
  Eigen::Matrix<double, 2, Eigen::Dynamic> weights;
  // False for the bundled models until statistics from training data are
  // attached; their placeholder statistics are the identity (min 0, max 1,
  // mean 0).
  bool fitted = false;

  Eigen::Index size() const { return static_cast<Eigen::Index>(feature_names.size()); }
};

// Values of `names` from `fv`, in order. Throws MissingFeature.
Eigen::VectorXd gather(const FeatureVector& fv, const std::vector<std::string>& names);

// x' = (x - min) / (max - min) - mean, and 0 for degenerate features.
Eigen::VectorXd preprocess(const FeatureVector& fv, const ProjectionModel& model);

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> project_normalized(
    const Eigen::MatrixBase<Derived>& x, const ProjectionModel& model) {
  return model.weights.template cast<typename Derived::Scalar>() * x;
}

Eigen::Vector2d project(const FeatureVector& fv, const ProjectionModel& model);

// Throws std::invalid_argument for fewer than two training vectors and
// MissingFeature when a vector lacks one of `names`.
NormalizationStats fit_normalization(const std::vector<FeatureVector>& training,
                                     const std::vector<std::string>& names);

// Copy of `model` carrying `stats`.
ProjectionModel with_statistics(ProjectionModel model, NormalizationStats stats);

// The published problem-type space (12 elementary features) and instance space
// (12 mixed features).
const ProjectionModel& problem_type_model();
const ProjectionModel& instance_space_model();

// JSON with keys name, features, mins, maxs, means, weights (2 rows), fitted.
std::string model_to_json(const ProjectionModel& model);
ProjectionModel model_from_json(std::string_view json);

struct LabeledPoint {
  double z1 = 0.0;
  double z2 = 0.0;
  bool good = false;
};

struct FootprintCell {
  int ix = 0;
  int iy = 0;
  int points = 0;
  int good = 0;
  bool in_footprint = false;
};

struct Footprint {
  int grid_x = 0;  // cells per axis actually used (1 on a degenerate axis)
  int grid_y = 0;
  double origin_z1 = 0.0;
  double origin_z2 = 0.0;
  double cell_width = 1.0;
  double cell_height = 1.0;
  std::vector<FootprintCell> cells;  // occupied cells, row-major order
  int footprint_cells = 0;
  int points_inside = 0;
  int good_inside = 0;
  double area = 0.0;     // footprint cells / occupied cells
  double density = 0.0;  // points inside / footprint area
  double purity = 0.0;   // good inside / points inside
};

// Grid approximation: occupied cells whose share of good points reaches
// `purity_threshold` (and hold at least one good point) form the footprint.
Footprint footprint(const std::vector<LabeledPoint>& points, int grid_cells = 30,
                    double purity_threshold = 0.55);

}  // namespace rrlab
