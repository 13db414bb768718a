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

#include "rrlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace rrlab {

Eigen::VectorXd gather(const FeatureVector& fv, const std::vector<std::string>& names) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(names.size()));
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = fv.find(names[k]);
    if (it == fv.end()) throw MissingFeature("missing feature '" + names[k] + "'");
    x(static_cast<Eigen::Index>(k)) = it->second;
  }
  return x;
}

Eigen::VectorXd preprocess(const FeatureVector& fv, const ProjectionModel& model) {
  const Eigen::VectorXd x = gather(fv, model.feature_names);
  const auto& st = model.stats;
  Eigen::VectorXd out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double range = st.maxs(k) - st.mins(k);
    out(k) = st.degenerate[k] || range <= 0.0 ? 0.0 : (x(k) - st.mins(k)) / range - st.means(k);
  }
  return out;
}

Eigen::Vector2d project(const FeatureVector& fv, const ProjectionModel& model) {
  return project_normalized(preprocess(fv, model), model);
}

NormalizationStats fit_normalization(const std::vector<FeatureVector>& training,
                                     const std::vector<std::string>& names) {
  if (training.size() < 2)
    throw std::invalid_argument("fit_normalization: need at least two training vectors");
  const auto k = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXd data(static_cast<Eigen::Index>(training.size()), k);
  for (std::size_t i = 0; i < training.size(); ++i)
    data.row(static_cast<Eigen::Index>(i)) = gather(training[i], names).transpose();

  NormalizationStats st;
  st.mins = data.colwise().minCoeff().transpose();
  st.maxs = data.colwise().maxCoeff().transpose();
  st.means = Eigen::VectorXd::Zero(k);
  st.degenerate.assign(names.size(), false);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double range = st.maxs(j) - st.mins(j);
    if (range <= 0.0) {
      st.degenerate[j] = true;
      continue;
    }
    st.means(j) = ((data.col(j).array() - st.mins(j)) / range).mean();
  }
  return st;
}

ProjectionModel with_statistics(ProjectionModel model, NormalizationStats stats) {
  if (stats.mins.size() != model.size())
    throw std::invalid_argument("statistics do not match the model's features");
  model.stats = std::move(stats);
  model.fitted = true;
  return model;
}

namespace {

ProjectionModel bundled(std::string name, std::vector<std::string> features,
                        const std::vector<std::pair<double, double>>& columns) {
  ProjectionModel m;
  m.name = std::move(name);
  m.feature_names = std::move(features);
  const auto k = m.size();
  m.weights.resize(2, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    m.weights(0, j) = columns[static_cast<std::size_t>(j)].first;
    m.weights(1, j) = columns[static_cast<std::size_t>(j)].second;
  }
  m.stats.mins = Eigen::VectorXd::Zero(k);
  m.stats.maxs = Eigen::VectorXd::Ones(k);
  m.stats.means = Eigen::VectorXd::Zero(k);
  m.stats.degenerate.assign(static_cast<std::size_t>(k), false);
  return m;
}

}  // namespace

const ProjectionModel& problem_type_model() {
  static const ProjectionModel m = bundled(
      "problem-type",
      {"f_T", "f_P", "fS_CA1", "fH_CA2", "fH_CA3", "fH_CA4", "fH_GA1", "fS_GA1", "fH_BR2",
       "fS_BR2", "fS_FA2", "fS_SE1"},
      {{-0.0859, 0.3822},
       {-0.3676, -0.5381},
       {-0.4103, -0.2229},
       {0.4221, -0.1775},
       {0.4957, -0.1841},
       {0.2012, -0.6936},
       {-0.3357, 0.0449},
       {0.0908, 0.1941},
       {0.4566, -0.9567},
       {0.0404, 0.208},
       {0.2266, 0.2159},
       {-0.3634, -0.2149}});
  return m;
}

const ProjectionModel& instance_space_model() {
  static const ProjectionModel m = bundled(
      "instance",
      {"f_T", "fS_CA1", "fS_CA2", "fH_CA3", "fH_CA4", "fS_CA4", "fS_BR2", "phi_ip_obj_mean",
       "phi_ip_cons_degree_max", "phi_ip_lp_objective", "phi_sa_ca3", "phi_sa_soft_cost_stage12"},
      {{-0.2398, -0.1241},
       {0.1657, -0.1184},
       {0.2899, -0.3249},
       {0.4703, -0.0171},
       {0.2474, -0.1614},
       {-0.358, -0.2934},
       {-0.0997, 0.4328},
       {0.5187, -0.1947},
       {-0.2241, -0.1807},
       {0.7985, 0.0181},
       {-0.1027, -0.0802},
       {0.471, -0.2456}});
  return m;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_json_vector(const nlohmann::json& j, std::size_t expected, const char* key) {
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != expected)
    throw Error(std::string("model JSON: '") + key + "' has the wrong length");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string model_to_json(const ProjectionModel& model) {
  nlohmann::ordered_json j;
  j["name"] = model.name;
  j["features"] = model.feature_names;
  j["mins"] = to_std(model.stats.mins);
  j["maxs"] = to_std(model.stats.maxs);
  j["means"] = to_std(model.stats.means);
  const Eigen::VectorXd r0 = model.weights.row(0).transpose();
  const Eigen::VectorXd r1 = model.weights.row(1).transpose();
  j["weights"] = {to_std(r0), to_std(r1)};
  j["fitted"] = model.fitted;
  return j.dump(2) + "\n";
}

ProjectionModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    ProjectionModel m;
    m.name = j.value("name", std::string());
    m.feature_names = j.at("features").get<std::vector<std::string>>();
    const std::size_t k = m.feature_names.size();
    m.stats.mins = from_json_vector(j, k, "mins");
    m.stats.maxs = from_json_vector(j, k, "maxs");
    m.stats.means = from_json_vector(j, k, "means");
    m.stats.degenerate.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      if (m.stats.mins(e) > m.stats.maxs(e)) throw Error("model JSON: min exceeds max");
      m.stats.degenerate[i] = m.stats.mins(e) == m.stats.maxs(e);
    }
    const auto& w = j.at("weights");
    if (w.size() != 2) throw Error("model JSON: weights must have two rows");
    m.weights.resize(2, static_cast<Eigen::Index>(k));
    for (int r = 0; r < 2; ++r) {
      const auto row = w.at(r).get<std::vector<double>>();
      if (row.size() != k) throw Error("model JSON: weight row has the wrong length");
      for (std::size_t c = 0; c < k; ++c) m.weights(r, static_cast<Eigen::Index>(c)) = row[c];
    }
    m.fitted = j.value("fitted", false);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
}

Footprint footprint(const std::vector<LabeledPoint>& points, int grid_cells,
                    double purity_threshold) {
  if (points.empty()) throw std::invalid_argument("footprint: no points");
  if (grid_cells < 1) throw std::invalid_argument("footprint: grid must have at least one cell");

  Eigen::Array2d lo(points[0].z1, points[0].z2);
  Eigen::Array2d hi = lo;
  for (const auto& p : points) {
    const Eigen::Array2d z(p.z1, p.z2);
    lo = lo.min(z);
    hi = hi.max(z);
  }
  Footprint fp;
  fp.origin_z1 = lo(0);
  fp.origin_z2 = lo(1);
  // A degenerate axis collapses to a single cell of width 1.
  const bool flat_x = !(hi(0) > lo(0));
  const bool flat_y = !(hi(1) > lo(1));
  fp.grid_x = flat_x ? 1 : grid_cells;
  fp.grid_y = flat_y ? 1 : grid_cells;
  fp.cell_width = flat_x ? 1.0 : (hi(0) - lo(0)) / grid_cells;
  fp.cell_height = flat_y ? 1.0 : (hi(1) - lo(1)) / grid_cells;

  auto cell_of = [](double z, double origin, double width, int cells) {
    const int c = static_cast<int>(std::floor((z - origin) / width));
    return std::clamp(c, 0, cells - 1);
  };
  std::map<std::pair<int, int>, FootprintCell> cells;
  for (const auto& p : points) {
    const int ix = cell_of(p.z1, fp.origin_z1, fp.cell_width, fp.grid_x);
    const int iy = cell_of(p.z2, fp.origin_z2, fp.cell_height, fp.grid_y);
    FootprintCell& c = cells[{iy, ix}];
    c.ix = ix;
    c.iy = iy;
    ++c.points;
    c.good += p.good ? 1 : 0;
  }
  for (auto& [key, c] : cells) {
    c.in_footprint =
        c.good >= 1 && static_cast<double>(c.good) >= purity_threshold * static_cast<double>(c.points);
    if (c.in_footprint) {
      ++fp.footprint_cells;
      fp.points_inside += c.points;
      fp.good_inside += c.good;
    }
    fp.cells.push_back(c);
  }
  fp.area = static_cast<double>(fp.footprint_cells) / static_cast<double>(fp.cells.size());
  if (fp.footprint_cells > 0) {
    fp.density = fp.points_inside /
                 (static_cast<double>(fp.footprint_cells) * fp.cell_width * fp.cell_height);
    fp.purity = static_cast<double>(fp.good_inside) / fp.points_inside;
  }
  return fp;
}

}  // namespace rrlab
