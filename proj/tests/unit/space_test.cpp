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

#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "generators.hpp"
#include "rrlab/space.hpp"

namespace rrlab {
namespace {

// Published weights, one (z1, z2) pair per feature, in feature order.
const double kProblemType[12][2] = {
    {-0.0859, 0.3822}, {-0.3676, -0.5381}, {-0.4103, -0.2229}, {0.4221, -0.1775},
    {0.4957, -0.1841}, {0.2012, -0.6936},  {-0.3357, 0.0449},  {0.0908, 0.1941},
    {0.4566, -0.9567}, {0.0404, 0.208},    {0.2266, 0.2159},   {-0.3634, -0.2149}};
const char* kProblemTypeNames[12] = {"f_T",    "f_P",    "fS_CA1", "fH_CA2", "fH_CA3", "fH_CA4",
                                     "fH_GA1", "fS_GA1", "fH_BR2", "fS_BR2", "fS_FA2", "fS_SE1"};
const double kInstance[12][2] = {
    {-0.2398, -0.1241}, {0.1657, -0.1184}, {0.2899, -0.3249}, {0.4703, -0.0171},
    {0.2474, -0.1614},  {-0.358, -0.2934}, {-0.0997, 0.4328}, {0.5187, -0.1947},
    {-0.2241, -0.1807}, {0.7985, 0.0181},  {-0.1027, -0.0802}, {0.471, -0.2456}};
const char* kInstanceNames[12] = {"f_T",    "fS_CA1", "fS_CA2", "fH_CA3",
                                  "fH_CA4", "fS_CA4", "fS_BR2", "phi_ip_obj_mean",
                                  "phi_ip_cons_degree_max", "phi_ip_lp_objective", "phi_sa_ca3",
                                  "phi_sa_soft_cost_stage12"};

FeatureVector unit(const ProjectionModel& m, int k) {
  FeatureVector fv;
  for (int j = 0; j < m.size(); ++j) fv[m.feature_names[j]] = j == k ? 1.0 : 0.0;
  return fv;
}

void expect_bundled(const ProjectionModel& m, const double (&w)[12][2], const char* const (&names)[12]) {
  ASSERT_EQ(m.size(), 12);
  for (int k = 0; k < 12; ++k) {
    EXPECT_EQ(m.feature_names[k], names[k]);
    EXPECT_EQ(m.weights(0, k), w[k][0]);
    EXPECT_EQ(m.weights(1, k), w[k][1]);
    // Identity statistics: a unit vector projects onto its column exactly.
    const Eigen::Vector2d z = project(unit(m, k), m);
    EXPECT_EQ(z(0), w[k][0]) << names[k];
    EXPECT_EQ(z(1), w[k][1]) << names[k];
  }
}

TEST(Bundled, ProblemTypeMatrix) { expect_bundled(problem_type_model(), kProblemType, kProblemTypeNames); }
TEST(Bundled, InstanceSpaceMatrix) { expect_bundled(instance_space_model(), kInstance, kInstanceNames); }

TEST(Bundled, SpecExamples) {
  const auto& m = problem_type_model();
  const Eigen::Vector2d first = project(unit(m, 0), m);
  EXPECT_EQ(first, Eigen::Vector2d(-0.0859, 0.3822));
  const Eigen::Vector2d ninth = project(unit(m, 8), m);
  EXPECT_EQ(ninth, Eigen::Vector2d(0.4566, -0.9567));
  FeatureVector zero = unit(m, 0);
  zero["f_T"] = 0.0;
  EXPECT_EQ(project(zero, m), Eigen::Vector2d::Zero());
}

// Reads the two transposed weight blocks straight from the paper text.
std::vector<std::vector<double>> paper_blocks() {
  std::ifstream in(std::string(RRLAB_SOURCE_DIR) + "/paper.md");
  if (!in) return {};
  std::vector<std::vector<double>> blocks;
  std::string line;
  bool inside = false;
  const std::regex number(R"(-?\d+\.\d+)");
  const std::regex spacing(R"(\\\\\[[^\]]*\])");  // row spacing such as \\[2pt]
  std::vector<double> cur;
  while (std::getline(in, line)) {
    if (line.find("\\begin{bmatrix}") != std::string::npos) {
      inside = true;
      cur.clear();
      continue;
    }
    if (inside && line.find("\\end{bmatrix}") != std::string::npos) {
      inside = false;
      if (!cur.empty()) blocks.push_back(cur);
      continue;
    }
    if (!inside) continue;
    line = std::regex_replace(line, spacing, "");
    for (std::sregex_iterator it(line.begin(), line.end(), number), end; it != end; ++it)
      cur.push_back(std::stod(it->str()));
  }
  return blocks;
}

TEST(Bundled, AgreesWithPaperText) {
  const auto blocks = paper_blocks();
  if (blocks.empty()) GTEST_SKIP() << "paper.md not found";
  ASSERT_EQ(blocks.size(), 2u);
  const ProjectionModel* models[2] = {&problem_type_model(), &instance_space_model()};
  for (int b = 0; b < 2; ++b) {
    ASSERT_EQ(blocks[b].size(), 24u);
    for (int k = 0; k < 12; ++k) {
      EXPECT_EQ(models[b]->weights(0, k), blocks[b][2 * k]);
      EXPECT_EQ(models[b]->weights(1, k), blocks[b][2 * k + 1]);
    }
  }
}

TEST(Preprocess, SpecExamples) {
  ProjectionModel m;
  m.name = "tiny";
  m.feature_names = {"a", "b"};
  m.weights = Eigen::Matrix<double, 2, Eigen::Dynamic>::Identity(2, 2);
  const std::vector<FeatureVector> training = {{{"a", 0.0}, {"b", 5.0}}, {{"a", 10.0}, {"b", 5.0}}};
  const NormalizationStats st = fit_normalization(training, m.feature_names);
  EXPECT_EQ(st.mins(0), 0.0);
  EXPECT_EQ(st.maxs(0), 10.0);
  EXPECT_EQ(st.means(0), 0.5);
  EXPECT_FALSE(st.degenerate[0]);
  EXPECT_TRUE(st.degenerate[1]);
  m = with_statistics(m, st);
  EXPECT_TRUE(m.fitted);
  const Eigen::VectorXd x = preprocess({{"a", 0.0}, {"b", 123.0}}, m);
  EXPECT_EQ(x(0), -0.5);
  EXPECT_EQ(x(1), 0.0);
  // Training mean maps to zero.
  EXPECT_EQ(preprocess({{"a", 5.0}, {"b", 5.0}}, m), Eigen::VectorXd::Zero(2));
  EXPECT_EQ(fit_normalization(training, m.feature_names).means, st.means);
}

TEST(Preprocess, Errors) {
  EXPECT_THROW(fit_normalization({{{"a", 1.0}}}, {"a"}), std::invalid_argument);
  EXPECT_THROW(fit_normalization({}, {"a"}), std::invalid_argument);
  EXPECT_THROW(project({{"f_T", 1.0}}, problem_type_model()), MissingFeature);
}

TEST(Property, ProjectionIsLinear) {
  Rng rng(50);
  std::normal_distribution<double> g;
  const auto& m = instance_space_model();
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(m.size(), [&] { return g(rng); });
    const Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(m.size(), [&] { return g(rng); });
    const double a = g(rng), b = g(rng);
    const Eigen::Vector2d lhs = project_normalized(a * u + b * v, m);
    const Eigen::Vector2d rhs = a * project_normalized(u, m) + b * project_normalized(v, m);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ModelJson, RoundTrip) {
  std::vector<FeatureVector> training;
  Rng rng(51);
  std::uniform_real_distribution<double> u(0, 50);
  const auto& base = problem_type_model();
  for (int i = 0; i < 10; ++i) {
    FeatureVector fv;
    for (const auto& n : base.feature_names) fv[n] = u(rng);
    training.push_back(fv);
  }
  const ProjectionModel m = with_statistics(base, fit_normalization(training, base.feature_names));
  const ProjectionModel back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.name, m.name);
  EXPECT_EQ(back.feature_names, m.feature_names);
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.stats.mins, m.stats.mins);
  EXPECT_EQ(back.stats.maxs, m.stats.maxs);
  EXPECT_EQ(back.stats.means, m.stats.means);
  EXPECT_EQ(back.fitted, m.fitted);
  EXPECT_EQ(project(training[3], back), project(training[3], m));
  EXPECT_THROW(model_from_json("{\"name\": 3}"), Error);
}

TEST(Footprint, AllGood) {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({i * 0.1, (i * 7 % 13) * 0.3, true});
  const Footprint f = footprint(pts);
  EXPECT_EQ(f.area, 1.0);
  EXPECT_EQ(f.purity, 1.0);
  EXPECT_EQ(f.points_inside, 50);
}

TEST(Footprint, AllBad) {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({i * 0.1, i * 0.2, false});
  const Footprint f = footprint(pts);
  EXPECT_EQ(f.area, 0.0);
  EXPECT_EQ(f.purity, 0.0);
  EXPECT_EQ(f.density, 0.0);
  EXPECT_EQ(f.footprint_cells, 0);
}

TEST(Footprint, HalfPlane) {
  // Good on the left half, bad on the right; jittered grid of points.
  Rng rng(52);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng), y = u(rng);
    pts.push_back({x, y, x < 0.5});
  }
  const Footprint f = footprint(pts, 10, 0.55);
  // Direct count: cells whose good share reaches 0.55.
  std::map<std::pair<int, int>, std::pair<int, int>> cells;
  for (const auto& p : pts) {
    const int ix = std::min(9, static_cast<int>(std::floor((p.z1 - f.origin_z1) / f.cell_width)));
    const int iy = std::min(9, static_cast<int>(std::floor((p.z2 - f.origin_z2) / f.cell_height)));
    auto& [n, g] = cells[{ix, iy}];
    ++n;
    g += p.good;
  }
  int in = 0, inside = 0, good = 0;
  for (const auto& [key, c] : cells)
    if (c.second >= 1 && c.second >= 0.55 * c.first) {
      ++in;
      inside += c.first;
      good += c.second;
    }
  EXPECT_EQ(f.footprint_cells, in);
  EXPECT_EQ(f.points_inside, inside);
  EXPECT_DOUBLE_EQ(f.area, static_cast<double>(in) / static_cast<double>(cells.size()));
  EXPECT_DOUBLE_EQ(f.purity, static_cast<double>(good) / inside);
  EXPECT_NEAR(f.area, 0.5, 0.05);
  EXPECT_GE(f.purity, 0.55);
  EXPECT_DOUBLE_EQ(f.density, inside / (in * f.cell_width * f.cell_height));
}

TEST(Footprint, DegenerateBox) {
  const Footprint f = footprint({{1.0, 2.0, true}, {1.0, 2.0, false}, {1.0, 2.0, true}}, 30, 0.55);
  EXPECT_EQ(f.cells.size(), 1u);
  EXPECT_EQ(f.footprint_cells, 1);
  EXPECT_NEAR(f.purity, 2.0 / 3.0, 1e-15);
  EXPECT_THROW(footprint({}, 30, 0.55), std::invalid_argument);
}

TEST(Property, FootprintPurityAtLeastThreshold) {
  Rng rng(53);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<LabeledPoint> pts;
    const int n = 1 + static_cast<int>(rng() % 300);
    const double share = std::uniform_real_distribution<double>(0, 1)(rng);
    for (int i = 0; i < n; ++i) pts.push_back({g(rng), g(rng), std::bernoulli_distribution(share)(rng)});
    const double purity = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    const Footprint f = footprint(pts, 1 + static_cast<int>(rng() % 40), purity);
    EXPECT_GE(f.area, 0.0);
    EXPECT_LE(f.purity, 1.0);
    if (f.footprint_cells > 0) EXPECT_GE(f.purity, purity - 1e-12);
    for (const auto& c : f.cells) {
      EXPECT_GE(c.points, 1);
      if (c.in_footprint) EXPECT_GE(c.good, 1);
    }
  }
}

}  // namespace
}  // namespace rrlab
