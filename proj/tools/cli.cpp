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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrlab/evaluator.hpp"
#include "rrlab/features.hpp"
#include "rrlab/robinx_io.hpp"
#include "rrlab/selection.hpp"
#include "rrlab/solver.hpp"
#include "rrlab/space.hpp"

namespace rrlab::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string pct(double fraction) { return fixed(100.0 * fraction, 2) + "%"; }

// Left-aligned first column, right-aligned others.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& os) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      width.resize(std::max(width.size(), r.size()), 0);
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (c == 0)
          os << std::left << std::setw(static_cast<int>(width[c])) << r[c];
        else
          os << "  " << std::right << std::setw(static_cast<int>(width[c])) << r[c];
      }
      os << '\n';
    }
    os << std::right;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Session {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> args;  // without the program name
  std::string subcommand;
  std::string started = utc_now();

  json manifest(const std::vector<std::string>& inputs, std::optional<std::uint64_t> seed) const {
    std::string joined;
    for (const auto& a : args) joined += a + '\x1f';
    json m;
    m["subcommand"] = subcommand;
    m["inputs"] = inputs;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["config_hash"] = hex(fnv1a(joined));
    m["tool_version"] = kToolVersion;
    m["started"] = started;
    m["finished"] = utc_now();
    return m;
  }

  // Writes `content` and its manifest next to it.
  void emit_file(const std::string& path, std::string_view content,
                 const std::vector<std::string>& inputs, std::optional<std::uint64_t> seed) const {
    write_file(path, content);
    write_file(path + ".manifest.json", manifest(inputs, seed).dump(2) + "\n");
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RRLAB_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string_view(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("RRLAB_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 1;
}

std::array<long long, 3> parse_budget(const std::string& text) {
  std::array<long long, 3> b{};
  std::stringstream ss(text);
  std::string piece;
  int k = 0;
  while (std::getline(ss, piece, ',')) {
    if (k == 3) throw UsageError("--budget takes three comma-separated counts");
    try {
      std::size_t used = 0;
      b[k] = std::stoll(piece, &used);
      if (used != piece.size() || b[k] < 0) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw UsageError("--budget: bad count '" + piece + "'");
    }
    ++k;
  }
  if (k != 3) throw UsageError("--budget takes three comma-separated counts");
  return b;
}

Instance load_instance(const Session& s, const std::string& path) {
  std::vector<std::string> warnings;
  Instance inst = parse_instance(read_file(path), &warnings);
  for (const auto& w : warnings) s.err << path << ": warning: " << w << '\n';
  return inst;
}

// Runs work(i) for i in [0, count) on up to `jobs` threads. Errors are
// rethrown in input order after all workers finish.
void run_parallel(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Output path for item i: `base` itself for a single item, else a file in
// directory `base` named after the input.
std::string per_item_path(const std::string& base, const std::string& input, std::size_t count,
                          const std::string& suffix) {
  if (count == 1) return base;
  fs::create_directories(base);
  return (fs::path(base) / (fs::path(input).stem().string() + suffix)).string();
}

json features_json(const FeatureVector& fv) {
  json j = json::object();
  for (const auto& [k, v] : fv) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// validate

std::string_view kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::WrongTeamCount: return "wrong_team_count";
    case ViolationKind::MissingPair: return "missing_pair";
    case ViolationKind::DoubleBooked: return "double_booked";
    case ViolationKind::IdleSlot: return "idle_slot";
    case ViolationKind::Phased: return "phased";
  }
  return "unknown";
}

json report_json(const EvaluationReport& r, const Instance& inst) {
  json j;
  j["feasible"] = r.feasible;
  j["hard_violation"] = r.hard_violation;
  j["objective"] = r.objective;
  j["phased_violations"] = r.phased_violations;
  json per_type = json::object();
  for (ConstraintType t : kAllConstraintTypes)
    per_type[std::string(to_string(t))] = r.per_type_hard[static_cast<int>(t)];
  j["per_type_hard"] = per_type;
  json per = json::array();
  for (const auto& [idx, dev] : r.per_constraint) {
    const Constraint& c = inst.constraints[static_cast<std::size_t>(idx)];
    per.push_back({{"index", idx},
                   {"type", std::string(to_string(c.type()))},
                   {"hardness", c.hard() ? "HARD" : "SOFT"},
                   {"penalty", c.penalty},
                   {"deviation", dev}});
  }
  j["per_constraint"] = per;
  return j;
}

struct ValidateOpts {
  std::string instance;
  std::string solution;
  bool json = false;
};

int cmd_validate(const Session& s, const ValidateOpts& o) {
  const Instance inst = load_instance(s, o.instance);
  const Timetable tt = parse_solution(read_file(o.solution), inst);
  const auto violations = validate_structure(tt, inst);
  std::vector<StructuralViolation> structural;
  for (const auto& v : violations)
    if (v.kind != ViolationKind::Phased) structural.push_back(v);

  json j;
  j["instance"] = inst.id;
  json list = json::array();
  for (const auto& v : violations)
    list.push_back({{"kind", std::string(kind_name(v.kind))},
                    {"team", v.team},
                    {"other", v.other},
                    {"slot", v.slot},
                    {"message", v.message}});
  j["structural_violations"] = list;

  if (!structural.empty()) {
    j["structurally_valid"] = false;
    if (o.json) {
      s.out << j.dump(2) << '\n';
    } else {
      s.out << "structure: " << structural.size() << " violation(s)\n";
      for (const auto& v : violations) s.out << "  " << v.message << '\n';
    }
    s.err << "timetable is not a compact double round robin\n";
    return kExitDomain;
  }

  const EvaluationReport r = evaluate(tt, inst);
  j["structurally_valid"] = true;
  j.update(report_json(r, inst));
  if (o.json) {
    s.out << j.dump(2) << '\n';
  } else {
    s.out << "structure: ok\n"
          << "feasible: " << (r.feasible ? "yes" : "no") << '\n'
          << "hard violation: " << r.hard_violation << '\n'
          << "objective: " << r.objective << '\n';
    if (inst.phased) s.out << "phased violations: " << r.phased_violations << '\n';
    TextTable t({"#", "type", "kind", "penalty", "deviation"});
    for (const auto& [idx, dev] : r.per_constraint) {
      if (dev == 0) continue;
      const Constraint& c = inst.constraints[static_cast<std::size_t>(idx)];
      t.add({std::to_string(idx), std::string(to_string(c.type())), c.hard() ? "HARD" : "SOFT",
             std::to_string(c.penalty), std::to_string(dev)});
    }
    s.out << "violated constraints:\n";
    t.print(s.out);
  }
  return r.feasible ? kExitOk : kExitDomain;
}

// ---------------------------------------------------------------------------
// solve

struct SolveOpts {
  std::vector<std::string> instances;
  std::optional<std::uint64_t> seed;
  std::string budget;
  std::string out;
  std::string trace;
  int jobs = 1;
  bool json = false;
  bool timing = false;
};

int cmd_solve(const Session& s, const SolveOpts& o) {
  SAConfig cfg;
  cfg.seed = resolve_seed(o.seed);
  if (!o.budget.empty()) cfg.stage_evaluations = parse_budget(o.budget);
  cfg.record_trace = !o.trace.empty();
  try {
    check_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const std::size_t count = o.instances.size();
  std::vector<Instance> insts(count);
  std::vector<SolveResult> results(count);
  run_parallel(count, o.jobs, [&](std::size_t i) {
    insts[i] = load_instance(s, o.instances[i]);
    results[i] = solve(insts[i], cfg);
  });

  json all = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const SolveResult& r = results[i];
    const std::vector<std::string> inputs = {o.instances[i]};
    if (!o.out.empty())
      s.emit_file(per_item_path(o.out, o.instances[i], count, ".sol.xml"),
                  write_solution(*r.best_timetable, insts[i], &r.best_report), inputs, cfg.seed);
    if (!o.trace.empty()) {
      std::string csv = "evaluations,stage,infeasibility,objective\n";
      for (const auto& p : r.trace)
        csv += std::to_string(p.evaluations) + ',' + std::to_string(p.stage) + ',' +
               std::to_string(p.infeasibility) + ',' + std::to_string(p.objective) + '\n';
      s.emit_file(per_item_path(o.trace, o.instances[i], count, ".trace.csv"), csv, inputs, cfg.seed);
    }
    json j;
    j["instance"] = o.instances[i];
    j["id"] = insts[i].id;
    j["seed"] = cfg.seed;
    j["feasible"] = r.best_report.feasible;
    j["hard_violation"] = r.best_report.hard_violation;
    j["phased_violations"] = r.best_report.phased_violations;
    j["objective"] = r.best_report.objective;
    j["evaluations"] = r.evaluations_used;
    json stages = json::array();
    for (const auto& st : r.stages) {
      json sj = {{"evaluations", st.evaluations},
                 {"best_infeasibility", st.best_infeasibility},
                 {"best_objective", st.best_objective}};
      if (o.timing) sj["wall_seconds"] = st.wall_seconds;
      stages.push_back(sj);
    }
    j["stages"] = stages;
    if (o.timing) j["wall_seconds"] = r.wall_time;
    all.push_back(j);
  }

  if (o.json) {
    s.out << (count == 1 ? all[0] : all).dump(2) << '\n';
  } else {
    TextTable t({"instance", "feasible", "hard", "phased", "objective", "evaluations"});
    for (const auto& j : all) {
      const auto ev = j["evaluations"];
      t.add({j["instance"].get<std::string>(), j["feasible"].get<bool>() ? "yes" : "no",
             std::to_string(j["hard_violation"].get<long long>()),
             std::to_string(j["phased_violations"].get<int>()),
             std::to_string(j["objective"].get<long long>()),
             std::to_string(ev[0].get<long long>() + ev[1].get<long long>() + ev[2].get<long long>())});
    }
    t.print(s.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// probe and features

struct ProbeOpts {
  std::vector<std::string> instances;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
  bool time_as_evaluations = false;
};

int cmd_probe(const Session& s, const ProbeOpts& o) {
  const std::uint64_t seed = resolve_seed(o.seed);
  ProbeConfig pc;
  pc.time_as_evaluations = o.time_as_evaluations;
  const std::size_t count = o.instances.size();
  std::vector<FeatureVector> fvs(count);
  run_parallel(count, o.jobs, [&](std::size_t i) {
    fvs[i] = probe(load_instance(s, o.instances[i]), seed, pc);
  });
  json doc;
  if (count == 1) {
    doc = features_json(fvs[0]);
  } else {
    doc = json::array();
    for (std::size_t i = 0; i < count; ++i)
      doc.push_back({{"instance", o.instances[i]}, {"features", features_json(fvs[i])}});
  }
  const std::string text = doc.dump(2) + "\n";
  if (!o.out.empty()) s.emit_file(o.out, text, o.instances, seed);
  s.out << text;
  return kExitOk;
}

struct FeaturesOpts {
  std::string instance;
  bool probe = false;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool time_as_evaluations = false;
};

int cmd_features(const Session& s, const FeaturesOpts& o) {
  const Instance inst = load_instance(s, o.instance);
  FeatureVector fv = elementary_count(inst);
  fv.merge(ip_model_stats(inst));
  std::optional<std::uint64_t> seed;
  if (o.probe) {
    seed = resolve_seed(o.seed);
    ProbeConfig pc;
    pc.time_as_evaluations = o.time_as_evaluations;
    fv.merge(probe(inst, *seed, pc));
  }
  const std::string text = features_json(fv).dump(2) + "\n";
  if (!o.out.empty()) s.emit_file(o.out, text, {o.instance}, seed);
  s.out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// 2D coordinates shared by project, footprint, select and report

ProjectionModel load_model(const std::string& spec) {
  if (spec == "problem-type") return problem_type_model();
  if (spec == "instance") return instance_space_model();
  return model_from_json(read_file(spec));
}

FeatureVector read_features_json(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(path + ": expected a JSON object of feature values");
  FeatureVector fv;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw Error(path + ": feature '" + k + "' is not a number");
    fv[k] = v.get<double>();
  }
  return fv;
}

using Coordinates = std::map<std::string, Eigen::Vector2d>;

struct CoordOpts {
  std::string coords;
  std::string model = "problem-type";
};

// Coordinates for every instance of `table`, taken from a coordinates file,
// from z1/z2 feature columns, or by projecting the feature columns with
// statistics fitted on `fit_on`.
Coordinates resolve_coordinates(const Session& s, const MetadataTable& table,
                                const MetadataTable& fit_on, const CoordOpts& o) {
  Coordinates c;
  if (!o.coords.empty()) {
    for (const auto& r : parse_coordinates(read_file(o.coords))) c[r.instance] = {r.z1, r.z2};
  } else {
    bool have_z = !table.feature_rows.empty();
    for (const auto& [id, fv] : table.feature_rows)
      have_z = have_z && fv.count("z1") && fv.count("z2");
    if (have_z) {
      for (const auto& [id, fv] : table.feature_rows) c[id] = {fv.at("z1"), fv.at("z2")};
    } else {
      ProjectionModel m = load_model(o.model);
      if (!m.fitted) {
        std::vector<FeatureVector> training;
        for (const auto& [id, fv] : fit_on.feature_rows) training.push_back(fv);
        if (training.size() < 2)
          throw Error("no coordinates: pass --coords, z1/z2 feature columns or feature columns "
                      "for the projection model");
        m = with_statistics(m, fit_normalization(training, m.feature_names));
        s.err << "note: normalization statistics fitted on " << training.size()
              << " instances\n";
      }
      for (const auto& [id, fv] : table.feature_rows) c[id] = project(fv, m);
    }
  }
  for (const auto& r : table.rows)
    if (!c.count(r.instance_id)) throw Error("no coordinates for instance '" + r.instance_id + "'");
  return c;
}

std::vector<Eigen::Vector2d> coords_for(const GapMatrix& g, const Coordinates& c) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& id : g.instances) out.push_back(c.at(id));
  return out;
}

struct ProjectOpts {
  std::string features;
  std::string model = "problem-type";
  std::string fit;
  std::string save_model;
  bool json = false;
};

int cmd_project(const Session& s, const ProjectOpts& o) {
  ProjectionModel m = load_model(o.model);
  if (!o.fit.empty()) {
    const MetadataTable t = parse_metadata(read_file(o.fit));
    std::vector<FeatureVector> training;
    for (const auto& [id, fv] : t.feature_rows) training.push_back(fv);
    m = with_statistics(m, fit_normalization(training, m.feature_names));
  }
  if (!o.save_model.empty())
    s.emit_file(o.save_model, model_to_json(m), {o.model, o.fit}, std::nullopt);
  if (!m.fitted)
    s.err << "note: model '" << m.name
          << "' carries no training statistics; features are used as already normalized\n";
  if (o.features.empty()) {
    if (o.save_model.empty()) throw UsageError("project needs --features or --save-model");
    return kExitOk;
  }
  const Eigen::Vector2d z = project(read_features_json(o.features), m);
  if (o.json) {
    json j = {{"model", m.name}, {"fitted", m.fitted}, {"z1", z(0)}, {"z2", z(1)}};
    s.out << j.dump(2) << '\n';
  } else {
    s.out << "z1,z2\n" << format_real(z(0)) << ',' << format_real(z(1)) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// footprint

json footprint_json(const Footprint& f) {
  return {{"area", f.area},
          {"density", f.density},
          {"purity", f.purity},
          {"footprint_cells", f.footprint_cells},
          {"occupied_cells", f.cells.size()},
          {"points_inside", f.points_inside}};
}

Footprint footprint_of(const GapMatrix& g, const Coordinates& c, int alg, bool best, int grid,
                       double purity) {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < g.instance_count(); ++i) {
    const auto& z = c.at(g.instances[static_cast<std::size_t>(i)]);
    pts.push_back({z(0), z(1), best ? g.best(i, alg) : g.good(i, alg)});
  }
  return footprint(pts, grid, purity);
}

struct FootprintOpts {
  std::string metadata;
  std::string algorithm;
  CoordOpts coord;
  int grid = 30;
  double purity = 0.55;
  std::string label = "good";
  bool json = false;
};

int cmd_footprint(const Session& s, const FootprintOpts& o) {
  const MetadataTable t = parse_metadata(read_file(o.metadata));
  const GapMatrix g = compute_gaps(t.rows);
  const int alg = g.algorithm_index(o.algorithm);
  if (alg < 0) throw Error("algorithm '" + o.algorithm + "' does not occur in the metadata");
  const Coordinates c = resolve_coordinates(s, t, t, o.coord);
  const Footprint f = footprint_of(g, c, alg, o.label == "best", o.grid, o.purity);
  if (o.json) {
    json j = footprint_json(f);
    j["algorithm"] = o.algorithm;
    j["label"] = o.label;
    s.out << j.dump(2) << '\n';
  } else {
    s.out << "algorithm: " << o.algorithm << " (" << o.label << ")\n"
          << "area: " << fixed(f.area, 3) << '\n'
          << "density: " << fixed(f.density, 3) << '\n'
          << "purity: " << fixed(f.purity, 3) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// select, portfolio, report

json metrics_json(const SelectionMetrics& m) {
  return {{"feasible_pct", m.feasible_pct},
          {"best_pct", m.best_pct},
          {"good_pct", m.good_pct},
          {"relative_gap_pct", 100.0 * m.mean_gap}};
}

void print_metrics(std::ostream& os, const std::vector<std::string>& names,
                   const std::vector<SelectionMetrics>& cols) {
  std::vector<std::string> head = {"metric"};
  head.insert(head.end(), names.begin(), names.end());
  TextTable t(head);
  auto row = [&](const std::string& label, auto get) {
    std::vector<std::string> r = {label};
    for (const auto& m : cols) r.push_back(get(m));
    t.add(r);
  };
  row("Percentage feasible", [](const auto& m) { return fixed(m.feasible_pct, 1) + "%"; });
  row("Percentage best", [](const auto& m) { return fixed(m.best_pct, 1) + "%"; });
  row("Percentage good", [](const auto& m) { return fixed(m.good_pct, 1) + "%"; });
  row("Relative gap", [](const auto& m) { return pct(m.mean_gap); });
  t.print(os);
}

struct SelectOpts {
  std::string train;
  std::string test;
  int k = 11;
  CoordOpts coord;
  bool json = false;
};

int cmd_select(const Session& s, const SelectOpts& o) {
  const MetadataTable train = parse_metadata(read_file(o.train));
  const MetadataTable test = parse_metadata(read_file(o.test));
  const GapMatrix gtrain = compute_gaps(train.rows);
  const GapMatrix gtest = compute_gaps(test.rows);
  const Coordinates ctrain = resolve_coordinates(s, train, train, o.coord);
  const Coordinates ctest = resolve_coordinates(s, test, train, o.coord);
  const Selector sel =
      train_selector(gtrain.algorithms, training_points(gtrain, coords_for(gtrain, ctrain)), o.k);
  const SelectorEvaluation ev = evaluate_selector(sel, gtest, coords_for(gtest, ctest));
  if (o.json) {
    json j;
    j["k"] = sel.k;
    j["selector"] = metrics_json(ev.selector);
    j["single_best"] = metrics_json(ev.single_best);
    j["single_best_algorithm"] = ev.single_best_algorithm;
    j["oracle"] = metrics_json(ev.oracle);
    json choices = json::object();
    for (std::size_t i = 0; i < ev.choices.size(); ++i) choices[gtest.instances[i]] = ev.choices[i];
    j["choices"] = choices;
    s.out << j.dump(2) << '\n';
  } else {
    print_metrics(s.out, {"Selector", "Single best (" + ev.single_best_algorithm + ")", "Oracle"},
                  {ev.selector, ev.single_best, ev.oracle});
  }
  return kExitOk;
}

json contributions_json(const std::vector<Contribution>& cs, const GapMatrix& g) {
  json list = json::array();
  double sum = 0.0;
  for (const auto& c : cs) {
    list.push_back({{"algorithm", c.algorithm},
                    {"standalone_pct", 100.0 * c.standalone},
                    {"marginal_pct", 100.0 * c.marginal},
                    {"shapley_pct", 100.0 * c.shapley}});
    sum += c.shapley;
  }
  std::vector<int> all(static_cast<std::size_t>(g.algorithm_count()));
  for (int a = 0; a < g.algorithm_count(); ++a) all[static_cast<std::size_t>(a)] = a;
  return {{"algorithms", list},
          {"shapley_sum_pct", 100.0 * sum},
          {"portfolio_gap_pct", 100.0 * portfolio_gap(all, g)}};
}

void print_contributions(std::ostream& os, const std::vector<Contribution>& cs, const GapMatrix& g) {
  std::vector<std::string> head = {""};
  std::vector<std::string> sa = {"Standalone"}, mg = {"Marginal"}, sh = {"Shapley"};
  double sum = 0.0;
  for (const auto& c : cs) {
    head.push_back(c.algorithm);
    sa.push_back(pct(c.standalone));
    mg.push_back(pct(c.marginal));
    sh.push_back(pct(c.shapley));
    sum += c.shapley;
  }
  TextTable t(head);
  t.add(sa);
  t.add(mg);
  t.add(sh);
  t.print(os);
  std::vector<int> all(static_cast<std::size_t>(g.algorithm_count()));
  for (int a = 0; a < g.algorithm_count(); ++a) all[static_cast<std::size_t>(a)] = a;
  os << "Shapley sum: " << pct(sum) << '\n'
     << "Portfolio (oracle) gap: " << pct(portfolio_gap(all, g)) << '\n';
}

struct PortfolioOpts {
  std::string metadata;
  bool json = false;
};

int cmd_portfolio(const Session& s, const PortfolioOpts& o) {
  const GapMatrix g = compute_gaps(parse_metadata(read_file(o.metadata)).rows);
  const auto cs = contribution_scores(g);
  if (o.json)
    s.out << contributions_json(cs, g).dump(2) << '\n';
  else
    print_contributions(s.out, cs, g);
  return kExitOk;
}

struct ReportOpts {
  std::string metadata;
  CoordOpts coord;
  int grid = 30;
  double purity = 0.55;
  std::string out_dir;
  bool json = false;
};

int cmd_report(const Session& s, const ReportOpts& o) {
  const MetadataTable t = parse_metadata(read_file(o.metadata));
  const GapMatrix g = compute_gaps(t.rows);
  const int n = g.instance_count();
  const int m = g.algorithm_count();

  // Per-algorithm performance.
  json perf = json::array();
  std::string perf_csv =
      "algorithm,feasible_pct,best_pct,good_pct,relative_gap_pct,solved_gap_pct,"
      "mean_cpu_minutes_normalized\n";
  std::map<std::string, std::pair<double, int>> cpu;
  for (const auto& r : t.rows)
    if (r.feasible) {
      auto& [sum, cnt] = cpu[r.algorithm];
      sum += r.normalized_cpu_minutes();
      ++cnt;
    }
  TextTable pt({"algorithm", "feasible", "best", "good", "gap", "gap (solved)", "cpu min (norm.)"});
  for (int a = 0; a < m; ++a) {
    const SelectionMetrics mt = metrics_of(g, std::vector<int>(static_cast<std::size_t>(n), a));
    double solved_gap = 0.0;
    int solved = 0;
    for (int i = 0; i < n; ++i)
      if (g.feasible(i, a)) {
        solved_gap += g.gap(i, a);
        ++solved;
      }
    solved_gap = solved > 0 ? solved_gap / solved : 0.0;
    const auto& name = g.algorithms[static_cast<std::size_t>(a)];
    const auto c = cpu[name];
    const double mean_cpu = c.second > 0 ? c.first / c.second : 0.0;
    json j = metrics_json(mt);
    j["algorithm"] = name;
    j["solved_gap_pct"] = 100.0 * solved_gap;
    j["mean_cpu_minutes_normalized"] = mean_cpu;
    perf.push_back(j);
    perf_csv += name + ',' + format_real(mt.feasible_pct) + ',' + format_real(mt.best_pct) + ',' +
                format_real(mt.good_pct) + ',' + format_real(100.0 * mt.mean_gap) + ',' +
                format_real(100.0 * solved_gap) + ',' + format_real(mean_cpu) + '\n';
    pt.add({name, fixed(mt.feasible_pct, 1) + "%", fixed(mt.best_pct, 1) + "%",
            fixed(mt.good_pct, 1) + "%", pct(mt.mean_gap), pct(solved_gap), fixed(mean_cpu, 1)});
  }

  const auto cs = contribution_scores(g);

  // Single best over all instances and the oracle.
  std::vector<int> all(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) all[static_cast<std::size_t>(a)] = a;
  int single = 0;
  for (int a = 1; a < m; ++a)
    if (portfolio_gap({a}, g) < portfolio_gap({single}, g)) single = a;
  std::vector<int> oracle(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n && m > 0; ++i) {
    Eigen::Index a = 0;
    g.gap.row(i).minCoeff(&a);
    oracle[static_cast<std::size_t>(i)] = static_cast<int>(a);
  }
  const SelectionMetrics single_m =
      m > 0 ? metrics_of(g, std::vector<int>(static_cast<std::size_t>(n), single)) : SelectionMetrics{};
  const SelectionMetrics oracle_m = metrics_of(g, oracle);
  const std::string single_name = m > 0 ? g.algorithms[static_cast<std::size_t>(single)] : "";

  // Footprints when coordinates can be found.
  json fps = json::array();
  std::string fp_csv = "algorithm,label,area,density,purity\n";
  std::string points_csv;
  std::optional<Coordinates> coords;
  try {
    coords = resolve_coordinates(s, t, t, o.coord);
  } catch (const Error& e) {
    s.err << "note: footprints skipped: " << e.what() << '\n';
  }
  TextTable ft({"algorithm", "good area", "density", "purity", "best area", "density", "purity"});
  if (coords) {
    for (int a = 0; a < m; ++a) {
      const auto& name = g.algorithms[static_cast<std::size_t>(a)];
      const Footprint good = footprint_of(g, *coords, a, false, o.grid, o.purity);
      const Footprint best = footprint_of(g, *coords, a, true, o.grid, o.purity);
      fps.push_back({{"algorithm", name}, {"good", footprint_json(good)}, {"best", footprint_json(best)}});
      for (const auto& [label, f] : {std::pair{"good", &good}, std::pair{"best", &best}})
        fp_csv += name + ',' + label + ',' + format_real(f->area) + ',' + format_real(f->density) +
                  ',' + format_real(f->purity) + '\n';
      ft.add({name, fixed(good.area, 3), fixed(good.density, 3), fixed(good.purity, 3),
              fixed(best.area, 3), fixed(best.density, 3), fixed(best.purity, 3)});
    }
    points_csv = "instance,z1,z2,best_algorithm";
    for (const auto& a : g.algorithms) points_csv += ",good_" + a;
    points_csv += '\n';
    for (int i = 0; i < n; ++i) {
      const auto& id = g.instances[static_cast<std::size_t>(i)];
      const auto& z = coords->at(id);
      const int o_alg = oracle[static_cast<std::size_t>(i)];
      const bool solved = o_alg >= 0 && g.feasible(i, o_alg);
      points_csv += id + ',' + format_real(z(0)) + ',' + format_real(z(1)) + ',' +
                    (solved ? g.algorithms[static_cast<std::size_t>(o_alg)] : std::string("none"));
      for (int a = 0; a < m; ++a) points_csv += g.good(i, a) ? ",1" : ",0";
      points_csv += '\n';
    }
  }

  json j;
  j["instances"] = n;
  j["algorithms"] = g.algorithms;
  j["performance"] = perf;
  j["contributions"] = contributions_json(cs, g);
  j["single_best"] = metrics_json(single_m);
  j["single_best_algorithm"] = single_name;
  j["oracle"] = metrics_json(oracle_m);
  j["footprints"] = fps;

  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    const std::vector<std::string> inputs = {o.metadata};
    auto path = [&](const char* name) { return (fs::path(o.out_dir) / name).string(); };
    s.emit_file(path("report.json"), j.dump(2) + "\n", inputs, std::nullopt);
    s.emit_file(path("performance.csv"), perf_csv, inputs, std::nullopt);
    std::string contrib_csv = "algorithm,standalone_pct,marginal_pct,shapley_pct\n";
    for (const auto& c : cs)
      contrib_csv += c.algorithm + ',' + format_real(100.0 * c.standalone) + ',' +
                     format_real(100.0 * c.marginal) + ',' + format_real(100.0 * c.shapley) + '\n';
    s.emit_file(path("contributions.csv"), contrib_csv, inputs, std::nullopt);
    if (coords) {
      s.emit_file(path("footprints.csv"), fp_csv, inputs, std::nullopt);
      s.emit_file(path("points.csv"), points_csv, inputs, std::nullopt);
    }
  }

  if (o.json) {
    s.out << j.dump(2) << '\n';
    return kExitOk;
  }
  s.out << "Instances: " << n << ", algorithms: " << m << "\n\nPerformance\n";
  pt.print(s.out);
  s.out << "\nPortfolio contributions\n";
  print_contributions(s.out, cs, g);
  s.out << "\nRecommendation baselines\n";
  print_metrics(s.out, {"Single best (" + single_name + ")", "Oracle"}, {single_m, oracle_m});
  if (coords) {
    s.out << "\nFootprints (grid " << o.grid << ", purity " << fixed(o.purity, 2) << ")\n";
    ft.print(s.out);
  }
  return kExitOk;
}

void add_coord_options(CLI::App* sub, CoordOpts& o) {
  sub->add_option("--coords", o.coords, "CSV with columns instance,z1,z2");
  sub->add_option("--model", o.model,
                  "Projection used when no coordinates are given: problem-type, instance or a "
                  "model JSON file");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Round-robin timetabling laboratory: evaluation, solving, features, instance "
               "spaces and algorithm selection"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  ValidateOpts vo;
  auto* validate = app.add_subcommand("validate", "Check a solution and report its deviations");
  validate->add_option("--instance", vo.instance, "Instance XML")->required();
  validate->add_option("--solution", vo.solution, "Solution XML")->required();
  validate->add_flag("--json", vo.json, "Machine-readable output");

  SolveOpts so;
  auto* solve_cmd = app.add_subcommand("solve", "Run the three-stage annealer");
  solve_cmd->add_option("--instance", so.instances, "Instance XML (repeatable)")->required();
  solve_cmd->add_option("--seed", so.seed, "Random seed (default: RRLAB_SEED or 1)");
  solve_cmd->add_option("--budget", so.budget, "Evaluations per stage, e.g. 100000,100000,10000");
  solve_cmd->add_option("--out", so.out, "Solution XML (a directory for several instances)");
  solve_cmd->add_option("--trace", so.trace, "Trace CSV (a directory for several instances)");
  solve_cmd->add_option("--jobs", so.jobs, "Instances solved in parallel")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--json", so.json, "Machine-readable output");
  solve_cmd->add_flag("--timing", so.timing, "Include wall-clock times in the summary");

  ProbeOpts po;
  auto* probe_cmd = app.add_subcommand("probe", "Probing features from a short annealing run");
  probe_cmd->add_option("--instance", po.instances, "Instance XML (repeatable)")->required();
  probe_cmd->add_option("--seed", po.seed, "Random seed (default: RRLAB_SEED or 1)");
  probe_cmd->add_option("--out", po.out, "Output JSON");
  probe_cmd->add_option("--jobs", po.jobs, "Instances probed in parallel")->check(CLI::PositiveNumber);
  probe_cmd->add_flag("--time-as-evaluations", po.time_as_evaluations,
                      "Report stage 1-2 evaluations instead of seconds (reproducible)");

  FeaturesOpts fo;
  auto* features_cmd = app.add_subcommand("features", "Problem-type and instance features");
  features_cmd->add_option("--instance", fo.instance, "Instance XML")->required();
  features_cmd->add_flag("--probe", fo.probe, "Add probing features");
  features_cmd->add_option("--seed", fo.seed, "Probing seed (default: RRLAB_SEED or 1)");
  features_cmd->add_option("--out", fo.out, "Output JSON");
  features_cmd->add_flag("--time-as-evaluations", fo.time_as_evaluations,
                         "Report stage 1-2 evaluations instead of seconds (reproducible)");

  ProjectOpts jo;
  auto* project_cmd = app.add_subcommand("project", "Project a feature vector to 2D");
  project_cmd->add_option("--features", jo.features, "Feature JSON object");
  project_cmd->add_option("--model", jo.model, "problem-type, instance or a model JSON file");
  project_cmd->add_option("--fit", jo.fit, "Metadata CSV whose feature columns fit the statistics");
  project_cmd->add_option("--save-model", jo.save_model, "Write the (fitted) model JSON");
  project_cmd->add_flag("--json", jo.json, "Machine-readable output");

  FootprintOpts fpo;
  auto* footprint_cmd = app.add_subcommand("footprint", "Footprint metrics of one algorithm");
  footprint_cmd->add_option("--metadata", fpo.metadata, "Metadata CSV")->required();
  footprint_cmd->add_option("--algorithm", fpo.algorithm, "Algorithm name")->required();
  add_coord_options(footprint_cmd, fpo.coord);
  footprint_cmd->add_option("--grid", fpo.grid, "Cells per axis")->check(CLI::PositiveNumber);
  footprint_cmd->add_option("--purity", fpo.purity, "Minimum good share of a cell")
      ->check(CLI::Range(0.0, 1.0));
  footprint_cmd->add_option("--label", fpo.label, "good or best")
      ->check(CLI::IsMember({"good", "best"}));
  footprint_cmd->add_flag("--json", fpo.json, "Machine-readable output");

  SelectOpts selo;
  auto* select_cmd = app.add_subcommand("select", "Train and evaluate the algorithm selector");
  select_cmd->add_option("--train", selo.train, "Training metadata CSV")->required();
  select_cmd->add_option("--test", selo.test, "Test metadata CSV")->required();
  select_cmd->add_option("--k", selo.k, "Neighbours")->check(CLI::PositiveNumber);
  add_coord_options(select_cmd, selo.coord);
  select_cmd->add_flag("--json", selo.json, "Machine-readable output");

  PortfolioOpts pfo;
  auto* portfolio_cmd = app.add_subcommand("portfolio", "Standalone, marginal and Shapley scores");
  portfolio_cmd->add_option("--metadata", pfo.metadata, "Metadata CSV")->required();
  portfolio_cmd->add_flag("--json", pfo.json, "Machine-readable output");

  ReportOpts ro;
  auto* report_cmd = app.add_subcommand("report", "Analysis tables for a metadata CSV");
  report_cmd->add_option("--metadata", ro.metadata, "Metadata CSV")->required();
  add_coord_options(report_cmd, ro.coord);
  report_cmd->add_option("--grid", ro.grid, "Cells per axis")->check(CLI::PositiveNumber);
  report_cmd->add_option("--purity", ro.purity, "Minimum good share of a cell")
      ->check(CLI::Range(0.0, 1.0));
  report_cmd->add_option("--out-dir", ro.out_dir, "Directory for CSV/JSON tables");
  report_cmd->add_flag("--json", ro.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Session s{out, err, {}, {}};
  for (int i = 1; i < argc; ++i) s.args.emplace_back(argv[i]);
  try {
    if (validate->parsed()) return s.subcommand = "validate", cmd_validate(s, vo);
    if (solve_cmd->parsed()) return s.subcommand = "solve", cmd_solve(s, so);
    if (probe_cmd->parsed()) return s.subcommand = "probe", cmd_probe(s, po);
    if (features_cmd->parsed()) return s.subcommand = "features", cmd_features(s, fo);
    if (project_cmd->parsed()) return s.subcommand = "project", cmd_project(s, jo);
    if (footprint_cmd->parsed()) return s.subcommand = "footprint", cmd_footprint(s, fpo);
    if (select_cmd->parsed()) return s.subcommand = "select", cmd_select(s, selo);
    if (portfolio_cmd->parsed()) return s.subcommand = "portfolio", cmd_portfolio(s, pfo);
    if (report_cmd->parsed()) return s.subcommand = "report", cmd_report(s, ro);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"rrlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rrlab::cli
