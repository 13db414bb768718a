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

// Instances and solutions in the ITC2021 XML dialect, and per-algorithm
// performance tables as CSV. See docs/file_formats.md for the exact layouts.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rrlab/errors.hpp"
#include "rrlab/evaluator.hpp"
#include "rrlab/model.hpp"
#include "rrlab/records.hpp"

namespace rrlab {

// Parse failures throw ParseError carrying the kind and the source line.
// Attributes the nine constraint types do not use are skipped; a note is
// appended to `warnings` when given.
Instance parse_instance(std::string_view xml, std::vector<std::string>* warnings = nullptr);
std::string write_instance(const Instance& inst);

// No structural validation happens here; see validate_structure().
Timetable parse_solution(std::string_view xml, const Instance& inst);
// When `report` is given its totals are written as an ObjectiveValue element.
std::string write_solution(const Timetable& tt, const Instance& inst,
                           const EvaluationReport* report = nullptr);

struct MetadataTable {
  std::vector<PerformanceRecord> rows;
  // Features per instance, in order of first appearance in `rows`.
  std::vector<std::pair<std::string, FeatureVector>> feature_rows;
  friend bool operator==(const MetadataTable&, const MetadataTable&) = default;
};

inline constexpr std::string_view kNoSolution = "-";

MetadataTable parse_metadata(std::string_view csv);
std::string write_metadata(const MetadataTable& table);

// Instance coordinates in a 2D space: columns instance,z1,z2.
struct CoordinateRow {
  std::string instance;
  double z1 = 0.0;
  double z2 = 0.0;
  friend bool operator==(const CoordinateRow&, const CoordinateRow&) = default;
};

std::vector<CoordinateRow> parse_coordinates(std::string_view csv);
std::string write_coordinates(const std::vector<CoordinateRow>& rows);

// Shortest text that reads back to the same double.
std::string format_real(double v);

// Reads a whole file; throws rrlab::Error when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace rrlab
