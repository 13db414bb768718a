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

// Value types shared by the feature, I/O and selection code.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace rrlab {

// Feature name -> value, ordered by name.
using FeatureVector = std::map<std::string, double>;

// Result of one algorithm on one instance.
struct PerformanceRecord {
  std::string instance_id;
  std::string algorithm;
  std::optional<long long> objective;  // present iff feasible
  bool feasible = false;
  double wall_minutes = 0.0;
  double cpu_minutes = 0.0;
  double clock_ratio = 1.0;

  double normalized_cpu_minutes() const { return cpu_minutes * clock_ratio; }
  friend bool operator==(const PerformanceRecord&, const PerformanceRecord&) = default;
};

// Clock speed of the machine an ITC2021 finalist ran on relative to the
// fastest one (3.9 GHz). Unknown algorithms get 1.
double clock_speed_ratio(std::string_view algorithm);

}  // namespace rrlab
