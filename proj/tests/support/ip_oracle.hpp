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

// Size of the 0-1 formulation in docs/ip_formulation.md, counted row family
// by row family without building a matrix.

#pragma once

#include "rrlab/model.hpp"

namespace rrlab::test {

struct IpCounts {
  long long rows = 0;
  long long columns = 0;
  long long nonzeros = 0;
  long long slack_columns = 0;
  long long break_columns = 0;
  double objective_sum = 0.0;  // sum of slack penalties
};

IpCounts count_ip(const Instance& inst);

}  // namespace rrlab::test
