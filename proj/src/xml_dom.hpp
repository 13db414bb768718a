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

// Minimal element tree on top of expat, keeping source line numbers for
// diagnostics.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rrlab::xml {

struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;
  int line = 0;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }
  const Node* child(std::string_view child_name) const {
    for (const Node& c : children)
      if (c.name == child_name) return &c;
    return nullptr;
  }
};

// Throws ParseError(MalformedXml) with the offending line.
Node parse(std::string_view text);

std::string escape(std::string_view raw);

}  // namespace rrlab::xml
