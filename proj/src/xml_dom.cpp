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

#include "xml_dom.hpp"

#include <expat.h>

#include <memory>

#include "rrlab/errors.hpp"

namespace rrlab::xml {

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  Node root;
  std::vector<Node*> stack;
  bool has_root = false;
};

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* b = static_cast<Builder*>(data);
  Node node;
  node.name = name;
  node.line = static_cast<int>(XML_GetCurrentLineNumber(b->parser));
  for (int i = 0; attrs[i] != nullptr; i += 2) node.attributes.emplace_back(attrs[i], attrs[i + 1]);
  if (b->stack.empty()) {
    b->root = std::move(node);
    b->has_root = true;
    b->stack.push_back(&b->root);
  } else {
    Node* parent = b->stack.back();
    parent->children.push_back(std::move(node));
    b->stack.push_back(&parent->children.back());
  }
}

void on_end(void* data, const XML_Char*) {
  static_cast<Builder*>(data)->stack.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<Builder*>(data);
  if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

Node parse(std::string_view text) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate(nullptr));
  Builder b;
  b.parser = parser.get();
  XML_SetUserData(parser.get(), &b);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw ParseError(ParseErrorKind::MalformedXml,
                     static_cast<int>(XML_GetCurrentLineNumber(parser.get())),
                     XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!b.has_root) throw ParseError(ParseErrorKind::MalformedXml, 1, "no root element");
  return std::move(b.root);
}

std::string escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace rrlab::xml
