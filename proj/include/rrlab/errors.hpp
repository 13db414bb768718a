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

#pragma once

#include <stdexcept>
#include <string>

namespace rrlab {

// Base class of every domain error raised by the library. The CLI maps these
// to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

// Timetable references a team or slot outside the instance.
class MalformedTimetable : public Error {
 public:
  using Error::Error;
};

// Evaluation was requested on a timetable that is not a compact 2RR.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class MoveError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  MalformedXml,
  UnknownConstraint,
  OutOfRange,
  OddTeamCount,
  DuplicatePair,
  UnknownReference,
  BadValue,
  MissingField,
  NegativeObjective,
  UnknownColumn,
};

const char* to_string(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + to_string(kind) + ": " + what),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  int line_;
};

}  // namespace rrlab
