// Copyright 2026 The sptree Authors
//
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

#ifndef SPTREE_ERROR_H_
#define SPTREE_ERROR_H_

#include <stdexcept>
#include <string>

namespace sptree {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line()` is 1-based, or 0 when the problem is not
// tied to a particular line (e.g. a disconnected edge list).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& detail, const std::string& source = {})
      : Error(compose(line, detail, source)),
        line_(line),
        detail_(detail) {}

  int line() const { return line_; }
  const std::string& detail() const { return detail_; }
  // The same error, attributed to a named input (usually a file path).
  ParseError in(const std::string& source) const {
    return ParseError(line_, detail_, source);
  }

 private:
  static std::string compose(int line, const std::string& detail,
                             const std::string& source) {
    std::string out = source.empty() ? std::string{} : source + ": ";
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    return out + detail;
  }

  int line_;
  std::string detail_;
};

// An argument outside the domain of an operation: a vertex id that does not
// belong to the tree, a profile of the wrong arity, a bad agent index, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace sptree

#endif  // SPTREE_ERROR_H_
