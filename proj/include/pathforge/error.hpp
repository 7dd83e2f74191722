/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathforge {

/// Malformed query or path expression text. `offset()` is the byte offset
/// into the input at which the problem was detected.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

/// Schema or database input that violates the structural invariants of the
/// data model (duplicate ids, dangling endpoints, clashing label namespaces).
class LoadError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A query that parsed but is not well formed (variable scoping, unknown labels).
class QueryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace pathforge
