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

#include <string>
#include <vector>

#include "pathforge/graph_db.hpp"
#include "pathforge/schema.hpp"

namespace pathforge {

enum class ViolationKind {
    UnknownNodeLabel,
    UnknownEdge,      // no schema edge with this label between the endpoint labels
    UnknownProperty,  // key absent from the schema node
    PropertyType,     // key present with a different data type
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string element;  // node id, or "src-label->trg" for edges
    std::string detail;
};

struct ConsistencyReport {
    std::vector<Violation> violations;

    bool consistent() const { return violations.empty(); }
};

ConsistencyReport check_consistency(const GraphDB& db, const GraphSchema& schema);

}  // namespace pathforge
