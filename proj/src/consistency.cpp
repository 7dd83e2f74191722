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

#include "pathforge/consistency.hpp"

namespace pathforge {

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::UnknownNodeLabel: return "unknown-node-label";
        case ViolationKind::UnknownEdge: return "unknown-edge";
        case ViolationKind::UnknownProperty: return "unknown-property";
        case ViolationKind::PropertyType: return "property-type";
    }
    return "unknown";
}

ConsistencyReport check_consistency(const GraphDB& db, const GraphSchema& schema) {
    ConsistencyReport report;
    for (const auto& n : db.nodes()) {
        const SchemaNode* sn = schema.find_node(n.label);
        if (!sn) {
            report.violations.push_back({ViolationKind::UnknownNodeLabel, n.id, "label " + n.label});
            continue;
        }
        for (const auto& [key, value] : n.properties) {
            auto it = sn->properties.find(key);
            if (it == sn->properties.end()) {
                report.violations.push_back({ViolationKind::UnknownProperty, n.id, n.label + "." + key});
            } else if (it->second != value.type) {
                report.violations.push_back({ViolationKind::PropertyType, n.id,
                                             n.label + "." + key + " is " + std::string(to_string(value.type)) +
                                                 ", expected " + std::string(to_string(it->second))});
            }
        }
    }
    for (const auto& e : db.edges()) {
        const auto& src_label = db.node(*db.index_of(e.src)).label;
        const auto& trg_label = db.node(*db.index_of(e.trg)).label;
        if (!schema.has_edge(src_label, e.label, trg_label)) {
            report.violations.push_back({ViolationKind::UnknownEdge, e.src + "-" + e.label + "->" + e.trg,
                                         "no schema edge (" + src_label + ", " + e.label + ", " + trg_label + ")"});
        }
    }
    return report;
}

}  // namespace pathforge
