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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pathforge {

enum class DataType { String, Int, Float, Bool, Date };

std::string_view to_string(DataType type);
std::optional<DataType> parse_data_type(std::string_view name);

struct SchemaNode {
    std::string label;
    std::map<std::string, DataType> properties;
};

struct SchemaEdge {
    std::string label;
    std::string src;
    std::string trg;

    auto operator<=>(const SchemaEdge&) const = default;
};

/**
 * Strict graph schema: one schema node per node label and one schema
 * edge per (src, label, trg). Node and edge labels are disjoint.
 */
class GraphSchema {
  public:
    GraphSchema() = default;

    /// Validates every structural invariant; throws LoadError.
    GraphSchema(std::vector<SchemaNode> nodes, std::vector<SchemaEdge> edges);

    const std::vector<SchemaNode>& nodes() const { return nodes_; }
    const std::vector<SchemaEdge>& edges() const { return edges_; }

    const SchemaNode* find_node(std::string_view label) const;
    bool has_node_label(std::string_view label) const { return find_node(label) != nullptr; }
    bool has_edge_label(std::string_view label) const { return edge_labels_.count(std::string(label)) > 0; }
    bool has_edge(std::string_view src, std::string_view label, std::string_view trg) const;

    std::set<std::string> node_labels() const;
    const std::set<std::string>& edge_labels() const { return edge_labels_; }

    /// Source / target node labels of every schema edge with this label.
    std::set<std::string> sources_of(std::string_view edge_label) const;
    std::set<std::string> targets_of(std::string_view edge_label) const;

  private:
    std::vector<SchemaNode> nodes_;
    std::vector<SchemaEdge> edges_;
    std::set<std::string> edge_labels_;
};

GraphSchema load_schema_json(std::string_view json_text);
GraphSchema load_schema_file(const std::string& path);
std::string schema_to_json(const GraphSchema& schema);

}  // namespace pathforge
