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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pathforge/schema.hpp"

namespace pathforge {

/// A property value together with the data type it denotes.
struct PropertyValue {
    DataType type = DataType::String;
    std::string text;

    bool operator==(const PropertyValue&) const = default;
};

struct DbNode {
    std::string id;
    std::string label;
    std::map<std::string, PropertyValue> properties;
};

struct DbEdge {
    std::string src;
    std::string label;
    std::string trg;
};

using NodeIndex = std::uint32_t;

/**
 * Labelled property graph instance. Nodes are addressed both by their
 * external string id and by a dense index in insertion order; edges
 * store dense indices.
 */
class GraphDB {
  public:
    GraphDB() = default;

    /// Throws LoadError on duplicate node ids or dangling edge endpoints.
    GraphDB(std::vector<DbNode> nodes, std::vector<DbEdge> edges);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<DbNode>& nodes() const { return nodes_; }
    const std::vector<DbEdge>& edges() const { return edges_; }
    const DbNode& node(NodeIndex i) const { return nodes_[i]; }

    std::optional<NodeIndex> index_of(std::string_view id) const;

    /// (src, trg) index pairs of every edge with this label, sorted.
    const std::vector<std::pair<NodeIndex, NodeIndex>>& edges_with_label(const std::string& label) const;

    /// Indices of every node carrying this label.
    const std::vector<NodeIndex>& nodes_with_label(const std::string& label) const;

  private:
    std::vector<DbNode> nodes_;
    std::vector<DbEdge> edges_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::map<std::string, std::vector<std::pair<NodeIndex, NodeIndex>>> by_edge_label_;
    std::map<std::string, std::vector<NodeIndex>> by_node_label_;
};

/// Infers the data type of a literal: JSON booleans are Bool, integral
/// numbers Int, other numbers Float, ISO dates Date, everything else String.
PropertyValue property_from_json_text(std::string_view json_value);

GraphDB load_db_csv(std::string_view nodes_csv, std::string_view edges_csv);
GraphDB load_db_files(const std::string& nodes_path, const std::string& edges_path);

std::string nodes_to_csv(const GraphDB& db);
std::string edges_to_csv(const GraphDB& db);

/// RFC-4180 record splitting; exposed for tests.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);

}  // namespace pathforge
