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

#include "pathforge/schema.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pathforge/error.hpp"
#include "text_cursor.hpp"

namespace pathforge {

std::string_view to_string(DataType type) {
    switch (type) {
        case DataType::String: return "String";
        case DataType::Int: return "Int";
        case DataType::Float: return "Float";
        case DataType::Bool: return "Bool";
        case DataType::Date: return "Date";
    }
    return "String";
}

std::optional<DataType> parse_data_type(std::string_view name) {
    if (name == "String") return DataType::String;
    if (name == "Int" || name == "Integer") return DataType::Int;
    if (name == "Float") return DataType::Float;
    if (name == "Bool") return DataType::Bool;
    if (name == "Date") return DataType::Date;
    return std::nullopt;
}

GraphSchema::GraphSchema(std::vector<SchemaNode> nodes, std::vector<SchemaEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::set<std::string> node_labels;
    for (const auto& n : nodes_) {
        if (!detail::is_identifier(n.label)) throw LoadError("invalid node label '" + n.label + "'");
        if (!node_labels.insert(n.label).second) throw LoadError("duplicate schema node label '" + n.label + "'");
    }
    std::set<SchemaEdge> seen;
    for (const auto& e : edges_) {
        if (!detail::is_identifier(e.label)) throw LoadError("invalid edge label '" + e.label + "'");
        if (!node_labels.count(e.src)) throw LoadError("dangling endpoint: edge '" + e.label + "' source '" + e.src + "'");
        if (!node_labels.count(e.trg)) throw LoadError("dangling endpoint: edge '" + e.label + "' target '" + e.trg + "'");
        if (node_labels.count(e.label)) throw LoadError("label '" + e.label + "' used for both nodes and edges");
        if (!seen.insert(e).second) {
            throw LoadError("duplicate schema edge " + e.src + " -" + e.label + "-> " + e.trg);
        }
        edge_labels_.insert(e.label);
    }
}

const SchemaNode* GraphSchema::find_node(std::string_view label) const {
    for (const auto& n : nodes_) {
        if (n.label == label) return &n;
    }
    return nullptr;
}

bool GraphSchema::has_edge(std::string_view src, std::string_view label, std::string_view trg) const {
    for (const auto& e : edges_) {
        if (e.label == label && e.src == src && e.trg == trg) return true;
    }
    return false;
}

std::set<std::string> GraphSchema::node_labels() const {
    std::set<std::string> out;
    for (const auto& n : nodes_) out.insert(n.label);
    return out;
}

std::set<std::string> GraphSchema::sources_of(std::string_view edge_label) const {
    std::set<std::string> out;
    for (const auto& e : edges_) {
        if (e.label == edge_label) out.insert(e.src);
    }
    return out;
}

std::set<std::string> GraphSchema::targets_of(std::string_view edge_label) const {
    std::set<std::string> out;
    for (const auto& e : edges_) {
        if (e.label == edge_label) out.insert(e.trg);
    }
    return out;
}

GraphSchema load_schema_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw LoadError("schema must be a JSON object");

    std::vector<SchemaNode> nodes;
    std::vector<SchemaEdge> edges;
    try {
        for (const auto& jn : doc.value("nodes", nlohmann::json::array())) {
            SchemaNode n;
            n.label = jn.at("label").get<std::string>();
            if (jn.contains("properties")) {
                for (const auto& [key, type] : jn.at("properties").items()) {
                    auto dt = parse_data_type(type.get<std::string>());
                    if (!dt) {
                        throw LoadError("unknown data type '" + type.get<std::string>() + "' for " + n.label + "." + key);
                    }
                    n.properties.emplace(key, *dt);
                }
            }
            nodes.push_back(std::move(n));
        }
        for (const auto& je : doc.value("edges", nlohmann::json::array())) {
            edges.push_back({je.at("label").get<std::string>(), je.at("src").get<std::string>(),
                             je.at("trg").get<std::string>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("malformed schema: ") + e.what());
    }
    return GraphSchema(std::move(nodes), std::move(edges));
}

GraphSchema load_schema_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open schema file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_schema_json(buf.str());
}

std::string schema_to_json(const GraphSchema& schema) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : schema.nodes()) {
        nlohmann::ordered_json props = nlohmann::ordered_json::object();
        for (const auto& [k, t] : n.properties) props[k] = std::string(to_string(t));
        doc["nodes"].push_back({{"label", n.label}, {"properties", props}});
    }
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : schema.edges()) doc["edges"].push_back({{"label", e.label}, {"src", e.src}, {"trg", e.trg}});
    return doc.dump(2);
}

}  // namespace pathforge
