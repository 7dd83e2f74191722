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

#include "pathforge/graph_db.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pathforge/error.hpp"

namespace pathforge {

GraphDB::GraphDB(std::vector<DbNode> nodes, std::vector<DbEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::set<std::string> node_labels;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.id.empty()) throw LoadError("node with empty id");
        if (n.label.empty()) throw LoadError("node '" + n.id + "' has no label");
        if (!index_.emplace(n.id, static_cast<NodeIndex>(i)).second) {
            throw LoadError("duplicate node id '" + n.id + "'");
        }
        by_node_label_[n.label].push_back(static_cast<NodeIndex>(i));
        node_labels.insert(n.label);
    }
    for (const auto& e : edges_) {
        if (e.label.empty()) throw LoadError("edge " + e.src + "->" + e.trg + " has no label");
        if (node_labels.count(e.label)) throw LoadError("label '" + e.label + "' used for both nodes and edges");
        auto s = index_.find(e.src);
        auto t = index_.find(e.trg);
        if (s == index_.end()) throw LoadError("dangling endpoint: edge source '" + e.src + "'");
        if (t == index_.end()) throw LoadError("dangling endpoint: edge target '" + e.trg + "'");
        by_edge_label_[e.label].emplace_back(s->second, t->second);
    }
    for (auto& [label, pairs] : by_edge_label_) {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
}

std::optional<NodeIndex> GraphDB::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::pair<NodeIndex, NodeIndex>>& GraphDB::edges_with_label(const std::string& label) const {
    static const std::vector<std::pair<NodeIndex, NodeIndex>> kEmpty;
    auto it = by_edge_label_.find(label);
    return it == by_edge_label_.end() ? kEmpty : it->second;
}

const std::vector<NodeIndex>& GraphDB::nodes_with_label(const std::string& label) const {
    static const std::vector<NodeIndex> kEmpty;
    auto it = by_node_label_.find(label);
    return it == by_node_label_.end() ? kEmpty : it->second;
}

namespace {

bool looks_like_date(const std::string& s) {
    static const std::regex kDate(R"(\d{4}-\d{2}-\d{2}(T[0-9:.]+(Z|[+-]\d{2}:?\d{2})?)?)");
    return std::regex_match(s, kDate);
}

PropertyValue from_json(const nlohmann::json& v) {
    if (v.is_boolean()) return {DataType::Bool, v.get<bool>() ? "true" : "false"};
    if (v.is_number_integer()) return {DataType::Int, v.dump()};
    if (v.is_number_float()) return {DataType::Float, v.dump()};
    if (v.is_string()) {
        auto s = v.get<std::string>();
        return {looks_like_date(s) ? DataType::Date : DataType::String, s};
    }
    throw LoadError("unsupported property value " + v.dump());
}

nlohmann::ordered_json to_json(const PropertyValue& v) {
    switch (v.type) {
        case DataType::Bool: return v.text == "true";
        case DataType::Int: return nlohmann::ordered_json::parse(v.text);
        case DataType::Float: return nlohmann::ordered_json::parse(v.text);
        default: return v.text;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void expect_header(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& header,
                   const char* file) {
    if (rows.empty() || rows.front() != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw LoadError(std::string(file) + " must start with header '" + want + "'");
    }
}

}  // namespace

PropertyValue property_from_json_text(std::string_view json_value) {
    try {
        return from_json(nlohmann::json::parse(json_value));
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("invalid property value: ") + e.what());
    }
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t i = 0;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_row();
        } else if (c == '\n') {
            end_row();
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw LoadError("unterminated quoted CSV field");
    if (field_started || !row.empty()) end_row();
    return rows;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

GraphDB load_db_csv(std::string_view nodes_csv, std::string_view edges_csv) {
    auto node_rows = parse_csv(nodes_csv);
    auto edge_rows = parse_csv(edges_csv);
    expect_header(node_rows, {"id", "label", "props"}, "nodes.csv");
    expect_header(edge_rows, {"src", "label", "trg"}, "edges.csv");

    std::vector<DbNode> nodes;
    for (std::size_t r = 1; r < node_rows.size(); ++r) {
        const auto& row = node_rows[r];
        if (row.size() < 2 || row.size() > 3) {
            throw LoadError("nodes.csv line " + std::to_string(r + 1) + ": expected 3 fields");
        }
        DbNode n{row[0], row[1], {}};
        if (row.size() == 3 && !row[2].empty()) {
            nlohmann::json props;
            try {
                props = nlohmann::json::parse(row[2]);
            } catch (const nlohmann::json::exception&) {
                throw LoadError("nodes.csv line " + std::to_string(r + 1) + ": props is not valid JSON");
            }
            if (!props.is_object()) throw LoadError("nodes.csv line " + std::to_string(r + 1) + ": props must be an object");
            for (const auto& [k, v] : props.items()) n.properties.emplace(k, from_json(v));
        }
        nodes.push_back(std::move(n));
    }
    std::vector<DbEdge> edges;
    for (std::size_t r = 1; r < edge_rows.size(); ++r) {
        const auto& row = edge_rows[r];
        if (row.size() != 3) throw LoadError("edges.csv line " + std::to_string(r + 1) + ": expected 3 fields");
        edges.push_back({row[0], row[1], row[2]});
    }
    return GraphDB(std::move(nodes), std::move(edges));
}

GraphDB load_db_files(const std::string& nodes_path, const std::string& edges_path) {
    return load_db_csv(read_file(nodes_path), read_file(edges_path));
}

std::string nodes_to_csv(const GraphDB& db) {
    std::string out = "id,label,props\n";
    for (const auto& n : db.nodes()) {
        nlohmann::ordered_json props = nlohmann::ordered_json::object();
        for (const auto& [k, v] : n.properties) props[k] = to_json(v);
        out += csv_escape(n.id) + ',' + csv_escape(n.label) + ',' + csv_escape(props.dump()) + '\n';
    }
    return out;
}

std::string edges_to_csv(const GraphDB& db) {
    std::string out = "src,label,trg\n";
    for (const auto& e : db.edges()) out += csv_escape(e.src) + ',' + csv_escape(e.label) + ',' + csv_escape(e.trg) + '\n';
    return out;
}

}  // namespace pathforge
