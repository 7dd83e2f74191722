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

// Random schemas, expressions and queries for property tests.

#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pathforge/path_expr.hpp"
#include "pathforge/schema.hpp"
#include "pathforge/ucqt.hpp"

namespace randgen {

using pathforge::PathExpr;

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Up to `max_nodes` node labels N0.. and up to `max_edges` edges over a
/// small pool of edge labels, so one label often joins several label pairs.
inline pathforge::GraphSchema schema(std::mt19937_64& rng, int max_nodes = 6, int max_edges = 10) {
    int n = uniform(rng, 2, max_nodes);
    std::vector<pathforge::SchemaNode> nodes;
    for (int i = 0; i < n; ++i) {
        pathforge::SchemaNode node{"N" + std::to_string(i), {}};
        node.properties["w"] = pathforge::DataType::Int;
        nodes.push_back(node);
    }
    static const char* pool[] = {"a", "b", "c", "d"};
    int labels = uniform(rng, 2, 4);
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    std::vector<pathforge::SchemaEdge> edges;
    int m = uniform(rng, 2, max_edges);
    for (int i = 0; i < m; ++i) {
        std::string l = pool[uniform(rng, 0, labels - 1)];
        std::string s = "N" + std::to_string(uniform(rng, 0, n - 1));
        std::string t = "N" + std::to_string(uniform(rng, 0, n - 1));
        if (seen.emplace(s, l, t).second) edges.push_back({l, s, t});
    }
    return pathforge::GraphSchema(nodes, edges);
}

inline PathExpr atom(std::mt19937_64& rng, const std::vector<std::string>& labels) {
    const std::string& l = labels[uniform(rng, 0, static_cast<int>(labels.size()) - 1)];
    return chance(rng, 0.15) ? PathExpr::reverse(l) : PathExpr::label(l);
}

/// Unannotated expression of depth at most `depth`.
inline PathExpr expr(std::mt19937_64& rng, const std::vector<std::string>& labels, int depth) {
    if (depth <= 1 || chance(rng, 0.25)) return atom(rng, labels);
    int pick = uniform(rng, 0, 99);
    auto sub = [&]() { return expr(rng, labels, depth - 1); };
    if (pick < 32) return PathExpr::concat(sub(), sub());
    if (pick < 47) return PathExpr::alt(sub(), sub());
    if (pick < 55) return PathExpr::conj(sub(), sub());
    if (pick < 65) return PathExpr::branch_right(sub(), sub());
    if (pick < 73) return PathExpr::branch_left(sub(), sub());
    if (pick < 95) return PathExpr::plus(sub());
    int lo = uniform(rng, 1, 2);
    return PathExpr::repeat(sub(), lo, lo + uniform(rng, 0, 1));
}

/// A one- or two-atom query over `expr`-style atoms, sometimes a union and
/// sometimes with a label atom or a repeated variable.
inline pathforge::UcqtQuery query(std::mt19937_64& rng, const pathforge::GraphSchema& s, int depth) {
    std::vector<std::string> labels(s.edge_labels().begin(), s.edge_labels().end());
    std::vector<std::string> node_labels;
    for (const auto& n : s.nodes()) node_labels.push_back(n.label);
    auto conjunct = [&](bool cyclic) {
        pathforge::Conjunct c;
        if (cyclic) {
            c.relations.push_back({"x", expr(rng, labels, depth), "x"});
            return c;
        }
        if (chance(rng, 0.3)) {
            c.relations.push_back({"x", expr(rng, labels, depth - 1), "z"});
            c.relations.push_back({"z", expr(rng, labels, depth - 1), "y"});
            if (chance(rng, 0.5)) {
                c.label_atoms.push_back({"z", {node_labels[uniform(rng, 0, static_cast<int>(node_labels.size()) - 1)]}});
            }
        } else {
            c.relations.push_back({"x", expr(rng, labels, depth), "y"});
        }
        if (chance(rng, 0.15)) {
            c.label_atoms.push_back({"x", {node_labels[uniform(rng, 0, static_cast<int>(node_labels.size()) - 1)]}});
        }
        return c;
    };
    pathforge::UcqtQuery q;
    bool cyclic = chance(rng, 0.1);
    q.head = cyclic ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
    q.disjuncts.push_back(conjunct(cyclic));
    if (chance(rng, 0.2)) q.disjuncts.push_back(conjunct(cyclic));
    return q;
}

}  // namespace randgen
