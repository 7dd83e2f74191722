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
#include <set>
#include <string>
#include <vector>

#include "pathforge/path_expr.hpp"
#include "pathforge/schema.hpp"

namespace pathforge {

/// (source label, annotated expression, target label).
struct SchemaTriple {
    std::string src;
    PathExpr expr;
    std::string trg;
};

bool operator==(const SchemaTriple& a, const SchemaTriple& b);
std::string to_string(const SchemaTriple& t);

/// Sorts by (src, printed expression, trg) and removes duplicates.
void canonicalize(std::vector<SchemaTriple>& triples);

struct InferOptions {
    /// Simple paths enumerated per closure before falling back to `p+`.
    std::size_t max_paths = 10000;
};

struct InferTraceRow {
    PathExpr subterm;
    std::vector<SchemaTriple> triples;
};

struct InferDiagnostics {
    std::vector<std::string> warnings;
    bool path_cap_hit = false;
    /// Triples for every subterm, in post-order.
    std::vector<InferTraceRow> trace;
};

/// One triple per schema edge.
std::vector<SchemaTriple> basic_triples(const GraphSchema& schema);

/**
 * Every schema triple compatible with `expr`. The input must be free of
 * Repeat nodes. The result is canonical (sorted, deduplicated).
 */
std::vector<SchemaTriple> infer(const PathExpr& expr, const GraphSchema& schema, const InferOptions& options = {},
                                InferDiagnostics* diag = nullptr);

/// Directed multigraph over node labels with one arc per triple.
struct TripleGraph {
    std::vector<std::string> vertices;  // sorted
    std::vector<SchemaTriple> arcs;     // canonical order

    static TripleGraph build(const std::vector<SchemaTriple>& triples);

    /// Vertices lying on some cycle (including self loops).
    std::set<std::string> cycle_vertices() const;
};

/**
 * Closure typing. Enumerates the simple paths of the triple graph of
 * `triples` (a path may close back onto its first vertex). A path touching
 * a cycle vertex yields (A, expr+, B); any other path yields the annotated
 * concatenation of its arcs.
 */
std::vector<SchemaTriple> plus_comp(const PathExpr& expr, const std::vector<SchemaTriple>& triples,
                                    const InferOptions& options = {}, InferDiagnostics* diag = nullptr);

}  // namespace pathforge
