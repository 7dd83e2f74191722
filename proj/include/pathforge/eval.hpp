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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pathforge/graph_db.hpp"
#include "pathforge/path_expr.hpp"
#include "pathforge/schema.hpp"
#include "pathforge/ucqt.hpp"

namespace pathforge {

using NodePair = std::pair<NodeIndex, NodeIndex>;

/// Sorted, duplicate-free set of node pairs.
using PairSet = std::vector<NodePair>;

struct EvalOptions {
    /// Recompute the whole closure each round instead of only the delta.
    bool naive_closure = false;
};

/// Work counters; all counts are in pairs.
struct EvalStats {
    std::size_t closure_pairs = 0;       // pairs produced inside closure iterations
    std::size_t materialized_pairs = 0;  // sum of the sizes of every intermediate set
    std::size_t peak_pairs = 0;          // largest single intermediate set

    void record(std::size_t n) {
        materialized_pairs += n;
        if (n > peak_pairs) peak_pairs = n;
    }
};

PairSet eval_path(const PathExpr& expr, const GraphDB& db, const EvalOptions& options = {},
                  EvalStats* stats = nullptr);

using ResultTuple = std::vector<std::string>;

/// Head-variable tuples of node ids, sorted and duplicate-free.
std::vector<ResultTuple> eval_ucqt(const UcqtQuery& query, const GraphDB& db, const EvalOptions& options = {},
                                   EvalStats* stats = nullptr);

std::vector<std::pair<std::string, std::string>> pair_ids(const PairSet& pairs, const GraphDB& db);

/**
 * Random database conforming to `schema`: `nodes_per_label` nodes per schema
 * node (ids `LABEL_i`) with typed random properties, and each schema edge
 * instantiated between every pair of matching nodes with probability
 * `edge_prob`. Identical arguments give identical databases.
 */
GraphDB gen_db(const GraphSchema& schema, std::uint64_t seed, int nodes_per_label, double edge_prob);

}  // namespace pathforge
