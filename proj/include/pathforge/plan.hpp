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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pathforge/graph_db.hpp"
#include "pathforge/path_expr.hpp"
#include "pathforge/ucqt.hpp"

namespace pathforge {

/**
 * Re-joins relation atoms through body variables that only link two atoms
 * end to start. A label atom on such a variable becomes the junction
 * annotation of the fused concatenation. Answers are unchanged.
 */
UcqtQuery fuse_chains(const UcqtQuery& query);

struct RelPlan;
using RelPlanPtr = std::shared_ptr<const RelPlan>;

/// Relational plan producing a binary (Sr, Tr) relation.
struct RelPlan {
    enum class Kind {
        EdgeScan,     // table, reversed
        Chain,        // steps joined Tr=Sr; junctions[i] semi-joins steps[i+1] with node tables
        Union,        // lhs, rhs
        Intersect,    // lhs, rhs
        ExistsRight,  // lhs rows whose Tr is the Sr of some rhs row
        ExistsLeft,   // lhs rows whose Sr is the Sr of some rhs row
        ClosureRef,   // closure
    };

    Kind kind = Kind::EdgeScan;
    std::string table;
    bool reversed = false;
    std::vector<RelPlanPtr> steps;
    std::vector<std::optional<LabelSet>> junctions;
    RelPlanPtr lhs;
    RelPlanPtr rhs;
    int closure = 0;
};

/// Recursive relation `tc_<id>` = transitive closure of `base`.
struct ClosureDef {
    int id = 0;
    RelPlanPtr base;
};

struct AtomPlan {
    RelPlanPtr rel;
    std::string src;
    std::string trg;
};

struct ConjunctPlan {
    std::vector<AtomPlan> atoms;
    std::vector<LabelAtom> semijoins;
};

/// An empty disjunct list is the empty union.
struct QueryPlan {
    std::vector<std::string> head;
    std::vector<ClosureDef> closures;  // dependencies before dependants
    std::vector<ConjunctPlan> disjuncts;
};

/// Fuses chains, expands repetition and compiles every atom. Closures are
/// numbered in post-order, left to right.
QueryPlan build_plan(const UcqtQuery& query);

/// Edge tables with (Sr, Tr) rows and node tables with Sr rows, keyed by label.
struct RelationalDb {
    std::map<std::string, std::set<std::pair<std::string, std::string>>> edge_tables;
    std::map<std::string, std::set<std::string>> node_tables;
};

RelationalDb encode_relational(const GraphDB& db);

/// Executes a plan over the relational encoding; rows sorted, distinct.
std::vector<std::vector<std::string>> interpret_plan(const QueryPlan& plan, const RelationalDb& rdb);

}  // namespace pathforge
