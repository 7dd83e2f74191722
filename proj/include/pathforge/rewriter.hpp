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

#include "pathforge/inference.hpp"
#include "pathforge/schema.hpp"
#include "pathforge/simplifier.hpp"
#include "pathforge/ucqt.hpp"

namespace pathforge {

/// Label sets may be empty, meaning unconstrained.
struct MergedTriple {
    LabelSet src_set;
    PathExpr expr;
    LabelSet trg_set;
};

std::string to_string(const MergedTriple& t);

/// Groups triples by their annotation-free expression and unions the
/// endpoint sets and the annotations position by position.
std::vector<MergedTriple> merge_triples(const std::vector<SchemaTriple>& triples);

/// Drops annotations and endpoint sets that the schema already implies.
MergedTriple remove_redundant(const MergedTriple& mt, const GraphSchema& schema);

/// Node labels any source (resp. target) of a pair of `expr` can carry on a
/// database conforming to `schema`. Over-approximate.
LabelSet possible_sources(const PathExpr& expr, const GraphSchema& schema);
LabelSet possible_targets(const PathExpr& expr, const GraphSchema& schema);

/// `_g1`, `_g2`, ... skipping names already taken.
class FreshVars {
  public:
    explicit FreshVars(std::set<std::string> taken = {}) : taken_(std::move(taken)) {}
    std::string next();

  private:
    std::set<std::string> taken_;
    int counter_ = 0;
};

/// Translates an annotated expression between `alpha` and `beta` into a
/// conjunct. Unannotated runs of a chain stay a single relation atom.
Conjunct query_of(const std::string& alpha, const std::string& beta, const PathExpr& expr, FreshVars& fresh);

struct RewriteOptions {
    InferOptions infer;
    /// Alternatives per relation atom before the atom is kept as is.
    std::size_t max_alternatives = 64;
};

struct AtomReport {
    std::size_t disjunct = 0;
    RelationAtom original;
    PathExpr simplified;
    std::vector<RewriteStep> simplify_steps;
    std::vector<InferTraceRow> trace;
    std::vector<SchemaTriple> triples;
    std::vector<MergedTriple> merged;
    bool reverted = false;
    std::string note;
};

struct RewriteOutcome {
    UcqtQuery enriched;
    std::vector<AtomReport> atoms;
    std::vector<std::string> warnings;
    bool unsatisfiable = false;
    bool path_cap_hit = false;
};

/// The query with every unannotated relation atom desugared and simplified.
UcqtQuery simplify_query(const UcqtQuery& query);

/// Schema-enriched equivalent of `query`. Never throws on unsatisfiable
/// input; the result is then the empty union and a warning is recorded.
RewriteOutcome rewrite(const UcqtQuery& query, const GraphSchema& schema, const RewriteOptions& options = {});

}  // namespace pathforge
