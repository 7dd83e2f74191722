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

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pathforge/path_expr.hpp"

namespace pathforge {

struct RelationAtom {
    std::string src;
    PathExpr expr;
    std::string trg;
};

struct LabelAtom {
    std::string var;
    LabelSet labels;
};

/// One conjunct of a UCQT. Body variables are every variable of the atoms
/// that is not a head variable.
struct Conjunct {
    std::vector<RelationAtom> relations;
    std::vector<LabelAtom> label_atoms;

    std::set<std::string> variables() const;
    std::set<std::string> body_variables(const std::vector<std::string>& head) const;
};

/**
 * Union of conjunctive queries with path-expression atoms.
 *
 * An empty disjunct list is the empty union: a query with no answers,
 * printed as `x,y <- false`.
 */
struct UcqtQuery {
    std::vector<std::string> head;
    std::vector<Conjunct> disjuncts;

    bool is_empty_union() const { return disjuncts.empty(); }
};

/// Syntax: `x,y <- (x, expr, y) && z:{L1,L2} || (x, expr2, y)`.
/// Throws ParseError on malformed text and QueryError on scoping problems.
UcqtQuery parse_ucqt(std::string_view text);

/// Checks head non-empty, head variables occurring in every disjunct and
/// label-atom variables occurring in some relation atom. Throws QueryError.
void validate(const UcqtQuery& query);

std::string to_string(const RelationAtom& atom);
std::string to_string(const LabelAtom& atom);
std::string to_string(const Conjunct& conjunct);
std::string to_string(const UcqtQuery& query);

/// Variables of every disjunct, used to keep generated names fresh.
std::set<std::string> all_variables(const UcqtQuery& query);

}  // namespace pathforge
