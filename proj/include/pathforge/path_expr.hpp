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
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pathforge {

using LabelSet = std::set<std::string>;

enum class PathOp : std::uint8_t {
    Label,
    Reverse,
    Concat,
    AnnConcat,
    Union,
    Conj,
    BranchRight,  // main[test]
    BranchLeft,   // [test]main
    Plus,
    Repeat,
};

/**
 * Immutable Tarski-algebra path expression.
 *
 * One type covers both plain and annotated expressions: an annotated
 * expression is simply one containing AnnConcat nodes. Nodes are shared,
 * so copies are cheap and values may be handed across threads freely.
 *
 * Operand accessors by operator:
 *   Concat/AnnConcat/Union/Conj   lhs(), rhs()
 *   BranchRight  main() == lhs(), test() == rhs()
 *   BranchLeft   test() == lhs(), main() == rhs()
 *   Plus/Repeat  inner() == lhs()
 */
class PathExpr {
  public:
    static PathExpr label(std::string name);
    static PathExpr reverse(std::string name);
    static PathExpr concat(PathExpr lhs, PathExpr rhs);
    static PathExpr annotated_concat(PathExpr lhs, LabelSet labels, PathExpr rhs);
    static PathExpr alt(PathExpr lhs, PathExpr rhs);
    static PathExpr conj(PathExpr lhs, PathExpr rhs);
    static PathExpr branch_right(PathExpr main, PathExpr test);
    static PathExpr branch_left(PathExpr test, PathExpr main);
    static PathExpr plus(PathExpr inner);
    static PathExpr repeat(PathExpr inner, int min, int max);

    PathOp op() const noexcept;
    bool is(PathOp op) const noexcept { return this->op() == op; }
    bool is_binary() const noexcept;
    bool is_concat() const noexcept { return is(PathOp::Concat) || is(PathOp::AnnConcat); }

    const std::string& name() const;
    const PathExpr& lhs() const;
    const PathExpr& rhs() const;
    const PathExpr& main() const;
    const PathExpr& test() const;
    const PathExpr& inner() const;
    const LabelSet& labels() const;
    int min_count() const;
    int max_count() const;

    /// Number of AST nodes.
    std::size_t size() const noexcept;
    std::size_t depth() const noexcept;

    friend bool operator==(const PathExpr& a, const PathExpr& b);
    friend bool operator!=(const PathExpr& a, const PathExpr& b) { return !(a == b); }

    struct Node;

  private:
    explicit PathExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Canonical concrete syntax; parse_path_expr(to_string(e)) == e.
std::string to_string(const PathExpr& expr);
std::ostream& operator<<(std::ostream& os, const PathExpr& expr);

/// Total order on printed form, used for canonical output ordering.
struct PathExprLess {
    bool operator()(const PathExpr& a, const PathExpr& b) const { return to_string(a) < to_string(b); }
};

/**
 * Parses the textual path syntax.
 *
 * Precedence from loosest to tightest: `|`, `&`, `/` (left-assoc, optionally
 * annotated as `/{A,B}`), branch brackets `p[q]` and `[q]p`, postfix `+` and
 * `{m,n}`. `-label` is reverse and only applies to a single edge label.
 * Throws ParseError.
 */
PathExpr parse_path_expr(std::string_view text);

/// Expands every Repeat node into a union of concatenations.
PathExpr desugar(const PathExpr& expr);

bool has_annotations(const PathExpr& expr);
bool has_repeat(const PathExpr& expr);
std::size_t count_plus(const PathExpr& expr);

/// Replaces every AnnConcat by plain Concat.
PathExpr strip_annotations(const PathExpr& expr);

/// A maximal run of (annotated) concatenations, viewed as steps with
/// junctions between them. junctions.size() == steps.size() - 1;
/// an empty optional is a plain `/` junction.
struct ConcatChain {
    std::vector<PathExpr> steps;
    std::vector<std::optional<LabelSet>> junctions;
};

ConcatChain flatten_concat(const PathExpr& expr);

/// Left-associated chain from steps and junctions. Requires at least one step.
PathExpr build_chain(const ConcatChain& chain);

/// Concatenates two expressions and re-associates the result to the left,
/// so equal chains always share one tree shape.
PathExpr concat_flat(const PathExpr& lhs, const std::optional<LabelSet>& junction, const PathExpr& rhs);

/// Re-associates every concatenation chain in the tree to the left.
PathExpr normalize_concat(const PathExpr& expr);

/// Edge labels mentioned anywhere in the expression.
std::set<std::string> edge_labels_of(const PathExpr& expr);

/// Node labels used in AnnConcat annotations.
std::set<std::string> annotation_labels_of(const PathExpr& expr);

std::string to_string(const LabelSet& labels);

}  // namespace pathforge
