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

#include "pathforge/path_expr.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "text_cursor.hpp"

namespace pathforge {

struct PathExpr::Node {
    PathOp op;
    std::string name;
    LabelSet labels;
    std::optional<PathExpr> lhs;
    std::optional<PathExpr> rhs;
    int min = 0;
    int max = 0;
    std::size_t size = 1;
    std::size_t depth = 1;
};

namespace {

std::shared_ptr<PathExpr::Node> make_binary_node(PathOp op, PathExpr lhs, PathExpr rhs) {
    auto n = std::make_shared<PathExpr::Node>();
    n->op = op;
    n->size = 1 + lhs.size() + rhs.size();
    n->depth = 1 + std::max(lhs.depth(), rhs.depth());
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

void require_label_name(const std::string& name) {
    if (!detail::is_identifier(name)) throw std::invalid_argument("invalid edge label '" + name + "'");
}

}  // namespace

PathExpr PathExpr::label(std::string name) {
    require_label_name(name);
    auto n = std::make_shared<Node>();
    n->op = PathOp::Label;
    n->name = std::move(name);
    return PathExpr(std::move(n));
}

PathExpr PathExpr::reverse(std::string name) {
    require_label_name(name);
    auto n = std::make_shared<Node>();
    n->op = PathOp::Reverse;
    n->name = std::move(name);
    return PathExpr(std::move(n));
}

PathExpr PathExpr::concat(PathExpr lhs, PathExpr rhs) {
    return PathExpr(make_binary_node(PathOp::Concat, std::move(lhs), std::move(rhs)));
}

PathExpr PathExpr::annotated_concat(PathExpr lhs, LabelSet labels, PathExpr rhs) {
    if (labels.empty()) throw std::invalid_argument("annotation label set must not be empty");
    auto n = make_binary_node(PathOp::AnnConcat, std::move(lhs), std::move(rhs));
    n->labels = std::move(labels);
    return PathExpr(std::move(n));
}

PathExpr PathExpr::alt(PathExpr lhs, PathExpr rhs) {
    return PathExpr(make_binary_node(PathOp::Union, std::move(lhs), std::move(rhs)));
}

PathExpr PathExpr::conj(PathExpr lhs, PathExpr rhs) {
    return PathExpr(make_binary_node(PathOp::Conj, std::move(lhs), std::move(rhs)));
}

PathExpr PathExpr::branch_right(PathExpr main, PathExpr test) {
    return PathExpr(make_binary_node(PathOp::BranchRight, std::move(main), std::move(test)));
}

PathExpr PathExpr::branch_left(PathExpr test, PathExpr main) {
    return PathExpr(make_binary_node(PathOp::BranchLeft, std::move(test), std::move(main)));
}

PathExpr PathExpr::plus(PathExpr inner) {
    auto n = std::make_shared<Node>();
    n->op = PathOp::Plus;
    n->size = 1 + inner.size();
    n->depth = 1 + inner.depth();
    n->lhs = std::move(inner);
    return PathExpr(std::move(n));
}

PathExpr PathExpr::repeat(PathExpr inner, int min, int max) {
    if (min < 1 || max < min) {
        throw std::invalid_argument("repetition bounds must satisfy 1 <= min <= max");
    }
    auto n = std::make_shared<Node>();
    n->op = PathOp::Repeat;
    n->size = 1 + inner.size();
    n->depth = 1 + inner.depth();
    n->lhs = std::move(inner);
    n->min = min;
    n->max = max;
    return PathExpr(std::move(n));
}

PathOp PathExpr::op() const noexcept { return node_->op; }

bool PathExpr::is_binary() const noexcept {
    switch (node_->op) {
        case PathOp::Concat:
        case PathOp::AnnConcat:
        case PathOp::Union:
        case PathOp::Conj:
        case PathOp::BranchRight:
        case PathOp::BranchLeft:
            return true;
        default:
            return false;
    }
}

const std::string& PathExpr::name() const {
    if (!is(PathOp::Label) && !is(PathOp::Reverse)) throw std::logic_error("name() on a non-label node");
    return node_->name;
}

const PathExpr& PathExpr::lhs() const {
    if (!node_->lhs) throw std::logic_error("lhs() on a leaf node");
    return *node_->lhs;
}

const PathExpr& PathExpr::rhs() const {
    if (!node_->rhs) throw std::logic_error("rhs() on a non-binary node");
    return *node_->rhs;
}

const PathExpr& PathExpr::main() const {
    if (is(PathOp::BranchRight)) return lhs();
    if (is(PathOp::BranchLeft)) return rhs();
    throw std::logic_error("main() on a non-branch node");
}

const PathExpr& PathExpr::test() const {
    if (is(PathOp::BranchRight)) return rhs();
    if (is(PathOp::BranchLeft)) return lhs();
    throw std::logic_error("test() on a non-branch node");
}

const PathExpr& PathExpr::inner() const {
    if (!is(PathOp::Plus) && !is(PathOp::Repeat)) throw std::logic_error("inner() on a non-closure node");
    return lhs();
}

const LabelSet& PathExpr::labels() const {
    if (!is(PathOp::AnnConcat)) throw std::logic_error("labels() on a non-annotated node");
    return node_->labels;
}

int PathExpr::min_count() const { return node_->min; }
int PathExpr::max_count() const { return node_->max; }
std::size_t PathExpr::size() const noexcept { return node_->size; }
std::size_t PathExpr::depth() const noexcept { return node_->depth; }

bool operator==(const PathExpr& a, const PathExpr& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op || x.size != y.size) return false;
    switch (x.op) {
        case PathOp::Label:
        case PathOp::Reverse:
            return x.name == y.name;
        case PathOp::Plus:
            return *x.lhs == *y.lhs;
        case PathOp::Repeat:
            return x.min == y.min && x.max == y.max && *x.lhs == *y.lhs;
        case PathOp::AnnConcat:
            if (x.labels != y.labels) return false;
            [[fallthrough]];
        default:
            return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
    }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; higher binds tighter.
enum Level : int { kUnion = 1, kConj = 2, kConcat = 3, kBranch = 4, kPostfix = 5, kAtom = 6 };

int level_of(const PathExpr& e) {
    switch (e.op()) {
        case PathOp::Union: return kUnion;
        case PathOp::Conj: return kConj;
        case PathOp::Concat:
        case PathOp::AnnConcat: return kConcat;
        case PathOp::BranchRight:
        case PathOp::BranchLeft: return kBranch;
        case PathOp::Plus:
        case PathOp::Repeat: return kPostfix;
        default: return kAtom;
    }
}

void print(std::string& out, const PathExpr& e, int min_level);

void print_at(std::string& out, const PathExpr& e, int min_level, bool force_parens = false) {
    if (force_parens || level_of(e) < min_level) {
        out += '(';
        print(out, e, kUnion);
        out += ')';
    } else {
        print(out, e, min_level);
    }
}

void print(std::string& out, const PathExpr& e, int) {
    switch (e.op()) {
        case PathOp::Label:
            out += e.name();
            return;
        case PathOp::Reverse:
            out += '-';
            out += e.name();
            return;
        case PathOp::Union:
            print_at(out, e.lhs(), kUnion);
            out += '|';
            print_at(out, e.rhs(), kConj);
            return;
        case PathOp::Conj:
            print_at(out, e.lhs(), kConj);
            out += '&';
            print_at(out, e.rhs(), kConcat);
            return;
        case PathOp::Concat:
            print_at(out, e.lhs(), kConcat);
            out += '/';
            print_at(out, e.rhs(), kBranch);
            return;
        case PathOp::AnnConcat:
            print_at(out, e.lhs(), kConcat);
            out += '/';
            out += to_string(e.labels());
            print_at(out, e.rhs(), kBranch);
            return;
        case PathOp::BranchRight:
            // `[t]m[u]` reads as `[t](m[u])`, so a left branch as main needs parens.
            print_at(out, e.main(), kBranch, e.main().is(PathOp::BranchLeft));
            out += '[';
            print(out, e.test(), kUnion);
            out += ']';
            return;
        case PathOp::BranchLeft:
            out += '[';
            print(out, e.test(), kUnion);
            out += ']';
            print_at(out, e.main(), kBranch);
            return;
        case PathOp::Plus:
            print_at(out, e.inner(), kAtom);
            out += '+';
            return;
        case PathOp::Repeat:
            print_at(out, e.inner(), kAtom);
            out += '{' + std::to_string(e.min_count()) + ',' + std::to_string(e.max_count()) + '}';
            return;
    }
}

}  // namespace

std::string to_string(const LabelSet& labels) {
    std::string out = "{";
    bool first = true;
    for (const auto& l : labels) {
        if (!first) out += ',';
        out += l;
        first = false;
    }
    out += '}';
    return out;
}

std::string to_string(const PathExpr& expr) {
    std::string out;
    print(out, expr, kUnion);
    return out;
}

std::ostream& operator<<(std::ostream& os, const PathExpr& expr) { return os << to_string(expr); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

bool is_identifier(std::string_view text) {
    if (text.empty() || !is_ident_start(text.front())) return false;
    return std::all_of(text.begin(), text.end(), is_ident_char);
}

std::string TextCursor::identifier(const char* what) {
    skip_ws();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail(std::string("expected ") + what);
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
}

int TextCursor::integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 6) throw ParseError("integer too large", start);
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
}

LabelSet parse_label_set(TextCursor& cur) {
    cur.expect('{');
    LabelSet labels;
    do {
        labels.insert(cur.identifier("node label"));
    } while (cur.consume(','));
    cur.expect('}');
    return labels;
}

namespace {

PathExpr parse_union(TextCursor& cur);

PathExpr parse_atom(TextCursor& cur) {
    char c = cur.peek();
    if (c == '(') {
        cur.expect('(');
        PathExpr e = parse_union(cur);
        cur.expect(')');
        return e;
    }
    if (c == '-') {
        cur.expect('-');
        cur.skip_ws();
        if (!is_ident_start(cur.peek_raw())) cur.fail("reverse applies only to a single edge label");
        return PathExpr::reverse(cur.identifier("edge label"));
    }
    if (is_ident_start(c)) return PathExpr::label(cur.identifier("edge label"));
    if (c == '\0') cur.fail("unexpected end of input");
    cur.fail(std::string("unexpected character '") + c + "'");
}

PathExpr parse_postfix(TextCursor& cur) {
    PathExpr e = parse_atom(cur);
    for (;;) {
        if (cur.consume('+')) {
            e = PathExpr::plus(std::move(e));
        } else if (cur.peek() == '{') {
            std::size_t at = cur.pos();
            cur.expect('{');
            int lo = cur.integer();
            int hi = lo;
            if (cur.consume(',')) hi = cur.integer();
            cur.expect('}');
            if (lo < 1 || hi < lo) throw ParseError("repetition bounds must satisfy 1 <= min <= max", at);
            e = PathExpr::repeat(std::move(e), lo, hi);
        } else {
            return e;
        }
    }
}

PathExpr parse_branch(TextCursor& cur) {
    if (cur.consume('[')) {
        PathExpr test = parse_union(cur);
        cur.expect(']');
        PathExpr main = parse_branch(cur);
        return PathExpr::branch_left(std::move(test), std::move(main));
    }
    PathExpr e = parse_postfix(cur);
    while (cur.consume('[')) {
        PathExpr test = parse_union(cur);
        cur.expect(']');
        e = PathExpr::branch_right(std::move(e), std::move(test));
    }
    return e;
}

PathExpr parse_concat(TextCursor& cur) {
    PathExpr e = parse_branch(cur);
    while (cur.consume('/')) {
        if (cur.peek() == '{') {
            LabelSet labels = parse_label_set(cur);
            e = PathExpr::annotated_concat(std::move(e), std::move(labels), parse_branch(cur));
        } else {
            e = PathExpr::concat(std::move(e), parse_branch(cur));
        }
    }
    return e;
}

PathExpr parse_conj(TextCursor& cur) {
    PathExpr e = parse_concat(cur);
    // `&&` separates UCQT atoms and never belongs to a path.
    while (cur.peek() == '&' && cur.peek_raw(1) != '&') {
        cur.expect('&');
        e = PathExpr::conj(std::move(e), parse_concat(cur));
    }
    return e;
}

PathExpr parse_union(TextCursor& cur) {
    PathExpr e = parse_conj(cur);
    while (cur.peek() == '|' && cur.peek_raw(1) != '|') {
        cur.expect('|');
        e = PathExpr::alt(std::move(e), parse_conj(cur));
    }
    return e;
}

}  // namespace

PathExpr parse_path(TextCursor& cur) { return parse_union(cur); }

}  // namespace detail

PathExpr parse_path_expr(std::string_view text) {
    detail::TextCursor cur(text);
    if (cur.at_end()) cur.fail("empty path expression");
    PathExpr e = detail::parse_path(cur);
    if (!cur.at_end()) cur.fail(std::string("unexpected character '") + cur.peek() + "'");
    return e;
}

// ---------------------------------------------------------------------------
// Structural utilities

namespace {

template <typename Fn>
PathExpr rebuild(const PathExpr& e, Fn&& child) {
    switch (e.op()) {
        case PathOp::Label:
        case PathOp::Reverse:
            return e;
        case PathOp::Concat: return PathExpr::concat(child(e.lhs()), child(e.rhs()));
        case PathOp::AnnConcat: return PathExpr::annotated_concat(child(e.lhs()), e.labels(), child(e.rhs()));
        case PathOp::Union: return PathExpr::alt(child(e.lhs()), child(e.rhs()));
        case PathOp::Conj: return PathExpr::conj(child(e.lhs()), child(e.rhs()));
        case PathOp::BranchRight: return PathExpr::branch_right(child(e.main()), child(e.test()));
        case PathOp::BranchLeft: return PathExpr::branch_left(child(e.test()), child(e.main()));
        case PathOp::Plus: return PathExpr::plus(child(e.inner()));
        case PathOp::Repeat: return PathExpr::repeat(child(e.inner()), e.min_count(), e.max_count());
    }
    return e;
}

template <typename Pred>
bool any_node(const PathExpr& e, Pred&& pred) {
    if (pred(e)) return true;
    if (e.is(PathOp::Label) || e.is(PathOp::Reverse)) return false;
    if (any_node(e.lhs(), pred)) return true;
    return e.is_binary() && any_node(e.rhs(), pred);
}

PathExpr power(const PathExpr& e, int n) {
    PathExpr out = e;
    for (int i = 1; i < n; ++i) out = PathExpr::concat(out, e);
    return out;
}

}  // namespace

PathExpr desugar(const PathExpr& expr) {
    if (expr.is(PathOp::Repeat)) {
        PathExpr inner = desugar(expr.inner());
        PathExpr out = power(inner, expr.min_count());
        for (int k = expr.min_count() + 1; k <= expr.max_count(); ++k) out = PathExpr::alt(out, power(inner, k));
        return out;
    }
    if (!has_repeat(expr)) return expr;
    return rebuild(expr, [](const PathExpr& c) { return desugar(c); });
}

bool has_annotations(const PathExpr& expr) {
    return any_node(expr, [](const PathExpr& e) { return e.is(PathOp::AnnConcat); });
}

bool has_repeat(const PathExpr& expr) {
    return any_node(expr, [](const PathExpr& e) { return e.is(PathOp::Repeat); });
}

std::size_t count_plus(const PathExpr& expr) {
    std::size_t n = 0;
    any_node(expr, [&n](const PathExpr& e) {
        if (e.is(PathOp::Plus)) ++n;
        return false;
    });
    return n;
}

PathExpr strip_annotations(const PathExpr& expr) {
    if (!has_annotations(expr)) return expr;
    if (expr.is(PathOp::AnnConcat)) {
        return PathExpr::concat(strip_annotations(expr.lhs()), strip_annotations(expr.rhs()));
    }
    return rebuild(expr, [](const PathExpr& c) { return strip_annotations(c); });
}

namespace {

void flatten_into(const PathExpr& e, ConcatChain& chain) {
    if (!e.is_concat()) {
        chain.steps.push_back(e);
        return;
    }
    flatten_into(e.lhs(), chain);
    if (e.is(PathOp::AnnConcat)) {
        chain.junctions.emplace_back(e.labels());
    } else {
        chain.junctions.emplace_back(std::nullopt);
    }
    flatten_into(e.rhs(), chain);
}

PathExpr join_steps(PathExpr lhs, const std::optional<LabelSet>& junction, PathExpr rhs) {
    if (junction) return PathExpr::annotated_concat(std::move(lhs), *junction, std::move(rhs));
    return PathExpr::concat(std::move(lhs), std::move(rhs));
}

}  // namespace

ConcatChain flatten_concat(const PathExpr& expr) {
    ConcatChain chain;
    flatten_into(expr, chain);
    return chain;
}

PathExpr build_chain(const ConcatChain& chain) {
    if (chain.steps.empty()) throw std::invalid_argument("empty concatenation chain");
    if (chain.junctions.size() + 1 != chain.steps.size()) throw std::invalid_argument("chain junction count mismatch");
    PathExpr out = chain.steps.front();
    for (std::size_t i = 1; i < chain.steps.size(); ++i) out = join_steps(out, chain.junctions[i - 1], chain.steps[i]);
    return out;
}

PathExpr concat_flat(const PathExpr& lhs, const std::optional<LabelSet>& junction, const PathExpr& rhs) {
    ConcatChain chain = flatten_concat(lhs);
    ConcatChain right = flatten_concat(rhs);
    chain.junctions.push_back(junction);
    chain.steps.insert(chain.steps.end(), right.steps.begin(), right.steps.end());
    chain.junctions.insert(chain.junctions.end(), right.junctions.begin(), right.junctions.end());
    return build_chain(chain);
}

PathExpr normalize_concat(const PathExpr& expr) {
    if (expr.is_concat()) {
        ConcatChain chain = flatten_concat(expr);
        for (auto& s : chain.steps) s = normalize_concat(s);
        return build_chain(chain);
    }
    return rebuild(expr, [](const PathExpr& c) { return normalize_concat(c); });
}

std::set<std::string> edge_labels_of(const PathExpr& expr) {
    std::set<std::string> out;
    any_node(expr, [&out](const PathExpr& e) {
        if (e.is(PathOp::Label) || e.is(PathOp::Reverse)) out.insert(e.name());
        return false;
    });
    return out;
}

std::set<std::string> annotation_labels_of(const PathExpr& expr) {
    std::set<std::string> out;
    any_node(expr, [&out](const PathExpr& e) {
        if (e.is(PathOp::AnnConcat)) out.insert(e.labels().begin(), e.labels().end());
        return false;
    });
    return out;
}

}  // namespace pathforge
