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

#include "pathforge/rewriter.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pathforge {

namespace {

constexpr std::size_t kMaxConjunctExpansion = 4096;

LabelSet intersect(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

LabelSet unite(LabelSet a, const LabelSet& b) {
    a.insert(b.begin(), b.end());
    return a;
}

bool includes(const LabelSet& super, const LabelSet& sub) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

PathExpr merge_expr(const PathExpr& a, const PathExpr& b) {
    bool a_cat = a.is_concat();
    bool b_cat = b.is_concat();
    if (a_cat && b_cat) {
        PathExpr l = merge_expr(a.lhs(), b.lhs());
        PathExpr r = merge_expr(a.rhs(), b.rhs());
        if (a.is(PathOp::AnnConcat) && b.is(PathOp::AnnConcat)) {
            return PathExpr::annotated_concat(l, unite(a.labels(), b.labels()), r);
        }
        return PathExpr::concat(l, r);
    }
    if (a.op() != b.op()) throw std::logic_error("merge: shape mismatch between " + to_string(a) + " and " + to_string(b));
    switch (a.op()) {
        case PathOp::Label:
        case PathOp::Reverse:
            if (a.name() != b.name()) throw std::logic_error("merge: label mismatch");
            return a;
        case PathOp::Union: return PathExpr::alt(merge_expr(a.lhs(), b.lhs()), merge_expr(a.rhs(), b.rhs()));
        case PathOp::Conj: return PathExpr::conj(merge_expr(a.lhs(), b.lhs()), merge_expr(a.rhs(), b.rhs()));
        case PathOp::BranchRight:
            return PathExpr::branch_right(merge_expr(a.main(), b.main()), merge_expr(a.test(), b.test()));
        case PathOp::BranchLeft:
            return PathExpr::branch_left(merge_expr(a.test(), b.test()), merge_expr(a.main(), b.main()));
        case PathOp::Plus: return PathExpr::plus(merge_expr(a.inner(), b.inner()));
        case PathOp::Repeat:
            if (a.min_count() != b.min_count() || a.max_count() != b.max_count()) {
                throw std::logic_error("merge: repetition bounds mismatch");
            }
            return PathExpr::repeat(merge_expr(a.inner(), b.inner()), a.min_count(), a.max_count());
        default: break;
    }
    throw std::logic_error("merge: unexpected operator");
}

PathExpr drop_redundant(const PathExpr& e, const GraphSchema& schema) {
    switch (e.op()) {
        case PathOp::Label:
        case PathOp::Reverse: return e;
        case PathOp::Concat: return PathExpr::concat(drop_redundant(e.lhs(), schema), drop_redundant(e.rhs(), schema));
        case PathOp::AnnConcat: {
            PathExpr l = drop_redundant(e.lhs(), schema);
            PathExpr r = drop_redundant(e.rhs(), schema);
            if (includes(e.labels(), possible_targets(e.lhs(), schema)) ||
                includes(e.labels(), possible_sources(e.rhs(), schema))) {
                return PathExpr::concat(l, r);
            }
            return PathExpr::annotated_concat(l, e.labels(), r);
        }
        case PathOp::Union: return PathExpr::alt(drop_redundant(e.lhs(), schema), drop_redundant(e.rhs(), schema));
        case PathOp::Conj: return PathExpr::conj(drop_redundant(e.lhs(), schema), drop_redundant(e.rhs(), schema));
        case PathOp::BranchRight:
            return PathExpr::branch_right(drop_redundant(e.main(), schema), drop_redundant(e.test(), schema));
        case PathOp::BranchLeft:
            return PathExpr::branch_left(drop_redundant(e.test(), schema), drop_redundant(e.main(), schema));
        case PathOp::Plus: return PathExpr::plus(drop_redundant(e.inner(), schema));
        case PathOp::Repeat:
            return PathExpr::repeat(drop_redundant(e.inner(), schema), e.min_count(), e.max_count());
    }
    return e;
}

}  // namespace

std::string to_string(const MergedTriple& t) {
    auto side = [](const LabelSet& s) { return s.empty() ? std::string("*") : to_string(s); };
    return "(" + side(t.src_set) + ", " + to_string(t.expr) + ", " + side(t.trg_set) + ")";
}

std::vector<MergedTriple> merge_triples(const std::vector<SchemaTriple>& triples) {
    std::map<std::string, MergedTriple> groups;
    for (const auto& t : triples) {
        PathExpr shaped = normalize_concat(t.expr);
        std::string key = to_string(strip_annotations(shaped));
        auto it = groups.find(key);
        if (it == groups.end()) {
            groups.emplace(key, MergedTriple{{t.src}, shaped, {t.trg}});
        } else {
            it->second.src_set.insert(t.src);
            it->second.trg_set.insert(t.trg);
            it->second.expr = merge_expr(it->second.expr, shaped);
        }
    }
    std::vector<MergedTriple> out;
    for (auto& [key, mt] : groups) out.push_back(std::move(mt));
    return out;
}

LabelSet possible_sources(const PathExpr& e, const GraphSchema& schema) {
    switch (e.op()) {
        case PathOp::Label: return schema.sources_of(e.name());
        case PathOp::Reverse: return schema.targets_of(e.name());
        case PathOp::Concat:
        case PathOp::AnnConcat: return possible_sources(e.lhs(), schema);
        case PathOp::Union: return unite(possible_sources(e.lhs(), schema), possible_sources(e.rhs(), schema));
        case PathOp::Conj: return intersect(possible_sources(e.lhs(), schema), possible_sources(e.rhs(), schema));
        case PathOp::BranchRight: return possible_sources(e.main(), schema);
        case PathOp::BranchLeft:
            return intersect(possible_sources(e.main(), schema), possible_sources(e.test(), schema));
        case PathOp::Plus:
        case PathOp::Repeat: return possible_sources(e.inner(), schema);
    }
    return {};
}

LabelSet possible_targets(const PathExpr& e, const GraphSchema& schema) {
    switch (e.op()) {
        case PathOp::Label: return schema.targets_of(e.name());
        case PathOp::Reverse: return schema.sources_of(e.name());
        case PathOp::Concat:
        case PathOp::AnnConcat: return possible_targets(e.rhs(), schema);
        case PathOp::Union: return unite(possible_targets(e.lhs(), schema), possible_targets(e.rhs(), schema));
        case PathOp::Conj: return intersect(possible_targets(e.lhs(), schema), possible_targets(e.rhs(), schema));
        case PathOp::BranchRight:
            return intersect(possible_targets(e.main(), schema), possible_sources(e.test(), schema));
        case PathOp::BranchLeft: return possible_targets(e.main(), schema);
        case PathOp::Plus:
        case PathOp::Repeat: return possible_targets(e.inner(), schema);
    }
    return {};
}

MergedTriple remove_redundant(const MergedTriple& mt, const GraphSchema& schema) {
    MergedTriple out{mt.src_set, drop_redundant(mt.expr, schema), mt.trg_set};
    if (!out.src_set.empty() && includes(out.src_set, possible_sources(out.expr, schema))) out.src_set.clear();
    if (!out.trg_set.empty() && includes(out.trg_set, possible_targets(out.expr, schema))) out.trg_set.clear();
    return out;
}

std::string FreshVars::next() {
    for (;;) {
        std::string name = "_g" + std::to_string(++counter_);
        if (taken_.insert(name).second) return name;
    }
}

namespace {

void translate(const std::string& a, const std::string& b, const PathExpr& e, FreshVars& fresh, Conjunct& out) {
    if (!has_annotations(e)) {
        out.relations.push_back({a, e, b});
        return;
    }
    switch (e.op()) {
        case PathOp::Concat:
        case PathOp::AnnConcat: {
            ConcatChain chain = flatten_concat(e);
            // Groups are [first, last] step ranges; a group is either a run of
            // plain steps over plain junctions or one annotated step.
            std::vector<std::pair<std::size_t, std::size_t>> groups{{0, 0}};
            for (std::size_t k = 0; k + 1 < chain.steps.size(); ++k) {
                bool split = chain.junctions[k].has_value() || has_annotations(chain.steps[k]) ||
                             has_annotations(chain.steps[k + 1]);
                if (split) {
                    groups.push_back({k + 1, k + 1});
                } else {
                    groups.back().second = k + 1;
                }
            }
            std::vector<std::string> vars{a};
            for (std::size_t g = 1; g < groups.size(); ++g) {
                vars.push_back(fresh.next());
                const auto& junction = chain.junctions[groups[g].first - 1];
                if (junction) out.label_atoms.push_back({vars.back(), *junction});
            }
            vars.push_back(b);
            for (std::size_t g = 0; g < groups.size(); ++g) {
                auto [first, last] = groups[g];
                if (first == last && has_annotations(chain.steps[first])) {
                    translate(vars[g], vars[g + 1], chain.steps[first], fresh, out);
                    continue;
                }
                ConcatChain run;
                run.steps.assign(chain.steps.begin() + static_cast<long>(first),
                                 chain.steps.begin() + static_cast<long>(last) + 1);
                run.junctions.assign(last - first, std::nullopt);
                out.relations.push_back({vars[g], build_chain(run), vars[g + 1]});
            }
            return;
        }
        case PathOp::BranchRight: {
            std::string g = fresh.next();
            translate(a, b, e.main(), fresh, out);
            translate(b, g, e.test(), fresh, out);
            return;
        }
        case PathOp::BranchLeft: {
            std::string g = fresh.next();
            translate(a, g, e.test(), fresh, out);
            translate(a, b, e.main(), fresh, out);
            return;
        }
        case PathOp::Conj:
            translate(a, b, e.lhs(), fresh, out);
            translate(a, b, e.rhs(), fresh, out);
            return;
        default:
            out.relations.push_back({a, e, b});
            return;
    }
}

struct Alternative {
    std::vector<RelationAtom> relations;
    std::vector<LabelAtom> label_atoms;
};

/// Label atoms merged per variable by intersection, in first-seen order.
/// Returns false when some variable ends up with no admissible label.
bool merge_label_atoms(const std::vector<LabelAtom>& atoms, std::vector<LabelAtom>& out) {
    std::vector<std::string> order;
    std::map<std::string, LabelSet> sets;
    for (const auto& la : atoms) {
        auto it = sets.find(la.var);
        if (it == sets.end()) {
            order.push_back(la.var);
            sets.emplace(la.var, la.labels);
        } else {
            it->second = intersect(it->second, la.labels);
        }
    }
    for (const auto& v : order) {
        if (sets[v].empty()) return false;
        out.push_back({v, sets[v]});
    }
    return true;
}

}  // namespace

Conjunct query_of(const std::string& alpha, const std::string& beta, const PathExpr& expr, FreshVars& fresh) {
    Conjunct c;
    translate(alpha, beta, expr, fresh, c);
    return c;
}

UcqtQuery simplify_query(const UcqtQuery& query) {
    UcqtQuery out = query;
    for (auto& c : out.disjuncts) {
        for (auto& r : c.relations) {
            if (!has_annotations(r.expr)) r.expr = simplify(desugar(r.expr));
        }
    }
    return out;
}

RewriteOutcome rewrite(const UcqtQuery& query, const GraphSchema& schema, const RewriteOptions& options) {
    RewriteOutcome outcome;
    outcome.enriched.head = query.head;
    FreshVars fresh(all_variables(query));
    std::set<std::string> emitted;

    for (std::size_t di = 0; di < query.disjuncts.size(); ++di) {
        const Conjunct& conj = query.disjuncts[di];
        std::map<std::string, LabelSet> user;
        for (const auto& la : conj.label_atoms) {
            auto [it, fresh_var] = user.emplace(la.var, la.labels);
            if (!fresh_var) it->second = intersect(it->second, la.labels);
        }

        std::vector<std::vector<Alternative>> per_atom;
        std::vector<std::size_t> report_index;
        for (const auto& atom : conj.relations) {
            AtomReport rep{di, atom, atom.expr, {}, {}, {}, {}, false, {}};
            std::vector<Alternative> alts;

            if (has_annotations(atom.expr)) {
                rep.simplified = atom.expr;
                rep.reverted = true;
                rep.note = "already annotated; kept";
                alts.push_back({{atom}, {}});
            } else {
                rep.simplified = simplify(desugar(atom.expr), &rep.simplify_steps);
                InferDiagnostics diag;
                auto triples = infer(rep.simplified, schema, options.infer, &diag);
                rep.trace = std::move(diag.trace);
                outcome.warnings.insert(outcome.warnings.end(), diag.warnings.begin(), diag.warnings.end());
                outcome.path_cap_hit = outcome.path_cap_hit || diag.path_cap_hit;

                auto src_ok = user.find(atom.src);
                auto trg_ok = user.find(atom.trg);
                for (const auto& t : triples) {
                    if (src_ok != user.end() && !src_ok->second.count(t.src)) continue;
                    if (trg_ok != user.end() && !trg_ok->second.count(t.trg)) continue;
                    if (atom.src == atom.trg && t.src != t.trg) continue;
                    rep.triples.push_back(t);
                }
                for (const auto& mt : merge_triples(rep.triples)) rep.merged.push_back(remove_redundant(mt, schema));

                RelationAtom kept{atom.src, rep.simplified, atom.trg};
                if (rep.merged.empty()) {
                    rep.note = "no compatible schema triple";
                } else if (rep.merged.size() == 1 && rep.merged[0].src_set.empty() && rep.merged[0].trg_set.empty() &&
                           !has_annotations(rep.merged[0].expr) &&
                           normalize_concat(rep.merged[0].expr) == normalize_concat(rep.simplified)) {
                    rep.reverted = true;
                    rep.note = "reverted";
                    alts.push_back({{kept}, {}});
                } else if (rep.merged.size() > options.max_alternatives) {
                    rep.reverted = true;
                    rep.note = "too many alternatives; reverted";
                    outcome.warnings.push_back(std::to_string(rep.merged.size()) + " alternatives for " +
                                               to_string(atom) + " exceed the limit of " +
                                               std::to_string(options.max_alternatives) + "; atom kept");
                    alts.push_back({{kept}, {}});
                } else {
                    for (const auto& mt : rep.merged) {
                        Conjunct c = query_of(atom.src, atom.trg, mt.expr, fresh);
                        Alternative alt{std::move(c.relations), std::move(c.label_atoms)};
                        if (!mt.src_set.empty()) alt.label_atoms.push_back({atom.src, mt.src_set});
                        if (!mt.trg_set.empty()) alt.label_atoms.push_back({atom.trg, mt.trg_set});
                        alts.push_back(std::move(alt));
                    }
                }
            }
            report_index.push_back(outcome.atoms.size());
            outcome.atoms.push_back(std::move(rep));
            per_atom.push_back(std::move(alts));
        }

        // Revert the widest atoms until the cross product is affordable.
        auto product = [&per_atom] {
            std::size_t n = 1;
            for (const auto& alts : per_atom) n = std::min<std::size_t>(n * std::max<std::size_t>(alts.size(), 1), kMaxConjunctExpansion + 1);
            return n;
        };
        while (product() > kMaxConjunctExpansion) {
            auto widest = std::max_element(per_atom.begin(), per_atom.end(),
                                           [](const auto& x, const auto& y) { return x.size() < y.size(); });
            std::size_t i = static_cast<std::size_t>(widest - per_atom.begin());
            AtomReport& rep = outcome.atoms[report_index[i]];
            rep.reverted = true;
            rep.note = "conjunct expansion too large; reverted";
            *widest = {{{{rep.original.src, rep.simplified, rep.original.trg}}, {}}};
            outcome.warnings.push_back("expansion of disjunct " + std::to_string(di + 1) + " too large; " +
                                       to_string(rep.original) + " kept");
        }

        bool dead = std::any_of(per_atom.begin(), per_atom.end(), [](const auto& a) { return a.empty(); });
        std::vector<std::pair<std::string, Conjunct>> expansions;
        if (!dead) {
            std::vector<std::size_t> pick(per_atom.size(), 0);
            for (;;) {
                Conjunct c;
                std::vector<LabelAtom> labels = conj.label_atoms;
                for (std::size_t i = 0; i < per_atom.size(); ++i) {
                    const Alternative& alt = per_atom[i][pick[i]];
                    c.relations.insert(c.relations.end(), alt.relations.begin(), alt.relations.end());
                    labels.insert(labels.end(), alt.label_atoms.begin(), alt.label_atoms.end());
                }
                if (merge_label_atoms(labels, c.label_atoms)) expansions.emplace_back(to_string(c), std::move(c));
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == per_atom[i].size()) pick[i++] = 0;
                if (i == pick.size()) break;
            }
        }
        if (expansions.empty()) {
            if (query.disjuncts.size() > 1) {
                outcome.warnings.push_back("disjunct " + std::to_string(di + 1) + " is unsatisfiable under the schema");
            }
            continue;
        }
        std::sort(expansions.begin(), expansions.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [key, c] : expansions) {
            if (emitted.insert(key).second) outcome.enriched.disjuncts.push_back(std::move(c));
        }
    }

    if (outcome.enriched.disjuncts.empty()) {
        outcome.unsatisfiable = true;
        outcome.warnings.push_back("query is unsatisfiable under the schema");
    }
    return outcome;
}

}  // namespace pathforge
