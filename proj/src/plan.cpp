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

#include "pathforge/plan.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace pathforge {

namespace {

/// Index of a variable that can be fused away, or nullopt.
struct FusionSite {
    std::size_t into;   // atom ending in v
    std::size_t from;   // atom starting at v
    std::optional<std::size_t> label_atom;
};

std::optional<FusionSite> find_fusion(const Conjunct& c, const std::set<std::string>& head) {
    std::map<std::string, std::vector<std::size_t>> as_src, as_trg, labels;
    for (std::size_t i = 0; i < c.relations.size(); ++i) {
        as_src[c.relations[i].src].push_back(i);
        as_trg[c.relations[i].trg].push_back(i);
    }
    for (std::size_t i = 0; i < c.label_atoms.size(); ++i) labels[c.label_atoms[i].var].push_back(i);

    for (std::size_t i = 0; i < c.relations.size(); ++i) {
        const std::string& v = c.relations[i].trg;
        if (head.count(v)) continue;
        if (as_trg[v].size() != 1 || as_src[v].size() != 1) continue;
        std::size_t j = as_src[v].front();
        if (j == i) continue;
        if (labels[v].size() > 1) continue;
        FusionSite site{i, j, std::nullopt};
        if (!labels[v].empty()) site.label_atom = labels[v].front();
        return site;
    }
    return std::nullopt;
}

class PlanBuilder {
  public:
    explicit PlanBuilder(QueryPlan& plan) : plan_(plan) {}

    RelPlanPtr compile(const PathExpr& e) {
        auto node = std::make_shared<RelPlan>();
        switch (e.op()) {
            case PathOp::Label:
            case PathOp::Reverse:
                node->kind = RelPlan::Kind::EdgeScan;
                node->table = e.name();
                node->reversed = e.is(PathOp::Reverse);
                break;
            case PathOp::Concat:
            case PathOp::AnnConcat: {
                ConcatChain chain = flatten_concat(e);
                node->kind = RelPlan::Kind::Chain;
                for (const auto& s : chain.steps) node->steps.push_back(compile(s));
                node->junctions = chain.junctions;
                break;
            }
            case PathOp::Union:
            case PathOp::Conj:
                node->kind = e.is(PathOp::Union) ? RelPlan::Kind::Union : RelPlan::Kind::Intersect;
                node->lhs = compile(e.lhs());
                node->rhs = compile(e.rhs());
                break;
            case PathOp::BranchRight:
            case PathOp::BranchLeft:
                node->kind = e.is(PathOp::BranchRight) ? RelPlan::Kind::ExistsRight : RelPlan::Kind::ExistsLeft;
                node->lhs = compile(e.main());
                node->rhs = compile(e.test());
                break;
            case PathOp::Plus: {
                std::string key = to_string(e.inner());
                node->kind = RelPlan::Kind::ClosureRef;
                auto it = closure_ids_.find(key);
                if (it != closure_ids_.end()) {
                    node->closure = it->second;
                    break;
                }
                RelPlanPtr base = compile(e.inner());
                int id = static_cast<int>(plan_.closures.size()) + 1;
                plan_.closures.push_back({id, base});
                closure_ids_.emplace(key, id);
                node->closure = id;
                break;
            }
            case PathOp::Repeat:
                return compile(desugar(e));
        }
        return node;
    }

  private:
    QueryPlan& plan_;
    std::map<std::string, int> closure_ids_;
};

using Rel = std::set<std::pair<std::string, std::string>>;

class Interpreter {
  public:
    Interpreter(const QueryPlan& plan, const RelationalDb& rdb) : plan_(plan), rdb_(rdb) {
        for (const auto& c : plan.closures) closures_[c.id] = closure(run(*c.base));
    }

    Rel run(const RelPlan& p) const {
        switch (p.kind) {
            case RelPlan::Kind::EdgeScan: {
                Rel out;
                auto it = rdb_.edge_tables.find(p.table);
                if (it == rdb_.edge_tables.end()) return out;
                for (const auto& [s, t] : it->second) {
                    if (p.reversed) {
                        out.emplace(t, s);
                    } else {
                        out.emplace(s, t);
                    }
                }
                return out;
            }
            case RelPlan::Kind::Chain: {
                Rel acc = run(*p.steps.front());
                for (std::size_t i = 1; i < p.steps.size(); ++i) {
                    Rel next = run(*p.steps[i]);
                    if (p.junctions[i - 1]) next = semijoin_src(next, *p.junctions[i - 1]);
                    acc = join(acc, next);
                }
                return acc;
            }
            case RelPlan::Kind::Union: {
                Rel out = run(*p.lhs);
                Rel r = run(*p.rhs);
                out.insert(r.begin(), r.end());
                return out;
            }
            case RelPlan::Kind::Intersect: {
                Rel l = run(*p.lhs);
                Rel r = run(*p.rhs);
                Rel out;
                std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.end()));
                return out;
            }
            case RelPlan::Kind::ExistsRight:
            case RelPlan::Kind::ExistsLeft: {
                std::set<std::string> keys;
                for (const auto& row : run(*p.rhs)) keys.insert(row.first);
                Rel out;
                for (const auto& row : run(*p.lhs)) {
                    const auto& probe = p.kind == RelPlan::Kind::ExistsRight ? row.second : row.first;
                    if (keys.count(probe)) out.insert(row);
                }
                return out;
            }
            case RelPlan::Kind::ClosureRef: return closures_.at(p.closure);
        }
        throw std::logic_error("unhandled plan node");
    }

    std::vector<std::vector<std::string>> answers() const {
        std::set<std::vector<std::string>> rows;
        for (const auto& d : plan_.disjuncts) {
            std::vector<Rel> rels;
            for (const auto& a : d.atoms) rels.push_back(run(*a.rel));
            std::map<std::string, std::string> binding;
            solve(d, rels, 0, binding, rows);
        }
        return {rows.begin(), rows.end()};
    }

  private:
    Rel semijoin_src(const Rel& r, const LabelSet& labels) const {
        Rel out;
        for (const auto& row : r) {
            if (has_label(row.first, labels)) out.insert(row);
        }
        return out;
    }

    bool has_label(const std::string& node, const LabelSet& labels) const {
        for (const auto& l : labels) {
            auto it = rdb_.node_tables.find(l);
            if (it != rdb_.node_tables.end() && it->second.count(node)) return true;
        }
        return false;
    }

    static Rel join(const Rel& a, const Rel& b) {
        std::multimap<std::string, std::string> by_src(b.begin(), b.end());
        Rel out;
        for (const auto& [x, y] : a) {
            auto [lo, hi] = by_src.equal_range(y);
            for (auto it = lo; it != hi; ++it) out.emplace(x, it->second);
        }
        return out;
    }

    static Rel closure(const Rel& base) {
        Rel acc = base;
        Rel delta = base;
        while (!delta.empty()) {
            Rel next;
            for (const auto& row : join(delta, base)) {
                if (!acc.count(row)) next.insert(row);
            }
            acc.insert(next.begin(), next.end());
            delta = std::move(next);
        }
        return acc;
    }

    void solve(const ConjunctPlan& d, const std::vector<Rel>& rels, std::size_t i,
               std::map<std::string, std::string>& binding, std::set<std::vector<std::string>>& rows) const {
        if (i == rels.size()) {
            for (const auto& sj : d.semijoins) {
                if (!has_label(binding.at(sj.var), sj.labels)) return;
            }
            std::vector<std::string> row;
            for (const auto& h : plan_.head) row.push_back(binding.at(h));
            rows.insert(std::move(row));
            return;
        }
        const AtomPlan& a = d.atoms[i];
        for (const auto& [s, t] : rels[i]) {
            std::vector<std::string> bound;
            auto bind = [&](const std::string& var, const std::string& value) {
                auto it = binding.find(var);
                if (it != binding.end()) return it->second == value;
                binding.emplace(var, value);
                bound.push_back(var);
                return true;
            };
            if (bind(a.src, s) && bind(a.trg, t)) solve(d, rels, i + 1, binding, rows);
            for (const auto& v : bound) binding.erase(v);
        }
    }

    const QueryPlan& plan_;
    const RelationalDb& rdb_;
    std::map<int, Rel> closures_;
};

}  // namespace

UcqtQuery fuse_chains(const UcqtQuery& query) {
    UcqtQuery out = query;
    std::set<std::string> head(query.head.begin(), query.head.end());
    for (auto& c : out.disjuncts) {
        while (auto site = find_fusion(c, head)) {
            const RelationAtom& a = c.relations[site->into];
            const RelationAtom& b = c.relations[site->from];
            std::optional<LabelSet> junction;
            if (site->label_atom) junction = c.label_atoms[*site->label_atom].labels;
            RelationAtom fused{a.src, concat_flat(a.expr, junction, b.expr), b.trg};
            std::size_t keep = std::min(site->into, site->from);
            std::size_t drop = std::max(site->into, site->from);
            c.relations[keep] = std::move(fused);
            c.relations.erase(c.relations.begin() + static_cast<long>(drop));
            if (site->label_atom) c.label_atoms.erase(c.label_atoms.begin() + static_cast<long>(*site->label_atom));
        }
    }
    return out;
}

QueryPlan build_plan(const UcqtQuery& query) {
    QueryPlan plan;
    plan.head = query.head;
    PlanBuilder builder(plan);
    for (const auto& c : fuse_chains(query).disjuncts) {
        ConjunctPlan cp;
        for (const auto& r : c.relations) cp.atoms.push_back({builder.compile(r.expr), r.src, r.trg});
        cp.semijoins = c.label_atoms;
        plan.disjuncts.push_back(std::move(cp));
    }
    return plan;
}

RelationalDb encode_relational(const GraphDB& db) {
    RelationalDb rdb;
    for (const auto& n : db.nodes()) rdb.node_tables[n.label].insert(n.id);
    for (const auto& e : db.edges()) rdb.edge_tables[e.label].emplace(e.src, e.trg);
    return rdb;
}

std::vector<std::vector<std::string>> interpret_plan(const QueryPlan& plan, const RelationalDb& rdb) {
    return Interpreter(plan, rdb).answers();
}

}  // namespace pathforge
