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

#include "pathforge/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

namespace pathforge {

namespace {

void normalize(PairSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

PairSet set_union(const PairSet& a, const PairSet& b) {
    PairSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

PairSet set_intersection(const PairSet& a, const PairSet& b) {
    PairSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

PairSet set_difference(const PairSet& a, const PairSet& b) {
    PairSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// a ∘ b, optionally requiring the junction node to carry one of `junction`.
PairSet compose(const PairSet& a, const PairSet& b, const GraphDB& db, const LabelSet* junction = nullptr) {
    PairSet out;
    for (const auto& [x, y] : a) {
        if (junction && !junction->count(db.node(y).label)) continue;
        auto lo = std::lower_bound(b.begin(), b.end(), NodePair{y, 0});
        for (auto it = lo; it != b.end() && it->first == y; ++it) out.emplace_back(x, it->second);
    }
    normalize(out);
    return out;
}

std::vector<NodeIndex> domain(const PairSet& s) {
    std::vector<NodeIndex> out;
    for (const auto& p : s) {
        if (out.empty() || out.back() != p.first) out.push_back(p.first);
    }
    return out;
}

class Evaluator {
  public:
    Evaluator(const GraphDB& db, const EvalOptions& options, EvalStats* stats)
        : db_(db), options_(options), stats_(stats) {}

    PairSet run(const PathExpr& e) {
        PairSet out = step(e);
        if (stats_) stats_->record(out.size());
        return out;
    }

  private:
    PairSet step(const PathExpr& e) {
        switch (e.op()) {
            case PathOp::Label: return db_.edges_with_label(e.name());
            case PathOp::Reverse: {
                PairSet out;
                for (const auto& [s, t] : db_.edges_with_label(e.name())) out.emplace_back(t, s);
                normalize(out);
                return out;
            }
            case PathOp::Concat: return compose(run(e.lhs()), run(e.rhs()), db_);
            case PathOp::AnnConcat: return compose(run(e.lhs()), run(e.rhs()), db_, &e.labels());
            case PathOp::Union: return set_union(run(e.lhs()), run(e.rhs()));
            case PathOp::Conj: return set_intersection(run(e.lhs()), run(e.rhs()));
            case PathOp::BranchRight: {
                PairSet main = run(e.main());
                auto dom = domain(run(e.test()));
                PairSet out;
                for (const auto& p : main) {
                    if (std::binary_search(dom.begin(), dom.end(), p.second)) out.push_back(p);
                }
                return out;
            }
            case PathOp::BranchLeft: {
                auto dom = domain(run(e.test()));
                PairSet main = run(e.main());
                PairSet out;
                for (const auto& p : main) {
                    if (std::binary_search(dom.begin(), dom.end(), p.first)) out.push_back(p);
                }
                return out;
            }
            case PathOp::Plus: return closure(run(e.inner()));
            case PathOp::Repeat: {
                PairSet base = run(e.inner());
                PairSet power = base;
                for (int i = 1; i < e.min_count(); ++i) power = compose(power, base, db_);
                PairSet out = power;
                for (int i = e.min_count(); i < e.max_count(); ++i) {
                    power = compose(power, base, db_);
                    out = set_union(out, power);
                }
                return out;
            }
        }
        throw std::logic_error("unhandled operator");
    }

    PairSet closure(const PairSet& base) {
        PairSet acc = base;
        if (options_.naive_closure) {
            for (;;) {
                PairSet next = compose(acc, base, db_);
                count_closure(next.size());
                PairSet grown = set_union(acc, next);
                if (grown.size() == acc.size()) return acc;
                acc = std::move(grown);
            }
        }
        PairSet delta = base;
        while (!delta.empty()) {
            PairSet next = compose(delta, base, db_);
            count_closure(next.size());
            delta = set_difference(next, acc);
            acc = set_union(acc, delta);
        }
        return acc;
    }

    void count_closure(std::size_t n) {
        if (!stats_) return;
        stats_->closure_pairs += n;
        stats_->record(n);
    }

    const GraphDB& db_;
    const EvalOptions& options_;
    EvalStats* stats_;
};

/// Backtracking join over the relation atoms of one conjunct.
class ConjunctSolver {
  public:
    ConjunctSolver(const Conjunct& c, const std::vector<std::string>& head, const GraphDB& db,
                   std::map<std::string, PairSet>& cache, const EvalOptions& options, EvalStats* stats)
        : db_(db), head_(head) {
        for (const auto& v : c.variables()) var_ids_.emplace(v, var_ids_.size());
        binding_.assign(var_ids_.size(), std::nullopt);
        allowed_.resize(var_ids_.size());
        for (const auto& la : c.label_atoms) {
            auto& slot = allowed_[var_ids_.at(la.var)];
            if (!slot) {
                slot = la.labels;
            } else {
                LabelSet both;
                std::set_intersection(slot->begin(), slot->end(), la.labels.begin(), la.labels.end(),
                                      std::inserter(both, both.end()));
                slot = both;
            }
        }
        for (const auto& r : c.relations) {
            std::string key = to_string(r.expr);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, Evaluator(db, options, stats).run(r.expr)).first;
            Atom a{var_ids_.at(r.src), var_ids_.at(r.trg), &it->second, {}};
            a.backward = it->second;
            for (auto& p : a.backward) std::swap(p.first, p.second);
            normalize(a.backward);
            atoms_.push_back(std::move(a));
        }
        used_.assign(atoms_.size(), false);
    }

    void solve(std::set<std::vector<NodeIndex>>& out) { search(atoms_.size(), out); }

  private:
    struct Atom {
        std::size_t src;
        std::size_t trg;
        const PairSet* forward;
        PairSet backward;
    };

    bool admissible(std::size_t var, NodeIndex n) const {
        const auto& allowed = allowed_[var];
        return !allowed || allowed->count(db_.node(n).label) > 0;
    }

    std::size_t pick() const {
        std::size_t best = atoms_.size();
        long best_score = 0;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (used_[i]) continue;
            const Atom& a = atoms_[i];
            long bound = (binding_[a.src] ? 1 : 0) + (binding_[a.trg] ? 1 : 0);
            long score = bound * 1'000'000'000L - static_cast<long>(a.forward->size());
            if (best == atoms_.size() || score > best_score) {
                best = i;
                best_score = score;
            }
        }
        return best;
    }

    bool bind(std::size_t var, NodeIndex n, std::vector<std::size_t>& newly) {
        if (binding_[var]) return *binding_[var] == n;
        if (!admissible(var, n)) return false;
        binding_[var] = n;
        newly.push_back(var);
        return true;
    }

    void search(std::size_t remaining, std::set<std::vector<NodeIndex>>& out) {
        if (remaining == 0) {
            std::vector<NodeIndex> tuple;
            for (const auto& h : head_) tuple.push_back(*binding_[var_ids_.at(h)]);
            out.insert(std::move(tuple));
            return;
        }
        std::size_t i = pick();
        used_[i] = true;
        const Atom& a = atoms_[i];
        auto try_pair = [&](NodeIndex s, NodeIndex t) {
            std::vector<std::size_t> newly;
            if (bind(a.src, s, newly) && bind(a.trg, t, newly)) search(remaining - 1, out);
            for (auto v : newly) binding_[v].reset();
        };
        if (binding_[a.src]) {
            NodeIndex s = *binding_[a.src];
            auto lo = std::lower_bound(a.forward->begin(), a.forward->end(), NodePair{s, 0});
            for (auto it = lo; it != a.forward->end() && it->first == s; ++it) try_pair(s, it->second);
        } else if (binding_[a.trg]) {
            NodeIndex t = *binding_[a.trg];
            auto lo = std::lower_bound(a.backward.begin(), a.backward.end(), NodePair{t, 0});
            for (auto it = lo; it != a.backward.end() && it->first == t; ++it) try_pair(it->second, t);
        } else {
            for (const auto& [s, t] : *a.forward) try_pair(s, t);
        }
        used_[i] = false;
    }

    const GraphDB& db_;
    const std::vector<std::string>& head_;
    std::map<std::string, std::size_t> var_ids_;
    std::vector<std::optional<NodeIndex>> binding_;
    std::vector<std::optional<LabelSet>> allowed_;
    std::vector<Atom> atoms_;
    std::vector<bool> used_;
};

}  // namespace

PairSet eval_path(const PathExpr& expr, const GraphDB& db, const EvalOptions& options, EvalStats* stats) {
    return Evaluator(db, options, stats).run(expr);
}

std::vector<ResultTuple> eval_ucqt(const UcqtQuery& query, const GraphDB& db, const EvalOptions& options,
                                   EvalStats* stats) {
    std::map<std::string, PairSet> cache;
    std::set<std::vector<NodeIndex>> found;
    for (const auto& c : query.disjuncts) ConjunctSolver(c, query.head, db, cache, options, stats).solve(found);
    std::vector<ResultTuple> out;
    for (const auto& tuple : found) {
        ResultTuple row;
        for (auto n : tuple) row.push_back(db.node(n).id);
        out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<std::string, std::string>> pair_ids(const PairSet& pairs, const GraphDB& db) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [s, t] : pairs) out.emplace_back(db.node(s).id, db.node(t).id);
    std::sort(out.begin(), out.end());
    return out;
}

GraphDB gen_db(const GraphSchema& schema, std::uint64_t seed, int nodes_per_label, double edge_prob) {
    if (nodes_per_label < 0) throw std::invalid_argument("nodes_per_label must be non-negative");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge_prob must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> small(0, 99);
    std::uniform_int_distribution<int> month(1, 12);
    std::uniform_int_distribution<int> day(1, 28);
    std::uniform_real_distribution<double> real(0.0, 100.0);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution keep(edge_prob);

    auto random_value = [&](DataType type) -> PropertyValue {
        char buf[32];
        switch (type) {
            case DataType::Int: return {type, std::to_string(small(rng))};
            case DataType::Float:
                std::snprintf(buf, sizeof buf, "%.2f", real(rng));
                return {type, buf};
            case DataType::Bool: return {type, coin(rng) ? "true" : "false"};
            case DataType::Date:
                std::snprintf(buf, sizeof buf, "20%02d-%02d-%02d", small(rng) % 30, month(rng), day(rng));
                return {type, buf};
            case DataType::String: break;
        }
        return {DataType::String, "s" + std::to_string(small(rng))};
    };

    std::vector<DbNode> nodes;
    std::map<std::string, std::vector<std::string>> ids_by_label;
    for (const auto& sn : schema.nodes()) {
        for (int i = 0; i < nodes_per_label; ++i) {
            DbNode n{sn.label + "_" + std::to_string(i), sn.label, {}};
            for (const auto& [key, type] : sn.properties) n.properties.emplace(key, random_value(type));
            ids_by_label[sn.label].push_back(n.id);
            nodes.push_back(std::move(n));
        }
    }
    std::vector<DbEdge> edges;
    for (const auto& se : schema.edges()) {
        for (const auto& s : ids_by_label[se.src]) {
            for (const auto& t : ids_by_label[se.trg]) {
                if (keep(rng)) edges.push_back({s, se.label, t});
            }
        }
    }
    return GraphDB(std::move(nodes), std::move(edges));
}

}  // namespace pathforge
