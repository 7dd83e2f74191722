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

#include "pathforge/inference.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

namespace pathforge {

bool operator==(const SchemaTriple& a, const SchemaTriple& b) {
    return a.src == b.src && a.trg == b.trg && a.expr == b.expr;
}

std::string to_string(const SchemaTriple& t) { return "(" + t.src + ", " + to_string(t.expr) + ", " + t.trg + ")"; }

void canonicalize(std::vector<SchemaTriple>& triples) {
    std::vector<std::pair<std::tuple<std::string, std::string, std::string>, std::size_t>> keys;
    keys.reserve(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        keys.push_back({{triples[i].src, to_string(triples[i].expr), triples[i].trg}, i});
    }
    std::sort(keys.begin(), keys.end());
    std::vector<SchemaTriple> out;
    out.reserve(triples.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i > 0 && keys[i].first == keys[i - 1].first) continue;
        out.push_back(triples[keys[i].second]);
    }
    triples = std::move(out);
}

std::vector<SchemaTriple> basic_triples(const GraphSchema& schema) {
    std::vector<SchemaTriple> out;
    for (const auto& e : schema.edges()) out.push_back({e.src, PathExpr::label(e.label), e.trg});
    canonicalize(out);
    return out;
}

TripleGraph TripleGraph::build(const std::vector<SchemaTriple>& triples) {
    TripleGraph g;
    std::set<std::string> vs;
    for (const auto& t : triples) {
        vs.insert(t.src);
        vs.insert(t.trg);
    }
    g.vertices.assign(vs.begin(), vs.end());
    g.arcs = triples;
    canonicalize(g.arcs);
    return g;
}

std::set<std::string> TripleGraph::cycle_vertices() const {
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    auto index = [this](const std::string& v) {
        return static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
    };
    Graph g(vertices.size());
    std::set<std::string> out;
    for (const auto& a : arcs) {
        boost::add_edge(index(a.src), index(a.trg), g);
        if (a.src == a.trg) out.insert(a.src);
    }
    std::vector<int> component(vertices.size());
    int n = boost::strong_components(g, boost::make_iterator_property_map(component.begin(),
                                                                          boost::get(boost::vertex_index, g)));
    std::vector<int> size(static_cast<std::size_t>(n), 0);
    for (int c : component) ++size[static_cast<std::size_t>(c)];
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        if (size[static_cast<std::size_t>(component[v])] >= 2) out.insert(vertices[v]);
    }
    return out;
}

namespace {

class PathEnumerator {
  public:
    PathEnumerator(const TripleGraph& g, const PathExpr& closure, std::size_t cap)
        : g_(g), closure_(closure), cap_(cap), cycles_(g.cycle_vertices()) {
        for (std::size_t i = 0; i < g.arcs.size(); ++i) out_arcs_[g.arcs[i].src].push_back(i);
    }

    /// False when the cap was exceeded.
    bool run(std::vector<SchemaTriple>& out) {
        for (const auto& start : g_.vertices) {
            on_path_ = {start};
            if (!extend(start, start, std::nullopt, cycles_.count(start) > 0, out)) return false;
        }
        return true;
    }

  private:
    bool extend(const std::string& start, const std::string& at, const std::optional<PathExpr>& prefix,
                bool touches_cycle, std::vector<SchemaTriple>& out) {
        auto it = out_arcs_.find(at);
        if (it == out_arcs_.end()) return true;
        for (std::size_t ai : it->second) {
            const SchemaTriple& arc = g_.arcs[ai];
            bool closes = arc.trg == start;
            if (!closes && on_path_.count(arc.trg)) continue;
            if (++count_ > cap_) return false;

            bool touches = touches_cycle || cycles_.count(arc.trg) > 0;
            PathExpr expr = prefix ? concat_flat(*prefix, LabelSet{at}, arc.expr) : arc.expr;
            if (touches) {
                out.push_back({start, closure_, arc.trg});
            } else {
                out.push_back({start, expr, arc.trg});
            }
            if (closes) continue;
            on_path_.insert(arc.trg);
            bool ok = extend(start, arc.trg, expr, touches, out);
            on_path_.erase(arc.trg);
            if (!ok) return false;
        }
        return true;
    }

    const TripleGraph& g_;
    PathExpr closure_;
    std::size_t cap_;
    std::set<std::string> cycles_;
    std::map<std::string, std::vector<std::size_t>> out_arcs_;
    std::set<std::string> on_path_;
    std::size_t count_ = 0;
};

std::vector<SchemaTriple> reachable_closure(const TripleGraph& g, const PathExpr& closure) {
    std::map<std::string, std::set<std::string>> succ;
    for (const auto& a : g.arcs) succ[a.src].insert(a.trg);
    std::vector<SchemaTriple> out;
    for (const auto& s : g.vertices) {
        std::set<std::string> seen;
        std::vector<std::string> stack(succ[s].begin(), succ[s].end());
        while (!stack.empty()) {
            std::string v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second) continue;
            for (const auto& w : succ[v]) stack.push_back(w);
        }
        for (const auto& t : seen) out.push_back({s, closure, t});
    }
    return out;
}

class Inferencer {
  public:
    Inferencer(const GraphSchema& schema, const InferOptions& options, InferDiagnostics* diag)
        : schema_(schema), options_(options), diag_(diag) {}

    std::vector<SchemaTriple> run(const PathExpr& e) {
        std::vector<SchemaTriple> out = step(e);
        canonicalize(out);
        if (diag_) diag_->trace.push_back({e, out});
        return out;
    }

  private:
    std::vector<SchemaTriple> step(const PathExpr& e) {
        std::vector<SchemaTriple> out;
        switch (e.op()) {
            case PathOp::Label:
                for (const auto& se : schema_.edges()) {
                    if (se.label == e.name()) out.push_back({se.src, e, se.trg});
                }
                break;
            case PathOp::Reverse:
                for (const auto& se : schema_.edges()) {
                    if (se.label == e.name()) out.push_back({se.trg, e, se.src});
                }
                break;
            case PathOp::Concat:
            case PathOp::AnnConcat: {
                auto l = run(e.lhs());
                auto r = run(e.rhs());
                for (const auto& a : l) {
                    if (e.is(PathOp::AnnConcat) && !e.labels().count(a.trg)) continue;
                    for (const auto& b : r) {
                        if (a.trg == b.src) out.push_back({a.src, concat_flat(a.expr, LabelSet{a.trg}, b.expr), b.trg});
                    }
                }
                break;
            }
            case PathOp::Union: {
                out = run(e.lhs());
                auto r = run(e.rhs());
                out.insert(out.end(), r.begin(), r.end());
                break;
            }
            case PathOp::Conj: {
                auto l = run(e.lhs());
                auto r = run(e.rhs());
                for (const auto& a : l) {
                    for (const auto& b : r) {
                        if (a.src == b.src && a.trg == b.trg) out.push_back({a.src, PathExpr::conj(a.expr, b.expr), a.trg});
                    }
                }
                break;
            }
            case PathOp::BranchRight: {
                auto m = run(e.main());
                auto t = run(e.test());
                for (const auto& a : m) {
                    for (const auto& b : t) {
                        if (a.trg == b.src) out.push_back({a.src, PathExpr::branch_right(a.expr, b.expr), a.trg});
                    }
                }
                break;
            }
            case PathOp::BranchLeft: {
                auto t = run(e.test());
                auto m = run(e.main());
                for (const auto& a : t) {
                    for (const auto& b : m) {
                        if (a.src == b.src) out.push_back({b.src, PathExpr::branch_left(a.expr, b.expr), b.trg});
                    }
                }
                break;
            }
            case PathOp::Plus: {
                auto inner = run(e.inner());
                out = plus_comp(e.inner(), inner, options_, diag_);
                break;
            }
            case PathOp::Repeat:
                throw std::invalid_argument("infer requires a desugared expression (found " + to_string(e) + ")");
        }
        return out;
    }

    const GraphSchema& schema_;
    const InferOptions& options_;
    InferDiagnostics* diag_;
};

}  // namespace

std::vector<SchemaTriple> plus_comp(const PathExpr& expr, const std::vector<SchemaTriple>& triples,
                                    const InferOptions& options, InferDiagnostics* diag) {
    TripleGraph g = TripleGraph::build(triples);
    PathExpr closure = PathExpr::plus(strip_annotations(expr));
    std::vector<SchemaTriple> out;
    PathEnumerator walker(g, closure, options.max_paths);
    if (!walker.run(out)) {
        out = reachable_closure(g, closure);
        if (diag) {
            diag->path_cap_hit = true;
            diag->warnings.push_back("path enumeration cap of " + std::to_string(options.max_paths) +
                                     " exceeded for " + to_string(closure) + "; closure kept");
        }
    }
    canonicalize(out);
    return out;
}

std::vector<SchemaTriple> infer(const PathExpr& expr, const GraphSchema& schema, const InferOptions& options,
                                InferDiagnostics* diag) {
    return Inferencer(schema, options, diag).run(expr);
}

}  // namespace pathforge
