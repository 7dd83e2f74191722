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

#include <algorithm>
#include <map>
#include <set>

#include "pathforge/emit.hpp"
#include "pathforge/plan.hpp"

namespace pathforge {

namespace {

struct Step {
    std::vector<std::string> labels;
    bool reversed = false;
    int min = 1;
    int max = 1;
    bool unbounded = false;
};

struct Path {
    std::vector<Step> steps;
    std::vector<std::optional<LabelSet>> junctions;
};

using Paths = std::vector<Path>;

struct Unsupported {
    UnsupportedReport report;
};

/// A single relationship type set traversed in one direction, if `e` is one.
std::optional<Step> as_step(const PathExpr& e) {
    if (e.is(PathOp::Label) || e.is(PathOp::Reverse)) return Step{{e.name()}, e.is(PathOp::Reverse)};
    if (!e.is(PathOp::Union)) return std::nullopt;
    auto l = as_step(e.lhs());
    auto r = as_step(e.rhs());
    if (!l || !r || l->reversed != r->reversed || l->min != 1 || r->min != 1 || l->max != 1 || r->max != 1) {
        return std::nullopt;
    }
    for (const auto& x : r->labels) {
        if (std::find(l->labels.begin(), l->labels.end(), x) == l->labels.end()) l->labels.push_back(x);
    }
    return l;
}

Paths paths_of(const PathExpr& e) {
    if (auto s = as_step(e)) return {Path{{*s}, {}}};
    switch (e.op()) {
        case PathOp::Concat:
        case PathOp::AnnConcat: {
            std::optional<LabelSet> junction;
            if (e.is(PathOp::AnnConcat)) junction = e.labels();
            Paths out;
            for (const auto& l : paths_of(e.lhs())) {
                for (const auto& r : paths_of(e.rhs())) {
                    Path p = l;
                    p.junctions.push_back(junction);
                    p.steps.insert(p.steps.end(), r.steps.begin(), r.steps.end());
                    p.junctions.insert(p.junctions.end(), r.junctions.begin(), r.junctions.end());
                    out.push_back(std::move(p));
                }
            }
            return out;
        }
        case PathOp::Union: {
            Paths out = paths_of(e.lhs());
            Paths r = paths_of(e.rhs());
            out.insert(out.end(), r.begin(), r.end());
            return out;
        }
        case PathOp::Plus: {
            auto s = as_step(e.inner());
            if (!s) throw Unsupported{{"closure-over-path", "closure of " + to_string(e.inner()) + " has no variable-length pattern"}};
            s->unbounded = true;
            return {Path{{*s}, {}}};
        }
        case PathOp::Repeat: {
            auto s = as_step(e.inner());
            if (!s) return paths_of(desugar(e));
            s->min = e.min_count();
            s->max = e.max_count();
            return {Path{{*s}, {}}};
        }
        case PathOp::Conj: throw Unsupported{{"conjunction", to_string(e)}};
        case PathOp::BranchRight:
        case PathOp::BranchLeft: throw Unsupported{{"branch", to_string(e)}};
        default: break;
    }
    throw Unsupported{{"expression", to_string(e)}};
}

std::string render_step(const Step& s) {
    std::string rel = "[:";
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
        if (i) rel += '|';
        rel += s.labels[i];
    }
    if (s.unbounded) {
        rel += "*1..";
    } else if (s.min != 1 || s.max != 1) {
        rel += "*" + std::to_string(s.min) + ".." + std::to_string(s.max);
    }
    rel += ']';
    return s.reversed ? "<-" + rel + "-" : "-" + rel + "->";
}

std::string label_disjunction(const std::string& var, const LabelSet& labels) {
    std::string out = "(";
    bool first = true;
    for (const auto& l : labels) {
        if (!first) out += " OR ";
        out += var + ":" + l;
        first = false;
    }
    return out + ")";
}

class BlockWriter {
  public:
    BlockWriter(const Conjunct& c, std::set<std::string> taken) : taken_(std::move(taken)) {
        for (const auto& la : c.label_atoms) {
            auto [it, inserted] = labels_.emplace(la.var, la.labels);
            if (!inserted) {
                LabelSet both;
                for (const auto& l : la.labels) {
                    if (it->second.count(l)) both.insert(l);
                }
                it->second = both;
            }
        }
    }

    std::string var_node(const std::string& v) {
        if (!seen_.insert(v).second) return "(" + v + ")";
        auto it = labels_.find(v);
        if (it == labels_.end()) return "(" + v + ")";
        if (it->second.size() == 1) return "(" + v + ":" + *it->second.begin() + ")";
        where_.push_back(label_disjunction(v, it->second));
        return "(" + v + ")";
    }

    std::string junction_node(const std::optional<LabelSet>& j) {
        if (!j) return "()";
        if (j->size() == 1) return "(:" + *j->begin() + ")";
        std::string name;
        do {
            name = "_j" + std::to_string(++counter_);
        } while (taken_.count(name));
        where_.push_back(label_disjunction(name, *j));
        return "(" + name + ")";
    }

    std::string pattern(const std::string& src, const Path& p, const std::string& trg) {
        std::string out = var_node(src);
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            out += render_step(p.steps[i]);
            out += i + 1 == p.steps.size() ? var_node(trg) : junction_node(p.junctions[i]);
        }
        return out;
    }

    const std::vector<std::string>& where() const { return where_; }

  private:
    std::set<std::string> taken_;
    std::map<std::string, LabelSet> labels_;
    std::set<std::string> seen_;
    std::vector<std::string> where_;
    int counter_ = 0;
};

std::string return_clause(const std::vector<std::string>& head) {
    std::string out = "RETURN DISTINCT ";
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (i) out += ", ";
        out += head[i];
    }
    return out;
}

}  // namespace

CypherResult emit_cypher(const UcqtQuery& query) {
    CypherResult result;
    if (query.is_empty_union()) {
        std::string text = "UNWIND [] AS _none\nRETURN DISTINCT ";
        for (std::size_t i = 0; i < query.head.size(); ++i) text += (i ? ", _none AS " : "_none AS ") + query.head[i];
        result.text = text + ";\n";
        return result;
    }

    UcqtQuery fused = fuse_chains(query);
    std::set<std::string> taken = all_variables(fused);
    std::vector<std::string> blocks;
    try {
        for (const auto& c : fused.disjuncts) {
            std::vector<Paths> per_atom;
            for (const auto& r : c.relations) per_atom.push_back(paths_of(r.expr));
            std::vector<std::size_t> pick(per_atom.size(), 0);
            for (;;) {
                BlockWriter w(c, taken);
                std::string match = "MATCH ";
                for (std::size_t i = 0; i < per_atom.size(); ++i) {
                    if (i) match += ", ";
                    match += w.pattern(c.relations[i].src, per_atom[i][pick[i]], c.relations[i].trg);
                }
                std::string block = match;
                for (std::size_t i = 0; i < w.where().size(); ++i) block += (i ? " AND " : "\nWHERE ") + w.where()[i];
                blocks.push_back(block + "\n" + return_clause(query.head));

                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == per_atom[i].size()) pick[i++] = 0;
                if (i == pick.size()) break;
            }
        }
    } catch (const Unsupported& u) {
        result.unsupported = u.report;
        return result;
    }

    std::string text;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) text += "\nUNION\n";
        text += blocks[i];
    }
    result.text = text + ";\n";
    return result;
}

}  // namespace pathforge
