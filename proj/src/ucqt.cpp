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

#include "pathforge/ucqt.hpp"

#include <algorithm>

#include "pathforge/error.hpp"
#include "text_cursor.hpp"

namespace pathforge {

std::set<std::string> Conjunct::variables() const {
    std::set<std::string> out;
    for (const auto& r : relations) {
        out.insert(r.src);
        out.insert(r.trg);
    }
    for (const auto& l : label_atoms) out.insert(l.var);
    return out;
}

std::set<std::string> Conjunct::body_variables(const std::vector<std::string>& head) const {
    std::set<std::string> out = variables();
    for (const auto& h : head) out.erase(h);
    return out;
}

namespace {

Conjunct parse_conjunct(detail::TextCursor& cur) {
    Conjunct c;
    do {
        if (cur.consume('(')) {
            RelationAtom atom{cur.identifier("variable"), PathExpr::label("_"), ""};
            cur.expect(',');
            atom.expr = detail::parse_path(cur);
            cur.expect(',');
            atom.trg = cur.identifier("variable");
            cur.expect(')');
            c.relations.push_back(std::move(atom));
        } else {
            LabelAtom atom;
            atom.var = cur.identifier("variable or '('");
            cur.expect(':');
            atom.labels = detail::parse_label_set(cur);
            c.label_atoms.push_back(std::move(atom));
        }
    } while (cur.consume("&&"));
    return c;
}

}  // namespace

UcqtQuery parse_ucqt(std::string_view text) {
    detail::TextCursor cur(text);
    UcqtQuery q;
    do {
        q.head.push_back(cur.identifier("head variable"));
    } while (cur.consume(','));
    cur.expect("<-");

    cur.skip_ws();
    std::size_t mark = cur.pos();
    bool is_false = false;
    if (detail::is_ident_start(cur.peek())) {
        std::string word = cur.identifier();
        if (word == "false" && (cur.at_end() || cur.peek() != ':')) {
            is_false = true;
        } else {
            cur.seek(mark);
        }
    }
    if (!is_false) {
        do {
            q.disjuncts.push_back(parse_conjunct(cur));
        } while (cur.consume("||"));
    }
    if (!cur.at_end()) cur.fail(std::string("unexpected character '") + cur.peek() + "'");
    validate(q);
    return q;
}

void validate(const UcqtQuery& query) {
    if (query.head.empty()) throw QueryError("query head must not be empty");
    std::set<std::string> seen;
    for (const auto& h : query.head) {
        if (!seen.insert(h).second) throw QueryError("duplicate head variable '" + h + "'");
    }
    for (std::size_t i = 0; i < query.disjuncts.size(); ++i) {
        const Conjunct& c = query.disjuncts[i];
        if (c.relations.empty()) throw QueryError("disjunct " + std::to_string(i + 1) + " has no relation atom");
        std::set<std::string> rel_vars;
        for (const auto& r : c.relations) {
            rel_vars.insert(r.src);
            rel_vars.insert(r.trg);
        }
        for (const auto& h : query.head) {
            if (!rel_vars.count(h)) {
                throw QueryError("head variable '" + h + "' does not occur in disjunct " + std::to_string(i + 1));
            }
        }
        for (const auto& l : c.label_atoms) {
            if (!rel_vars.count(l.var)) {
                throw QueryError("label atom variable '" + l.var + "' does not occur in any relation atom");
            }
            if (l.labels.empty()) throw QueryError("label atom on '" + l.var + "' has no labels");
        }
    }
}

std::string to_string(const RelationAtom& atom) {
    return "(" + atom.src + ", " + to_string(atom.expr) + ", " + atom.trg + ")";
}

std::string to_string(const LabelAtom& atom) { return atom.var + ":" + to_string(atom.labels); }

std::string to_string(const Conjunct& conjunct) {
    std::string out;
    auto sep = [&out] {
        if (!out.empty()) out += " && ";
    };
    for (const auto& r : conjunct.relations) {
        sep();
        out += to_string(r);
    }
    for (const auto& l : conjunct.label_atoms) {
        sep();
        out += to_string(l);
    }
    return out;
}

std::string to_string(const UcqtQuery& query) {
    std::string out;
    for (std::size_t i = 0; i < query.head.size(); ++i) {
        if (i) out += ',';
        out += query.head[i];
    }
    out += " <- ";
    if (query.is_empty_union()) return out + "false";
    for (std::size_t i = 0; i < query.disjuncts.size(); ++i) {
        if (i) out += " || ";
        out += to_string(query.disjuncts[i]);
    }
    return out;
}

std::set<std::string> all_variables(const UcqtQuery& query) {
    std::set<std::string> out(query.head.begin(), query.head.end());
    for (const auto& c : query.disjuncts) {
        auto vars = c.variables();
        out.insert(vars.begin(), vars.end());
    }
    return out;
}

}  // namespace pathforge
