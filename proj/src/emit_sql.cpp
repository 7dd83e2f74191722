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

#include <map>
#include <stdexcept>

#include "pathforge/emit.hpp"
#include "pathforge/plan.hpp"

namespace pathforge {

std::optional<SqlDialect> parse_dialect(std::string_view name) {
    if (name == "postgres" || name == "postgresql") return SqlDialect::Postgres;
    if (name == "sqlite") return SqlDialect::Sqlite;
    if (name == "mysql") return SqlDialect::Mysql;
    return std::nullopt;
}

std::string_view to_string(SqlDialect dialect) {
    switch (dialect) {
        case SqlDialect::Postgres: return "postgres";
        case SqlDialect::Sqlite: return "sqlite";
        case SqlDialect::Mysql: return "mysql";
    }
    return "postgres";
}

namespace {

std::string closure_name(int id) { return "tc_" + std::to_string(id); }

/// Something that can stand in a FROM clause and yields a source and a
/// target column.
struct Source {
    std::string from;  // table name or parenthesised subquery
    std::string src = "Sr";
    std::string trg = "Tr";
    bool is_table = true;
};

std::string node_subquery(const LabelSet& labels) {
    std::string out = "(";
    bool first = true;
    for (const auto& l : labels) {
        if (!first) out += " UNION ";
        out += "SELECT Sr FROM " + l;
        first = false;
    }
    return out + ")";
}

/// One aliased FROM item.
struct Item {
    std::string text;  // "<from> AS tK" including any semi-join wrapper
    std::string src;   // qualified column
    std::string trg;
};

class SqlWriter {
  public:
    explicit SqlWriter(int& counter) : k_(counter) {}

    Source source(const RelPlan& p) {
        switch (p.kind) {
            case RelPlan::Kind::EdgeScan:
                return p.reversed ? Source{p.table, "Tr", "Sr", true} : Source{p.table, "Sr", "Tr", true};
            case RelPlan::Kind::ClosureRef: return {closure_name(p.closure), "Sr", "Tr", true};
            default: return {"(" + select(p) + ")", "Sr", "Tr", false};
        }
    }

    /// Single-line SELECT producing columns Sr, Tr.
    std::string select(const RelPlan& p) {
        switch (p.kind) {
            case RelPlan::Kind::EdgeScan:
            case RelPlan::Kind::ClosureRef: {
                Source s = source(p);
                if (s.src == "Sr") return "SELECT Sr, Tr FROM " + s.from;
                return "SELECT Tr AS Sr, Sr AS Tr FROM " + s.from;
            }
            case RelPlan::Kind::Chain: {
                std::vector<Item> items = chain_items(p, false);
                std::string out = "SELECT " + items.front().src + " AS Sr, " + items.back().trg + " AS Tr FROM " +
                                  items.front().text;
                for (std::size_t i = 1; i < items.size(); ++i) {
                    out += " JOIN " + items[i].text + " ON " + items[i - 1].trg + "=" + items[i].src;
                }
                return out;
            }
            case RelPlan::Kind::Union: {
                std::string l = select(*p.lhs);
                return l + " UNION " + select(*p.rhs);
            }
            case RelPlan::Kind::Intersect: {
                Item l = item(*p.lhs, "x");
                Item r = item(*p.rhs, "y");
                return "SELECT " + l.src + " AS Sr, " + l.trg + " AS Tr FROM " + l.text + " JOIN " + r.text + " ON " +
                       l.src + "=" + r.src + " AND " + l.trg + "=" + r.trg;
            }
            case RelPlan::Kind::ExistsRight:
            case RelPlan::Kind::ExistsLeft: {
                Item m = item(*p.lhs, "m");
                Item t = item(*p.rhs, "e");
                const std::string& probe = p.kind == RelPlan::Kind::ExistsRight ? m.trg : m.src;
                return "SELECT " + m.src + " AS Sr, " + m.trg + " AS Tr FROM " + m.text + " WHERE EXISTS (SELECT 1 FROM " +
                       t.text + " WHERE " + t.src + "=" + probe + ")";
            }
        }
        throw std::logic_error("unhandled plan node");
    }

    Item item(const RelPlan& p, const char* prefix) {
        Source s = source(p);
        std::string alias = prefix + std::to_string(++k_);
        return {s.from + " AS " + alias, alias + "." + s.src, alias + "." + s.trg};
    }

    /// FROM items of a chain; a junction wraps the following step in a
    /// semi-join with the node tables.
    std::vector<Item> chain_items(const RelPlan& p, bool multiline) {
        std::vector<Item> out;
        if (p.kind != RelPlan::Kind::Chain) {
            out.push_back(item(p, "t"));
            return out;
        }
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            if (i == 0 || !p.junctions[i - 1]) {
                out.push_back(item(*p.steps[i], "t"));
                continue;
            }
            Source s = source(*p.steps[i]);
            std::string k = std::to_string(++k_);
            std::string sa = "s" + k, na = "n" + k, ta = "t" + k;
            std::string head = "(SELECT " + sa + "." + s.src + " AS Sr, " + sa + "." + s.trg + " AS Tr";
            std::string from = "FROM " + node_subquery(*p.junctions[i - 1]) + " AS " + na;
            std::string join = "JOIN " + s.from + " AS " + sa + " ON " + sa + "." + s.src + "=" + na + ".Sr";
            std::string text = multiline ? head + "\n          " + from + "\n          " + join + "\n       ) AS " + ta
                                         : head + " " + from + " " + join + ") AS " + ta;
            out.push_back({text, ta + ".Sr", ta + ".Tr"});
        }
        return out;
    }

  private:
    int& k_;
};

std::string closure_body(const ClosureDef& c, const std::string& self) {
    int counter = 0;
    SqlWriter w(counter);
    Source s = w.source(*c.base);
    std::string anchor;
    std::string step;
    if (s.is_table) {
        anchor = s.src == "Sr" ? "SELECT Sr, Tr FROM " + s.from : "SELECT Tr AS Sr, Sr AS Tr FROM " + s.from;
        step = "SELECT " + self + ".Sr, " + s.from + "." + s.trg + " FROM " + self + " JOIN " + s.from + " ON " + self +
               ".Tr=" + s.from + "." + s.src;
    } else {
        anchor = "SELECT Sr, Tr FROM " + s.from + " AS b0";
        step = "SELECT " + self + ".Sr, b1.Tr FROM " + self + " JOIN " + s.from + " AS b1 ON " + self + ".Tr=b1.Sr";
    }
    return anchor + " UNION " + step;
}

std::string conjunct_sql(const ConjunctPlan& d, const std::vector<std::string>& head) {
    int counter = 0;
    SqlWriter w(counter);
    std::map<std::string, std::string> column;
    std::vector<std::string> where;
    std::string body;
    bool first = true;

    auto bind = [&column](const std::string& var, const std::string& col, std::vector<std::string>& conds) {
        auto it = column.find(var);
        if (it == column.end()) {
            column.emplace(var, col);
        } else {
            conds.push_back(it->second + "=" + col);
        }
    };

    for (const auto& atom : d.atoms) {
        std::vector<Item> items = w.chain_items(*atom.rel, true);
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::vector<std::string> conds;
            if (i == 0) {
                bind(atom.src, items[i].src, conds);
            } else {
                conds.push_back(items[i - 1].trg + "=" + items[i].src);
            }
            if (i + 1 == items.size()) bind(atom.trg, items[i].trg, conds);

            if (first) {
                body += "\n  FROM " + items[i].text;
                where.insert(where.end(), conds.begin(), conds.end());
                first = false;
            } else if (conds.empty()) {
                body += "\n  CROSS JOIN " + items[i].text;
            } else {
                body += "\n  JOIN " + items[i].text + " ON " + conds.front();
                for (std::size_t c = 1; c < conds.size(); ++c) body += " AND " + conds[c];
            }
        }
    }
    for (const auto& sj : d.semijoins) {
        std::string alias = "n" + std::to_string(++counter);
        body += "\n  JOIN " + node_subquery(sj.labels) + " AS " + alias + " ON " + alias + ".Sr=" + column.at(sj.var);
    }

    std::string out = "SELECT DISTINCT ";
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (i) out += ", ";
        out += column.at(head[i]) + " AS " + head[i];
    }
    out += body;
    for (std::size_t i = 0; i < where.size(); ++i) out += (i == 0 ? "\n WHERE " : " AND ") + where[i];
    return out;
}

std::string empty_union_sql(const std::vector<std::string>& head, SqlDialect dialect) {
    std::string out = "SELECT ";
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (i) out += ", ";
        out += "NULL AS " + head[i];
    }
    if (dialect == SqlDialect::Mysql) out += " FROM DUAL";
    return out + " WHERE 1=0";
}

std::string view_statement(const ClosureDef& c, SqlDialect dialect) {
    std::string name = closure_name(c.id);
    if (dialect == SqlDialect::Postgres) {
        return "CREATE TEMPORARY RECURSIVE VIEW " + name + " (Sr, Tr) AS\n  " + closure_body(c, name) + ";\n";
    }
    std::string inner = name + "_r";
    std::string create = dialect == SqlDialect::Mysql ? "CREATE OR REPLACE VIEW " : "CREATE VIEW ";
    return create + name + " AS\n  WITH RECURSIVE " + inner + "(Sr, Tr) AS (" + closure_body(c, inner) +
           ")\n  SELECT Sr, Tr FROM " + inner + ";\n";
}

}  // namespace

std::string emit_sql(const UcqtQuery& query, const SqlOptions& options) {
    if (query.is_empty_union()) return empty_union_sql(query.head, options.dialect) + ";\n";
    QueryPlan plan = build_plan(query);

    std::string out;
    if (!plan.closures.empty()) {
        if (options.as_view) {
            for (const auto& c : plan.closures) out += view_statement(c, options.dialect) + "\n";
        } else {
            out += "WITH RECURSIVE";
            for (std::size_t i = 0; i < plan.closures.size(); ++i) {
                const auto& c = plan.closures[i];
                out += (i ? ",\n  " : "\n  ") + closure_name(c.id) + "(Sr, Tr) AS (" + closure_body(c, closure_name(c.id)) +
                       ")";
            }
            out += "\n";
        }
    }
    for (std::size_t i = 0; i < plan.disjuncts.size(); ++i) {
        if (i) out += "\nUNION\n";
        out += conjunct_sql(plan.disjuncts[i], plan.head);
    }
    return out + ";\n";
}

}  // namespace pathforge
