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

// Acceptance checks. Each run takes one criterion name and prints a single
// `PASS` or `FAIL` line; the exit status follows the verdict.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracle.hpp"
#include "../support/random_gen.hpp"
#include "pathforge/consistency.hpp"
#include "pathforge/emit.hpp"
#include "pathforge/error.hpp"
#include "pathforge/eval.hpp"
#include "pathforge/inference.hpp"
#include "pathforge/rewriter.hpp"
#include "pathforge/simplifier.hpp"

using namespace pathforge;

namespace {

const std::string kDir = PATHFORGE_TEST_DIR;

std::string slurp(const std::string& rel) {
    std::ifstream in(kDir + "/" + rel, std::ios::binary);
    if (!in) throw std::runtime_error("missing " + rel);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GraphSchema yago() { return load_schema_file(kDir + "/data/yago/schema.json"); }
GraphDB yago_db() { return load_db_files(kDir + "/data/yago/nodes.csv", kDir + "/data/yago/edges.csv"); }

struct Verdict {
    bool pass = true;
    std::ostringstream why;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) why << "; ";
            why << what;
            pass = false;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> printed(const std::vector<SchemaTriple>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(to_string(t));
    std::sort(out.begin(), out.end());
    return out;
}

Verdict c1() {
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    InferDiagnostics diag;
    auto result = infer(parse_path_expr("livesIn/isLocatedIn+/dealsWith+"), yago(), {}, &diag);
    double secs = seconds_since(t0);

    const std::map<std::string, std::vector<std::string>> expected = {
        {"livesIn", {"(PERSON, livesIn, CITY)"}},
        {"isLocatedIn+",
         {"(PROPERTY, isLocatedIn, CITY)", "(CITY, isLocatedIn, REGION)", "(REGION, isLocatedIn, COUNTRY)",
          "(PROPERTY, isLocatedIn/{CITY}isLocatedIn, REGION)",
          "(PROPERTY, isLocatedIn/{CITY}isLocatedIn/{REGION}isLocatedIn, COUNTRY)",
          "(CITY, isLocatedIn/{REGION}isLocatedIn, COUNTRY)"}},
        {"dealsWith+", {"(COUNTRY, dealsWith+, COUNTRY)"}},
        {"livesIn/isLocatedIn+",
         {"(PERSON, livesIn/{CITY}isLocatedIn, REGION)", "(PERSON, livesIn/{CITY}isLocatedIn/{REGION}isLocatedIn, COUNTRY)"}},
        {"livesIn/isLocatedIn+/dealsWith+",
         {"(PERSON, livesIn/{CITY}isLocatedIn/{REGION}isLocatedIn/{COUNTRY}dealsWith+, COUNTRY)"}},
    };
    std::map<std::string, std::vector<std::string>> got;
    for (const auto& row : diag.trace) got[to_string(row.subterm)] = printed(row.triples);
    for (auto [term, want] : expected) {
        std::sort(want.begin(), want.end());
        auto it = got.find(term);
        v.require(it != got.end(), "no row for " + term);
        if (it != got.end()) v.require(it->second == want, term + " has " + std::to_string(it->second.size()) + " triples");
    }
    v.require(printed(result) == got["livesIn/isLocatedIn+/dealsWith+"], "final triples differ from trace");
    v.require(secs < 1.0, "took " + std::to_string(secs) + " s");
    v.why << (v.pass ? "5 sub-terms exact, " + std::to_string(secs) + " s" : "");
    return v;
}

Verdict c2() {
    Verdict v;
    RewriteOutcome rw = rewrite(parse_ucqt(slurp("data/yago/phi4.ucqt")), yago());
    std::string got = to_string(rw.enriched) + "\n";
    std::string want = slurp("golden/phi4_rewrite.ucqt");
    v.require(got == want, "got " + got);
    if (v.pass) v.why << "byte match";
    return v;
}

std::vector<std::vector<std::string>> as_rows(const oracle::Tuples& t) { return {t.begin(), t.end()}; }

Verdict c3() {
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    const int cases = 1000;
    int failures = 0, enriched = 0, dbs = 0;
    std::string first;
    for (int i = 0; i < cases; ++i) {
        GraphSchema schema = randgen::schema(rng);
        UcqtQuery q = randgen::query(rng, schema, randgen::uniform(rng, 2, 5));
        RewriteOutcome rw = rewrite(q, schema);
        if (to_string(rw.enriched) != to_string(q)) ++enriched;
        for (int k = 0; k < 2; ++k) {
            GraphDB db = gen_db(schema, rng(), randgen::uniform(rng, 2, 5), 0.2 + 0.1 * randgen::uniform(rng, 0, 3));
            ++dbs;
            auto want = oracle::eval(q, db);
            auto got = oracle::eval(rw.enriched, db);
            bool ok = want == got && eval_ucqt(rw.enriched, db) == as_rows(want) && eval_ucqt(q, db) == as_rows(want);
            if (!ok) {
                if (failures++ == 0) first = to_string(q) + "  =>  " + to_string(rw.enriched);
                break;
            }
        }
    }
    double secs = seconds_since(t0);
    v.require(failures == 0, std::to_string(failures) + " counterexamples, first: " + first);
    v.require(secs < 120.0, "took " + std::to_string(secs) + " s");
    if (v.pass) {
        v.why << cases << " queries, " << dbs << " databases, " << enriched << " changed by rewriting, 0 counterexamples, "
              << secs << " s";
    }
    return v;
}

Verdict c4() {
    Verdict v;
    std::mt19937_64 rng(77);
    const int cases = 600;
    int unsound = 0, unstable = 0, fired = 0;
    std::string first;
    for (int i = 0; i < cases; ++i) {
        GraphSchema schema = randgen::schema(rng, 3, 6);
        std::vector<std::string> labels(schema.edge_labels().begin(), schema.edge_labels().end());
        PathExpr e = randgen::expr(rng, labels, randgen::uniform(rng, 2, 6));
        PathExpr s = simplify(e);
        if (s != e) ++fired;
        if (simplify(s) != s) ++unstable;
        GraphDB db = gen_db(schema, rng(), 12 / static_cast<int>(schema.nodes().size()), 0.35);
        if (oracle::eval(e, db) != oracle::eval(s, db)) {
            if (unsound++ == 0) first = to_string(e);
        }
    }
    v.require(unsound == 0, std::to_string(unsound) + " unsound, first: " + first);
    v.require(unstable == 0, std::to_string(unstable) + " not idempotent");

    const std::string red = "(((owns[isMarriedTo+/livesIn/dealsWith+])/(isLocatedIn+)+)+)+";
    const std::string want = "((owns[isMarriedTo[livesIn[dealsWith]]]/isLocatedIn+)+";
    std::string got = to_string(simplify(parse_path_expr(red)));
    v.require(got == want, "worked example gives " + got + ", expected " + want);
    if (v.pass) v.why << cases << " expressions (" << fired << " rewritten), sound and idempotent";
    else v.why << " [random part: " << cases << " expressions, " << unsound << " unsound, " << unstable << " unstable]";
    return v;
}

/// Simple paths in the label graph of `edges`, as lists of edge counts.
std::vector<int> path_lengths(const std::vector<std::pair<std::string, std::string>>& edges) {
    std::vector<int> out;
    std::function<void(const std::string&, std::vector<std::string>&)> dfs = [&](const std::string& at,
                                                                                  std::vector<std::string>& path) {
        for (const auto& [s, t] : edges) {
            if (s != at || std::find(path.begin(), path.end(), t) != path.end()) continue;
            out.push_back(static_cast<int>(path.size()));
            path.push_back(t);
            dfs(t, path);
            path.pop_back();
        }
    };
    std::set<std::string> starts;
    for (const auto& e : edges) starts.insert(e.first);
    for (const auto& s : starts) {
        std::vector<std::string> path{s};
        dfs(s, path);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int count_label(const PathExpr& e, const std::string& label) {
    if (e.is(PathOp::Label)) return e.name() == label;
    if (e.is(PathOp::Reverse)) return 0;
    if (e.is(PathOp::Plus) || e.is(PathOp::Repeat)) return count_label(e.inner(), label);
    return count_label(e.lhs(), label) + count_label(e.rhs(), label);
}

Verdict c5() {
    Verdict v;
    GraphSchema schema = yago();
    auto closure = infer(parse_path_expr("isLocatedIn+"), schema);
    std::vector<int> lengths;
    bool plus_free = true;
    for (const auto& t : closure) {
        plus_free = plus_free && count_plus(t.expr) == 0;
        lengths.push_back(count_label(t.expr, "isLocatedIn"));
    }
    std::sort(lengths.begin(), lengths.end());

    std::vector<std::pair<std::string, std::string>> arcs;
    for (const auto& e : schema.edges()) {
        if (e.label == "isLocatedIn") arcs.emplace_back(e.src, e.trg);
    }
    std::vector<int> want = path_lengths(arcs);
    v.require(want == std::vector<int>{1, 1, 1, 2, 2, 3}, "independent enumeration disagrees");
    v.require(closure.size() == 6, std::to_string(closure.size()) + " triples");
    v.require(plus_free, "a closure survives");
    v.require(lengths == want, "lengths differ");
    v.require(!lengths.empty() && lengths.front() == 1 && lengths.back() == 3, "min/max differ");

    auto dw = infer(parse_path_expr("dealsWith+"), schema);
    bool kept = !dw.empty();
    for (const auto& t : dw) kept = kept && count_plus(t.expr) == 1;
    v.require(kept, "dealsWith+ was unrolled");
    if (v.pass) v.why << "6 paths, lengths 1,1,1,2,2,3 (min 1, max 3); dealsWith+ kept";
    return v;
}

Verdict c6() {
    Verdict v;
    UcqtQuery q = parse_ucqt("x,y <- (x, dealsWith+, y)");
    RewriteOutcome rw = rewrite(q, yago());
    v.require(rw.atoms.size() == 1 && rw.atoms[0].reverted, "atom not reverted");
    v.require(to_string(rw.enriched) == to_string(q), "query text differs: " + to_string(rw.enriched));
    for (auto d : {SqlDialect::Postgres, SqlDialect::Sqlite, SqlDialect::Mysql}) {
        v.require(emit_sql(rw.enriched, {d, false}) == emit_sql(q, {d, false}), "SQL differs");
    }
    v.require(emit_cypher(rw.enriched).text == emit_cypher(q).text, "Cypher differs");
    if (v.pass) v.why << "reverted; query, SQL and Cypher byte-identical to baseline";
    return v;
}

/// Drops `//` lines, collapses whitespace and renames table aliases
/// (`AS id` where `id.` also occurs) to a1, a2, ... in declaration order.
std::string canonical(const std::string& text) {
    std::string kept;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        auto first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line.compare(first, 2, "//") == 0) continue;
        kept += line + "\n";
    }
    std::string s = std::regex_replace(kept, std::regex(R"(\s+)"), " ");
    s = std::regex_replace(s, std::regex(R"(^ | $)"), "");
    std::vector<std::string> aliases;
    std::regex decl(R"(\bAS ([A-Za-z_][A-Za-z0-9_]*))");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), decl); it != std::sregex_iterator(); ++it) {
        std::string id = (*it)[1];
        if (std::find(aliases.begin(), aliases.end(), id) != aliases.end()) continue;
        if (std::regex_search(s, std::regex("(^|[^A-Za-z0-9_.])" + id + "\\."))) aliases.push_back(id);
    }
    for (std::size_t i = 0; i < aliases.size(); ++i) {
        s = std::regex_replace(s, std::regex("(^|[^A-Za-z0-9_.])" + aliases[i] + "\\b"), "$1@" + std::to_string(i + 1));
    }
    return std::regex_replace(s, std::regex("@"), "a");
}

Verdict c7() {
    Verdict v;
    GraphSchema schema = load_schema_file(kDir + "/data/ldbc/schema.json");
    UcqtQuery q1 = parse_ucqt(slurp("data/ldbc/q1.ucqt"));
    UcqtQuery q2 = rewrite(q1, schema).enriched;

    v.require(canonical(emit_sql(q2)) == canonical(slurp("golden/q2_listing.sql")), "enriched SQL: " + emit_sql(q2));
    v.require(canonical(emit_sql(q1)) == canonical(slurp("golden/q1_listing.sql")), "baseline SQL: " + emit_sql(q1));
    auto c2 = emit_cypher(q2), c1 = emit_cypher(q1);
    v.require(c2.ok() && canonical(*c2.text) == canonical(slurp("golden/q2_listing.cypher")), "enriched Cypher");
    v.require(c1.ok() && canonical(*c1.text) == canonical(slurp("golden/q1_listing.cypher")), "baseline Cypher");

    auto conj = emit_cypher(parse_ucqt("x,y <- (x, knows & knows, y)"));
    v.require(!conj.ok() && conj.unsupported->construct == "conjunction", "conjunction accepted");
    auto branch = emit_cypher(parse_ucqt("x,y <- (x, knows[workAt], y)"));
    v.require(!branch.ok() && branch.unsupported->construct == "branch", "branch accepted");
    if (v.pass) v.why << "SQL and Cypher match both listings; conjunction and branch rejected";
    return v;
}

bool flagged(const ConsistencyReport& r, ViolationKind kind, const std::string& element) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const Violation& x) { return x.kind == kind && x.element == element; });
}

Verdict c8() {
    Verdict v;
    GraphSchema schema = yago();
    GraphDB db = yago_db();
    v.require(check_consistency(db, schema).consistent(), "sample database reported inconsistent");

    auto mutate = [&](auto&& change) {
        std::vector<DbNode> nodes = db.nodes();
        std::vector<DbEdge> edges = db.edges();
        change(nodes, edges);
        return check_consistency(GraphDB(nodes, edges), schema);
    };
    auto endpoint = mutate([](auto&, auto& edges) {
        for (auto& e : edges) {
            if (e.src == "n2" && e.label == "livesIn") e.trg = "n1";
        }
    });
    v.require(flagged(endpoint, ViolationKind::UnknownEdge, "n2-livesIn->n1"), "wrong endpoint not flagged");
    auto type = mutate([](auto& nodes, auto&) {
        for (auto& n : nodes) {
            if (n.id == "n2") n.properties["age"] = PropertyValue{DataType::String, "twenty-eight"};
        }
    });
    v.require(flagged(type, ViolationKind::PropertyType, "n2"), "wrong property type not flagged");
    auto label = mutate([](auto& nodes, auto&) {
        for (auto& n : nodes) {
            if (n.id == "n7") n.label = "NATION";
        }
    });
    v.require(flagged(label, ViolationKind::UnknownNodeLabel, "n7"), "unknown label not flagged");
    if (v.pass) v.why << "consistent; endpoint, type and label mutations flagged at n2-livesIn->n1, n2, n7";
    return v;
}

Verdict smoke() {
    Verdict v;
    GraphSchema schema = yago();
    UcqtQuery q = parse_ucqt(slurp("data/yago/phi4.ucqt"));
    UcqtQuery e = rewrite(q, schema).enriched;
    std::size_t base_closure = 0, enr_closure = 0, base_mat = 0, enr_mat = 0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GraphDB db = gen_db(schema, seed, 8, 0.3);
        EvalStats sb, se;
        auto rb = eval_ucqt(q, db, {}, &sb);
        auto re = eval_ucqt(e, db, {}, &se);
        v.require(rb == re, "answers differ on seed " + std::to_string(seed));
        v.require(se.closure_pairs <= sb.closure_pairs, "closure grew on seed " + std::to_string(seed));
        base_closure += sb.closure_pairs;
        enr_closure += se.closure_pairs;
        base_mat += sb.materialized_pairs;
        enr_mat += se.materialized_pairs;
    }
    v.why << (v.pass ? "" : " | ") << "closure pairs " << base_closure << " -> " << enr_closure << ", materialized "
          << base_mat << " -> " << enr_mat;
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::function<Verdict()>> checks = {
        {"c1", c1}, {"c2", c2}, {"c3", c3}, {"c4", c4}, {"c5", c5}, {"c6", c6}, {"c7", c7}, {"c8", c8}, {"smoke", smoke}};
    if (argc != 2 || !checks.count(argv[1])) {
        std::cerr << "usage: pathforge_acceptance c1..c8|smoke\n";
        return 2;
    }
    Verdict v;
    try {
        v = checks.at(argv[1])();
    } catch (const std::exception& e) {
        v.pass = false;
        v.why << "exception: " << e.what();
    }
    std::cout << "acceptance " << argv[1] << ": " << (v.pass ? "PASS" : "FAIL") << " (" << v.why.str() << ")\n";
    return v.pass ? 0 : 1;
}
