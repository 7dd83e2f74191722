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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "../support/random_gen.hpp"
#include "pathforge/emit.hpp"
#include "pathforge/eval.hpp"
#include "pathforge/plan.hpp"
#include "pathforge/rewriter.hpp"

using namespace pathforge;

namespace {

const std::string kDir = PATHFORGE_TEST_DIR;

std::string slurp(const std::string& rel) {
    std::ifstream in(kDir + "/" + rel, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sql(const std::string& q, SqlOptions o = {}) { return emit_sql(parse_ucqt(q), o); }

std::string cypher(const std::string& q) {
    CypherResult r = emit_cypher(parse_ucqt(q));
    return r.ok() ? *r.text : "unsupported " + r.unsupported->construct;
}

}  // namespace

TEST(Fusion, RejoinsChainsThroughLabelledVariables) {
    UcqtQuery f = fuse_chains(parse_ucqt("x,y <- (x, a/b, g) && (g, c, y) && g:{L}"));
    EXPECT_EQ(to_string(f), "x,y <- (x, a/b/{L}c, y)");
    UcqtQuery kept = fuse_chains(parse_ucqt("x,y <- (x, a, g) && (g, c, y) && (g, d, y)"));
    EXPECT_EQ(kept.disjuncts[0].relations.size(), 3u);
    EXPECT_EQ(to_string(fuse_chains(parse_ucqt("x,y <- (x, a, y) && (y, b, x)"))), "x,y <- (x, a, y) && (y, b, x)");
}

TEST(Sql, GoldenQueries) {
    EXPECT_EQ(emit_sql(parse_ucqt(slurp("data/ldbc/q1.ucqt"))), slurp("golden/q1.postgres.sql"));
    EXPECT_EQ(emit_sql(parse_ucqt(slurp("data/ldbc/q2.ucqt"))), slurp("golden/q2.postgres.sql"));
}

TEST(Sql, RewrittenQ1EqualsQ2) {
    GraphSchema s = load_schema_file(kDir + "/data/ldbc/schema.json");
    UcqtQuery q2 = rewrite(parse_ucqt(slurp("data/ldbc/q1.ucqt")), s).enriched;
    EXPECT_EQ(emit_sql(q2), slurp("golden/q2.postgres.sql"));
}

TEST(Sql, SharedClosureIsDefinedOnce) {
    std::string out = sql("x,y <- (x, a+/a+, y)");
    EXPECT_EQ(out,
              "WITH RECURSIVE\n"
              "  tc_1(Sr, Tr) AS (SELECT Sr, Tr FROM a UNION SELECT tc_1.Sr, a.Tr FROM tc_1 JOIN a ON tc_1.Tr=a.Sr)\n"
              "SELECT DISTINCT t1.Sr AS x, t2.Tr AS y\n"
              "  FROM tc_1 AS t1\n"
              "  JOIN tc_1 AS t2 ON t1.Tr=t2.Sr;\n");
}

TEST(Sql, NestedClosuresAreNumberedInnerFirst) {
    std::string out = sql("x,y <- (x, (a+/b)+, y)");
    EXPECT_LT(out.find("tc_1(Sr, Tr)"), out.find("tc_2(Sr, Tr)"));
    EXPECT_NE(out.find("FROM tc_2 AS t1"), std::string::npos);
}

TEST(Sql, ViewsPerDialect) {
    const std::string q = "x,y <- (x, a+, y)";
    EXPECT_EQ(sql(q, {SqlDialect::Postgres, true}).substr(0, 45), "CREATE TEMPORARY RECURSIVE VIEW tc_1 (Sr, Tr)");
    EXPECT_EQ(sql(q, {SqlDialect::Mysql, true}).substr(0, 28), "CREATE OR REPLACE VIEW tc_1 ");
    EXPECT_EQ(sql(q, {SqlDialect::Sqlite, true}).substr(0, 17), "CREATE VIEW tc_1 ");
    EXPECT_EQ(sql(q, {SqlDialect::Sqlite, false}), sql(q, {SqlDialect::Mysql, false}));
}

TEST(Sql, EmptyUnion) {
    EXPECT_EQ(sql("x,y <- false"), "SELECT NULL AS x, NULL AS y WHERE 1=0;\n");
    EXPECT_EQ(sql("x <- false", {SqlDialect::Mysql, false}), "SELECT NULL AS x FROM DUAL WHERE 1=0;\n");
}

TEST(Sql, DisjunctsAndLabelAtoms) {
    std::string out = sql("x,y <- (x, a, y) && x:{A,B} || (x, b, y)");
    EXPECT_NE(out.find("JOIN (SELECT Sr FROM A UNION SELECT Sr FROM B) AS n2 ON n2.Sr=t1.Sr"), std::string::npos);
    EXPECT_NE(out.find("\nUNION\n"), std::string::npos);
    EXPECT_EQ(sql("x <- (x, a, x)"), "SELECT DISTINCT t1.Sr AS x\n  FROM a AS t1\n WHERE t1.Sr=t1.Tr;\n");
}

TEST(Sql, OnlySchemaTablesAndClosureNames) {
    std::string out = sql("x,y <- (x, -a/{L}b{1,2}, z) && (z, c[d]&e, y) || (x, (f|g)+, y)");
    std::regex table(R"((?:FROM|JOIN) ([A-Za-z_][A-Za-z0-9_]*))");
    const std::set<std::string> allowed = {"a", "b", "c", "d", "e", "f", "g", "L"};
    for (auto it = std::sregex_iterator(out.begin(), out.end(), table); it != std::sregex_iterator(); ++it) {
        std::string name = (*it)[1];
        EXPECT_TRUE(allowed.count(name) || name.rfind("tc_", 0) == 0) << name;
    }
}

TEST(Sql, PlanInterpreterAgreesWithEvaluator) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        GraphSchema schema = randgen::schema(rng);
        UcqtQuery q = randgen::query(rng, schema, randgen::uniform(rng, 1, 4));
        if (randgen::chance(rng, 0.5)) q = rewrite(q, schema).enriched;
        GraphDB db = gen_db(schema, rng(), 4, 0.3);
        ASSERT_EQ(interpret_plan(build_plan(q), encode_relational(db)), eval_ucqt(q, db)) << to_string(q);
    }
}

TEST(Cypher, GoldenQueries) {
    EXPECT_EQ(cypher(slurp("data/ldbc/q1.ucqt")), slurp("golden/q1.cypher"));
    EXPECT_EQ(cypher(slurp("data/ldbc/q2.ucqt")), slurp("golden/q2.cypher"));
}

TEST(Cypher, StepShapes) {
    EXPECT_EQ(cypher("x,y <- (x, (a|b)/{L,M}c, y)"),
              "MATCH (x)-[:a|b]->(_j1)-[:c]->(y)\nWHERE (_j1:L OR _j1:M)\nRETURN DISTINCT x, y;\n");
    EXPECT_EQ(cypher("x,y <- (x, -a/b{2,3}/c+, y) && x:{A}"),
              "MATCH (x:A)<-[:a]-()-[:b*2..3]->()-[:c*1..]->(y)\nRETURN DISTINCT x, y;\n");
    EXPECT_EQ(cypher("x,y <- (x, a|b/c, y)"),
              "MATCH (x)-[:a]->(y)\nRETURN DISTINCT x, y\nUNION\nMATCH (x)-[:b]->()-[:c]->(y)\nRETURN DISTINCT x, y;\n");
    EXPECT_EQ(cypher("x,y <- (x, a, z) && (y, b, z)"), "MATCH (x)-[:a]->(z), (y)-[:b]->(z)\nRETURN DISTINCT x, y;\n");
}

TEST(Cypher, ComposedRepeatIsExpanded) {
    EXPECT_EQ(cypher("x,y <- (x, (a/b){1,2}, y)"),
              "MATCH (x)-[:a]->()-[:b]->(y)\nRETURN DISTINCT x, y\nUNION\n"
              "MATCH (x)-[:a]->()-[:b]->()-[:a]->()-[:b]->(y)\nRETURN DISTINCT x, y;\n");
}

TEST(Cypher, RejectsWithReport) {
    EXPECT_EQ(cypher("x,y <- (x, a&b, y)"), "unsupported conjunction");
    EXPECT_EQ(cypher("x,y <- (x, a[b], y)"), "unsupported branch");
    EXPECT_EQ(cypher("x,y <- (x, [b]a, y)"), "unsupported branch");
    EXPECT_EQ(cypher("x,y <- (x, (a/b)+, y)"), "unsupported closure-over-path");
    CypherResult r = emit_cypher(parse_ucqt("x,y <- (x, a&b, y)"));
    EXPECT_NE(r.unsupported->message().find("a&b"), std::string::npos);
}

TEST(Cypher, EmptyUnion) {
    EXPECT_EQ(cypher("x,y <- false"), "UNWIND [] AS _none\nRETURN DISTINCT _none AS x, _none AS y;\n");
}

TEST(Dialect, ParsesNames) {
    EXPECT_EQ(parse_dialect("postgresql"), SqlDialect::Postgres);
    EXPECT_EQ(parse_dialect("sqlite"), SqlDialect::Sqlite);
    EXPECT_EQ(parse_dialect("mysql"), SqlDialect::Mysql);
    EXPECT_FALSE(parse_dialect("oracle").has_value());
    EXPECT_EQ(to_string(SqlDialect::Mysql), "mysql");
}
