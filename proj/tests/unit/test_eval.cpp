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

#include <random>

#include "../support/oracle.hpp"
#include "../support/random_gen.hpp"
#include "pathforge/consistency.hpp"
#include "pathforge/eval.hpp"

using namespace pathforge;

namespace {

const std::string kDir = PATHFORGE_TEST_DIR;

GraphDB sample() { return load_db_files(kDir + "/data/yago/nodes.csv", kDir + "/data/yago/edges.csv"); }

std::vector<ResultTuple> run(const std::string& q, const GraphDB& db, EvalOptions o = {}) {
    return eval_ucqt(parse_ucqt(q), db, o);
}

GraphDB random_graph(std::mt19937_64& rng, int n, double p) {
    std::vector<DbNode> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back({"v" + std::to_string(i), "V", {}});
    std::vector<DbEdge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (randgen::chance(rng, p)) edges.push_back({"v" + std::to_string(i), "e", "v" + std::to_string(j)});
        }
    }
    return GraphDB(nodes, edges);
}

/// Reachability by depth-first search from every node.
oracle::Rel reach(const GraphDB& db) {
    oracle::Rel out;
    for (const auto& start : db.nodes()) {
        std::vector<std::string> stack{start.id};
        std::set<std::string> seen;
        while (!stack.empty()) {
            std::string at = stack.back();
            stack.pop_back();
            for (const auto& e : db.edges()) {
                if (e.src == at && seen.insert(e.trg).second) {
                    out.emplace(start.id, e.trg);
                    stack.push_back(e.trg);
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST(Eval, SampleDatabase) {
    GraphDB db = sample();
    EXPECT_EQ(run("x,y <- (x, livesIn/isLocatedIn+, y)", db),
              (std::vector<ResultTuple>{{"n2", "n5"}, {"n2", "n7"}, {"n3", "n5"}, {"n3", "n7"}}));
    EXPECT_TRUE(run("x,y <- (x, livesIn/isLocatedIn+/dealsWith+, y)", db).empty());
    EXPECT_EQ(run("x <- (x, isMarriedTo/isMarriedTo, x)", db), (std::vector<ResultTuple>{{"n2"}, {"n3"}}));
    EXPECT_EQ(run("x <- (x, owns/isLocatedIn, y) && y:{CITY}", db), std::vector<ResultTuple>{{"n2"}});
    EXPECT_EQ(run("x,y <- (x, owns[isLocatedIn/isLocatedIn], y)", db), (std::vector<ResultTuple>{{"n2", "n1"}}));
    EXPECT_TRUE(run("x,y <- false", db).empty());
}

TEST(Eval, ClosureMatchesReachability) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
        GraphDB db = random_graph(rng, 9, 0.15);
        auto pairs = pair_ids(eval_path(parse_path_expr("e+"), db), db);
        oracle::Rel got(pairs.begin(), pairs.end());
        ASSERT_EQ(got, reach(db));
    }
}

TEST(Eval, NaiveAndSemiNaiveAgree) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        GraphDB db = random_graph(rng, 10, 0.2);
        EvalStats semi, naive;
        auto a = eval_path(parse_path_expr("(e/e)+"), db, {}, &semi);
        auto b = eval_path(parse_path_expr("(e/e)+"), db, {true}, &naive);
        ASSERT_EQ(a, b);
        EXPECT_LE(semi.closure_pairs, naive.closure_pairs);
    }
}

TEST(Eval, AgreesWithBruteForceOnRandomQueries) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        GraphSchema schema = randgen::schema(rng);
        UcqtQuery q = randgen::query(rng, schema, randgen::uniform(rng, 1, 4));
        GraphDB db = gen_db(schema, rng(), 4, 0.3);
        auto want = oracle::eval(q, db);
        ASSERT_EQ(eval_ucqt(q, db), std::vector<ResultTuple>(want.begin(), want.end())) << to_string(q);
    }
}

TEST(Eval, StatsAreRecorded) {
    EvalStats st;
    eval_ucqt(parse_ucqt("x,y <- (x, livesIn/isLocatedIn+, y)"), sample(), {}, &st);
    EXPECT_GT(st.closure_pairs, 0u);
    EXPECT_GE(st.materialized_pairs, st.peak_pairs);
    EXPECT_GT(st.peak_pairs, 0u);
}

TEST(GenDb, DeterministicAndConforming) {
    GraphSchema s = load_schema_file(kDir + "/data/yago/schema.json");
    GraphDB a = gen_db(s, 42, 4, 0.5);
    GraphDB b = gen_db(s, 42, 4, 0.5);
    EXPECT_EQ(nodes_to_csv(a), nodes_to_csv(b));
    EXPECT_EQ(edges_to_csv(a), edges_to_csv(b));
    EXPECT_NE(edges_to_csv(a), edges_to_csv(gen_db(s, 43, 4, 0.5)));
    EXPECT_EQ(a.node_count(), 20u);
    EXPECT_TRUE(a.index_of("PERSON_0").has_value());
    EXPECT_TRUE(check_consistency(a, s).consistent());
    EXPECT_EQ(gen_db(s, 1, 3, 0.0).edge_count(), 0u);
    EXPECT_THROW(gen_db(s, 1, -1, 0.5), std::invalid_argument);
    EXPECT_THROW(gen_db(s, 1, 2, 1.5), std::invalid_argument);
}
