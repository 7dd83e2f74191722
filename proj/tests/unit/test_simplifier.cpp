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
#include "pathforge/eval.hpp"
#include "pathforge/simplifier.hpp"

using namespace pathforge;

namespace {

std::string simp(const std::string& text) { return to_string(simplify(parse_path_expr(text))); }

std::vector<std::string> rules(const std::string& text) {
    std::vector<RewriteStep> trace;
    simplify(parse_path_expr(text), &trace);
    std::vector<std::string> out;
    for (const auto& s : trace) out.push_back(s.rule);
    return out;
}

}  // namespace

TEST(Simplifier, EachRuleOnItsRedex) {
    EXPECT_EQ(simp("(a+)+"), "a+");
    EXPECT_EQ(simp("a+[b+]"), "a+[b]");
    EXPECT_EQ(simp("a[b/c]"), "a[b[c]]");
    EXPECT_EQ(simp("[b+]a+"), "[b]a+");
    EXPECT_EQ(simp("[b/c]a"), "[b[c]]a");
}

TEST(Simplifier, TraceNamesRules) {
    EXPECT_EQ(rules("(a+)+"), std::vector<std::string>{"R1"});
    EXPECT_EQ(rules("a+[b+]"), std::vector<std::string>{"R2"});
    EXPECT_EQ(rules("a[b/c]"), std::vector<std::string>{"R3"});
    EXPECT_EQ(rules("[b+]a+"), std::vector<std::string>{"R4"});
    EXPECT_EQ(rules("[b/c]a"), std::vector<std::string>{"R5"});
    EXPECT_TRUE(rules("a/b|c").empty());
}

TEST(Simplifier, LeavesNonRedexesAlone) {
    for (const char* s : {"a[b+]", "[b+]a", "a+[b|c]", "a[b/{X}c]", "[b/{X}c]a", "a+/b+", "(a/b)+", "a[b]"}) {
        EXPECT_EQ(simp(s), s) << s;
    }
}

TEST(Simplifier, NestedRedexesReachFixpoint) {
    EXPECT_EQ(simp("((a+)+)+"), "a+");
    EXPECT_EQ(simp("a[b/c/d]"), "a[(b/c)[d]]");
    EXPECT_EQ(simp("a+[(b+)+]"), "a+[b]");
    EXPECT_EQ(simp("(((owns[isMarriedTo+/livesIn/dealsWith+])/(isLocatedIn+)+)+)+"),
              "(owns[(isMarriedTo+/livesIn)[dealsWith+]]/isLocatedIn+)+");
}

TEST(Simplifier, RandomExpressionsKeepTheirAnswers) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        GraphSchema schema = randgen::schema(rng, 3, 6);
        std::vector<std::string> labels(schema.edge_labels().begin(), schema.edge_labels().end());
        PathExpr e = randgen::expr(rng, labels, randgen::uniform(rng, 2, 6));
        PathExpr s = simplify(e);
        ASSERT_EQ(simplify(s), s) << to_string(e);
        GraphDB db = gen_db(schema, rng(), 4, 0.4);
        ASSERT_EQ(oracle::eval(e, db), oracle::eval(s, db)) << to_string(e) << " => " << to_string(s);
    }
}
