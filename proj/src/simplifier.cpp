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

#include "pathforge/simplifier.hpp"

#include <optional>

namespace pathforge {

namespace {

std::optional<std::pair<const char*, PathExpr>> rewrite_root(const PathExpr& e) {
    switch (e.op()) {
        case PathOp::Plus:
            if (e.inner().is(PathOp::Plus)) return {{"R1", e.inner()}};
            break;
        case PathOp::BranchRight:
            if (e.main().is(PathOp::Plus) && e.test().is(PathOp::Plus)) {
                return {{"R2", PathExpr::branch_right(e.main(), e.test().inner())}};
            }
            if (e.test().is(PathOp::Concat)) {
                const PathExpr& t = e.test();
                return {{"R3", PathExpr::branch_right(e.main(), PathExpr::branch_right(t.lhs(), t.rhs()))}};
            }
            break;
        case PathOp::BranchLeft:
            if (e.test().is(PathOp::Plus) && e.main().is(PathOp::Plus)) {
                return {{"R4", PathExpr::branch_left(e.test().inner(), e.main())}};
            }
            if (e.test().is(PathOp::Concat)) {
                const PathExpr& t = e.test();
                return {{"R5", PathExpr::branch_left(PathExpr::branch_right(t.lhs(), t.rhs()), e.main())}};
            }
            break;
        default:
            break;
    }
    return std::nullopt;
}

class Simplifier {
  public:
    explicit Simplifier(std::vector<RewriteStep>* trace) : trace_(trace) {}

    PathExpr run(const PathExpr& e) {
        PathExpr cur = with_normal_children(e);
        while (auto step = rewrite_root(cur)) {
            if (trace_) trace_->push_back({step->first, cur, step->second});
            // The contractum may contain fresh redexes below its root.
            cur = with_normal_children(step->second);
        }
        return cur;
    }

  private:
    PathExpr with_normal_children(const PathExpr& e) {
        switch (e.op()) {
            case PathOp::Label:
            case PathOp::Reverse: return e;
            case PathOp::Concat:
            case PathOp::AnnConcat:
            case PathOp::Union:
            case PathOp::Conj: {
                PathExpr l = run(e.lhs());
                PathExpr r = run(e.rhs());
                if (e.is(PathOp::Concat)) return PathExpr::concat(l, r);
                if (e.is(PathOp::AnnConcat)) return PathExpr::annotated_concat(l, e.labels(), r);
                if (e.is(PathOp::Union)) return PathExpr::alt(l, r);
                return PathExpr::conj(l, r);
            }
            case PathOp::BranchRight: {
                PathExpr m = run(e.main());
                return PathExpr::branch_right(m, run(e.test()));
            }
            case PathOp::BranchLeft: {
                PathExpr t = run(e.test());
                return PathExpr::branch_left(t, run(e.main()));
            }
            case PathOp::Plus: return PathExpr::plus(run(e.inner()));
            case PathOp::Repeat: return PathExpr::repeat(run(e.inner()), e.min_count(), e.max_count());
        }
        return e;
    }

    std::vector<RewriteStep>* trace_;
};

}  // namespace

PathExpr simplify(const PathExpr& expr, std::vector<RewriteStep>* trace) { return Simplifier(trace).run(expr); }

}  // namespace pathforge
