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

#pragma once

#include <string>
#include <vector>

#include "pathforge/path_expr.hpp"

namespace pathforge {

/// One rule application: the redex and what it became.
struct RewriteStep {
    std::string rule;  // "R1" .. "R5"
    PathExpr before;
    PathExpr after;
};

/**
 * Normalises an expression under the closure/branch simplification rules
 *
 *   R1  (p+)+        -> p+
 *   R2  p+[q+]       -> p+[q]
 *   R3  p[q/r]       -> p[q[r]]
 *   R4  [q+]p+       -> [q]p+
 *   R5  [q/r]p       -> [q[r]]p
 *
 * applied innermost first, leftmost first, until none matches. R3 and R5
 * only fire when the test's top operator is an unannotated `/`.
 * Every applied step is appended to `trace` when it is non-null.
 */
PathExpr simplify(const PathExpr& expr, std::vector<RewriteStep>* trace = nullptr);

}  // namespace pathforge
