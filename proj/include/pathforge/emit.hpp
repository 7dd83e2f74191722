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

#include <optional>
#include <string>
#include <string_view>

#include "pathforge/ucqt.hpp"

namespace pathforge {

enum class SqlDialect { Postgres, Sqlite, Mysql };

std::optional<SqlDialect> parse_dialect(std::string_view name);
std::string_view to_string(SqlDialect dialect);

struct SqlOptions {
    SqlDialect dialect = SqlDialect::Postgres;
    /// Emit each closure as a dialect-specific recursive view instead of an
    /// inline WITH RECURSIVE preamble.
    bool as_view = false;
};

/**
 * Recursive SQL over the relational encoding: one table per edge label with
 * columns (Sr, Tr) and one table per node label with key column Sr.
 */
std::string emit_sql(const UcqtQuery& query, const SqlOptions& options = {});

/// Why a query has no Cypher translation.
struct UnsupportedReport {
    std::string construct;  // "conjunction", "branch", "closure-over-path", ...
    std::string detail;

    std::string message() const { return "unsupported " + construct + ": " + detail; }
};

struct CypherResult {
    std::optional<std::string> text;
    std::optional<UnsupportedReport> unsupported;

    bool ok() const { return text.has_value(); }
};

/// Chain-shaped queries only; unions are distributed into UNION blocks.
CypherResult emit_cypher(const UcqtQuery& query);

}  // namespace pathforge
