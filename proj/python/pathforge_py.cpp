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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pathforge/consistency.hpp"
#include "pathforge/emit.hpp"
#include "pathforge/error.hpp"
#include "pathforge/eval.hpp"
#include "pathforge/inference.hpp"
#include "pathforge/rewriter.hpp"
#include "pathforge/simplifier.hpp"

namespace py = pybind11;
using namespace pathforge;

namespace {

using Triple = std::tuple<std::string, std::string, std::string>;

std::vector<Triple> py_infer(const std::string& schema_json, const std::string& expr, std::size_t max_paths) {
    std::vector<Triple> out;
    for (const auto& t : infer(desugar(parse_path_expr(expr)), load_schema_json(schema_json), InferOptions{max_paths})) {
        out.emplace_back(t.src, to_string(t.expr), t.trg);
    }
    return out;
}

py::dict py_rewrite(const std::string& schema_json, const std::string& query, std::size_t max_paths,
                    std::size_t max_alternatives) {
    RewriteOptions opts;
    opts.infer.max_paths = max_paths;
    opts.max_alternatives = max_alternatives;
    RewriteOutcome rw = rewrite(parse_ucqt(query), load_schema_json(schema_json), opts);
    py::dict d;
    d["query"] = to_string(rw.enriched);
    d["warnings"] = rw.warnings;
    d["unsatisfiable"] = rw.unsatisfiable;
    std::vector<bool> reverted;
    for (const auto& a : rw.atoms) reverted.push_back(a.reverted);
    d["reverted"] = reverted;
    return d;
}

std::string py_emit_sql(const std::string& query, const std::string& dialect, bool as_view) {
    auto d = parse_dialect(dialect);
    if (!d) throw py::value_error("unknown dialect '" + dialect + "'");
    return emit_sql(parse_ucqt(query), SqlOptions{*d, as_view});
}

std::string py_emit_cypher(const std::string& query) {
    CypherResult r = emit_cypher(parse_ucqt(query));
    if (!r.ok()) throw py::value_error(r.unsupported->message());
    return *r.text;
}

std::vector<ResultTuple> py_eval(const std::string& nodes_csv, const std::string& edges_csv, const std::string& query) {
    return eval_ucqt(parse_ucqt(query), load_db_csv(nodes_csv, edges_csv));
}

std::vector<Triple> py_check(const std::string& schema_json, const std::string& nodes_csv, const std::string& edges_csv) {
    std::vector<Triple> out;
    for (const auto& v : check_consistency(load_db_csv(nodes_csv, edges_csv), load_schema_json(schema_json)).violations) {
        out.emplace_back(std::string(to_string(v.kind)), v.element, v.detail);
    }
    return out;
}

std::pair<std::string, std::string> py_gen(const std::string& schema_json, std::uint64_t seed, int nodes, double prob) {
    GraphDB db = gen_db(load_schema_json(schema_json), seed, nodes, prob);
    return {nodes_to_csv(db), edges_to_csv(db)};
}

}  // namespace

PYBIND11_MODULE(_pathforge, m) {
    m.doc() = "Schema-based rewriting of recursive graph queries";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<QueryError>(m, "QueryError", PyExc_ValueError);
    py::register_exception<LoadError>(m, "LoadError", PyExc_ValueError);

    m.def("simplify", [](const std::string& e) { return to_string(simplify(desugar(parse_path_expr(e)))); },
          py::arg("expr"), "Normal form of a path expression.");
    m.def("infer", &py_infer, py::arg("schema_json"), py::arg("expr"), py::arg("max_paths") = 10000,
          "Compatible schema triples as (src, expr, trg) tuples.");
    m.def("rewrite", &py_rewrite, py::arg("schema_json"), py::arg("query"), py::arg("max_paths") = 10000,
          py::arg("max_alternatives") = 64, "Schema-enriched query and diagnostics.");
    m.def("emit_sql", &py_emit_sql, py::arg("query"), py::arg("dialect") = "postgres", py::arg("as_view") = false);
    m.def("emit_cypher", &py_emit_cypher, py::arg("query"));
    m.def("eval", &py_eval, py::arg("nodes_csv"), py::arg("edges_csv"), py::arg("query"),
          "Sorted answer tuples of node ids.");
    m.def("check", &py_check, py::arg("schema_json"), py::arg("nodes_csv"), py::arg("edges_csv"),
          "Violations as (kind, element, detail) tuples; empty when consistent.");
    m.def("gen", &py_gen, py::arg("schema_json"), py::arg("seed"), py::arg("nodes"), py::arg("prob"),
          "Random conforming database as (nodes_csv, edges_csv) text.");
}
