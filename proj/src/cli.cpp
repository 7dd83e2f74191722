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

#include "pathforge/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "pathforge/config.hpp"
#include "pathforge/consistency.hpp"
#include "pathforge/emit.hpp"
#include "pathforge/error.hpp"
#include "pathforge/eval.hpp"
#include "pathforge/graph_db.hpp"
#include "pathforge/inference.hpp"
#include "pathforge/rewriter.hpp"
#include "pathforge/schema.hpp"
#include "pathforge/simplifier.hpp"
#include "pathforge/ucqt.hpp"

namespace pathforge {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct GlobalFlags {
    bool json = false;
    bool strict = false;
    std::string config;
    std::optional<std::size_t> max_paths;
    std::optional<std::size_t> max_alternatives;
};

class Console {
  public:
    Console(std::ostream& out, std::ostream& err, bool color) : out(out), err(err), color_(color) {}

    std::string bold(const std::string& s) const { return color_ ? "\x1b[1m" + s + "\x1b[0m" : s; }

    void warn(const std::string& msg) {
        ++warnings;
        err << (color_ ? "\x1b[33mwarning:\x1b[0m " : "warning: ") << msg << "\n";
    }

    void error(const std::string& msg) const {
        err << (color_ ? "\x1b[31merror:\x1b[0m " : "error: ") << msg << "\n";
    }

    std::ostream& out;
    std::ostream& err;
    int warnings = 0;

  private:
    bool color_;
};

bool use_color(const std::ostream& err) {
    if (std::getenv("PATHFORGE_NO_COLOR") != nullptr) return false;
    return &err == &std::cerr && ::isatty(STDERR_FILENO) != 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// `--query` takes a file path or the query text itself.
UcqtQuery load_query(const std::string& arg) {
    std::error_code ec;
    if (fs::is_regular_file(arg, ec)) return parse_ucqt(read_file(arg));
    return parse_ucqt(arg);
}

std::pair<std::string, std::string> split_db(const std::string& arg) {
    auto comma = arg.find(',');
    if (comma == std::string::npos) throw LoadError("--db expects nodes.csv,edges.csv");
    return {arg.substr(0, comma), arg.substr(comma + 1)};
}

RewriteOptions rewrite_options(const GlobalFlags& g) {
    RewriteOptions opts;
    if (!g.config.empty()) opts = load_config_file(g.config, opts);
    if (g.max_paths) opts.infer.max_paths = *g.max_paths;
    if (g.max_alternatives) opts.max_alternatives = *g.max_alternatives;
    return opts;
}

void check_labels(const UcqtQuery& q, const GraphSchema& schema) {
    for (const auto& c : q.disjuncts) {
        for (const auto& r : c.relations) {
            for (const auto& l : edge_labels_of(r.expr)) {
                if (!schema.has_edge_label(l)) throw QueryError("edge label '" + l + "' is not in the schema");
            }
            for (const auto& l : annotation_labels_of(r.expr)) {
                if (!schema.has_node_label(l)) throw QueryError("node label '" + l + "' is not in the schema");
            }
        }
        for (const auto& la : c.label_atoms) {
            for (const auto& l : la.labels) {
                if (!schema.has_node_label(l)) throw QueryError("node label '" + l + "' is not in the schema");
            }
        }
    }
}

json triple_json(const SchemaTriple& t) { return {{"src", t.src}, {"expr", to_string(t.expr)}, {"trg", t.trg}}; }

json merged_json(const MergedTriple& m) {
    return {{"src_set", m.src_set}, {"expr", to_string(m.expr)}, {"trg_set", m.trg_set}};
}

std::string rule_name(const PathExpr& e) {
    switch (e.op()) {
        case PathOp::Label: return "TBasic";
        case PathOp::Reverse: return "TReverse";
        case PathOp::Concat:
        case PathOp::AnnConcat: return "TConcat";
        case PathOp::Union: return "TUnion";
        case PathOp::Conj: return "TConj";
        case PathOp::BranchRight: return "TBranchR";
        case PathOp::BranchLeft: return "TBranchL";
        case PathOp::Plus: return "TPlus";
        case PathOp::Repeat: return "TRepeat";
    }
    return "?";
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

/// TERM | TRIPLES | RULE, one line per triple.
void derivation_table(const std::vector<InferTraceRow>& trace, Console& con, const std::string& indent = "") {
    std::size_t tw = 4, xw = 7;
    for (const auto& row : trace) {
        tw = std::max(tw, to_string(row.subterm).size());
        for (const auto& t : row.triples) xw = std::max(xw, to_string(t).size());
    }
    con.out << indent << con.bold(pad("TERM", tw) + "  " + pad("TRIPLES", xw) + "  RULE") << "\n";
    for (const auto& row : trace) {
        std::string term = to_string(row.subterm);
        std::string rule = rule_name(row.subterm);
        if (row.triples.empty()) {
            con.out << indent << pad(term, tw) << "  " << pad("(none)", xw) << "  " << rule << "\n";
            continue;
        }
        for (std::size_t i = 0; i < row.triples.size(); ++i) {
            con.out << indent << pad(i == 0 ? term : "", tw) << "  ";
            if (i == 0) {
                con.out << pad(to_string(row.triples[i]), xw) << "  " << rule << "\n";
            } else {
                con.out << to_string(row.triples[i]) << "\n";
            }
        }
    }
}

void explain_rewrite(const RewriteOutcome& rw, Console& con) {
    for (std::size_t i = 0; i < rw.atoms.size(); ++i) {
        const AtomReport& a = rw.atoms[i];
        con.out << con.bold("atom " + std::to_string(i + 1)) << " (disjunct " << a.disjunct + 1
                << "): " << to_string(a.original) << "\n";
        for (const auto& s : a.simplify_steps) {
            con.out << "  " << s.rule << ": " << to_string(s.before) << "  =>  " << to_string(s.after) << "\n";
        }
        if (a.simplified != a.original.expr) con.out << "  simplified: " << to_string(a.simplified) << "\n";
        if (!a.trace.empty()) derivation_table(a.trace, con, "  ");
        for (const auto& m : a.merged) con.out << "  merged: " << to_string(m) << "\n";
        con.out << "  " << (a.reverted ? "reverted" : "enriched");
        if (!a.note.empty()) con.out << " (" << a.note << ")";
        con.out << "\n\n";
    }
}

json rewrite_json(const UcqtQuery& original, const RewriteOutcome& rw) {
    json atoms = json::array();
    for (const auto& a : rw.atoms) {
        json triples = json::array();
        for (const auto& t : a.triples) triples.push_back(triple_json(t));
        json merged = json::array();
        for (const auto& m : a.merged) merged.push_back(merged_json(m));
        atoms.push_back({{"disjunct", a.disjunct},
                         {"original", to_string(a.original)},
                         {"simplified", to_string(a.simplified)},
                         {"triples", triples},
                         {"merged", merged},
                         {"reverted", a.reverted},
                         {"note", a.note}});
    }
    return {{"original", to_string(original)},
            {"query", to_string(rw.enriched)},
            {"unsatisfiable", rw.unsatisfiable},
            {"path_cap_hit", rw.path_cap_hit},
            {"warnings", rw.warnings},
            {"atoms", atoms}};
}

struct Target {
    bool cypher = false;
    SqlDialect dialect = SqlDialect::Postgres;
};

Target parse_target(const std::string& s) {
    if (s == "cypher") return {true, SqlDialect::Postgres};
    if (s.rfind("sql:", 0) == 0) {
        if (auto d = parse_dialect(s.substr(4))) return {false, *d};
    } else if (s == "sql") {
        return {false, SqlDialect::Postgres};
    }
    throw QueryError("unknown target '" + s + "' (expected sql:postgres, sql:sqlite, sql:mysql or cypher)");
}

/// Emitted text, or nullopt with a warning when the target cannot express
/// the query.
std::optional<std::string> emit_text(const UcqtQuery& q, const Target& t, bool as_view, Console& con,
                                     std::optional<UnsupportedReport>* report = nullptr) {
    if (!t.cypher) return emit_sql(q, SqlOptions{t.dialect, as_view});
    CypherResult r = emit_cypher(q);
    if (!r.ok()) {
        con.warn(r.unsupported->message());
        if (report) *report = r.unsupported;
        return std::nullopt;
    }
    return r.text;
}

void report_rewrite_warnings(const RewriteOutcome& rw, Console& con) {
    for (const auto& w : rw.warnings) con.warn(w);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Console con(out, err, use_color(err));
    GlobalFlags g;

    CLI::App app{"Schema-based rewriting of recursive graph queries", "pathforge"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_flag("--strict", g.strict, "Exit with code 4 when any warning is raised");
    app.add_option("--config", g.config, "key=value file with max_paths / max_alternatives");
    app.add_option("--max-paths", g.max_paths, "Simple paths enumerated per closure");
    app.add_option("--max-alternatives", g.max_alternatives, "Alternatives per relation atom");

    std::string expr_text, schema_path, query_arg, db_arg, target = "sql:postgres", out_dir;
    bool explain = false, naive = false, as_view = false, stats = false;
    std::uint64_t seed = 0;
    int nodes = 5;
    double prob = 0.3;

    auto* simplify_cmd = app.add_subcommand("simplify", "Normalise a path expression");
    simplify_cmd->add_option("expr", expr_text, "Path expression")->required();

    auto* infer_cmd = app.add_subcommand("infer", "Schema triples compatible with a path expression");
    infer_cmd->add_option("--schema", schema_path, "Schema JSON")->required();
    infer_cmd->add_option("expr", expr_text, "Path expression")->required();
    infer_cmd->add_flag("--explain", explain, "Print the per-subterm derivation table");

    auto* rewrite_cmd = app.add_subcommand("rewrite", "Schema-enriched equivalent of a query");
    rewrite_cmd->add_option("--schema", schema_path, "Schema JSON")->required();
    rewrite_cmd->add_option("--query", query_arg, "Query file or text")->required();
    rewrite_cmd->add_flag("--explain", explain, "Print the derivation of every atom");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a query on a database");
    eval_cmd->add_option("--db", db_arg, "nodes.csv,edges.csv")->required();
    eval_cmd->add_option("--query", query_arg, "Query file or text")->required();
    eval_cmd->add_flag("--naive", naive, "Naive closure iteration");
    eval_cmd->add_flag("--stats", stats, "Print work counters to stderr");

    auto* emit_cmd = app.add_subcommand("emit", "Translate a query to SQL or Cypher");
    emit_cmd->add_option("--target", target, "sql:postgres | sql:sqlite | sql:mysql | cypher");
    emit_cmd->add_option("--schema", schema_path, "Schema JSON used to check labels");
    emit_cmd->add_option("--query", query_arg, "Query file or text")->required();
    emit_cmd->add_flag("--as-view", as_view, "Closures as recursive views");

    auto* gen_cmd = app.add_subcommand("gen", "Random database conforming to a schema");
    gen_cmd->add_option("--schema", schema_path, "Schema JSON")->required();
    gen_cmd->add_option("--seed", seed, "Random seed");
    gen_cmd->add_option("--nodes", nodes, "Nodes per label")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--prob", prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--out", out_dir, "Output directory")->required();

    auto* check_cmd = app.add_subcommand("check", "Check a database against a schema");
    check_cmd->add_option("--schema", schema_path, "Schema JSON")->required();
    check_cmd->add_option("--db", db_arg, "nodes.csv,edges.csv")->required();

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Rewrite, explain and emit original and enriched forms");
    pipeline_cmd->add_option("--schema", schema_path, "Schema JSON")->required();
    pipeline_cmd->add_option("--query", query_arg, "Query file or text")->required();
    pipeline_cmd->add_option("--target", target, "sql:postgres | sql:sqlite | sql:mysql | cypher");
    pipeline_cmd->add_flag("--as-view", as_view, "Closures as recursive views");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        con.error(e.what());
        err << app.help();
        return kExitInput;
    }

    int code = kExitOk;
    try {
        if (simplify_cmd->parsed()) {
            PathExpr e = parse_path_expr(expr_text);
            std::vector<RewriteStep> steps;
            PathExpr s = simplify(desugar(e), &steps);
            if (g.json) {
                json js = json::array();
                for (const auto& st : steps) {
                    js.push_back({{"rule", st.rule}, {"before", to_string(st.before)}, {"after", to_string(st.after)}});
                }
                out << json{{"input", to_string(e)}, {"output", to_string(s)}, {"steps", js}}.dump(2) << "\n";
            } else {
                out << to_string(s) << "\n";
            }
        } else if (infer_cmd->parsed()) {
            GraphSchema schema = load_schema_file(schema_path);
            PathExpr e = desugar(parse_path_expr(expr_text));
            RewriteOptions opts = rewrite_options(g);
            InferDiagnostics diag;
            auto triples = infer(e, schema, opts.infer, &diag);
            for (const auto& w : diag.warnings) con.warn(w);
            if (g.json) {
                json ts = json::array();
                for (const auto& t : triples) ts.push_back(triple_json(t));
                json doc = {{"expr", to_string(e)}, {"triples", ts}, {"warnings", diag.warnings}};
                if (explain) {
                    json rows = json::array();
                    for (const auto& row : diag.trace) {
                        json rt = json::array();
                        for (const auto& t : row.triples) rt.push_back(triple_json(t));
                        rows.push_back({{"term", to_string(row.subterm)}, {"rule", rule_name(row.subterm)}, {"triples", rt}});
                    }
                    doc["trace"] = rows;
                }
                out << doc.dump(2) << "\n";
            } else if (explain) {
                derivation_table(diag.trace, con);
            } else {
                for (const auto& t : triples) out << t.src << "  --[ " << to_string(t.expr) << " ]-->  " << t.trg << "\n";
            }
        } else if (rewrite_cmd->parsed()) {
            GraphSchema schema = load_schema_file(schema_path);
            UcqtQuery q = load_query(query_arg);
            RewriteOutcome rw = rewrite(q, schema, rewrite_options(g));
            report_rewrite_warnings(rw, con);
            if (g.json) {
                out << rewrite_json(q, rw).dump(2) << "\n";
            } else {
                if (explain) explain_rewrite(rw, con);
                out << to_string(rw.enriched) << "\n";
            }
        } else if (eval_cmd->parsed()) {
            auto [nodes_csv, edges_csv] = split_db(db_arg);
            GraphDB db = load_db_files(nodes_csv, edges_csv);
            UcqtQuery q = load_query(query_arg);
            EvalStats st;
            auto rows = eval_ucqt(q, db, EvalOptions{naive}, &st);
            if (g.json) {
                out << json{{"head", q.head},
                            {"rows", rows},
                            {"stats",
                             {{"closure_pairs", st.closure_pairs},
                              {"materialized_pairs", st.materialized_pairs},
                              {"peak_pairs", st.peak_pairs}}}}
                           .dump(2)
                    << "\n";
            } else {
                for (const auto& row : rows) {
                    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
                    out << "\n";
                }
            }
            if (stats) {
                err << "closure_pairs=" << st.closure_pairs << " materialized_pairs=" << st.materialized_pairs
                    << " peak_pairs=" << st.peak_pairs << "\n";
            }
        } else if (emit_cmd->parsed()) {
            Target t = parse_target(target);
            UcqtQuery q = load_query(query_arg);
            if (!schema_path.empty()) check_labels(q, load_schema_file(schema_path));
            std::optional<UnsupportedReport> report;
            auto text = emit_text(q, t, as_view, con, &report);
            if (g.json) {
                json doc = {{"target", target}, {"text", text ? json(*text) : json(nullptr)}};
                doc["unsupported"] = report ? json{{"construct", report->construct}, {"detail", report->detail}} : json(nullptr);
                out << doc.dump(2) << "\n";
            } else if (text) {
                out << *text;
            }
        } else if (gen_cmd->parsed()) {
            GraphSchema schema = load_schema_file(schema_path);
            GraphDB db = gen_db(schema, seed, nodes, prob);
            fs::create_directories(out_dir);
            fs::path dir(out_dir);
            std::ofstream(dir / "nodes.csv", std::ios::binary) << nodes_to_csv(db);
            std::ofstream(dir / "edges.csv", std::ios::binary) << edges_to_csv(db);
            if (g.json) {
                out << json{{"nodes", db.node_count()},
                            {"edges", db.edge_count()},
                            {"nodes_csv", (dir / "nodes.csv").string()},
                            {"edges_csv", (dir / "edges.csv").string()}}
                           .dump(2)
                    << "\n";
            } else {
                out << "wrote " << db.node_count() << " nodes and " << db.edge_count() << " edges to " << out_dir << "\n";
            }
        } else if (check_cmd->parsed()) {
            GraphSchema schema = load_schema_file(schema_path);
            auto [nodes_csv, edges_csv] = split_db(db_arg);
            ConsistencyReport rep = check_consistency(load_db_files(nodes_csv, edges_csv), schema);
            if (g.json) {
                json vs = json::array();
                for (const auto& v : rep.violations) {
                    vs.push_back({{"kind", std::string(to_string(v.kind))}, {"element", v.element}, {"detail", v.detail}});
                }
                out << json{{"consistent", rep.consistent()}, {"violations", vs}}.dump(2) << "\n";
            } else if (rep.consistent()) {
                out << "consistent\n";
            } else {
                for (const auto& v : rep.violations) out << to_string(v.kind) << "\t" << v.element << "\t" << v.detail << "\n";
            }
            if (!rep.consistent()) return kExitInconsistent;
        } else if (pipeline_cmd->parsed()) {
            Target t = parse_target(target);
            GraphSchema schema = load_schema_file(schema_path);
            UcqtQuery q = load_query(query_arg);
            check_labels(q, schema);
            RewriteOutcome rw = rewrite(q, schema, rewrite_options(g));
            report_rewrite_warnings(rw, con);
            auto before = emit_text(q, t, as_view, con);
            auto after = emit_text(rw.enriched, t, as_view, con);
            if (g.json) {
                json doc = rewrite_json(q, rw);
                doc["target"] = target;
                doc["original_text"] = before ? json(*before) : json(nullptr);
                doc["enriched_text"] = after ? json(*after) : json(nullptr);
                out << doc.dump(2) << "\n";
            } else {
                out << con.bold("== original") << "\n" << to_string(q) << "\n";
                out << con.bold("== enriched") << "\n" << to_string(rw.enriched) << "\n\n";
                out << con.bold("== derivation") << "\n";
                explain_rewrite(rw, con);
                out << con.bold("== " + target + " (original)") << "\n" << before.value_or("(unsupported)\n");
                out << "\n" << con.bold("== " + target + " (enriched)") << "\n" << after.value_or("(unsupported)\n");
            }
        }
    } catch (const ParseError& e) {
        con.error(e.what());
        return kExitInput;
    } catch (const LoadError& e) {
        con.error(e.what());
        return kExitInput;
    } catch (const QueryError& e) {
        con.error(e.what());
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        con.error(e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        con.error(std::string("internal: ") + e.what());
        return kExitInternal;
    }

    if (g.strict && con.warnings > 0) code = kExitStrict;
    return code;
}

}  // namespace pathforge
