#pragma once
// Front end: argument grammar, dispatch, and the formatters that derive the
// human-readable views from the JSON documents (JSON is the source of truth).
// run() is stream-parameterized so the whole surface is testable in-process.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbatlas/cohomology.hpp"
#include "bbatlas/gathmann.hpp"
#include "bbatlas/selftest.hpp"
#include "bbatlas/serialize.hpp"

namespace bbatlas {

struct RunConfig {
    std::string command;
    int n = 0;
    int r = 2;
    int d = 1;
    std::string format = "json";
    std::string cache_dir;
    long long ceiling = 1000000;
    int width = 1;
    unsigned long long seed = 0;
};

namespace detail {

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open " + path, json{{"path", path}});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(errc::schema_violation, "not JSON: " + path,
             json{{"path", path}, {"what", e.what()}});
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing",
                   json{{"path", path}});
    out << text;
    if (!out) fail(errc::io_error, "short write to " + path, json{{"path", path}});
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

// the one formatter deriving the human summary from the enumerate JSON
inline std::string format_enumerate_summary(const json& doc) {
    std::ostringstream o;
    o << doc.at("count").get<long long>() << " graphs; codim histogram";
    for (const auto& bucket : doc.at("codim_histogram"))
        o << " " << bucket.at("codim").get<int>() << ":"
          << bucket.at("count").get<long long>();
    return o.str();
}

inline std::string format_selftest_table(const json& doc) {
    size_t name_width = 0;
    for (const auto& row : doc.at("checks"))
        name_width = std::max(name_width, row.at("name").get<std::string>().size());
    std::ostringstream o;
    for (const auto& row : doc.at("checks")) {
        std::string name = row.at("name").get<std::string>();
        o << name << std::string(name_width - name.size() + 2, ' ')
          << (row.at("pass").get<bool>() ? "PASS" : "FAIL") << "  "
          << row.at("detail").get<std::string>() << "\n";
    }
    o << doc.at("passed").get<int>() << "/" << doc.at("total").get<int>()
      << " checks passed\n";
    return o.str();
}

inline std::string poset_hasse_dot(const PosetData& pd) {
    std::ostringstream o;
    o << "digraph bbatlas_hasse {\n  rankdir=TB;\n";
    for (size_t i = 0; i < pd.nodes.size(); ++i)
        o << "  n" << i << " [label=\"" << i << " | L=" << pd.level[i] << "\", key=\""
          << detail::dot_escape(pd.keys[i]) << "\"];\n";
    for (const auto& [i, j] : pd.covers) o << "  n" << i << " -> n" << j << ";\n";
    o << "}\n";
    return o.str();
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"decorated-graph atlas for torus-fixed loci of genus-0 stable maps"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_triple = [&](CLI::App* cmd) {
        cmd->add_option("--n", cfg.n, "number of marked points")->required();
        cmd->add_option("--d", cfg.d, "total degree")->required();
        cmd->add_option("--r", cfg.r, "target projective dimension")->required();
    };
    auto add_ceiling = [&](CLI::App* cmd) {
        cmd->add_option("--ceiling", cfg.ceiling, "graph-count ceiling")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "list the decorated graphs");
    add_triple(enumerate_cmd);
    add_ceiling(enumerate_cmd);
    enumerate_cmd->add_option("--format", cfg.format, "json | dot | summary")
        ->check(CLI::IsMember({"json", "dot", "summary"}));

    CLI::App* poset_cmd = app.add_subcommand("poset", "specialization order and levels");
    add_triple(poset_cmd);
    add_ceiling(poset_cmd);
    bool check_filterable = false;
    std::string hasse_path;
    poset_cmd->add_flag("--check-filterable", check_filterable,
                        "verify the filterability conditions");
    poset_cmd->add_option("--hasse", hasse_path, "write the Hasse diagram as DOT");

    CLI::App* poincare_cmd = app.add_subcommand("poincare", "Poincaré polynomial");
    poincare_cmd->add_option("--r", cfg.r, "target projective dimension")->required();
    poincare_cmd->add_option("--d", cfg.d, "total degree")->required();
    poincare_cmd->add_option("--n", cfg.n, "number of marked points")->required();
    add_ceiling(poincare_cmd);
    bool per_graph = false;
    poincare_cmd->add_flag("--per-graph", per_graph, "include per-fixed-locus terms");
    poincare_cmd->add_option("--cache-dir", cfg.cache_dir, "polynomial cache directory");
    poincare_cmd->add_option("--width", cfg.width, "worker count")
        ->check(CLI::PositiveNumber);

    CLI::App* limit_cmd = app.add_subcommand("limit", "torus-flow limit of a configuration");
    std::string config_path, poly_path;
    limit_cmd->add_option("--config", config_path, "transversal configuration JSON");
    limit_cmd->add_option("--poly", poly_path, "parametrized map JSON");
    limit_cmd->add_option("--r", cfg.r, "target projective dimension (config route)");
    limit_cmd->add_option("--format", cfg.format, "json | dot")
        ->check(CLI::IsMember({"json", "dot"}));

    CLI::App* boundary_cmd =
        app.add_subcommand("boundary", "flow a boundary degeneration and certify it");
    std::string boundary_path, gamma_path;
    boundary_cmd->add_option("--config", boundary_path, "boundary configuration JSON")
        ->required();
    boundary_cmd->add_option("--gamma", gamma_path, "comparison graph JSON")->required();
    boundary_cmd->add_option("--r", cfg.r, "target projective dimension");
    add_ceiling(boundary_cmd);

    CLI::App* gathmann_cmd =
        app.add_subcommand("gathmann", "tangency recursion boundary terms");
    std::string alpha_csv;
    int tangency_j = 1;
    bool ordered = false;
    gathmann_cmd->add_option("--alpha", alpha_csv, "tangency vector, comma-separated")
        ->required();
    gathmann_cmd->add_option("--j", tangency_j, "marking whose tangency is raised")
        ->required();
    gathmann_cmd->add_option("--d", cfg.d, "total degree")->required();
    gathmann_cmd->add_option("--r", cfg.r, "target projective dimension")->required();
    gathmann_cmd->add_flag("--ordered", ordered, "enumerate ordered group sequences");

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "independent reference computations");
    oracle_cmd->require_subcommand(1);
    CLI::App* mbar_cmd =
        oracle_cmd->add_subcommand("mbar", "Betti numbers of the moduli of marked curves");
    int oracle_m = 0;
    mbar_cmd->add_option("--m", oracle_m, "number of marked points")->required();

    CLI::App* selftest_cmd = app.add_subcommand("selftest", "run every library invariant");
    SelftestOptions sopt;
    selftest_cmd->add_option("--max-n", sopt.max_n, "marked-point bound");
    selftest_cmd->add_option("--max-r", sopt.max_r, "target-dimension bound");
    selftest_cmd->add_option("--max-d", sopt.max_d, "degree bound");
    selftest_cmd->add_option("--seed", sopt.seed, "random-generator seed");
    selftest_cmd->add_option("--samples", sopt.samples, "random configurations per triple")
        ->check(CLI::PositiveNumber);
    selftest_cmd->add_option("--width", sopt.width, "worker count")
        ->check(CLI::PositiveNumber);
    selftest_cmd->add_option("--cache-dir", sopt.cache_dir, "polynomial cache directory");
    selftest_cmd->add_option("--ceiling", sopt.ceiling, "graph-count ceiling")
        ->check(CLI::PositiveNumber);
    std::string selftest_format = "table";
    selftest_cmd->add_option("--format", selftest_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(enumerate_cmd)) {
            EnumerateOptions eopts;
            eopts.ceiling = cfg.ceiling;
            std::vector<Graph> graphs = enumerate_graphs(cfg.n, cfg.r, cfg.d, eopts);
            std::map<int, long long> histogram;
            for (const auto& g : graphs) ++histogram[codimension(g)];
            json buckets = json::array();
            for (const auto& [c, k] : histogram)
                buckets.push_back({{"codim", c}, {"count", k}});
            json doc{{"command", "enumerate"}, {"n", cfg.n},   {"d", cfg.d},
                     {"r", cfg.r},             {"count", graphs.size()},
                     {"codim_histogram", buckets}};
            if (cfg.format == "summary") {
                out << format_enumerate_summary(doc) << "\n";
            } else if (cfg.format == "dot") {
                for (const auto& g : graphs) out << graph_to_dot(g);
            } else {
                json list = json::array();
                for (const auto& g : graphs) list.push_back(graph_to_json(g));
                doc["graphs"] = std::move(list);
                out << doc.dump() << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(poset_cmd)) {
            PosetData pd = build_poset(cfg.n, cfg.r, cfg.d, cfg.ceiling);
            json nodes = json::array();
            for (size_t i = 0; i < pd.nodes.size(); ++i)
                nodes.push_back({{"index", i},
                                 {"key", pd.keys[i]},
                                 {"level", pd.level[i]},
                                 {"codim", codimension(pd.nodes[i])}});
            json covers = json::array();
            for (const auto& [i, j] : pd.covers) covers.push_back({i, j});
            json doc{{"command", "poset"}, {"n", cfg.n},      {"d", cfg.d},
                     {"r", cfg.r},         {"nodes", nodes},  {"covers", covers}};
            if (check_filterable) {
                // build_poset already threw if any graph were unreachable, so
                // every cell has a finite level.  Check the rest: a unique
                // level-0 node which is the open cell's graph, and a strictly
                // increasing rank certificate along covers (antisymmetry).
                bool ok = true;
                int zeros = 0;
                for (size_t i = 0; i < pd.nodes.size(); ++i) zeros += (pd.level[i] == 0);
                ok = ok && zeros == 1;
                for (const auto& [i, j] : pd.covers)
                    ok = ok && potential(pd.nodes[i]) < potential(pd.nodes[j]);
                const std::string top =
                    canonical_form(maximal_graph(cfg.n, cfg.r, cfg.d)).key;
                bool top_found = false;
                for (size_t i = 0; i < pd.nodes.size(); ++i)
                    if (pd.level[i] == 0 && pd.keys[i] == top) top_found = true;
                doc["filterable"] = ok && top_found;
            }
            if (!hasse_path.empty())
                detail::write_text_file(hasse_path, poset_hasse_dot(pd));
            out << doc.dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(poincare_cmd)) {
            CohomologyOptions copts;
            copts.graph_ceiling = cfg.ceiling;
            copts.width = cfg.width;
            copts.cache_dir = cfg.cache_dir;
            PoincarePoly q = poincare_moduli(cfg.r, cfg.d, cfg.n, copts);
            json doc = poly_to_json(q);
            if (per_graph) {
                EnumerateOptions eopts;
                eopts.ceiling = cfg.ceiling;
                json terms = json::array();
                for (const auto& g : enumerate_graphs(cfg.n, cfg.r, cfg.d, eopts)) {
                    PoincarePoly p = poincare_fixed_locus(g, cfg.r, copts);
                    terms.push_back({{"graph", canonical_form(g).key},
                                     {"codim", codimension(g)},
                                     {"poly", p.c}});
                }
                doc["per_graph"] = std::move(terms);
            }
            out << doc.dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(limit_cmd)) {
            if (config_path.empty() == poly_path.empty())
                fail(errc::invalid_parameters,
                     "limit needs exactly one of --config and --poly",
                     json{{"config", config_path}, {"poly", poly_path}});
            Graph g;
            if (!config_path.empty()) {
                TransversalConfig tc =
                    transversal_from_json(detail::read_json_file(config_path));
                g = limit_graph(tc, cfg.r);
            } else {
                g = limit_from_polynomials(parammap_from_json(detail::read_json_file(poly_path)))
                        .graph;
            }
            if (cfg.format == "dot") {
                out << graph_to_dot(g);
            } else {
                out << json{{"graph", graph_to_json(g)}, {"dot", graph_to_dot(g)}}.dump()
                    << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(boundary_cmd)) {
            BoundaryConfig bc = boundary_from_json(detail::read_json_file(boundary_path));
            Graph gamma = graph_from_json(detail::read_json_file(gamma_path));
            validate(gamma, cfg.r);
            BoundaryFlowResult res = boundary_flow(bc, gamma, cfg.r, cfg.ceiling);
            out << json{{"gamma_f", graph_to_json(res.gamma_f)},
                        {"witness", moves_to_json(res.witness)}}
                       .dump()
                << "\n";
            return 0;
        }

        if (app.got_subcommand(gathmann_cmd)) {
            TangencyVector tv;
            tv.r = cfg.r;
            tv.d = cfg.d;
            std::stringstream ss(alpha_csv);
            std::string piece;
            while (std::getline(ss, piece, ',')) {
                try {
                    size_t used = 0;
                    long long v = std::stoll(piece, &used);
                    if (used != piece.size()) throw std::invalid_argument(piece);
                    tv.entries.push_back(v);
                } catch (const std::exception&) {
                    err << "--alpha: expected a comma-separated integer list, got \""
                        << alpha_csv << "\"\n";
                    return 2;
                }
            }
            RecursionExpression expr = recursion_expression(tv, tangency_j);
            if (ordered) expr.corrections = enumerate_boundary_terms(tv, tangency_j, true);
            json doc = to_json(expr);
            doc["ordered"] = ordered;
            out << doc.dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(oracle_cmd)) {
            PoincarePoly poly = betti_from_counts(oracle_m);
            json samples = json::array();
            long long p = next_prime_ge(std::max<long long>(5, oracle_m));
            for (int i = 0; i < oracle_m - 2; ++i) {
                samples.push_back({{"q", p}, {"count", count_closed(p, oracle_m)}});
                p = next_prime_ge(p + 1);
            }
            json doc{{"m", oracle_m},
                     {"poly", poly.c},
                     {"samples", samples},
                     {"verification", {{"q", p}, {"count", count_closed(p, oracle_m)}}}};
            out << doc.dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(selftest_cmd)) {
            std::vector<CheckResult> results = run_selftest(sopt);
            int passed = 0;
            json checks = json::array();
            for (const auto& res : results) {
                passed += res.pass;
                checks.push_back(
                    {{"name", res.name}, {"pass", res.pass}, {"detail", res.detail}});
            }
            json doc{{"command", "selftest"},
                     {"checks", checks},
                     {"passed", passed},
                     {"total", results.size()}};
            if (selftest_format == "json")
                out << doc.dump() << "\n";
            else
                out << format_selftest_table(doc);
            return passed == static_cast<int>(results.size()) ? 0 : 1;
        }
    } catch (const error& e) {
        err << e.to_json().dump() << "\n";
        return 1;
    }

    err << "no subcommand dispatched\n";
    return 2;
}

}  // namespace bbatlas
