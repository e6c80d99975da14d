#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "bbatlas/cli.hpp"
#include "fixtures.hpp"

using namespace bbatlas;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "bbatlas-test-cli";
[[maybe_unused]] const bool kWorkDirReady = [] {
    fs::remove_all(kWorkDir);
    fs::create_directories(kWorkDir);
    return true;
}();

struct RunResult {
    int exit_code;
    std::string out, err;
};

RunResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string write_doc(const std::string& name, const json& doc) {
    const std::string path = (kWorkDir / name).string();
    std::ofstream(path) << doc.dump();
    return path;
}

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code;
    }
    FAIL("expected a bbatlas::error");
    return errc::internal;
}

std::string pointer_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        REQUIRE(e.code == errc::schema_violation);
        return e.details.at("pointer").get<std::string>();
    }
    FAIL("expected a schema violation");
    return "";
}

}  // namespace

TEST_CASE("graph JSON round trip", "[cli]") {
    // spec'd shapes: id/label(/degree) vertices, p/h/degree edges, marking/vertex legs
    Graph g = maximal_graph(2, 2, 3);
    json doc = graph_to_json(g);
    CHECK(doc.at("schema") == kGraphSchema);
    CHECK(doc.at("n") == 2);
    CHECK(doc.at("d") == 3);
    CHECK(doc.at("vertices").size() == 4);
    CHECK(doc.at("vertices")[0].at("label") == "P");
    CHECK(!doc.at("vertices")[0].contains("degree"));
    CHECK(doc.at("vertices")[1].at("degree") == 0);
    CHECK(canonical_form(graph_from_json(doc)).key == canonical_form(g).key);

    for (const Graph& h : enumerate_graphs(1, 2, 2))
        CHECK(canonical_form(graph_from_json(graph_to_json(h))).key ==
              canonical_form(h).key);

    // ids need not be storage indices
    json relabeled = doc;
    relabeled["vertices"][0]["id"] = 40;
    for (auto& e : relabeled["edges"])
        if (e["p"] == 0) e["p"] = 40;
    for (auto& l : relabeled["legs"])
        if (l["vertex"] == 0) l["vertex"] = 40;
    CHECK(canonical_form(graph_from_json(relabeled)).key == canonical_form(g).key);
}

TEST_CASE("graph JSON strictness", "[cli]") {
    const json doc = graph_to_json(maximal_graph(1, 2, 2));

    SECTION("unknown fields carry pointer paths") {
        json j = doc;
        j["note"] = 1;
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/note");
        j = doc;
        j["vertices"][1]["color"] = "red";
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/vertices/1/color");
        j = doc;
        j["edges"][0]["weight"] = 3;
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/edges/0/weight");
    }

    SECTION("missing fields") {
        json j = doc;
        j.erase("legs");
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/legs");
        j = doc;
        j["edges"][0].erase("degree");
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/edges/0/degree");
    }

    SECTION("wrong kinds") {
        json j = doc;
        j["n"] = "two";
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/n");
        j = doc;
        j["vertices"][0]["label"] = "Q";
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/vertices/0/label");
    }

    SECTION("schema versioning") {
        json j = doc;
        j["schema"] = "bbatlas/graph-0";
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/schema");
        j.erase("schema");
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/schema");
    }

    SECTION("id discipline") {
        json j = doc;
        j["vertices"][1]["id"] = 0;  // collides with the P-vertex
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/vertices/1/id");
        j = doc;
        j["edges"][0]["h"] = 99;
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/edges/0/h");
    }

    SECTION("P-vertices carry no degree") {
        json j = doc;
        j["vertices"][0]["degree"] = 0;
        CHECK(pointer_of([&] { graph_from_json(j); }) == "/vertices/0/degree");
    }

    SECTION("H degree defaults to zero") {
        json j = doc;
        j["vertices"][1].erase("degree");
        Graph g = graph_from_json(j);
        CHECK(canonical_form(g).key == canonical_form(maximal_graph(1, 2, 2)).key);
    }

    SECTION("bipartite violations are semantic, not syntactic") {
        json j{{"schema", kGraphSchema},
               {"n", 0},
               {"d", 1},
               {"vertices", json::array({json{{"id", 0}, {"label", "P"}},
                                         json{{"id", 1}, {"label", "P"}}})},
               {"edges", json::array({json{{"p", 0}, {"h", 1}, {"degree", 1}}})},
               {"legs", json::array()}};
        Graph g = graph_from_json(j);  // parses fine
        CHECK(code_of([&] { validate(g, 2); }) == errc::not_a_valid_graph);
    }
}

TEST_CASE("polynomial and move serialization", "[cli]") {
    PoincarePoly p(std::vector<long long>{1, 2, 3, 3, 2, 1});
    json pj = poly_to_json(p);
    CHECK(pj.dump() == "{\"poly\":[1,2,3,3,2,1]}");
    CHECK(poly_from_json(pj) == p);
    CHECK(poly_from_json(json::parse(pj.dump())) == p);  // bit-exact through text

    CHECK(pointer_of([&] { poly_from_json(json{{"poly", {1, -2}}}); }) == "/poly/1");
    CHECK(pointer_of([&] { poly_from_json(json{{"poly", {1}}, {"x", 0}}); }) == "/x");

    Graph top = fixtures::star_d2();
    auto witness = leq_witness(fixtures::single_h(2), top, 2);
    REQUIRE(witness.has_value());
    REQUIRE(!witness->empty());
    json mj = moves_to_json(*witness);
    CHECK(mj.at("schema") == kMovesSchema);
    std::vector<MoveStep> back = moves_from_json(mj);
    CHECK(moves_to_json(back) == mj);
    // the deserialized witness still replays
    Graph cur = canonical_form(top).graph;
    for (const auto& step : back) cur = canonical_form(apply_move(cur, step, 2)).graph;
    CHECK(isomorphic(cur, fixtures::single_h(2)));

    json bad = mj;
    bad["moves"][0]["type"] = "shear";
    CHECK(pointer_of([&] { moves_from_json(bad); }) == "/moves/0/type");
}

TEST_CASE("configuration serialization round trips", "[cli]") {
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 25; ++i) {
        TransversalConfig cfg = random_transversal_config(2, 2, 3, rng);
        json j = transversal_to_json(cfg);
        CHECK(transversal_to_json(transversal_from_json(j)) == j);
        // the limit is computed from the parsed value, so the round trip is
        // behavior-preserving too
        CHECK(canonical_form(limit_graph(transversal_from_json(j), 2)).key ==
              canonical_form(limit_graph(cfg, 2)).key);
    }
    for (int i = 0; i < 25; ++i) {
        ParamMap pm = random_param_map_rational(1, 2, 3, rng);
        json j = parammap_to_json(pm);
        CHECK(parammap_to_json(parammap_from_json(j)) == j);
        CHECK(canonical_form(limit_from_polynomials(parammap_from_json(j)).graph).key ==
              canonical_form(limit_from_polynomials(pm).graph).key);
    }
    for (const auto& bc : enumerate_boundary_configs({2, 1}, 3, 2)) {
        json j = boundary_to_json(bc);
        CHECK(boundary_to_json(boundary_from_json(j)) == j);
    }

    json j = transversal_to_json(random_transversal_config(1, 2, 2, rng));
    j["components"][0]["spin"] = 1;
    CHECK(pointer_of([&] { transversal_from_json(j); }) == "/components/0/spin");

    json b;  // some configs keep everything internal; grab one with a group
    for (const auto& bc : enumerate_boundary_configs({1}, 1, 1))
        if (!bc.groups.empty()) b = boundary_to_json(bc);
    REQUIRE(!b.is_null());
    b["groups"][0]["config"]["schema"] = "bbatlas/transversal-0";
    CHECK(pointer_of([&] { boundary_from_json(b); }) == "/groups/0/config/schema");
}

TEST_CASE("DOT export shapes", "[cli]") {
    std::string dot = graph_to_dot(fixtures::single_h(2));
    CHECK(dot.find("shape=box") != std::string::npos);
    CHECK(dot.find("H,2") != std::string::npos);

    dot = graph_to_dot(maximal_graph(2, 2, 2));
    CHECK(dot.find("shape=circle") != std::string::npos);
    CHECK(dot.find("label=\"P\"") != std::string::npos);
    CHECK(dot.find("v0 -- v1 [label=\"1\"]") != std::string::npos);
    CHECK(dot.find("m1 -- v0 [style=dashed]") != std::string::npos);
    CHECK(dot.find("m2") != std::string::npos);
}

TEST_CASE("CLI enumerate", "[cli]") {
    auto res = cli({"enumerate", "--n", "0", "--d", "2", "--r", "2", "--format", "summary"});
    CHECK(res.exit_code == 0);
    CHECK(res.out == "5 graphs; codim histogram 0:1 1:1 2:1 3:2\n");
    CHECK(res.err.empty());

    res = cli({"enumerate", "--n", "0", "--d", "2", "--r", "2"});
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc.at("count") == 5);
    CHECK(doc.at("graphs").size() == 5);
    CHECK(format_enumerate_summary(doc) == "5 graphs; codim histogram 0:1 1:1 2:1 3:2");
    for (const auto& gj : doc.at("graphs")) {
        Graph g = graph_from_json(gj);
        validate(g, 2);
    }

    res = cli({"enumerate", "--n", "0", "--d", "1", "--r", "1", "--format", "dot"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("graph bbatlas {") != std::string::npos);
}

TEST_CASE("CLI poincare", "[cli]") {
    const std::string cache = (kWorkDir / "qcache").string();
    auto res = cli({"poincare", "--r", "2", "--d", "1", "--n", "0", "--cache-dir", cache});
    CHECK(res.exit_code == 0);
    CHECK(res.out == "{\"poly\":[1,1,1]}\n");

    res = cli({"poincare", "--r", "2", "--d", "1", "--n", "0", "--cache-dir", cache,
               "--per-graph"});
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc.at("poly") == json::array({1, 1, 1}));
    PoincarePoly sum = PoincarePoly::zero();
    for (const auto& term : doc.at("per_graph"))
        sum += PoincarePoly(term.at("poly").get<std::vector<long long>>())
                   .shifted(term.at("codim").get<int>());
    CHECK(sum == PoincarePoly(std::vector<long long>{1, 1, 1}));

    // domain failure: invalid parameters surface as a JSON error object
    res = cli({"poincare", "--r", "1", "--d", "0", "--n", "1", "--cache-dir", cache});
    CHECK(res.exit_code == 1);
    CHECK(res.out.empty());
    json errdoc = json::parse(res.err);
    CHECK(errdoc.at("error").at("code") == "invalid_parameters");
}

TEST_CASE("CLI exit codes and usage errors", "[cli]") {
    auto res = cli({"enumerate", "--n", "0", "--d", "2"});
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("--r") != std::string::npos);  // names the offending flag

    res = cli({"enumerate", "--n", "0", "--d", "2", "--r", "2", "--format", "yaml"});
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("--format") != std::string::npos);

    res = cli({"gathmann", "--alpha", "2,x", "--j", "1", "--d", "2", "--r", "2"});
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("--alpha") != std::string::npos);

    res = cli({});
    CHECK(res.exit_code == 2);

    res = cli({"--help"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("enumerate") != std::string::npos);

    res = cli({"enumerate", "--n", "0", "--d", "3", "--r", "3", "--ceiling", "2"});
    CHECK(res.exit_code == 1);  // resource ceiling is a domain error
    CHECK(json::parse(res.err).at("error").at("code") == "resource_limit");
}

TEST_CASE("CLI poset", "[cli]") {
    const std::string hasse = (kWorkDir / "hasse.dot").string();
    auto res = cli({"poset", "--n", "0", "--d", "2", "--r", "2", "--check-filterable",
                    "--hasse", hasse});
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc.at("nodes").size() == 5);
    CHECK(doc.at("filterable") == true);
    CHECK(doc.at("nodes")[0].at("level") == 0);
    std::ifstream in(hasse);
    std::stringstream contents;
    contents << in.rdbuf();
    CHECK(contents.str().find("digraph bbatlas_hasse") != std::string::npos);
    CHECK(contents.str().find("L=0") != std::string::npos);
    CHECK(contents.str().find("->") != std::string::npos);
}

TEST_CASE("CLI limit and boundary", "[cli]") {
    std::mt19937_64 rng(7);
    TransversalConfig cfg = random_transversal_config(1, 2, 2, rng);
    const std::string cfg_path = write_doc("cfg.json", transversal_to_json(cfg));
    auto res = cli({"limit", "--config", cfg_path, "--r", "2"});
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(canonical_form(graph_from_json(doc.at("graph"))).key ==
          canonical_form(limit_graph(cfg, 2)).key);
    CHECK(doc.at("dot").get<std::string>().find("graph bbatlas") != std::string::npos);

    res = cli({"limit", "--config", cfg_path, "--r", "2", "--format", "dot"});
    CHECK(res.exit_code == 0);
    CHECK(res.out == doc.at("dot").get<std::string>());

    ParamMap pm = random_param_map_rational(0, 2, 2, rng);
    const std::string pm_path = write_doc("map.json", parammap_to_json(pm));
    res = cli({"limit", "--poly", pm_path});
    CHECK(res.exit_code == 0);
    CHECK(canonical_form(graph_from_json(json::parse(res.out).at("graph"))).key ==
          canonical_form(limit_from_polynomials(pm).graph).key);

    res = cli({"limit", "--config", cfg_path, "--poly", pm_path});
    CHECK(res.exit_code == 1);
    CHECK(json::parse(res.err).at("error").at("code") == "invalid_parameters");
    res = cli({"limit"});
    CHECK(res.exit_code == 1);

    res = cli({"limit", "--config", (kWorkDir / "missing.json").string(), "--r", "2"});
    CHECK(res.exit_code == 1);
    CHECK(json::parse(res.err).at("error").at("code") == "io_error");

    auto bcs = enumerate_boundary_configs({2}, 2, 2);
    REQUIRE(!bcs.empty());
    const std::string b_path = write_doc("b.json", boundary_to_json(bcs.front()));
    const std::string g_path = write_doc("g.json", graph_to_json(gamma_star({2}, 2)));
    res = cli({"boundary", "--config", b_path, "--gamma", g_path, "--r", "2"});
    CHECK(res.exit_code == 0);
    doc = json::parse(res.out);
    Graph gamma_f = graph_from_json(doc.at("gamma_f"));
    CHECK(leq(gamma_f, gamma_star({2}, 2), 2));
    std::vector<MoveStep> witness = moves_from_json(doc.at("witness"));
    Graph cur = canonical_form(gamma_star({2}, 2)).graph;
    for (const auto& step : witness) cur = canonical_form(apply_move(cur, step, 2)).graph;
    CHECK(isomorphic(cur, gamma_f));
}

TEST_CASE("CLI gathmann", "[cli]") {
    auto res = cli({"gathmann", "--alpha", "2", "--j", "1", "--d", "2", "--r", "2"});
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc.at("alpha") == json::array({2}));
    CHECK(doc.at("lead").at("psi_coefficient") == -2);
    CHECK(doc.at("corrections").size() == 2);
    CHECK(doc.at("ordered") == false);

    res = cli({"gathmann", "--alpha", "3", "--j", "1", "--d", "3", "--r", "2",
               "--ordered"});
    CHECK(res.exit_code == 0);
    CHECK(json::parse(res.out).at("corrections").size() == 6);
    res = cli({"gathmann", "--alpha", "3", "--j", "1", "--d", "3", "--r", "2"});
    CHECK(json::parse(res.out).at("corrections").size() == 5);

    res = cli({"gathmann", "--alpha", "2", "--j", "2", "--d", "2", "--r", "2"});
    CHECK(res.exit_code == 1);  // j out of range: a domain error
    CHECK(json::parse(res.err).at("error").at("code") == "invalid_parameters");
}

TEST_CASE("CLI oracle mbar", "[cli]") {
    auto res = cli({"oracle", "mbar", "--m", "5"});
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc.at("poly") == json::array({1, 5, 1}));
    REQUIRE(doc.at("samples").size() == 3);  // m - 2 sample primes
    long long p = next_prime_ge(5);
    for (const auto& s : doc.at("samples")) {
        CHECK(s.at("q") == p);
        CHECK(s.at("count") == count_closed(p, 5));
        p = next_prime_ge(p + 1);
    }
    CHECK(doc.at("verification").at("q") == p);
    CHECK(doc.at("verification").at("count") == count_closed(p, 5));

    res = cli({"oracle", "mbar", "--m", "2"});
    CHECK(res.exit_code == 1);
    res = cli({"oracle", "mbar"});
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("--m") != std::string::npos);
}

TEST_CASE("CLI selftest", "[cli]") {
    const std::string cache = (kWorkDir / "selftest-cache").string();
    auto res = cli({"selftest", "--max-d", "1", "--max-n", "0", "--max-r", "2",
                    "--samples", "5", "--cache-dir", cache});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("FAIL") == std::string::npos);
    CHECK(res.out.find("graph.codim-negative-weight") != std::string::npos);
    CHECK(res.out.find("checks passed") != std::string::npos);

    res = cli({"selftest", "--max-d", "1", "--max-n", "0", "--max-r", "2", "--samples",
               "5", "--cache-dir", cache, "--format", "json"});
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc.at("passed") == doc.at("total"));
    CHECK(format_selftest_table(doc).find("PASS") != std::string::npos);
}

TEST_CASE("CLI determinism", "[cli]") {
    const std::vector<std::string> cases[] = {
        {"enumerate", "--n", "1", "--d", "2", "--r", "2"},
        {"poset", "--n", "0", "--d", "2", "--r", "2"},
        {"gathmann", "--alpha", "2,1", "--j", "1", "--d", "3", "--r", "2"},
        {"oracle", "mbar", "--m", "4"},
    };
    for (const auto& args : cases) {
        auto a = cli(args);
        auto b = cli(args);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
    }
    // parallelism width must not leak into the output bytes
    const std::string cache1 = (kWorkDir / "w1").string();
    const std::string cache3 = (kWorkDir / "w3").string();
    auto w1 = cli({"poincare", "--r", "2", "--d", "2", "--n", "0", "--cache-dir", cache1,
                   "--width", "1"});
    auto w3 = cli({"poincare", "--r", "2", "--d", "2", "--n", "0", "--cache-dir", cache3,
                   "--width", "3"});
    CHECK(w1.exit_code == 0);
    CHECK(w1.out == w3.out);
}
