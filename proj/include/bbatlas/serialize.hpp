#pragma once
// Strict JSON (and DOT) forms of every value that crosses the CLI boundary.
// Parsing is schema-first: unknown or missing fields are schema violations
// carrying a JSON pointer, wrong-kind values likewise; semantic checks
// (bipartiteness, degree sums, ...) stay in the owning module's validate.

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bbatlas/errors.hpp"
#include "bbatlas/flow.hpp"
#include "bbatlas/graph.hpp"
#include "bbatlas/poincare.hpp"
#include "bbatlas/poset.hpp"

namespace bbatlas {

inline constexpr const char* kGraphSchema = "bbatlas/graph-1";
inline constexpr const char* kMovesSchema = "bbatlas/moves-1";
inline constexpr const char* kTransversalSchema = "bbatlas/transversal-1";
inline constexpr const char* kParamMapSchema = "bbatlas/parammap-1";
inline constexpr const char* kBoundarySchema = "bbatlas/boundary-1";

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
    fail(errc::schema_violation, what, json{{"pointer", path.empty() ? "/" : path}});
}

inline const json& expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) schema_fail(path, "expected an object");
    return j;
}

// every present key must be declared; every required key must be present
inline void expect_fields(const json& obj, const std::string& path,
                          const std::set<std::string>& required,
                          const std::set<std::string>& optional = {}) {
    expect_object(obj, path);
    for (const auto& [key, value] : obj.items())
        if (!required.count(key) && !optional.count(key))
            schema_fail(path + "/" + key, "unknown field");
    for (const std::string& key : required)
        if (!obj.contains(key)) schema_fail(path + "/" + key, "missing field");
}

inline void expect_schema(const json& obj, const std::string& path, const char* want) {
    if (!obj.at("schema").is_string() || obj.at("schema").get<std::string>() != want)
        schema_fail(path + "/schema", std::string("expected schema \"") + want + "\"");
}

inline long long get_int(const json& obj, const std::string& path, const char* field) {
    const json& v = obj.at(field);
    if (!v.is_number_integer()) schema_fail(path + "/" + field, "expected an integer");
    return v.get<long long>();
}

inline bool get_bool(const json& obj, const std::string& path, const char* field) {
    const json& v = obj.at(field);
    if (!v.is_boolean()) schema_fail(path + "/" + field, "expected a boolean");
    return v.get<bool>();
}

inline std::string get_string(const json& obj, const std::string& path, const char* field) {
    const json& v = obj.at(field);
    if (!v.is_string()) schema_fail(path + "/" + field, "expected a string");
    return v.get<std::string>();
}

inline const json& get_array(const json& obj, const std::string& path, const char* field) {
    const json& v = obj.at(field);
    if (!v.is_array()) schema_fail(path + "/" + field, "expected an array");
    return v;
}

inline std::vector<int> get_int_vector(const json& obj, const std::string& path,
                                       const char* field) {
    const json& arr = get_array(obj, path, field);
    std::vector<int> out;
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_integer())
            schema_fail(path + "/" + field + "/" + std::to_string(i), "expected an integer");
        out.push_back(arr[i].get<int>());
    }
    return out;
}

inline std::vector<Rat> get_rat_vector(const json& arr, const std::string& path) {
    if (!arr.is_array()) schema_fail(path, "expected an array");
    std::vector<Rat> out;
    for (size_t i = 0; i < arr.size(); ++i)
        out.push_back(rat_from_json(arr[i], path + "/" + std::to_string(i)));
    return out;
}

}  // namespace detail

// --- decorated graphs ---

inline json graph_to_json(const Graph& g) {
    json vertices = json::array();
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        json v{{"id", i}, {"label", g.vertices[i].kind == VertexKind::P ? "P" : "H"}};
        if (g.vertices[i].kind == VertexKind::H) v["degree"] = g.vertices[i].h_degree;
        vertices.push_back(std::move(v));
    }
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"p", e.p}, {"h", e.h}, {"degree", e.degree}});
    json legs = json::array();
    for (const auto& l : g.legs) legs.push_back({{"marking", l.marking}, {"vertex", l.vertex}});
    return json{{"schema", kGraphSchema}, {"n", g.n},         {"d", g.d},
                {"vertices", vertices},   {"edges", edges},   {"legs", legs}};
}

// Syntactic read only: the result may still fail validate() (e.g. an edge
// joining two P-vertices parses fine and is rejected semantically).
inline Graph graph_from_json(const json& doc, const std::string& path = "") {
    detail::expect_fields(doc, path, {"schema", "n", "d", "vertices", "edges", "legs"});
    detail::expect_schema(doc, path, kGraphSchema);

    Graph g;
    g.n = static_cast<int>(detail::get_int(doc, path, "n"));
    g.d = static_cast<int>(detail::get_int(doc, path, "d"));

    std::map<long long, int> index_of_id;
    const json& vertices = detail::get_array(doc, path, "vertices");
    for (size_t i = 0; i < vertices.size(); ++i) {
        const std::string vp = path + "/vertices/" + std::to_string(i);
        detail::expect_fields(vertices[i], vp, {"id", "label"}, {"degree"});
        long long id = detail::get_int(vertices[i], vp, "id");
        if (!index_of_id.emplace(id, static_cast<int>(i)).second)
            detail::schema_fail(vp + "/id", "duplicate vertex id");
        std::string label = detail::get_string(vertices[i], vp, "label");
        if (label == "P") {
            if (vertices[i].contains("degree"))
                detail::schema_fail(vp + "/degree", "P-vertices carry no degree");
            g.vertices.push_back({VertexKind::P, 0});
        } else if (label == "H") {
            int dw = vertices[i].contains("degree")
                         ? static_cast<int>(detail::get_int(vertices[i], vp, "degree"))
                         : 0;
            g.vertices.push_back({VertexKind::H, dw});
        } else {
            detail::schema_fail(vp + "/label", "label must be \"P\" or \"H\"");
        }
    }

    auto resolve = [&](long long id, const std::string& at) {
        auto it = index_of_id.find(id);
        if (it == index_of_id.end()) detail::schema_fail(at, "unknown vertex id");
        return it->second;
    };

    const json& edges = detail::get_array(doc, path, "edges");
    for (size_t i = 0; i < edges.size(); ++i) {
        const std::string ep = path + "/edges/" + std::to_string(i);
        detail::expect_fields(edges[i], ep, {"p", "h", "degree"});
        g.edges.push_back({resolve(detail::get_int(edges[i], ep, "p"), ep + "/p"),
                           resolve(detail::get_int(edges[i], ep, "h"), ep + "/h"),
                           static_cast<int>(detail::get_int(edges[i], ep, "degree"))});
    }

    const json& legs = detail::get_array(doc, path, "legs");
    for (size_t i = 0; i < legs.size(); ++i) {
        const std::string lp = path + "/legs/" + std::to_string(i);
        detail::expect_fields(legs[i], lp, {"marking", "vertex"});
        g.legs.push_back({static_cast<int>(detail::get_int(legs[i], lp, "marking")),
                          resolve(detail::get_int(legs[i], lp, "vertex"), lp + "/vertex")});
    }
    return g;
}

inline std::string graph_to_dot(const Graph& g) {
    std::ostringstream o;
    o << "graph bbatlas {\n";
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        if (g.vertices[i].kind == VertexKind::P)
            o << "  v" << i << " [shape=circle, label=\"P\"];\n";
        else
            o << "  v" << i << " [shape=box, label=\"H," << g.vertices[i].h_degree << "\"];\n";
    }
    for (const auto& e : g.edges)
        o << "  v" << e.p << " -- v" << e.h << " [label=\"" << e.degree << "\"];\n";
    for (const auto& l : g.legs) {
        o << "  m" << l.marking << " [shape=plaintext, label=\"" << l.marking << "\"];\n";
        o << "  m" << l.marking << " -- v" << l.vertex << " [style=dashed];\n";
    }
    o << "}\n";
    return o.str();
}

// --- Betti polynomials (half-degree coefficient lists) ---

inline json poly_to_json(const PoincarePoly& p) { return json{{"poly", p.c}}; }

inline PoincarePoly poly_from_json(const json& doc, const std::string& path = "") {
    detail::expect_fields(doc, path, {"poly"});
    const json& arr = detail::get_array(doc, path, "poly");
    std::vector<long long> c;
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_integer() || arr[i].get<long long>() < 0)
            detail::schema_fail(path + "/poly/" + std::to_string(i),
                                "expected a nonnegative integer");
        c.push_back(arr[i].get<long long>());
    }
    return PoincarePoly(std::move(c));
}

// --- move sequences ---

inline json move_to_json(const MoveStep& s) {
    if (s.type == "split")
        return json{{"type", "split"},           {"edge", s.edge},
                    {"d0", s.d0},                {"parts", s.parts},
                    {"edge_assign", s.edge_assign}, {"leg_assign", s.leg_assign}};
    if (s.type == "join") return json{{"type", "join"}, {"edge_a", s.edge_a}, {"edge_b", s.edge_b}};
    return json{{"type", "transfer"}, {"edge", s.edge}, {"marking", s.marking}};
}

inline json moves_to_json(const std::vector<MoveStep>& moves) {
    json arr = json::array();
    for (const auto& s : moves) arr.push_back(move_to_json(s));
    return json{{"schema", kMovesSchema}, {"moves", arr}};
}

inline std::vector<MoveStep> moves_from_json(const json& doc, const std::string& path = "") {
    detail::expect_fields(doc, path, {"schema", "moves"});
    detail::expect_schema(doc, path, kMovesSchema);
    std::vector<MoveStep> out;
    const json& arr = detail::get_array(doc, path, "moves");
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string mp = path + "/moves/" + std::to_string(i);
        detail::expect_object(arr[i], mp);
        if (!arr[i].contains("type")) detail::schema_fail(mp + "/type", "missing field");
        std::string type = detail::get_string(arr[i], mp, "type");
        MoveStep s;
        s.type = type;
        if (type == "split") {
            detail::expect_fields(arr[i], mp,
                                  {"type", "edge", "d0", "parts", "edge_assign", "leg_assign"});
            s.edge = static_cast<int>(detail::get_int(arr[i], mp, "edge"));
            s.d0 = static_cast<int>(detail::get_int(arr[i], mp, "d0"));
            s.parts = detail::get_int_vector(arr[i], mp, "parts");
            s.edge_assign = detail::get_int_vector(arr[i], mp, "edge_assign");
            s.leg_assign = detail::get_int_vector(arr[i], mp, "leg_assign");
        } else if (type == "join") {
            detail::expect_fields(arr[i], mp, {"type", "edge_a", "edge_b"});
            s.edge_a = static_cast<int>(detail::get_int(arr[i], mp, "edge_a"));
            s.edge_b = static_cast<int>(detail::get_int(arr[i], mp, "edge_b"));
        } else if (type == "transfer") {
            detail::expect_fields(arr[i], mp, {"type", "edge", "marking"});
            s.edge = static_cast<int>(detail::get_int(arr[i], mp, "edge"));
            s.marking = static_cast<int>(detail::get_int(arr[i], mp, "marking"));
        } else {
            detail::schema_fail(mp + "/type", "type must be split, join or transfer");
        }
        out.push_back(std::move(s));
    }
    return out;
}

// --- transversal configurations ---

inline json transversal_to_json(const TransversalConfig& cfg) {
    json comps = json::array();
    for (const auto& c : cfg.components) {
        json contacts = json::array();
        for (const auto& ct : c.contacts) {
            json j{{"mult", ct.multiplicity}};
            if (ct.marking) j["marking"] = *ct.marking;
            contacts.push_back(std::move(j));
        }
        comps.push_back({{"in_h", c.in_h},
                         {"degree", c.degree},
                         {"contacts", contacts},
                         {"markings", c.markings}});
    }
    json nodes = json::array();
    for (const auto& nd : cfg.nodes) {
        json pair = json::array();
        for (const NodeSide& side : nd) {
            json j{{"component", side.component}};
            if (side.contact) j["contact"] = *side.contact;
            pair.push_back(std::move(j));
        }
        nodes.push_back(std::move(pair));
    }
    return json{{"schema", kTransversalSchema},
                {"n", cfg.n},
                {"d", cfg.d},
                {"components", comps},
                {"nodes", nodes}};
}

inline TransversalConfig transversal_from_json(const json& doc, const std::string& path = "") {
    detail::expect_fields(doc, path, {"schema", "n", "d", "components", "nodes"});
    detail::expect_schema(doc, path, kTransversalSchema);
    TransversalConfig cfg;
    cfg.n = static_cast<int>(detail::get_int(doc, path, "n"));
    cfg.d = detail::get_int(doc, path, "d");

    const json& comps = detail::get_array(doc, path, "components");
    for (size_t i = 0; i < comps.size(); ++i) {
        const std::string cp = path + "/components/" + std::to_string(i);
        detail::expect_fields(comps[i], cp, {"in_h", "degree", "contacts", "markings"});
        Component c;
        c.in_h = detail::get_bool(comps[i], cp, "in_h");
        c.degree = detail::get_int(comps[i], cp, "degree");
        const json& contacts = detail::get_array(comps[i], cp, "contacts");
        for (size_t k = 0; k < contacts.size(); ++k) {
            const std::string kp = cp + "/contacts/" + std::to_string(k);
            detail::expect_fields(contacts[k], kp, {"mult"}, {"marking"});
            Contact ct;
            ct.multiplicity = detail::get_int(contacts[k], kp, "mult");
            if (contacts[k].contains("marking"))
                ct.marking = static_cast<int>(detail::get_int(contacts[k], kp, "marking"));
            c.contacts.push_back(ct);
        }
        c.markings = detail::get_int_vector(comps[i], cp, "markings");
        cfg.components.push_back(std::move(c));
    }

    const json& nodes = detail::get_array(doc, path, "nodes");
    for (size_t i = 0; i < nodes.size(); ++i) {
        const std::string np = path + "/nodes/" + std::to_string(i);
        if (!nodes[i].is_array() || nodes[i].size() != 2)
            detail::schema_fail(np, "a node is an array of exactly two sides");
        std::array<NodeSide, 2> sides;
        for (int s = 0; s < 2; ++s) {
            const std::string sp = np + "/" + std::to_string(s);
            detail::expect_fields(nodes[i][static_cast<size_t>(s)], sp, {"component"},
                                  {"contact"});
            sides[static_cast<size_t>(s)].component =
                static_cast<int>(detail::get_int(nodes[i][static_cast<size_t>(s)], sp, "component"));
            if (nodes[i][static_cast<size_t>(s)].contains("contact"))
                sides[static_cast<size_t>(s)].contact =
                    static_cast<int>(detail::get_int(nodes[i][static_cast<size_t>(s)], sp, "contact"));
        }
        cfg.nodes.push_back(sides);
    }
    return cfg;
}

// --- parametrized maps ---

inline json parammap_to_json(const ParamMap& pm) {
    json forms = json::array();
    for (const auto& f : pm.forms) {
        json row = json::array();
        for (const Rat& c : f) row.push_back(rat_to_json(c));
        forms.push_back(std::move(row));
    }
    json marks = json::array();
    for (const auto& m : pm.marks) {
        json j{{"marking", m.marking}, {"at_infinity", m.at_infinity}};
        if (!m.at_infinity) j["s"] = rat_to_json(m.s);
        marks.push_back(std::move(j));
    }
    json conj = json::array();
    for (const auto& cm : pm.conj_marks) {
        json row = json::array();
        for (const Rat& c : cm.min_poly.c) row.push_back(rat_to_json(c));
        conj.push_back({{"min_poly", row}, {"markings", cm.markings}});
    }
    return json{{"schema", kParamMapSchema}, {"n", pm.n},       {"d", pm.d},
                {"forms", forms},            {"marks", marks},  {"conj_marks", conj}};
}

inline ParamMap parammap_from_json(const json& doc, const std::string& path = "") {
    detail::expect_fields(doc, path, {"schema", "n", "d", "forms", "marks", "conj_marks"});
    detail::expect_schema(doc, path, kParamMapSchema);
    ParamMap pm;
    pm.n = static_cast<int>(detail::get_int(doc, path, "n"));
    pm.d = detail::get_int(doc, path, "d");
    const json& forms = detail::get_array(doc, path, "forms");
    for (size_t j = 0; j < forms.size(); ++j)
        pm.forms.push_back(
            detail::get_rat_vector(forms[j], path + "/forms/" + std::to_string(j)));
    const json& marks = detail::get_array(doc, path, "marks");
    for (size_t i = 0; i < marks.size(); ++i) {
        const std::string mp = path + "/marks/" + std::to_string(i);
        detail::expect_fields(marks[i], mp, {"marking", "at_infinity"}, {"s"});
        MarkedPoint m;
        m.marking = static_cast<int>(detail::get_int(marks[i], mp, "marking"));
        m.at_infinity = detail::get_bool(marks[i], mp, "at_infinity");
        if (marks[i].contains("s")) m.s = rat_from_json(marks[i].at("s"), mp + "/s");
        pm.marks.push_back(m);
    }
    const json& conj = detail::get_array(doc, path, "conj_marks");
    for (size_t i = 0; i < conj.size(); ++i) {
        const std::string cp = path + "/conj_marks/" + std::to_string(i);
        detail::expect_fields(conj[i], cp, {"min_poly", "markings"});
        ConjugateMarks cm;
        cm.min_poly = QPoly(detail::get_rat_vector(conj[i].at("min_poly"), cp + "/min_poly"));
        cm.markings = detail::get_int_vector(conj[i], cp, "markings");
        pm.conj_marks.push_back(std::move(cm));
    }
    return pm;
}

// --- boundary configurations ---

inline json boundary_to_json(const BoundaryConfig& cfg) {
    json internal;
    if (cfg.internal) {
        json tang = json::array();
        for (const auto& [marking, alpha] : cfg.internal->tangencies)
            tang.push_back({{"marking", marking}, {"alpha", alpha}});
        internal = json{{"d0", cfg.internal->d0},
                        {"tangencies", tang},
                        {"free_markings", cfg.internal->free_markings}};
    } else {
        internal = nullptr;
    }
    json groups = json::array();
    for (const auto& g : cfg.groups)
        groups.push_back({{"degree", g.degree},
                          {"node_mult", g.node_mult},
                          {"config", transversal_to_json(g.config)},
                          {"root_component", g.root_component},
                          {"root_contact", g.root_contact}});
    return json{{"schema", kBoundarySchema}, {"n", cfg.n},       {"d", cfg.d},
                {"internal", internal},      {"groups", groups}};
}

inline BoundaryConfig boundary_from_json(const json& doc, const std::string& path = "") {
    detail::expect_fields(doc, path, {"schema", "n", "d", "internal", "groups"});
    detail::expect_schema(doc, path, kBoundarySchema);
    BoundaryConfig cfg;
    cfg.n = static_cast<int>(detail::get_int(doc, path, "n"));
    cfg.d = detail::get_int(doc, path, "d");
    const json& internal = doc.at("internal");
    if (!internal.is_null()) {
        const std::string ip = path + "/internal";
        detail::expect_fields(internal, ip, {"d0", "tangencies", "free_markings"});
        InternalComponent ic;
        ic.d0 = detail::get_int(internal, ip, "d0");
        const json& tang = detail::get_array(internal, ip, "tangencies");
        for (size_t i = 0; i < tang.size(); ++i) {
            const std::string tp = ip + "/tangencies/" + std::to_string(i);
            detail::expect_fields(tang[i], tp, {"marking", "alpha"});
            ic.tangencies.push_back({static_cast<int>(detail::get_int(tang[i], tp, "marking")),
                                     detail::get_int(tang[i], tp, "alpha")});
        }
        ic.free_markings = detail::get_int_vector(internal, ip, "free_markings");
        cfg.internal = std::move(ic);
    }
    const json& groups = detail::get_array(doc, path, "groups");
    for (size_t i = 0; i < groups.size(); ++i) {
        const std::string gp = path + "/groups/" + std::to_string(i);
        detail::expect_fields(groups[i], gp,
                              {"degree", "node_mult", "config", "root_component", "root_contact"});
        BoundaryGroup g;
        g.degree = detail::get_int(groups[i], gp, "degree");
        g.node_mult = detail::get_int(groups[i], gp, "node_mult");
        g.config = transversal_from_json(groups[i].at("config"), gp + "/config");
        g.root_component = static_cast<int>(detail::get_int(groups[i], gp, "root_component"));
        g.root_contact = static_cast<int>(detail::get_int(groups[i], gp, "root_contact"));
        cfg.groups.push_back(std::move(g));
    }
    return cfg;
}

}  // namespace bbatlas
