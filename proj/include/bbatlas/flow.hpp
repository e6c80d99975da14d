#pragma once
// C*-flow limits: transversal point configurations, one-parameter polynomial
// families with exact arithmetic, and boundary degenerations with move
// witnesses found by poset search.

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "bbatlas/canonical.hpp"
#include "bbatlas/graph.hpp"
#include "bbatlas/poset.hpp"
#include "bbatlas/rational.hpp"
#include "bbatlas/upoly.hpp"

namespace bbatlas {

// ---------------------------------------------------------------------------
// Transversal configurations
// ---------------------------------------------------------------------------

// A contact point of a component with the hyperplane H.
struct Contact {
    long long multiplicity = 1;  // local intersection order, >= 1
    std::optional<int> marking;  // set if a marked point sits at the contact
};

// One irreducible component of the domain configuration.  A component either
// lies inside H (in_h, any degree >= 0, no contacts) or meets H transversally
// in finitely many contact points whose multiplicities sum to its degree.
struct Component {
    bool in_h = false;
    long long degree = 0;
    std::vector<Contact> contacts;  // empty for in_h components
    std::vector<int> markings;      // markings away from the contact points
};

// One side of a node: which component, and -- when the node lies on H and the
// component is transversal -- which contact point it occupies.
struct NodeSide {
    int component = 0;
    std::optional<int> contact;
};

// A tree of components joined at nodes.  Node images lie on H exactly when
// the transversal sides occupy contacts (in_h sides always lie on H).
struct TransversalConfig {
    int n = 0;
    long long d = 0;
    std::vector<Component> components;
    std::vector<std::array<NodeSide, 2>> nodes;
};

namespace detail {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int size) : parent(size) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

inline void validate_transversal_config(const TransversalConfig& cfg) {
    auto bad = [&](const std::string& msg, json det = json::object()) {
        det["what"] = msg;
        fail(errc::invalid_parameters, "invalid transversal configuration: " + msg, det);
    };
    if (cfg.n < 0) bad("n must be nonnegative");
    if (cfg.d < 1) bad("total degree must be at least 1");
    if (cfg.components.empty()) bad("configuration needs at least one component");

    long long total = 0;
    std::vector<int> seen_marks;
    for (size_t c = 0; c < cfg.components.size(); ++c) {
        const Component& comp = cfg.components[c];
        json where{{"component", c}};
        if (comp.degree < 0) bad("negative component degree", where);
        if (comp.in_h) {
            if (!comp.contacts.empty()) bad("in-H component cannot have contacts", where);
        } else {
            if (comp.degree < 1) bad("transversal component needs degree >= 1", where);
            long long sum = 0;
            for (size_t k = 0; k < comp.contacts.size(); ++k) {
                if (comp.contacts[k].multiplicity < 1) bad("contact multiplicity must be >= 1", where);
                sum += comp.contacts[k].multiplicity;
                if (comp.contacts[k].marking) seen_marks.push_back(*comp.contacts[k].marking);
            }
            if (sum != comp.degree)
                bad("contact multiplicities must sum to the component degree", where);
        }
        total += comp.degree;
        for (int m : comp.markings) seen_marks.push_back(m);
    }
    if (total != cfg.d) bad("component degrees must sum to d");

    if (cfg.nodes.size() + 1 != cfg.components.size())
        bad("components must form a tree: need exactly #components - 1 nodes");
    detail::Dsu dsu(static_cast<int>(cfg.components.size()));
    // (component, contact) pairs already occupied by a node
    std::vector<std::pair<int, int>> used;
    for (size_t i = 0; i < cfg.nodes.size(); ++i) {
        const auto& node = cfg.nodes[i];
        json where{{"node", i}};
        int a = node[0].component, b = node[1].component;
        if (a < 0 || b < 0 || a >= static_cast<int>(cfg.components.size()) ||
            b >= static_cast<int>(cfg.components.size()))
            bad("node references a missing component", where);
        if (a == b) bad("node must join two distinct components", where);
        if (dsu.find(a) == dsu.find(b)) bad("nodes must not create a cycle", where);
        dsu.unite(a, b);

        bool on_h[2] = {false, false};
        for (int s = 0; s < 2; ++s) {
            const NodeSide& side = node[s];
            const Component& comp = cfg.components[side.component];
            if (comp.in_h) {
                if (side.contact) bad("in-H node side must not name a contact", where);
                on_h[s] = true;
            } else if (side.contact) {
                int k = *side.contact;
                if (k < 0 || k >= static_cast<int>(comp.contacts.size()))
                    bad("node references a missing contact", where);
                if (comp.contacts[k].marking) bad("a marked contact cannot carry a node", where);
                std::pair<int, int> key{side.component, k};
                if (std::find(used.begin(), used.end(), key) != used.end())
                    bad("contact occupied by two nodes", where);
                used.push_back(key);
                on_h[s] = true;
            }
        }
        if (on_h[0] != on_h[1])
            bad("node sides disagree about lying on H", where);
    }

    std::sort(seen_marks.begin(), seen_marks.end());
    std::vector<int> expect(cfg.n);
    std::iota(expect.begin(), expect.end(), 1);
    if (seen_marks != expect)
        bad("markings must be exactly 1..n, each used once",
            json{{"markings", seen_marks}});
}

// Image of a transversal configuration under the limit of the C*-flow:
// in-H components become (H, degree) vertices keeping their legs; each
// transversal component becomes one P-vertex with an edge of degree n_i per
// contact; marked contacts put the leg on the H-endpoint; nodes on H merge
// H-endpoints, nodes off H merge the P-vertices.
inline Graph limit_graph(const TransversalConfig& cfg, int r) {
    validate_transversal_config(cfg);
    const int C = static_cast<int>(cfg.components.size());

    int p_count = 0, h_count = 0;
    std::vector<int> p_of_comp(C, -1), h_of_comp(C, -1);
    std::vector<std::vector<int>> h_of_contact(C);
    for (int c = 0; c < C; ++c) {
        const Component& comp = cfg.components[c];
        if (comp.in_h) {
            h_of_comp[c] = h_count++;
        } else {
            p_of_comp[c] = p_count++;
            h_of_contact[c].resize(comp.contacts.size());
            for (size_t k = 0; k < comp.contacts.size(); ++k)
                h_of_contact[c][k] = h_count++;
        }
    }

    detail::Dsu pd(p_count), hd(h_count);
    for (const auto& node : cfg.nodes) {
        const NodeSide &sa = node[0], &sb = node[1];
        const bool ha = cfg.components[sa.component].in_h || sa.contact.has_value();
        if (!ha) {
            pd.unite(p_of_comp[sa.component], p_of_comp[sb.component]);
            continue;
        }
        auto h_proto = [&](const NodeSide& s) {
            return cfg.components[s.component].in_h ? h_of_comp[s.component]
                                                    : h_of_contact[s.component][*s.contact];
        };
        hd.unite(h_proto(sa), h_proto(sb));
    }

    Graph g;
    g.n = cfg.n;
    g.d = static_cast<int>(cfg.d);
    std::vector<int> p_vertex(p_count, -1), h_vertex(h_count, -1);
    for (int i = 0; i < p_count; ++i) {
        int root = pd.find(i);
        if (p_vertex[root] < 0) {
            p_vertex[root] = static_cast<int>(g.vertices.size());
            g.vertices.push_back({VertexKind::P, 0});
        }
        p_vertex[i] = p_vertex[root];
    }
    for (int i = 0; i < h_count; ++i) {
        int root = hd.find(i);
        if (h_vertex[root] < 0) {
            h_vertex[root] = static_cast<int>(g.vertices.size());
            g.vertices.push_back({VertexKind::H, 0});
        }
        h_vertex[i] = h_vertex[root];
    }

    std::vector<std::pair<int, int>> legs;  // (marking, vertex)
    for (int c = 0; c < C; ++c) {
        const Component& comp = cfg.components[c];
        if (comp.in_h) {
            g.vertices[h_vertex[h_of_comp[c]]].h_degree += static_cast<int>(comp.degree);
            for (int m : comp.markings) legs.push_back({m, h_vertex[h_of_comp[c]]});
            continue;
        }
        for (int m : comp.markings) legs.push_back({m, p_vertex[p_of_comp[c]]});
        for (size_t k = 0; k < comp.contacts.size(); ++k) {
            const Contact& ct = comp.contacts[k];
            int hv = h_vertex[h_of_contact[c][k]];
            g.edges.push_back({p_vertex[p_of_comp[c]], hv, static_cast<int>(ct.multiplicity)});
            if (ct.marking) legs.push_back({*ct.marking, hv});
        }
    }
    std::sort(legs.begin(), legs.end());
    for (auto [m, v] : legs) g.legs.push_back({m, v});

    // Stabilization of the limit map contracts curve components with fewer
    // than three special points; at the graph level such components are the
    // attaching points the graph already records, so no vertex is removed.
    validate(g, r);
    return g;
}

// ---------------------------------------------------------------------------
// One-parameter polynomial families
// ---------------------------------------------------------------------------

// A marked point of the domain line, given exactly.
struct MarkedPoint {
    int marking = 0;
    bool at_infinity = false;  // the point [1:0]
    Rat s;                     // affine coordinate z/w otherwise
};

// A Galois orbit of marked points: one marking per root of the (monic,
// irreducible, degree >= 2) minimal polynomial.
struct ConjugateMarks {
    QPoly min_poly;
    std::vector<int> markings;
};

// A rational map P^1 -> P^r of degree d, written as r+1 binary forms of
// common degree d; forms[j][i] is the z^i w^(d-i) coefficient of f^j.
struct ParamMap {
    int n = 0;
    long long d = 0;
    std::vector<std::vector<Rat>> forms;
    std::vector<MarkedPoint> marks;
    std::vector<ConjugateMarks> conj_marks;
};

// One zero of f^0 together with the exact limit position in H.  Rational
// zeros carry the image point [0 : q1 : ... : qr]; a Galois orbit of zeros
// carries the images as polynomials modulo the minimal polynomial.
struct ContactRecord {
    long long ram = 1;  // ramification order = multiplicity of the zero
    bool at_infinity = false;
    bool algebraic = false;
    Rat s;
    QPoly min_poly;
    std::vector<Rat> q;
    std::vector<QPoly> q_mod;
    std::vector<int> edges;  // edge indices in the limit graph (one per root)
};

struct LimitMapData {
    bool in_h = false;  // f^0 == 0: the whole map lies in H
    Graph graph;
    std::vector<ContactRecord> contacts;
    long long torus_lift_order = 1;  // d!: order of the torus lift acting on the family
};

namespace detail {

inline QPoly dehomogenize(const std::vector<Rat>& form) {
    QPoly p;
    p.c = form;
    p.trim();
    return p;
}

inline long long factorial_ll(long long d) {
    require(d <= 20, errc::resource_limit, "degree too large for an exact torus lift order",
            json{{"d", d}});
    long long f = 1;
    for (long long i = 2; i <= d; ++i) f *= i;
    return f;
}

}  // namespace detail

// Exact limit of the one-parameter family obtained by scaling the f^0
// coordinate to zero: the domain breaks at the zeros of f^0, producing a
// star-shaped graph with one edge of degree n_i per zero of order n_i.
inline LimitMapData limit_from_polynomials(const ParamMap& pm) {
    const int r = static_cast<int>(pm.forms.size()) - 1;
    require(r >= 1, errc::invalid_parameters, "need at least two forms (r >= 1)",
            json{{"forms", pm.forms.size()}});
    require(pm.d >= 1, errc::invalid_parameters, "degree must be at least 1", json{{"d", pm.d}});
    require(pm.n >= 0, errc::invalid_parameters, "n must be nonnegative", json{{"n", pm.n}});
    for (size_t j = 0; j < pm.forms.size(); ++j)
        require(pm.forms[j].size() == static_cast<size_t>(pm.d + 1), errc::invalid_parameters,
                "every form needs d+1 coefficients", json{{"form", j}});

    std::vector<QPoly> p(pm.forms.size());
    bool all_zero = true;
    for (size_t j = 0; j < pm.forms.size(); ++j) {
        p[j] = detail::dehomogenize(pm.forms[j]);
        if (!p[j].is_zero()) all_zero = false;
    }
    require(!all_zero, errc::invalid_parameters, "all forms vanish identically", {});

    // Common factors: a shared root (or shared zero at infinity, i.e. a
    // common power of w) means the data does not define a degree-d map.
    {
        QPoly g;
        long long w_mult = pm.d;
        for (size_t j = 0; j < pm.forms.size(); ++j) {
            if (p[j].is_zero()) continue;
            g = g.is_zero() ? p[j] : poly_gcd(g, p[j]);
            w_mult = std::min(w_mult, pm.d - p[j].deg());
        }
        require(g.deg() <= 0, errc::invalid_parameters,
                "the forms share a common factor", json{{"gcd_degree", g.deg()}});
        require(w_mult == 0, errc::invalid_parameters,
                "the forms share a common zero at infinity", json{{"w_multiplicity", w_mult}});
    }

    // Collect the marked points, checking pairwise distinctness.
    {
        std::vector<int> marks;
        bool seen_inf = false;
        std::vector<Rat> seen_s;
        for (const MarkedPoint& mp : pm.marks) {
            marks.push_back(mp.marking);
            if (mp.at_infinity) {
                require(!seen_inf, errc::invalid_parameters, "two marked points coincide",
                        json{{"marking", mp.marking}});
                seen_inf = true;
            } else {
                require(std::find(seen_s.begin(), seen_s.end(), mp.s) == seen_s.end(),
                        errc::invalid_parameters, "two marked points coincide",
                        json{{"marking", mp.marking}});
                seen_s.push_back(mp.s);
            }
        }
        for (const ConjugateMarks& cm : pm.conj_marks) {
            require(cm.min_poly.deg() >= 2, errc::invalid_parameters,
                    "conjugate record needs an irreducible polynomial of degree >= 2", {});
            require(cm.markings.size() == static_cast<size_t>(cm.min_poly.deg()),
                    errc::invalid_parameters,
                    "conjugate record needs one marking per root", {});
            for (int m : cm.markings) marks.push_back(m);
        }
        for (size_t a = 0; a < pm.conj_marks.size(); ++a)
            for (size_t b = a + 1; b < pm.conj_marks.size(); ++b)
                require(!(pm.conj_marks[a].min_poly.monic() == pm.conj_marks[b].min_poly.monic()),
                        errc::invalid_parameters, "two conjugate records coincide", {});
        std::sort(marks.begin(), marks.end());
        std::vector<int> expect(pm.n);
        std::iota(expect.begin(), expect.end(), 1);
        require(marks == expect, errc::invalid_parameters,
                "markings must be exactly 1..n, each used once", json{{"markings", marks}});
    }

    LimitMapData out;
    out.torus_lift_order = detail::factorial_ll(pm.d);

    if (p[0].is_zero()) {
        // f^0 == 0: the map already lies in H; the limit is the map itself,
        // recorded as the single-vertex graph with a distinguished in-H flag.
        out.in_h = true;
        out.graph.n = pm.n;
        out.graph.d = static_cast<int>(pm.d);
        out.graph.vertices.push_back({VertexKind::H, static_cast<int>(pm.d)});
        for (int m = 1; m <= pm.n; ++m) out.graph.legs.push_back({m, 0});
        validate(out.graph, std::max(r, 2));
        return out;
    }

    // Factor f^0 exactly: power of w at infinity, then rational roots with
    // multiplicities, then irreducible factors for the conjugate zeros.
    const long long mult_inf = pm.d - p[0].deg();
    std::vector<std::pair<Rat, int>> rational_zeros;         // (s, multiplicity)
    std::vector<std::pair<QPoly, int>> algebraic_zeros;      // (irreducible, multiplicity)
    for (const auto& [sq, mult] : squarefree_decomposition(p[0])) {
        QPoly rest = sq;
        for (const Rat& root : rational_roots(sq)) {
            rational_zeros.push_back({root, mult});
            QPoly lin;
            lin.c = {Rat(0) - root, Rat(1)};
            rest = divmod(rest, lin).first;
        }
        if (rest.deg() >= 1)
            for (const QPoly& f : irreducible_factors_squarefree(rest))
                algebraic_zeros.push_back({f.monic(), mult});
    }

    // The limit graph: one P-vertex, one edge per zero of f^0.
    Graph& g = out.graph;
    g.n = pm.n;
    g.d = static_cast<int>(pm.d);
    g.vertices.push_back({VertexKind::P, 0});
    std::vector<std::pair<int, int>> legs;
    auto add_edge = [&](long long ram) {
        int hv = static_cast<int>(g.vertices.size());
        g.vertices.push_back({VertexKind::H, 0});
        g.edges.push_back({0, hv, static_cast<int>(ram)});
        return static_cast<int>(g.edges.size()) - 1;
    };
    auto mark_at = [&](auto pred) -> std::optional<int> {
        for (const MarkedPoint& mp : pm.marks)
            if (pred(mp)) return mp.marking;
        return std::nullopt;
    };

    if (mult_inf > 0) {
        ContactRecord rec;
        rec.ram = mult_inf;
        rec.at_infinity = true;
        for (int j = 1; j <= r; ++j) rec.q.push_back(pm.forms[j][pm.d]);
        rec.edges.push_back(add_edge(mult_inf));
        if (auto m = mark_at([](const MarkedPoint& mp) { return mp.at_infinity; }))
            legs.push_back({*m, g.edges[rec.edges[0]].h});
        out.contacts.push_back(std::move(rec));
    }
    for (const auto& [s, mult] : rational_zeros) {
        ContactRecord rec;
        rec.ram = mult;
        rec.s = s;
        for (int j = 1; j <= r; ++j) rec.q.push_back(p[j].eval(s));
        rec.edges.push_back(add_edge(mult));
        if (auto m = mark_at([&](const MarkedPoint& mp) { return !mp.at_infinity && mp.s == s; }))
            legs.push_back({*m, g.edges[rec.edges[0]].h});
        out.contacts.push_back(std::move(rec));
    }
    for (const auto& [f, mult] : algebraic_zeros) {
        ContactRecord rec;
        rec.ram = mult;
        rec.algebraic = true;
        rec.min_poly = f;
        for (int j = 1; j <= r; ++j) rec.q_mod.push_back(divmod(p[j], f).second);
        const ConjugateMarks* cm = nullptr;
        for (const ConjugateMarks& c : pm.conj_marks)
            if (c.min_poly.monic() == f) cm = &c;
        for (int root = 0; root < f.deg(); ++root) {
            rec.edges.push_back(add_edge(mult));
            if (cm) legs.push_back({cm->markings[root], g.edges[rec.edges.back()].h});
        }
        out.contacts.push_back(std::move(rec));
    }

    // Marked points away from the zeros of f^0 stay on the backbone.
    for (const MarkedPoint& mp : pm.marks) {
        bool at_zero = (mp.at_infinity && mult_inf > 0);
        for (const auto& [s, mult] : rational_zeros)
            if (!mp.at_infinity && mp.s == s) at_zero = true;
        if (!at_zero) legs.push_back({mp.marking, 0});
    }
    for (const ConjugateMarks& cm : pm.conj_marks) {
        bool at_zero = false;
        for (const auto& [f, mult] : algebraic_zeros)
            if (f == cm.min_poly.monic()) at_zero = true;
        if (!at_zero)
            for (int m : cm.markings) legs.push_back({m, 0});
    }

    std::sort(legs.begin(), legs.end());
    for (auto [m, v] : legs) g.legs.push_back({m, v});
    validate(g, std::max(r, 1));
    return out;
}

// The transversal configuration a rational-zero ParamMap describes: a single
// component of degree d whose contacts are the zeros of f^0.
inline TransversalConfig config_of_param_map(const ParamMap& pm) {
    LimitMapData lim = limit_from_polynomials(pm);
    require(!lim.in_h, errc::invalid_parameters,
            "the map lies in H: no transversal configuration exists", {});
    for (const ContactRecord& rec : lim.contacts)
        require(!rec.algebraic, errc::invalid_parameters,
                "configuration extraction needs rational zeros only",
                json{{"min_poly", rec.min_poly.str()}});

    TransversalConfig cfg;
    cfg.n = pm.n;
    cfg.d = pm.d;
    Component comp;
    comp.degree = pm.d;
    for (const ContactRecord& rec : lim.contacts) {
        Contact ct;
        ct.multiplicity = rec.ram;
        for (const MarkedPoint& mp : pm.marks) {
            if (rec.at_infinity ? mp.at_infinity : (!mp.at_infinity && mp.s == rec.s))
                ct.marking = mp.marking;
        }
        comp.contacts.push_back(ct);
    }
    for (const MarkedPoint& mp : pm.marks) {
        bool at_zero = false;
        for (const ContactRecord& rec : lim.contacts)
            if (rec.at_infinity ? mp.at_infinity : (!rec.algebraic && !mp.at_infinity && mp.s == rec.s))
                at_zero = true;
        if (!at_zero) comp.markings.push_back(mp.marking);
    }
    cfg.components.push_back(std::move(comp));
    return cfg;
}

// The configuration a fixed map itself presents: every edge is a line
// through p covered with full contact order, every H-vertex of positive
// degree or valency >= 3 is a component inside H.  Fails when a P-vertex
// carries a contracted component (legs at a node of the configuration have
// no transversal description).
inline TransversalConfig config_of_fixed_graph(const Graph& g, int r) {
    validate(g, r);
    require(g.vertices.size() > 1 || g.vertices[0].kind == VertexKind::H,
            errc::invalid_parameters, "no transversal description", {});

    TransversalConfig cfg;
    cfg.n = g.n;
    cfg.d = g.d;
    const int V = static_cast<int>(g.vertices.size());
    if (V == 1) {  // single H-vertex: one component inside H
        Component comp;
        comp.in_h = true;
        comp.degree = g.vertices[0].h_degree;
        for (const auto& leg : g.legs) comp.markings.push_back(leg.marking);
        cfg.components.push_back(std::move(comp));
        return cfg;
    }

    Taxonomy tax = classify(g);
    std::vector<int> comp_of_edge(g.edges.size(), -1), comp_of_h(V, -1);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        comp_of_edge[e] = static_cast<int>(cfg.components.size());
        Component comp;
        comp.degree = g.edges[e].degree;
        comp.contacts.push_back({g.edges[e].degree, std::nullopt});
        cfg.components.push_back(std::move(comp));
    }
    for (int v = 0; v < V; ++v) {
        if (g.vertices[v].kind != VertexKind::H) continue;
        if (tax.h_class[static_cast<size_t>(v)] != HClass::stable) continue;
        comp_of_h[v] = static_cast<int>(cfg.components.size());
        Component comp;
        comp.in_h = true;
        comp.degree = g.vertices[v].h_degree;
        for (const auto& leg : g.legs)
            if (leg.vertex == v) comp.markings.push_back(leg.marking);
        cfg.components.push_back(std::move(comp));
    }

    for (int v = 0; v < V; ++v) {
        std::vector<int> at;
        for (size_t e = 0; e < g.edges.size(); ++e)
            if (g.edges[e].p == v || g.edges[e].h == v) at.push_back(static_cast<int>(e));
        if (g.vertices[v].kind == VertexKind::P) {
            const int legs = g.leg_count_at(v);
            require(at.size() < 2 || legs == 0, errc::invalid_parameters,
                    "no transversal description: legs at a node over p", json{{"vertex", v}});
            require(at.size() > 1 || legs <= 1, errc::invalid_parameters,
                    "no transversal description: contracted component over p", json{{"vertex", v}});
            if (at.size() == 1 && legs == 1)
                for (const auto& leg : g.legs)
                    if (leg.vertex == v)
                        cfg.components[static_cast<size_t>(comp_of_edge[static_cast<size_t>(at[0])])]
                            .markings.push_back(leg.marking);
            for (size_t i = 1; i < at.size(); ++i)  // chain of nodes over p
                cfg.nodes.push_back({NodeSide{comp_of_edge[static_cast<size_t>(at[i - 1])], std::nullopt},
                                     NodeSide{comp_of_edge[static_cast<size_t>(at[i])], std::nullopt}});
            continue;
        }
        switch (*tax.h_class[static_cast<size_t>(v)]) {
            case HClass::stable:
                for (int e : at)
                    cfg.nodes.push_back({NodeSide{comp_of_h[v], std::nullopt},
                                         NodeSide{comp_of_edge[static_cast<size_t>(e)], 0}});
                break;
            case HClass::unstable_node:
                cfg.nodes.push_back({NodeSide{comp_of_edge[static_cast<size_t>(at[0])], 0},
                                     NodeSide{comp_of_edge[static_cast<size_t>(at[1])], 0}});
                break;
            case HClass::unstable_leg:
                for (const auto& leg : g.legs)
                    if (leg.vertex == v)
                        cfg.components[static_cast<size_t>(comp_of_edge[static_cast<size_t>(at[0])])]
                            .contacts[0].marking = leg.marking;
                break;
            case HClass::very_unstable:
                break;
        }
    }
    validate_transversal_config(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// Seeded generators for property tests
// ---------------------------------------------------------------------------

// Draws a valid configuration uniformly enough to exercise every constructor
// path: multiple components, in-H components, nodes on and off H, marked
// contacts.  Deterministic in the generator state.
inline TransversalConfig random_transversal_config(int n, int r, long long d,
                                                   std::mt19937_64& rng) {
    require(n >= 0 && r >= 1 && d >= 1, errc::invalid_parameters,
            "need n >= 0, r >= 1, d >= 1",
            json{{"n", n}, {"r", r}, {"d", d}});
    auto pick = [&](long long hi) { return static_cast<long long>(rng() % static_cast<unsigned long long>(hi)); };

    for (int attempt = 0; attempt < 256; ++attempt) {
        TransversalConfig cfg;
        cfg.n = n;
        cfg.d = d;
        const int kmax = static_cast<int>(std::min<long long>(d + 1, 4));
        const int K = 1 + static_cast<int>(pick(kmax));
        // Components in H keep degree 0 when r == 1 (H is a point).
        std::vector<bool> in_h(K);
        int transversal = 0;
        for (int c = 0; c < K; ++c) {
            in_h[c] = pick(3) == 0;
            if (!in_h[c]) ++transversal;
        }
        if (transversal == 0) in_h[static_cast<int>(pick(K))] = false, transversal = 1;
        if (transversal > d) continue;

        std::vector<long long> degree(K, 0);
        for (int c = 0; c < K; ++c)
            if (!in_h[c]) degree[c] = 1;
        long long spare = d - transversal;
        while (spare > 0) {
            int c = static_cast<int>(pick(K));
            if (in_h[c] && r == 1) continue;
            ++degree[c];
            --spare;
        }

        for (int c = 0; c < K; ++c) {
            Component comp;
            comp.in_h = in_h[c];
            comp.degree = degree[c];
            if (!in_h[c]) {
                long long left = degree[c];
                while (left > 0) {
                    long long m = 1 + pick(left);
                    comp.contacts.push_back({m, std::nullopt});
                    left -= m;
                }
            }
            cfg.components.push_back(std::move(comp));
        }

        // Tree of nodes; off-H placement whenever both sides allow it.
        std::vector<std::vector<int>> free_contacts(K);
        for (int c = 0; c < K; ++c)
            for (size_t k = 0; k < cfg.components[c].contacts.size(); ++k)
                free_contacts[c].push_back(static_cast<int>(k));
        bool ok = true;
        for (int c = 1; c < K && ok; ++c) {
            int other = static_cast<int>(pick(c));
            NodeSide sa{c, std::nullopt}, sb{other, std::nullopt};
            auto take_contact = [&](NodeSide& s) {
                auto& fc = free_contacts[s.component];
                if (fc.empty()) return false;
                size_t i = static_cast<size_t>(pick(static_cast<long long>(fc.size())));
                s.contact = fc[i];
                fc.erase(fc.begin() + static_cast<long long>(i));
                return true;
            };
            const bool a_in_h = in_h[c], b_in_h = in_h[other];
            if (a_in_h && b_in_h) {
                // node inside H, nothing to choose
            } else if (a_in_h != b_in_h) {
                ok = take_contact(a_in_h ? sb : sa);
            } else if (pick(2) == 0 && !free_contacts[c].empty() && !free_contacts[other].empty()) {
                ok = take_contact(sa) && take_contact(sb);
            }
            if (ok) cfg.nodes.push_back({sa, sb});
        }
        if (!ok) continue;

        for (int m = 1; m <= n; ++m) {
            std::vector<std::pair<int, int>> spots;  // (component, contact or -1)
            for (int c = 0; c < K; ++c) {
                spots.push_back({c, -1});
                if (pick(2) == 0)
                    for (int k : free_contacts[c])
                        if (!cfg.components[c].contacts[k].marking) spots.push_back({c, k});
            }
            auto [c, k] = spots[static_cast<size_t>(pick(static_cast<long long>(spots.size())))];
            if (k < 0)
                cfg.components[c].markings.push_back(m);
            else
                cfg.components[c].contacts[k].marking = m;
        }

        try {
            validate_transversal_config(cfg);
        } catch (const error&) {
            continue;
        }
        return cfg;
    }
    fail(errc::internal, "random configuration generator failed to converge", {});
}

// A random degree-d map whose f^0 has rational zeros only; for the
// two-routes consistency property.
inline ParamMap random_param_map_rational(int n, int r, long long d, std::mt19937_64& rng) {
    require(n >= 0 && r >= 1 && d >= 1 && d <= 8, errc::invalid_parameters,
            "need n >= 0, r >= 1, 1 <= d <= 8",
            json{{"n", n}, {"r", r}, {"d", d}});
    auto pick = [&](long long hi) { return static_cast<long long>(rng() % static_cast<unsigned long long>(hi)); };

    // Candidate points: small rationals plus infinity.
    std::vector<Rat> pool;
    for (int num = -4; num <= 4; ++num) pool.push_back(Rat(num));
    for (int num = -3; num <= 3; num += 2) pool.push_back(Rat(num, 2));

    for (int attempt = 0; attempt < 512; ++attempt) {
        ParamMap pm;
        pm.n = n;
        pm.d = d;
        std::vector<Rat> points = pool;
        for (size_t i = points.size(); i > 1; --i)
            std::swap(points[i - 1], points[static_cast<size_t>(pick(static_cast<long long>(i)))]);

        long long left = d;
        bool use_inf = pick(4) == 0;
        long long mult_inf = 0;
        if (use_inf) {
            mult_inf = 1 + pick(left);
            left -= mult_inf;
        }
        std::vector<std::pair<Rat, long long>> zeros;
        size_t next = 0;
        while (left > 0) {
            long long m = 1 + pick(left);
            zeros.push_back({points[next++], m});
            left -= m;
        }
        if (!use_inf && zeros.empty()) continue;

        // f^0 = prod (z - s_i w)^{m_i} * w^{mult_inf}, stored dehomogenized.
        QPoly p0;
        p0.c = {Rat(1)};
        for (const auto& [s, m] : zeros) {
            QPoly lin;
            lin.c = {Rat(0) - s, Rat(1)};
            for (long long i = 0; i < m; ++i) p0 = p0 * lin;
        }
        auto form_of = [&](const QPoly& q) {
            std::vector<Rat> form(static_cast<size_t>(d + 1), Rat(0));
            for (int i = 0; i <= q.deg(); ++i) form[static_cast<size_t>(i)] = q.coeff(i);
            return form;
        };
        pm.forms.push_back(form_of(p0));

        for (int j = 1; j <= r; ++j) {
            std::vector<Rat> form(static_cast<size_t>(d + 1));
            for (auto& c : form) c = Rat(pick(7) - 3);
            pm.forms.push_back(form);
        }
        // Need gcd 1 and no common zero at infinity; retry on bad luck.
        try {
            std::vector<QPoly> p(pm.forms.size());
            QPoly g = p0;
            long long w_mult = mult_inf;
            for (size_t j = 1; j < pm.forms.size(); ++j) {
                p[j] = detail::dehomogenize(pm.forms[j]);
                if (p[j].deg() < 0) { g = QPoly{}; break; }
                g = poly_gcd(g, p[j]);
                w_mult = std::min(w_mult, d - p[j].deg());
            }
            if (g.deg() != 0 || w_mult != 0) continue;
        } catch (const error&) {
            continue;
        }

        // Markings: at zeros or elsewhere, pairwise distinct.
        std::vector<int> free_zero;
        for (size_t i = 0; i < zeros.size(); ++i) free_zero.push_back(static_cast<int>(i));
        bool inf_free = use_inf;
        for (int m = 1; m <= n; ++m) {
            MarkedPoint mp;
            mp.marking = m;
            long long roll = pick(3);
            if (roll == 0 && !free_zero.empty()) {
                size_t i = static_cast<size_t>(pick(static_cast<long long>(free_zero.size())));
                mp.s = zeros[static_cast<size_t>(free_zero[i])].first;
                free_zero.erase(free_zero.begin() + static_cast<long long>(i));
            } else if (roll == 1 && inf_free) {
                mp.at_infinity = true;
                inf_free = false;
            } else {
                if (next >= points.size()) { next = 0; }
                mp.s = points[next++];
            }
            pm.marks.push_back(mp);
        }
        {
            bool distinct = true;
            for (size_t a = 0; a < pm.marks.size() && distinct; ++a)
                for (size_t b = a + 1; b < pm.marks.size() && distinct; ++b) {
                    const auto &x = pm.marks[a], &y = pm.marks[b];
                    if (x.at_infinity == y.at_infinity && (x.at_infinity || x.s == y.s))
                        distinct = false;
                }
            if (!distinct) continue;
        }
        return pm;
    }
    fail(errc::internal, "random map generator failed to converge", {});
}

// ---------------------------------------------------------------------------
// Boundary degenerations
// ---------------------------------------------------------------------------

// The distinguished component inside H carrying the tangency markings I
// (with multiplicities alpha_i) and the free markings J.
struct InternalComponent {
    long long d0 = 0;
    std::vector<std::pair<int, long long>> tangencies;  // (marking, alpha >= 1)
    std::vector<int> free_markings;
};

// One attached group: its own configuration joined to the internal component
// at the designated contact, whose multiplicity is the node multiplicity m_i.
struct BoundaryGroup {
    long long degree = 0;
    long long node_mult = 1;
    TransversalConfig config;  // markings carry their global numbers
    int root_component = 0;
    int root_contact = 0;
};

struct BoundaryConfig {
    int n = 0;
    long long d = 0;
    std::optional<InternalComponent> internal;  // absent: degenerate, one group
    std::vector<BoundaryGroup> groups;
};

// Combines the internal component and the groups into one configuration;
// checks the degree and multiplicity invariants.
inline TransversalConfig assemble_boundary(const BoundaryConfig& cfg) {
    auto bad = [&](const std::string& msg, json det = json::object()) {
        det["what"] = msg;
        fail(errc::invalid_parameters, "invalid boundary configuration: " + msg, det);
    };
    if (!cfg.internal) {
        if (cfg.groups.size() != 1)
            bad("degenerate configuration needs exactly one group");
        TransversalConfig out = cfg.groups[0].config;
        if (out.n != cfg.n || out.d != cfg.d)
            bad("degenerate group must carry the full (n, d)");
        validate_transversal_config(out);
        return out;
    }

    const InternalComponent& in = *cfg.internal;
    if (in.d0 < 0) bad("internal degree must be nonnegative");
    long long alpha_total = 0;
    for (const auto& [m, a] : in.tangencies) {
        if (a < 1) bad("tangency multiplicities must be >= 1", json{{"marking", m}});
        alpha_total += a;
    }
    long long mult_total = 0, degree_total = in.d0;
    for (size_t i = 0; i < cfg.groups.size(); ++i) {
        const BoundaryGroup& grp = cfg.groups[i];
        json where{{"group", i}};
        if (grp.degree < 1) bad("group degree must be >= 1", where);
        if (grp.node_mult < 1) bad("node multiplicity must be >= 1", where);
        if (grp.config.d != grp.degree) bad("group configuration degree mismatch", where);
        mult_total += grp.node_mult;
        degree_total += grp.degree;
        if (grp.root_component < 0 ||
            grp.root_component >= static_cast<int>(grp.config.components.size()))
            bad("missing root component", where);
        const Component& root = grp.config.components[grp.root_component];
        if (root.in_h) bad("root component must be transversal", where);
        if (grp.root_contact < 0 || grp.root_contact >= static_cast<int>(root.contacts.size()))
            bad("missing root contact", where);
        if (root.contacts[grp.root_contact].multiplicity != grp.node_mult)
            bad("root contact multiplicity must equal the node multiplicity", where);
        if (root.contacts[grp.root_contact].marking)
            bad("root contact must be unmarked", where);
    }
    if (degree_total != cfg.d) bad("degrees must sum to d: d0 + sum d_i = d");
    if (in.d0 + mult_total != alpha_total)
        bad("multiplicity conservation fails: d0 + sum m_i must equal sum alpha_i",
            json{{"d0", in.d0}, {"sum_m", mult_total}, {"sum_alpha", alpha_total}});

    TransversalConfig out;
    out.n = cfg.n;
    out.d = cfg.d;
    Component internal;
    internal.in_h = true;
    internal.degree = in.d0;
    for (const auto& [m, a] : in.tangencies) internal.markings.push_back(m);
    for (int m : in.free_markings) internal.markings.push_back(m);
    out.components.push_back(std::move(internal));

    for (const BoundaryGroup& grp : cfg.groups) {
        const int offset = static_cast<int>(out.components.size());
        for (const Component& comp : grp.config.components) out.components.push_back(comp);
        for (const auto& node : grp.config.nodes) {
            auto shifted = node;
            shifted[0].component += offset;
            shifted[1].component += offset;
            out.nodes.push_back(shifted);
        }
        // Root contacts occupied by the attaching node must be free in the
        // group's own node list; validation of the assembly catches reuse.
        out.nodes.push_back({NodeSide{0, std::nullopt},
                             NodeSide{offset + grp.root_component, grp.root_contact}});
    }
    validate_transversal_config(out);
    return out;
}

struct BoundaryFlowResult {
    Graph gamma_f;
    std::vector<MoveStep> witness;  // moves from canonical(gamma) to canonical(gamma_f)
};

// Runs the C*-flow on the boundary degeneration and certifies the resulting
// specialization gamma_F <= gamma by a move sequence.
inline BoundaryFlowResult boundary_flow(const BoundaryConfig& cfg, const Graph& gamma, int r,
                                        long long ceiling = 1000000) {
    BoundaryFlowResult out;
    out.gamma_f = limit_graph(assemble_boundary(cfg), r);
    auto witness = leq_witness(out.gamma_f, gamma, r, ceiling);
    if (!witness) {
        fail(errc::witness_not_found,
             "no move sequence connects gamma to the boundary limit",
             json{{"gamma", canonical_form(gamma).key},
                  {"gamma_f", canonical_form(out.gamma_f).key}});
    }
    out.witness = *witness;
    return out;
}

// The limit of a generic map with tangency vector alpha (one entry per
// marking, entries >= 0, sum <= d): edges of degree alpha_j carrying leg j on
// the H-end, plus d - |alpha| simple unmarked edges; zero entries stay on the
// backbone.
inline Graph gamma_star(const std::vector<long long>& alpha, long long d) {
    long long total = 0;
    for (long long a : alpha) {
        require(a >= 0, errc::invalid_parameters, "tangency entries must be >= 0", {});
        total += a;
    }
    require(d >= 1 && total <= d, errc::invalid_parameters,
            "need sum alpha <= d", json{{"d", d}, {"sum_alpha", total}});
    Graph g;
    g.n = static_cast<int>(alpha.size());
    g.d = static_cast<int>(d);
    g.vertices.push_back({VertexKind::P, 0});
    for (size_t j = 0; j < alpha.size(); ++j) {
        if (alpha[j] == 0) {
            g.legs.push_back({static_cast<int>(j) + 1, 0});
            continue;
        }
        int hv = static_cast<int>(g.vertices.size());
        g.vertices.push_back({VertexKind::H, 0});
        g.edges.push_back({0, hv, static_cast<int>(alpha[j])});
        g.legs.push_back({static_cast<int>(j) + 1, hv});
    }
    for (long long e = 0; e < d - total; ++e) {
        int hv = static_cast<int>(g.vertices.size());
        g.vertices.push_back({VertexKind::H, 0});
        g.edges.push_back({0, hv, 1});
    }
    std::sort(g.legs.begin(), g.legs.end(),
              [](const Graph::Leg& a, const Graph::Leg& b) { return a.marking < b.marking; });
    validate(g, 1);
    return g;
}

// Every boundary configuration over the tangency vector alpha (all entries
// >= 1) with at most max_groups attached groups, each group a single
// transversal component with generic contacts.  Groups are produced in a
// canonical order so the sweep is duplicate-free.
inline std::vector<BoundaryConfig> enumerate_boundary_configs(
    const std::vector<long long>& alpha, long long d, int max_groups = 2) {
    long long total = 0;
    for (long long a : alpha) {
        require(a >= 1, errc::invalid_parameters, "tangency entries must be >= 1", {});
        total += a;
    }
    require(d >= 1 && total <= d, errc::invalid_parameters, "need sum alpha <= d",
            json{{"d", d}, {"sum_alpha", total}});
    const int n = static_cast<int>(alpha.size());

    // A group is generic: root contact of order m_i, one marked contact of
    // order alpha_j per tangency marking it hosts, simple contacts for the
    // leftover degree.
    auto make_group = [&](long long di, long long mi, const std::vector<int>& marks) {
        BoundaryGroup grp;
        grp.degree = di;
        grp.node_mult = mi;
        Component comp;
        comp.degree = di;
        comp.contacts.push_back({mi, std::nullopt});
        long long used = mi;
        for (int j : marks) {
            comp.contacts.push_back({alpha[static_cast<size_t>(j - 1)], j});
            used += alpha[static_cast<size_t>(j - 1)];
        }
        for (long long e = 0; e < di - used; ++e) comp.contacts.push_back({1, std::nullopt});
        grp.config.n = 0;  // markings are global; the assembly validates them
        grp.config.d = di;
        grp.config.components.push_back(std::move(comp));
        grp.root_component = 0;
        grp.root_contact = 0;
        return grp;
    };

    std::vector<BoundaryConfig> out;
    std::vector<int> marks(static_cast<size_t>(n));
    std::iota(marks.begin(), marks.end(), 1);

    // Assignment of each marking: 0 = internal, 1..k = group index.
    for (int k = 0; k <= max_groups; ++k) {
        std::vector<int> assign(static_cast<size_t>(n), 0);
        while (true) {
            long long alpha_internal = 0;
            std::vector<std::vector<int>> group_marks(static_cast<size_t>(k));
            for (int j = 0; j < n; ++j) {
                if (assign[static_cast<size_t>(j)] == 0)
                    alpha_internal += alpha[static_cast<size_t>(j)];
                else
                    group_marks[static_cast<size_t>(assign[static_cast<size_t>(j)] - 1)].push_back(j + 1);
            }

            // Degrees and node multiplicities for the k groups.
            std::vector<long long> di(static_cast<size_t>(k)), mi(static_cast<size_t>(k));
            auto emit = [&]() {
                long long d0 = d, m_sum = 0;
                for (int i = 0; i < k; ++i) d0 -= di[static_cast<size_t>(i)], m_sum += mi[static_cast<size_t>(i)];
                if (d0 < 0) return;
                if (d0 + m_sum != alpha_internal) return;
                if (k == 0 && d0 != d) return;
                for (int i = 0; i < k; ++i) {
                    long long need = mi[static_cast<size_t>(i)];
                    for (int j : group_marks[static_cast<size_t>(i)]) need += alpha[static_cast<size_t>(j - 1)];
                    if (need > di[static_cast<size_t>(i)]) return;
                }
                // Canonical group order kills permutations of equal groups.
                for (int i = 0; i + 1 < k; ++i) {
                    auto key = [&](int t) {
                        return std::make_tuple(di[static_cast<size_t>(t)], mi[static_cast<size_t>(t)],
                                               group_marks[static_cast<size_t>(t)]);
                    };
                    if (key(i) > key(i + 1)) return;
                }
                BoundaryConfig cfg;
                cfg.n = n;
                cfg.d = d;
                InternalComponent in;
                in.d0 = d0;
                for (int j = 0; j < n; ++j)
                    if (assign[static_cast<size_t>(j)] == 0)
                        in.tangencies.push_back({j + 1, alpha[static_cast<size_t>(j)]});
                cfg.internal = in;
                for (int i = 0; i < k; ++i)
                    cfg.groups.push_back(make_group(di[static_cast<size_t>(i)], mi[static_cast<size_t>(i)],
                                                    group_marks[static_cast<size_t>(i)]));
                out.push_back(std::move(cfg));
            };
            // Odometer over d_i in 1..d and m_i in 1..d_i.
            std::vector<long long> state(static_cast<size_t>(2 * k), 1);
            while (true) {
                for (int i = 0; i < k; ++i) {
                    di[static_cast<size_t>(i)] = state[static_cast<size_t>(2 * i)];
                    mi[static_cast<size_t>(i)] = state[static_cast<size_t>(2 * i + 1)];
                }
                bool feasible = true;
                for (int i = 0; i < k; ++i)
                    if (mi[static_cast<size_t>(i)] > di[static_cast<size_t>(i)]) feasible = false;
                if (feasible) emit();
                int pos = static_cast<int>(state.size()) - 1;
                while (pos >= 0 && state[static_cast<size_t>(pos)] == d) {
                    state[static_cast<size_t>(pos)] = 1;
                    --pos;
                }
                if (pos < 0) break;
                ++state[static_cast<size_t>(pos)];
            }
            if (k == 0) break;  // single empty assignment suffices

            int j = n - 1;
            while (j >= 0 && assign[static_cast<size_t>(j)] == k) {
                assign[static_cast<size_t>(j)] = 0;
                --j;
            }
            if (j < 0) break;
            ++assign[static_cast<size_t>(j)];
        }
    }
    return out;
}

}  // namespace bbatlas
