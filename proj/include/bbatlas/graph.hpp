#pragma once

// Decorated graphs indexing the torus-fixed loci of genus-0 stable map spaces.
//
// Target P^r carries the C* action fixing a hyperplane H pointwise and an
// off-hyperplane point p.  A fixed stable map decomposes into components
// mapped to p (P-vertices), components mapped into H (H-vertices, decorated
// with the degree of the map into H), and multiple covers of lines through p
// joining the two (edges, decorated with the covering degree).  The result is
// a bipartite tree with n numbered legs.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bbatlas/errors.hpp"

namespace bbatlas {

enum class VertexKind { P, H };

struct Graph {
  struct Vertex {
    VertexKind kind = VertexKind::P;
    int h_degree = 0;  // degree of the map into H; only H-vertices carry one
  };
  struct Edge {
    int p = -1;      // index of the P endpoint
    int h = -1;      // index of the H endpoint
    int degree = 1;  // covering degree of the line through p, >= 1
  };
  struct Leg {
    int marking = 0;  // 1..n
    int vertex = -1;
  };

  int n = 0;
  int d = 0;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Leg> legs;

  int edge_count_at(int v) const {
    int c = 0;
    for (const auto& e : edges) c += (e.p == v) + (e.h == v);
    return c;
  }
  int leg_count_at(int v) const {
    int c = 0;
    for (const auto& l : legs) c += (l.vertex == v);
    return c;
  }
  int valency(int v) const { return edge_count_at(v) + leg_count_at(v); }

  int p_vertex_count() const {
    int c = 0;
    for (const auto& v : vertices) c += (v.kind == VertexKind::P);
    return c;
  }
};

// Structural checks.  Everything downstream assumes a graph passed this.
inline void validate(const Graph& g, int r) {
  require(r >= 1, errc::invalid_parameters, "target dimension r must be >= 1");
  auto bad = [&](const std::string& msg, json det = json::object()) {
    fail(errc::not_a_valid_graph, msg, std::move(det));
  };
  if (g.d < 1) bad("total degree must be >= 1");
  if (g.n < 0) bad("negative number of legs");
  if (g.vertices.empty()) bad("graph has no vertices");
  const int V = (int)g.vertices.size();

  for (int i = 0; i < V; ++i) {
    const auto& v = g.vertices[i];
    if (v.kind == VertexKind::P && v.h_degree != 0)
      bad("P-vertex carries a degree", {{"vertex", i}});
    if (v.h_degree < 0) bad("negative vertex degree", {{"vertex", i}});
    if (r == 1 && v.h_degree != 0)
      bad("for r = 1 the fixed hyperplane is a point, so H-vertex degrees must vanish",
          {{"vertex", i}});
  }

  if ((int)g.edges.size() != V - 1) bad("graph is not a tree");
  std::vector<int> parent(V, -1), seen(V, 0);
  std::vector<std::vector<int>> adj(V);
  for (int i = 0; i < (int)g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.p < 0 || e.p >= V || e.h < 0 || e.h >= V) bad("edge endpoint out of range", {{"edge", i}});
    if (g.vertices[e.p].kind != VertexKind::P) bad("edge p-endpoint is not a P-vertex", {{"edge", i}});
    if (g.vertices[e.h].kind != VertexKind::H) bad("edge h-endpoint is not an H-vertex", {{"edge", i}});
    if (e.degree < 1) bad("edge degree must be >= 1", {{"edge", i}});
    adj[e.p].push_back(e.h);
    adj[e.h].push_back(e.p);
  }
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != V) bad("graph is not connected");

  if (V == 1) {
    if (g.vertices[0].kind != VertexKind::H || g.vertices[0].h_degree != g.d)
      bad("a single-vertex graph must be an H-vertex of full degree");
  }

  std::vector<int> mark_seen(g.n + 1, 0);
  for (int i = 0; i < (int)g.legs.size(); ++i) {
    const auto& l = g.legs[i];
    if (l.vertex < 0 || l.vertex >= V) bad("leg attached to missing vertex", {{"leg", i}});
    if (l.marking < 1 || l.marking > g.n) bad("leg marking out of range", {{"leg", i}});
    if (mark_seen[l.marking]++) bad("duplicate leg marking", {{"marking", l.marking}});
  }
  if ((int)g.legs.size() != g.n) bad("graph must carry exactly n legs");

  long long total = 0;
  for (const auto& v : g.vertices) total += v.h_degree;
  for (const auto& e : g.edges) total += e.degree;
  if (total != g.d) bad("edge and vertex degrees must sum to the total degree",
                        {{"sum", total}, {"d", g.d}});
}

// Taxonomy of H-vertices, by degree and valency.  Degree-0 H-vertices of
// valency <= 2 parametrize nothing by themselves; which flavor they are
// drives both codimension formulas.
enum class HClass { stable, very_unstable, unstable_leg, unstable_node };

struct Taxonomy {
  std::vector<std::optional<HClass>> h_class;  // per vertex; P-vertices empty
  int stable_count = 0;
  int very_unstable_count = 0;
  int unstable_leg_count = 0;
  int unstable_node_count = 0;
  int special_edge_count = 0;  // edges with stable H-endpoint, plus unstable nodes
};

inline Taxonomy classify(const Graph& g) {
  Taxonomy t;
  t.h_class.resize(g.vertices.size());
  for (int i = 0; i < (int)g.vertices.size(); ++i) {
    const auto& v = g.vertices[i];
    if (v.kind != VertexKind::H) continue;
    int ec = g.edge_count_at(i), lc = g.leg_count_at(i);
    HClass c;
    if (v.h_degree > 0 || ec + lc >= 3) {
      c = HClass::stable;
      ++t.stable_count;
    } else if (ec == 1 && lc == 0) {
      c = HClass::very_unstable;
      ++t.very_unstable_count;
    } else if (ec == 1 && lc == 1) {
      c = HClass::unstable_leg;
      ++t.unstable_leg_count;
    } else if (ec == 2 && lc == 0) {
      c = HClass::unstable_node;
      ++t.unstable_node_count;
    } else {
      fail(errc::internal, "H-vertex escapes the taxonomy", {{"vertex", i}});
    }
    t.h_class[i] = c;
  }
  for (const auto& e : g.edges)
    if (t.h_class[e.h] == HClass::stable) ++t.special_edge_count;
  t.special_edge_count += t.unstable_node_count;
  return t;
}

inline int codimension(const Graph& g) {
  Taxonomy t = classify(g);
  return g.d + t.stable_count - t.very_unstable_count;
}

// The same codimension, but counted as it arises: negative-weight directions
// in sections of the pulled-back tangent sheaf, gluing corrections from nodes
// on stable H-components, minus reparametrizations of very unstable ones.
struct NegativeWeightCount {
  long long h0_term = 0;
  long long ext1_term = 0;
  long long ext0_term = 0;
  long long total() const { return h0_term + ext1_term - ext0_term; }
};

inline NegativeWeightCount negative_weight_count(const Graph& g) {
  Taxonomy t = classify(g);
  NegativeWeightCount w;
  for (int i = 0; i < (int)g.vertices.size(); ++i)
    if (t.h_class[i] == HClass::stable) w.h0_term += g.vertices[i].h_degree + 1;
  for (const auto& e : g.edges) w.h0_term += e.degree;
  w.h0_term -= t.special_edge_count;
  w.ext1_term = t.special_edge_count;
  w.ext0_term = t.very_unstable_count;
  return w;
}

// Length and potential for the flow order.  Length rises strictly along
// moves; the potential 2*length - #P certifies antisymmetry of the order.
inline int length(const Graph& g) {
  int l = 0;
  for (const auto& v : g.vertices)
    if (v.kind == VertexKind::H) l += v.h_degree - 1;
  for (const auto& v : g.vertices) l += (v.kind == VertexKind::P);
  for (const auto& leg : g.legs) l += (g.vertices[leg.vertex].kind == VertexKind::H);
  return l;
}

inline int potential(const Graph& g) { return 2 * length(g) - g.p_vertex_count(); }

// The unique open stratum's graph: one P-vertex carrying every leg, with d
// unit edges to degree-0 H-vertices.
inline Graph maximal_graph(int n, int r, int d) {
  require(r >= 1 && d >= 1 && n >= 0, errc::invalid_parameters,
          "maximal_graph needs r >= 1, d >= 1, n >= 0");
  Graph g;
  g.n = n;
  g.d = d;
  g.vertices.push_back({VertexKind::P, 0});
  for (int i = 0; i < d; ++i) {
    g.vertices.push_back({VertexKind::H, 0});
    g.edges.push_back({0, i + 1, 1});
  }
  for (int i = 1; i <= n; ++i) g.legs.push_back({i, 0});
  validate(g, r);
  return g;
}

}  // namespace bbatlas
