#pragma once

// Canonical forms and automorphisms of decorated graphs.
//
// Rooted-tree encoding in the AHU style: root at the tree center (the center
// set is automorphism-invariant, and in a bipartite tree two adjacent centers
// have different kinds, so taking the lexicographically smaller of the two
// rooted codes is unambiguous).  Decorations (vertex kind, H-degree, edge
// degrees, leg markings) all enter the code, so equal keys mean isomorphic
// decorated graphs.  Automorphisms permute identical-code sibling subtrees;
// markings are unique, so every automorphism fixes legs pointwise.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bbatlas/graph.hpp"
#include "bbatlas/rational.hpp"

namespace bbatlas {

namespace detail {

struct AdjEntry {
  int to;
  int degree;
};

inline std::vector<std::vector<AdjEntry>> adjacency(const Graph& g) {
  std::vector<std::vector<AdjEntry>> adj(g.vertices.size());
  for (const auto& e : g.edges) {
    adj[e.p].push_back({e.h, e.degree});
    adj[e.h].push_back({e.p, e.degree});
  }
  return adj;
}

inline std::vector<int> tree_centers(const Graph& g) {
  const int V = (int)g.vertices.size();
  if (V == 1) return {0};
  auto adj = adjacency(g);
  std::vector<int> deg(V), alive(V, 1);
  std::vector<int> layer;
  for (int v = 0; v < V; ++v) {
    deg[v] = (int)adj[v].size();
    if (deg[v] == 1) layer.push_back(v);
  }
  int remaining = V;
  while (remaining > 2) {
    std::vector<int> next;
    for (int v : layer) {
      alive[v] = 0;
      --remaining;
      for (const auto& a : adj[v])
        if (alive[a.to] && --deg[a.to] == 1) next.push_back(a.to);
    }
    layer = std::move(next);
  }
  std::vector<int> centers;
  for (int v = 0; v < V; ++v)
    if (alive[v]) centers.push_back(v);
  return centers;
}

inline std::string vertex_payload(const Graph& g, int v) {
  std::string s;
  if (g.vertices[v].kind == VertexKind::P) {
    s += "P";
  } else {
    s += "H" + std::to_string(g.vertices[v].h_degree);
  }
  std::vector<int> marks;
  for (const auto& l : g.legs)
    if (l.vertex == v) marks.push_back(l.marking);
  std::sort(marks.begin(), marks.end());
  if (!marks.empty()) {
    s += "[";
    for (size_t i = 0; i < marks.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(marks[i]);
    }
    s += "]";
  }
  return s;
}

inline std::string rooted_code(const Graph& g, const std::vector<std::vector<AdjEntry>>& adj,
                               int v, int parent, int in_degree) {
  std::vector<std::string> kids;
  for (const auto& a : adj[v])
    if (a.to != parent) kids.push_back(rooted_code(g, adj, a.to, v, a.degree));
  std::sort(kids.begin(), kids.end());
  std::string s = "(" + std::to_string(in_degree) + ";" + vertex_payload(g, v);
  for (const auto& k : kids) s += k;
  s += ")";
  return s;
}

}  // namespace detail

struct CanonicalForm {
  std::string key;          // equal keys <=> isomorphic decorated graphs
  Graph graph;              // canonically relabeled copy
  std::vector<int> relabel; // old vertex index -> new vertex index
  int root = 0;             // old index of the chosen root
};

inline CanonicalForm canonical_form(const Graph& g) {
  auto adj = detail::adjacency(g);
  auto centers = detail::tree_centers(g);
  int root = centers[0];
  std::string best = detail::rooted_code(g, adj, centers[0], -1, 0);
  if (centers.size() == 2) {
    std::string alt = detail::rooted_code(g, adj, centers[1], -1, 0);
    if (alt < best) {
      best = alt;
      root = centers[1];
    }
  }

  CanonicalForm cf;
  cf.key = "n" + std::to_string(g.n) + "d" + std::to_string(g.d) + ":" + best;
  cf.root = root;
  cf.relabel.assign(g.vertices.size(), -1);

  Graph out;
  out.n = g.n;
  out.d = g.d;
  // preorder, children in sorted-code order (ties by old index for determinism)
  struct Item {
    int v, parent_old, degree;
  };
  std::vector<Item> stack{{root, -1, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    int id = (int)out.vertices.size();
    cf.relabel[it.v] = id;
    out.vertices.push_back(g.vertices[it.v]);
    if (it.parent_old >= 0) {
      int pid = cf.relabel[it.parent_old];
      if (g.vertices[it.v].kind == VertexKind::H)
        out.edges.push_back({pid, id, it.degree});
      else
        out.edges.push_back({id, pid, it.degree});
    }
    std::vector<std::pair<std::string, detail::AdjEntry>> kids;
    for (const auto& a : adj[it.v])
      if (a.to != it.parent_old)
        kids.push_back({detail::rooted_code(g, adj, a.to, it.v, a.degree), a});
    std::stable_sort(kids.begin(), kids.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    // push reversed so the smallest-code child is visited first
    for (auto k = kids.rbegin(); k != kids.rend(); ++k)
      stack.push_back({k->second.to, it.v, k->second.degree});
  }
  for (const auto& l : g.legs) out.legs.push_back({l.marking, cf.relabel[l.vertex]});
  std::sort(out.legs.begin(), out.legs.end(),
            [](const Graph::Leg& a, const Graph::Leg& b) { return a.marking < b.marking; });
  cf.graph = std::move(out);
  return cf;
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  return canonical_form(a).key == canonical_form(b).key;
}

struct AutGroup {
  long long order = 1;                       // |Aut_Gamma|
  std::vector<std::vector<int>> generators;  // vertex permutations
  std::vector<std::vector<int>> elements;    // the whole group; identity first
};

namespace detail {

// identify two subtrees with equal codes: walk both in sorted-code order
inline void map_subtrees(const Graph& g, const std::vector<std::vector<AdjEntry>>& adj,
                         int a, int pa, int b, int pb, std::vector<int>& perm) {
  perm[a] = b;
  perm[b] = a;
  auto sorted_kids = [&](int v, int parent) {
    std::vector<std::pair<std::string, int>> kids;
    for (const auto& e : adj[v])
      if (e.to != parent) kids.push_back({rooted_code(g, adj, e.to, v, e.degree), e.to});
    std::sort(kids.begin(), kids.end());
    return kids;
  };
  auto ka = sorted_kids(a, pa), kb = sorted_kids(b, pb);
  for (size_t i = 0; i < ka.size(); ++i)
    map_subtrees(g, adj, ka[i].second, a, kb[i].second, b, perm);
}

inline std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
  return r;
}

}  // namespace detail

inline AutGroup automorphisms(const Graph& g, long long ceiling = 1000000) {
  const int V = (int)g.vertices.size();
  auto adj = detail::adjacency(g);
  auto centers = detail::tree_centers(g);
  int root = centers[0];
  if (centers.size() == 2 &&
      detail::rooted_code(g, adj, centers[1], -1, 0) < detail::rooted_code(g, adj, centers[0], -1, 0))
    root = centers[1];

  AutGroup out;
  // group children of every vertex by code; each class of size k contributes
  // k! to the order and k-1 adjacent-swap generators
  std::vector<std::pair<int, int>> order_stack{{root, -1}};
  while (!order_stack.empty()) {
    auto [v, parent] = order_stack.back();
    order_stack.pop_back();
    std::vector<std::pair<std::string, int>> kids;
    for (const auto& a : adj[v])
      if (a.to != parent) {
        kids.push_back({detail::rooted_code(g, adj, a.to, v, a.degree), a.to});
        order_stack.push_back({a.to, v});
      }
    std::sort(kids.begin(), kids.end());
    size_t i = 0;
    while (i < kids.size()) {
      size_t j = i;
      while (j < kids.size() && kids[j].first == kids[i].first) ++j;
      for (size_t k = 2; k <= j - i; ++k)
        out.order = checked_mul(out.order, (long long)k, "automorphism order");
      for (size_t k = i; k + 1 < j; ++k) {
        std::vector<int> perm(V);
        for (int x = 0; x < V; ++x) perm[x] = x;
        detail::map_subtrees(g, adj, kids[k].second, v, kids[k + 1].second, v, perm);
        out.generators.push_back(std::move(perm));
      }
      i = j;
    }
  }

  require(out.order <= ceiling, errc::resource_limit,
          "automorphism group larger than the enumeration ceiling",
          {{"order", out.order}, {"ceiling", ceiling}});
  std::vector<int> id(V);
  for (int x = 0; x < V; ++x) id[x] = x;
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier)
      for (const auto& gperm : out.generators) {
        auto q = detail::compose(gperm, p);
        if (seen.insert(q).second) next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  require((long long)seen.size() == out.order, errc::internal,
          "automorphism closure does not match the computed order");
  out.elements.assign(seen.begin(), seen.end());
  std::swap(*std::find(out.elements.begin(), out.elements.end(), id), out.elements.front());
  return out;
}

// index permutation induced on edges by a vertex permutation
inline std::vector<int> edge_permutation(const Graph& g, const std::vector<int>& vperm) {
  std::map<std::pair<int, int>, int> lookup;
  for (int i = 0; i < (int)g.edges.size(); ++i) lookup[{g.edges[i].p, g.edges[i].h}] = i;
  std::vector<int> out(g.edges.size());
  for (int i = 0; i < (int)g.edges.size(); ++i) {
    auto it = lookup.find({vperm[g.edges[i].p], vperm[g.edges[i].h]});
    require(it != lookup.end() && g.edges[it->second].degree == g.edges[i].degree,
            errc::internal, "vertex permutation is not a graph automorphism");
    out[i] = it->second;
  }
  return out;
}

// order of the full automorphism group of the fixed locus: the graph
// automorphisms extend by the deck transformations of every edge cover
inline long long a_gamma_order(const Graph& g, long long ceiling = 1000000) {
  long long a = automorphisms(g, ceiling).order;
  for (const auto& e : g.edges) a = checked_mul(a, (long long)e.degree, "a_gamma");
  return a;
}

}  // namespace bbatlas
