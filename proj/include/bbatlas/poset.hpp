#pragma once

// Degeneration moves between fixed-locus graphs and the order they generate.
//
// Flowing a stratum toward the hyperplane degenerates its maps; on graphs the
// elementary degenerations are:
//
//   split     an edge of degree d_e sheds d0 into its H-endpoint's degree and
//             breaks the rest into k covers of the same line (k new P-ends;
//             the old P-end's remaining flags are distributed among them);
//             k = 0 deletes a bare P-end entirely,
//   join      two edges at a common P-vertex merge, their H-endpoints fusing
//             into one (degrees add),
//   transfer  a marked point slides from the P-end of an edge into H.
//
// Every move strictly increases the potential 2*length - #P, so the reachable
// order is antisymmetric; the open stratum's star reaches everything.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bbatlas/canonical.hpp"
#include "bbatlas/enumeration.hpp"
#include "bbatlas/graph.hpp"

namespace bbatlas {

struct MoveStep {
  std::string type;  // "split" | "join" | "transfer"
  // split and transfer name an edge by its index
  int edge = -1;
  // split data
  int d0 = 0;
  std::vector<int> parts;        // degrees of the replacement edges, each >= 1
  std::vector<int> edge_assign;  // per other edge at the P-end (index order): target part
  std::vector<int> leg_assign;   // per leg at the P-end (index order): target part
  // join data
  int edge_a = -1, edge_b = -1;
  // transfer data
  int marking = 0;
};

namespace detail {

inline void remove_vertex(Graph& g, int v) {
  g.vertices.erase(g.vertices.begin() + v);
  for (auto& e : g.edges) {
    if (e.p > v) --e.p;
    if (e.h > v) --e.h;
  }
  for (auto& l : g.legs)
    if (l.vertex > v) --l.vertex;
}

}  // namespace detail

inline Graph apply_move(const Graph& g, const MoveStep& s, int r) {
  validate(g, r);
  Graph h = g;
  if (s.type == "split") {
    require(s.edge >= 0 && s.edge < (int)g.edges.size(), errc::invalid_parameters,
            "split: edge index out of range");
    const Graph::Edge e = g.edges[s.edge];
    const int k = (int)s.parts.size();
    long long sum = s.d0;
    for (int m : s.parts) {
      require(m >= 1, errc::invalid_parameters, "split: parts must be >= 1");
      sum += m;
    }
    require(s.d0 >= 0, errc::invalid_parameters, "split: negative absorbed degree");
    require(sum == e.degree, errc::invalid_parameters,
            "split: absorbed degree and parts must sum to the edge degree");
    require(!(k == 1 && s.d0 == 0), errc::invalid_parameters, "split: identity move");

    std::vector<int> other_edges, legs_here;
    for (int i = 0; i < (int)g.edges.size(); ++i)
      if (i != s.edge && g.edges[i].p == e.p) other_edges.push_back(i);
    for (int i = 0; i < (int)g.legs.size(); ++i)
      if (g.legs[i].vertex == e.p) legs_here.push_back(i);

    if (k == 0) {
      require(other_edges.empty() && legs_here.empty(), errc::invalid_parameters,
              "split: absorbing an edge requires a bare P-end");
      h.vertices[e.h].h_degree += s.d0;
      h.edges.erase(h.edges.begin() + s.edge);
      detail::remove_vertex(h, e.p);
    } else {
      require((int)s.edge_assign.size() == (int)other_edges.size(), errc::invalid_parameters,
              "split: need one part assignment per remaining edge at the P-end");
      require((int)s.leg_assign.size() == (int)legs_here.size(), errc::invalid_parameters,
              "split: need one part assignment per leg at the P-end");
      std::vector<int> part_vertex(k);
      part_vertex[0] = e.p;
      for (int i = 1; i < k; ++i) {
        part_vertex[i] = (int)h.vertices.size();
        h.vertices.push_back({VertexKind::P, 0});
      }
      h.edges[s.edge].degree = s.parts[0];
      for (int i = 1; i < k; ++i) h.edges.push_back({part_vertex[i], e.h, s.parts[i]});
      h.vertices[e.h].h_degree += s.d0;
      for (size_t j = 0; j < other_edges.size(); ++j) {
        require(s.edge_assign[j] >= 0 && s.edge_assign[j] < k, errc::invalid_parameters,
                "split: part assignment out of range");
        h.edges[other_edges[j]].p = part_vertex[s.edge_assign[j]];
      }
      for (size_t j = 0; j < legs_here.size(); ++j) {
        require(s.leg_assign[j] >= 0 && s.leg_assign[j] < k, errc::invalid_parameters,
                "split: part assignment out of range");
        h.legs[legs_here[j]].vertex = part_vertex[s.leg_assign[j]];
      }
    }
  } else if (s.type == "join") {
    require(s.edge_a >= 0 && s.edge_a < (int)g.edges.size() && s.edge_b >= 0 &&
                s.edge_b < (int)g.edges.size() && s.edge_a != s.edge_b,
            errc::invalid_parameters, "join: need two distinct edges");
    const Graph::Edge a = g.edges[s.edge_a], b = g.edges[s.edge_b];
    require(a.p == b.p, errc::invalid_parameters, "join: edges must share their P-end");
    h.vertices[a.h].h_degree += g.vertices[b.h].h_degree;
    for (auto& e : h.edges)
      if (e.h == b.h) e.h = a.h;
    for (auto& l : h.legs)
      if (l.vertex == b.h) l.vertex = a.h;
    h.edges[s.edge_a].degree = a.degree + b.degree;
    h.edges.erase(h.edges.begin() + s.edge_b);
    detail::remove_vertex(h, b.h);
  } else if (s.type == "transfer") {
    require(s.edge >= 0 && s.edge < (int)g.edges.size(), errc::invalid_parameters,
            "transfer: edge index out of range");
    const Graph::Edge e = g.edges[s.edge];
    bool moved = false;
    for (auto& l : h.legs)
      if (l.marking == s.marking) {
        require(l.vertex == e.p, errc::invalid_parameters,
                "transfer: the leg must sit at the edge's P-end");
        l.vertex = e.h;
        moved = true;
      }
    require(moved, errc::invalid_parameters, "transfer: no such marking");
  } else {
    fail(errc::invalid_parameters, "unknown move type", {{"type", s.type}});
  }
  validate(h, r);
  return h;
}

inline std::vector<std::pair<MoveStep, Graph>> successor_moves(const Graph& g, int r,
                                                               long long ceiling = 1000000) {
  validate(g, r);
  std::vector<std::pair<MoveStep, Graph>> out;
  long long budget = ceiling;
  auto attempt = [&](const MoveStep& s) {
    require(--budget >= 0, errc::resource_limit, "successor enumeration exceeded its ceiling");
    out.push_back({s, apply_move(g, s, r)});
  };

  for (int i = 0; i < (int)g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    int others = 0, legs_here = 0;
    for (int j = 0; j < (int)g.edges.size(); ++j)
      if (j != i && g.edges[j].p == e.p) ++others;
    for (const auto& l : g.legs) legs_here += (l.vertex == e.p);

    const int max_d0 = (r == 1) ? 0 : e.degree;
    for (int d0 = 0; d0 <= max_d0; ++d0) {
      int rest = e.degree - d0;
      if (rest == 0) {
        if (others == 0 && legs_here == 0) {
          MoveStep s;
          s.type = "split";
          s.edge = i;
          s.d0 = d0;
          attempt(s);
        }
        continue;
      }
      // compositions of rest into k >= 1 parts, then all flag distributions
      std::vector<int> parts;
      auto rec = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
          int k = (int)parts.size();
          if (k == 1 && d0 == 0) return;
          std::vector<int> ea(others, 0), la(legs_here, 0);
          while (true) {
            MoveStep s;
            s.type = "split";
            s.edge = i;
            s.d0 = d0;
            s.parts = parts;
            s.edge_assign = ea;
            s.leg_assign = la;
            attempt(s);
            // odometer over both assignment vectors
            size_t pos = 0;
            bool done = true;
            for (auto* vec : {&ea, &la}) {
              for (auto& x : *vec) {
                (void)pos;
                if (++x < k) {
                  done = false;
                  break;
                }
                x = 0;
              }
              if (!done) break;
            }
            if (done) break;
          }
          return;
        }
        for (int m = 1; m <= remaining; ++m) {
          parts.push_back(m);
          self(self, remaining - m);
          parts.pop_back();
        }
      };
      rec(rec, rest);
    }
  }

  for (int i = 0; i < (int)g.edges.size(); ++i)
    for (int j = i + 1; j < (int)g.edges.size(); ++j)
      if (g.edges[i].p == g.edges[j].p) {
        MoveStep s;
        s.type = "join";
        s.edge_a = i;
        s.edge_b = j;
        attempt(s);
      }

  for (int i = 0; i < (int)g.edges.size(); ++i)
    for (const auto& l : g.legs)
      if (l.vertex == g.edges[i].p) {
        MoveStep s;
        s.type = "transfer";
        s.edge = i;
        s.marking = l.marking;
        attempt(s);
      }

  return out;
}

// canonical representatives of the distinct one-move degenerations
inline std::vector<Graph> successors(const Graph& g, int r, long long ceiling = 1000000) {
  std::map<std::string, Graph> classes;
  for (auto& [s, h] : successor_moves(g, r, ceiling)) {
    auto cf = canonical_form(h);
    classes.emplace(std::move(cf.key), std::move(cf.graph));
  }
  std::vector<Graph> out;
  for (auto& [k, h] : classes) out.push_back(std::move(h));
  return out;
}

// a <= b: a's stratum lies in the closure of b's.  The witness degenerates
// the canonical form of b into a, one move at a time (each step's indices
// refer to the canonical form of the previous step's result).
inline std::optional<std::vector<MoveStep>> leq_witness(const Graph& a, const Graph& b, int r,
                                                        long long ceiling = 1000000) {
  validate(a, r);
  validate(b, r);
  require(a.n == b.n && a.d == b.d, errc::invalid_parameters,
          "graphs of different moduli are incomparable");
  const auto target = canonical_form(a);
  const int target_phi = potential(a);
  auto start = canonical_form(b);
  if (start.key == target.key) return std::vector<MoveStep>{};

  struct NodeInfo {
    Graph graph;
    std::string parent;
    MoveStep step;
  };
  std::map<std::string, NodeInfo> seen;
  seen.emplace(start.key, NodeInfo{start.graph, "", {}});
  std::deque<std::string> queue{start.key};
  long long budget = ceiling;
  while (!queue.empty()) {
    std::string key = queue.front();
    queue.pop_front();
    const Graph cur = seen.at(key).graph;
    for (auto& [step, h] : successor_moves(cur, r, ceiling)) {
      if (potential(h) > target_phi) continue;
      auto cf = canonical_form(h);
      if (seen.count(cf.key)) continue;
      require(--budget >= 0, errc::resource_limit, "order search exceeded its ceiling");
      seen.emplace(cf.key, NodeInfo{cf.graph, key, step});
      if (cf.key == target.key) {
        std::vector<MoveStep> path;
        std::string at = cf.key;
        while (at != start.key) {
          path.push_back(seen.at(at).step);
          at = seen.at(at).parent;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(cf.key);
    }
  }
  return std::nullopt;
}

inline bool leq(const Graph& a, const Graph& b, int r, long long ceiling = 1000000) {
  return leq_witness(a, b, r, ceiling).has_value();
}

// breadth-first depth below the open stratum's graph
struct LevelFunction {
  std::map<std::string, int> level_by_key;
  int level_of(const Graph& g) const {
    auto it = level_by_key.find(canonical_form(g).key);
    require(it != level_by_key.end(), errc::unreachable_graph,
            "graph is not reachable from the open stratum");
    return it->second;
  }
};

inline LevelFunction level_function(int n, int r, int d, long long ceiling = 1000000) {
  LevelFunction lf;
  Graph top = maximal_graph(n, r, d);
  auto cf = canonical_form(top);
  lf.level_by_key[cf.key] = 0;
  std::deque<std::pair<Graph, int>> queue{{cf.graph, 0}};
  while (!queue.empty()) {
    auto [g, lvl] = queue.front();
    queue.pop_front();
    for (auto& h : successors(g, r, ceiling)) {
      auto key = canonical_form(h).key;
      if (lf.level_by_key.count(key)) continue;
      require((long long)lf.level_by_key.size() < (long long)ceiling, errc::resource_limit,
              "level computation exceeded its ceiling");
      lf.level_by_key[key] = lvl + 1;
      queue.push_back({h, lvl + 1});
    }
  }
  return lf;
}

// the full order on one moduli's graphs: nodes in a filtration-compatible
// order (potential, then key), covering arcs, and levels
struct PosetData {
  std::vector<Graph> nodes;
  std::vector<std::string> keys;
  std::vector<std::pair<int, int>> covers;  // (i, j): node j is an immediate
                                            // degeneration of node i
  std::vector<int> level;
};

inline PosetData build_poset(int n, int r, int d, long long ceiling = 1000000) {
  PosetData pd;
  pd.nodes = enumerate_graphs(n, r, d, EnumerateOptions{ceiling, std::nullopt});
  std::stable_sort(pd.nodes.begin(), pd.nodes.end(), [](const Graph& x, const Graph& y) {
    return std::pair(potential(x), canonical_form(x).key) <
           std::pair(potential(y), canonical_form(y).key);
  });
  std::map<std::string, int> index;
  for (int i = 0; i < (int)pd.nodes.size(); ++i) {
    pd.keys.push_back(canonical_form(pd.nodes[i]).key);
    index[pd.keys.back()] = i;
  }
  // reachability via successors, then prune transitive arcs
  std::vector<std::set<int>> reach(pd.nodes.size()), direct(pd.nodes.size());
  for (int i = 0; i < (int)pd.nodes.size(); ++i)
    for (auto& h : successors(pd.nodes[i], r, ceiling))
      direct[i].insert(index.at(canonical_form(h).key));
  // nodes sorted by potential: process in reverse so reach() is complete
  for (int i = (int)pd.nodes.size() - 1; i >= 0; --i) {
    for (int j : direct[i]) {
      reach[i].insert(j);
      reach[i].insert(reach[j].begin(), reach[j].end());
    }
  }
  for (int i = 0; i < (int)pd.nodes.size(); ++i)
    for (int j : direct[i]) {
      bool covering = true;
      for (int k : reach[i])
        if (k != j && reach[k].count(j)) {
          covering = false;
          break;
        }
      if (covering) pd.covers.push_back({i, j});
    }
  LevelFunction lf = level_function(n, r, d, ceiling);
  for (const auto& k : pd.keys) {
    auto it = lf.level_by_key.find(k);
    require(it != lf.level_by_key.end(), errc::unreachable_graph,
            "enumerated graph unreachable from the open stratum");
    pd.level.push_back(it->second);
  }
  return pd;
}

}  // namespace bbatlas
