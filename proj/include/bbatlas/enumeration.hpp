#pragma once

// Exhaustive enumeration of the decorated graphs for given (n, r, d), one
// representative per isomorphism class.
//
// Edge degrees are >= 1 and sum (with H-vertex degrees) to d, so a graph has
// at most d edges; trees on up to d+1 labeled vertices come from Prufer
// sequences, each with its two bipartite kind assignments, then degrees and
// legs are distributed in all ways and duplicates collapse via canonical keys.

#include <map>
#include <optional>
#include <random>
#include <vector>

#include "bbatlas/canonical.hpp"
#include "bbatlas/graph.hpp"

namespace bbatlas {

struct EnumerateOptions {
  long long ceiling = 1000000;  // bound on raw candidates before dedup
  std::optional<unsigned> shuffle_seed;
};

namespace detail {

inline std::vector<std::pair<int, int>> prufer_decode(const std::vector<int>& seq, int V) {
  std::vector<int> deg(V, 1);
  for (int s : seq) ++deg[s];
  std::vector<std::pair<int, int>> edges;
  int leaf = 0;
  while (deg[leaf] != 1) ++leaf;
  int low = leaf;
  for (int s : seq) {
    edges.push_back({leaf, s});
    if (--deg[s] == 1 && s < low) {
      leaf = s;
    } else {
      while (deg[++low] != 1) {}
      leaf = low;
    }
  }
  edges.push_back({leaf, V - 1});
  return edges;
}

template <typename Fn>
void for_each_tree(int V, Fn&& fn) {
  if (V == 1) {
    fn(std::vector<std::pair<int, int>>{});
    return;
  }
  std::vector<int> seq(V - 2, 0);
  while (true) {
    fn(prufer_decode(seq, V));
    int i = 0;
    while (i < V - 2 && ++seq[i] == V) seq[i++] = 0;
    if (i == V - 2) break;
  }
}

}  // namespace detail

inline std::vector<Graph> enumerate_graphs(int n, int r, int d, EnumerateOptions opts = {}) {
  require(r >= 1 && d >= 1 && n >= 0, errc::invalid_parameters,
          "enumeration needs r >= 1, d >= 1, n >= 0");
  std::map<std::string, Graph> classes;
  long long candidates = 0;
  auto consider = [&](const Graph& g) {
    require(++candidates <= opts.ceiling, errc::resource_limit,
            "enumeration exceeded its candidate ceiling", {{"ceiling", opts.ceiling}});
    auto cf = canonical_form(g);
    classes.emplace(std::move(cf.key), std::move(cf.graph));
  };

  for (int V = 1; V <= d + 1; ++V) {
    detail::for_each_tree(V, [&](const std::vector<std::pair<int, int>>& tree) {
      // 2-color by BFS parity; both kind assignments are tried
      std::vector<std::vector<int>> adj(V);
      for (auto [a, b] : tree) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
      std::vector<int> par(V, -1);
      par[0] = 0;
      std::vector<int> bfs{0};
      for (size_t i = 0; i < bfs.size(); ++i)
        for (int w : adj[bfs[i]])
          if (par[w] < 0) {
            par[w] = par[bfs[i]] ^ 1;
            bfs.push_back(w);
          }
      for (int flip = 0; flip < 2; ++flip) {
        Graph base;
        base.n = n;
        base.d = d;
        base.vertices.resize(V);
        int h_count = 0;
        for (int v = 0; v < V; ++v) {
          bool is_h = (par[v] ^ flip) != 0;
          base.vertices[v].kind = is_h ? VertexKind::H : VertexKind::P;
          h_count += is_h;
        }
        if (V == 1 && base.vertices[0].kind == VertexKind::P) continue;
        base.edges.clear();
        bool ok = true;
        for (auto [a, b] : tree) {
          if (base.vertices[a].kind == base.vertices[b].kind) ok = false;
          if (base.vertices[a].kind == VertexKind::P)
            base.edges.push_back({a, b, 1});
          else
            base.edges.push_back({b, a, 1});
        }
        if (!ok) continue;

        // distribute the degree: edges take >= 1 each, H-vertices >= 0 (r >= 2)
        std::vector<int> h_verts;
        for (int v = 0; v < V; ++v)
          if (base.vertices[v].kind == VertexKind::H) h_verts.push_back(v);
        const int E = (int)base.edges.size();
        int budget = d - E;  // each edge already carries 1
        if (budget < 0) return;

        auto emit_with_legs = [&](const Graph& decorated) {
          // every leg goes to any vertex
          std::vector<int> at(n, 0);
          while (true) {
            Graph g = decorated;
            for (int i = 0; i < n; ++i) g.legs.push_back({i + 1, at[i]});
            consider(g);
            int i = 0;
            while (i < n && ++at[i] == V) at[i++] = 0;
            if (i == n) break;
          }
        };
        // compositions of budget over the slots
        std::vector<int> slots(E + (r >= 2 ? (int)h_verts.size() : 0), 0);
        auto fill = [&](auto&& self, int idx, int rest) -> void {
          if (idx == (int)slots.size()) {
            if (rest != 0) return;
            Graph g = base;
            for (int e = 0; e < E; ++e) g.edges[e].degree = 1 + slots[e];
            if (r >= 2)
              for (size_t j = 0; j < h_verts.size(); ++j)
                g.vertices[h_verts[j]].h_degree = slots[E + j];
            emit_with_legs(g);
            return;
          }
          for (int take = 0; take <= rest; ++take) {
            slots[idx] = take;
            self(self, idx + 1, rest - take);
          }
        };
        if (slots.empty()) {
          if (budget == 0) emit_with_legs(base);
        } else {
          fill(fill, 0, budget);
        }
      }
    });
  }

  std::vector<Graph> out;
  out.reserve(classes.size());
  std::vector<std::pair<std::pair<int, std::string>, const Graph*>> order;
  for (const auto& [key, g] : classes) order.push_back({{codimension(g), key}, &g});
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [k, gp] : order) out.push_back(*gp);
  if (opts.shuffle_seed) {
    std::mt19937 rng(*opts.shuffle_seed);
    std::shuffle(out.begin(), out.end(), rng);
  }
  for (const auto& g : out) validate(g, r);
  return out;
}

}  // namespace bbatlas
