#pragma once

// The fixed locus attached to a decorated graph, described as a product of
// standard factors (before dividing by automorphisms):
//
//   - a P-vertex of valency >= 4 carries a moduli-of-curves factor,
//   - a P-vertex of valency <= 3 is rigid (point factor),
//   - a stable H-vertex carries a moduli-of-maps factor into H = P^{r-1},
//   - every unstable H-vertex contributes one copy of H itself: the point
//     where its edge (or both edges, which meet H at a common point) lands.

#include <vector>

#include "bbatlas/graph.hpp"

namespace bbatlas {

struct Factor {
  enum class Kind { point, curve, map, target };
  Kind kind = Kind::point;
  int vertex = -1;  // owning vertex in the graph
  int m = 0;        // marked points (curve / map factors)
  int d_w = 0;      // degree into H (map factors)
};

struct FixedLocusSpec {
  std::vector<Factor> factors;  // one per vertex, in vertex order
};

inline FixedLocusSpec fixed_locus_spec(const Graph& g) {
  Taxonomy t = classify(g);
  FixedLocusSpec spec;
  for (int v = 0; v < (int)g.vertices.size(); ++v) {
    Factor f;
    f.vertex = v;
    if (g.vertices[v].kind == VertexKind::P) {
      int m = g.valency(v);
      if (m >= 4) {
        f.kind = Factor::Kind::curve;
        f.m = m;
      } else {
        f.kind = Factor::Kind::point;
      }
    } else if (t.h_class[v] == HClass::stable) {
      f.kind = Factor::Kind::map;
      f.m = g.valency(v);
      f.d_w = g.vertices[v].h_degree;
    } else {
      f.kind = Factor::Kind::target;
    }
    spec.factors.push_back(f);
  }
  return spec;
}

inline long long factor_dim(const Factor& f, int r) {
  require(r >= 1, errc::invalid_parameters, "factor_dim needs r >= 1");
  switch (f.kind) {
    case Factor::Kind::point:
      return 0;
    case Factor::Kind::curve:
      return f.m - 3;
    case Factor::Kind::map:  // target H = P^{r-1}
      return (long long)r * f.d_w + (r - 1) + f.m - 3;
    case Factor::Kind::target:
      return r - 1;
  }
  fail(errc::internal, "unknown factor kind");
}

inline long long fixed_locus_dim(const Graph& g, int r) {
  long long dim = 0;
  for (const auto& f : fixed_locus_spec(g).factors) dim += factor_dim(f, r);
  return dim;
}

// dim of the ambient moduli space of maps
inline long long moduli_dim(int r, int d, int n) {
  return (long long)(r + 1) * d + r + n - 3;
}

}  // namespace bbatlas
