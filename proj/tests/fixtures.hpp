#pragma once

// Small graphs shared across test files.  Names follow the d=2, n=0 family:
// the open stratum's star, the double cover of a line, the broken line, the
// line meeting H in a degree-1 curve, and the full-degree H-curve.

#include "bbatlas/graph.hpp"

namespace fixtures {

using bbatlas::Graph;
using bbatlas::VertexKind;

inline Graph star_d2() {
  Graph g;
  g.d = 2;
  g.vertices = {{VertexKind::P, 0}, {VertexKind::H, 0}, {VertexKind::H, 0}};
  g.edges = {{0, 1, 1}, {0, 2, 1}};
  return g;
}

inline Graph edge2() {
  Graph g;
  g.d = 2;
  g.vertices = {{VertexKind::P, 0}, {VertexKind::H, 0}};
  g.edges = {{0, 1, 2}};
  return g;
}

inline Graph path_php() {
  Graph g;
  g.d = 2;
  g.vertices = {{VertexKind::P, 0}, {VertexKind::H, 0}, {VertexKind::P, 0}};
  g.edges = {{0, 1, 1}, {2, 1, 1}};
  return g;
}

inline Graph edge1_h1() {
  Graph g;
  g.d = 2;
  g.vertices = {{VertexKind::P, 0}, {VertexKind::H, 1}};
  g.edges = {{0, 1, 1}};
  return g;
}

inline Graph single_h(int d, int n = 0) {
  Graph g;
  g.d = d;
  g.n = n;
  g.vertices = {{VertexKind::H, d}};
  for (int i = 1; i <= n; ++i) g.legs.push_back({i, 0});
  return g;
}

}  // namespace fixtures
