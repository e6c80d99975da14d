#include "catch_amalgamated.hpp"

#include "bbatlas/canonical.hpp"
#include "bbatlas/graph.hpp"
#include "fixtures.hpp"

using namespace bbatlas;

static errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code;
  }
  return errc::internal;
}

TEST_CASE("validation accepts the basic graphs", "[graph]") {
  for (int r : {1, 2, 3})
    for (int d : {1, 2, 4})
      for (int n : {0, 1, 3}) {
        CAPTURE(r, d, n);
        CHECK_NOTHROW(validate(maximal_graph(n, r, d), r));
      }
  CHECK_NOTHROW(validate(fixtures::edge2(), 2));
  CHECK_NOTHROW(validate(fixtures::path_php(), 1));
  CHECK_NOTHROW(validate(fixtures::edge1_h1(), 2));
  CHECK_NOTHROW(validate(fixtures::single_h(2), 2));
}

TEST_CASE("validation rejects malformed graphs", "[graph]") {
  auto expect_invalid = [](Graph g, int r) {
    CHECK(code_of([&] { validate(g, r); }) == errc::not_a_valid_graph);
  };

  Graph g = fixtures::edge2();
  g.vertices[1].kind = VertexKind::P;  // P--P edge
  expect_invalid(g, 2);

  g = fixtures::edge2();
  g.edges[0].degree = 0;
  expect_invalid(g, 2);

  g = fixtures::edge2();
  g.d = 3;  // degree sum mismatch
  expect_invalid(g, 2);

  g = fixtures::star_d2();
  g.edges.push_back({0, 1, 1});  // cycle
  expect_invalid(g, 2);

  g = fixtures::star_d2();
  g.edges.pop_back();  // disconnected
  expect_invalid(g, 2);

  g = fixtures::edge1_h1();  // H-degree forbidden when r = 1
  expect_invalid(g, 1);

  g = fixtures::single_h(2);
  g.vertices[0].h_degree = 1;  // single vertex must carry the full degree
  g.d = 2;
  expect_invalid(g, 2);

  g = fixtures::single_h(1);
  g.vertices[0].kind = VertexKind::P;
  g.vertices[0].h_degree = 0;
  expect_invalid(g, 2);  // lone P-vertex cannot reach degree 1

  g = fixtures::edge2();
  g.n = 2;
  g.legs = {{1, 0}, {1, 1}};  // duplicate marking
  expect_invalid(g, 2);

  g = fixtures::edge2();
  g.n = 2;
  g.legs = {{1, 0}};  // missing marking
  expect_invalid(g, 2);

  CHECK(code_of([] { validate(fixtures::edge2(), 0); }) == errc::invalid_parameters);
}

TEST_CASE("taxonomy of the degree-2 family", "[graph]") {
  auto t = classify(fixtures::star_d2());
  CHECK(t.very_unstable_count == 2);
  CHECK(t.stable_count == 0);
  CHECK(t.special_edge_count == 0);

  t = classify(fixtures::edge2());
  CHECK(t.very_unstable_count == 1);

  t = classify(fixtures::path_php());
  CHECK(t.unstable_node_count == 1);
  CHECK(t.special_edge_count == 1);

  t = classify(fixtures::edge1_h1());
  CHECK(t.stable_count == 1);
  CHECK(t.special_edge_count == 1);

  t = classify(fixtures::single_h(2));
  CHECK(t.stable_count == 1);
  CHECK(t.special_edge_count == 0);

  Graph g = fixtures::edge2();  // H-vertex with a leg: unstable_leg
  g.n = 1;
  g.legs = {{1, 1}};
  t = classify(g);
  CHECK(t.unstable_leg_count == 1);
  CHECK(t.very_unstable_count == 0);
}

TEST_CASE("codimension agrees with the negative-weight count", "[graph]") {
  auto both = [](const Graph& g) {
    auto w = negative_weight_count(g);
    CHECK((long long)codimension(g) == w.total());
    return codimension(g);
  };
  CHECK(both(fixtures::star_d2()) == 0);
  CHECK(both(fixtures::edge2()) == 1);
  CHECK(both(fixtures::path_php()) == 2);
  CHECK(both(fixtures::edge1_h1()) == 3);
  CHECK(both(fixtures::single_h(2)) == 3);
  CHECK(both(maximal_graph(5, 3, 4)) == 0);
}

TEST_CASE("negative-weight terms of the degree-2 family", "[graph]") {
  auto w = negative_weight_count(fixtures::edge1_h1());
  CHECK(w.h0_term == 2);
  CHECK(w.ext1_term == 1);
  CHECK(w.ext0_term == 0);

  w = negative_weight_count(fixtures::star_d2());
  CHECK(w.h0_term == 2);
  CHECK(w.ext1_term == 0);
  CHECK(w.ext0_term == 2);
}

TEST_CASE("length and potential", "[graph]") {
  CHECK(length(maximal_graph(0, 2, 2)) == -1);
  CHECK(length(maximal_graph(0, 2, 5)) == -4);
  CHECK(length(fixtures::edge2()) == 0);
  CHECK(length(fixtures::path_php()) == 1);
  CHECK(length(fixtures::edge1_h1()) == 1);
  CHECK(length(fixtures::single_h(2)) == 1);
  CHECK(potential(fixtures::edge2()) == -1);
  CHECK(potential(fixtures::single_h(2)) == 2);
}

TEST_CASE("canonical form is invariant under relabeling", "[graph]") {
  Graph a = fixtures::path_php();
  Graph b;  // same graph, vertices listed differently
  b.d = 2;
  b.vertices = {{VertexKind::H, 0}, {VertexKind::P, 0}, {VertexKind::P, 0}};
  b.edges = {{2, 0, 1}, {1, 0, 1}};
  CHECK(canonical_form(a).key == canonical_form(b).key);
  CHECK(isomorphic(a, b));
  CHECK_FALSE(isomorphic(a, fixtures::edge2()));

  auto cf = canonical_form(b);
  CHECK_NOTHROW(validate(cf.graph, 2));
  CHECK(canonical_form(cf.graph).key == cf.key);
  for (int v : cf.relabel) CHECK((v >= 0 && v < 3));
}

TEST_CASE("distinct decorations give distinct keys", "[graph]") {
  Graph a = fixtures::edge2();
  Graph b = fixtures::edge1_h1();  // same shape, different decorations
  b.vertices[1].h_degree = 1;
  CHECK(canonical_form(a).key != canonical_form(b).key);

  Graph c = fixtures::edge2();
  c.n = 1;
  c.legs = {{1, 0}};
  Graph e = fixtures::edge2();
  e.n = 1;
  e.legs = {{1, 1}};
  CHECK(canonical_form(c).key != canonical_form(e).key);
}

TEST_CASE("automorphism groups", "[graph]") {
  auto a = automorphisms(fixtures::path_php());
  CHECK(a.order == 2);
  CHECK(a.generators.size() == 1);
  CHECK(a.elements.size() == 2);

  CHECK(automorphisms(fixtures::edge2()).order == 1);
  CHECK(automorphisms(fixtures::star_d2()).order == 2);
  CHECK(automorphisms(maximal_graph(0, 2, 3)).order == 6);
  CHECK(automorphisms(maximal_graph(0, 2, 3)).elements.size() == 6);

  Graph g = fixtures::path_php();  // a leg breaks the symmetry
  g.n = 1;
  g.legs = {{1, 0}};
  CHECK(automorphisms(g).order == 1);

  CHECK(code_of([] { automorphisms(maximal_graph(0, 2, 8), 1000); }) == errc::resource_limit);
}

TEST_CASE("automorphisms respect edges and fix legs", "[graph]") {
  Graph g = fixtures::star_d2();
  auto a = automorphisms(g);
  REQUIRE(a.generators.size() == 1);
  auto ep = edge_permutation(g, a.generators[0]);
  CHECK(ep == std::vector<int>{1, 0});

  Graph h = maximal_graph(2, 2, 2);
  for (const auto& el : automorphisms(h).elements)
    for (const auto& leg : h.legs) CHECK(el[leg.vertex] == leg.vertex);
}

TEST_CASE("a_gamma order", "[graph]") {
  CHECK(a_gamma_order(fixtures::edge2()) == 2);     // deck transformations only
  CHECK(a_gamma_order(fixtures::star_d2()) == 2);   // graph symmetry only
  CHECK(a_gamma_order(fixtures::path_php()) == 2);
  CHECK(a_gamma_order(fixtures::single_h(2)) == 1);
  CHECK(a_gamma_order(maximal_graph(0, 2, 3)) == 6);
  Graph g = fixtures::edge2();
  g.edges[0].degree = 3;
  g.d = 3;
  CHECK(a_gamma_order(g) == 3);
}
