#include "catch_amalgamated.hpp"

#include <map>
#include <set>

#include "bbatlas/enumeration.hpp"
#include "bbatlas/fixed_locus.hpp"
#include "fixtures.hpp"

using namespace bbatlas;

static std::multiset<int> codims(const std::vector<Graph>& gs) {
  std::multiset<int> out;
  for (const auto& g : gs) out.insert(codimension(g));
  return out;
}

TEST_CASE("prufer generation hits every tree once", "[enumeration]") {
  for (int V : {1, 2, 3, 4, 5}) {
    long long expect = 1;
    for (int i = 0; i < V - 2; ++i) expect *= V;
    std::set<std::set<std::pair<int, int>>> trees;
    detail::for_each_tree(V, [&](const std::vector<std::pair<int, int>>& es) {
      std::set<std::pair<int, int>> norm;
      for (auto [a, b] : es) norm.insert({std::min(a, b), std::max(a, b)});
      REQUIRE((int)norm.size() == V - 1);
      trees.insert(norm);
    });
    CAPTURE(V);
    CHECK((long long)trees.size() == expect);
  }
}

TEST_CASE("graph counts for small degree", "[enumeration]") {
  CHECK(enumerate_graphs(0, 2, 1).size() == 2);
  CHECK(enumerate_graphs(0, 3, 1).size() == 2);
  CHECK(enumerate_graphs(0, 2, 2).size() == 5);
  CHECK(enumerate_graphs(0, 1, 2).size() == 3);
  CHECK(enumerate_graphs(1, 2, 1).size() == 3);
  CHECK(enumerate_graphs(1, 1, 1).size() == 2);
}

TEST_CASE("graph counts with more legs", "[enumeration]") {
  // d = 1: an edge with legs split across its two ends (2^n classes) plus the
  // full-degree H-vertex carrying everything
  CHECK(enumerate_graphs(2, 2, 1).size() == 5);
  CHECK(enumerate_graphs(2, 1, 1).size() == 4);
  CHECK(enumerate_graphs(3, 2, 1).size() == 9);
  // d = 2, one leg over the five degree-2 shapes, respecting their symmetries
  CHECK(enumerate_graphs(1, 2, 2).size() == 9);
  CHECK(enumerate_graphs(1, 1, 2).size() == 6);
}

TEST_CASE("codimension spectra", "[enumeration]") {
  CHECK(codims(enumerate_graphs(0, 2, 2)) == std::multiset<int>{0, 1, 2, 3, 3});
  CHECK(codims(enumerate_graphs(0, 1, 2)) == std::multiset<int>{0, 1, 2});
  CHECK(codims(enumerate_graphs(0, 2, 1)) == std::multiset<int>{0, 2});
}

TEST_CASE("enumeration output is canonical, valid, and unique", "[enumeration]") {
  for (auto [n, r, d] : {std::tuple{0, 2, 3}, {2, 2, 2}, {1, 1, 3}}) {
    CAPTURE(n, r, d);
    auto gs = enumerate_graphs(n, r, d);
    std::set<std::string> keys;
    int open_strata = 0;
    for (const auto& g : gs) {
      CHECK_NOTHROW(validate(g, r));
      auto cf = canonical_form(g);
      CHECK(keys.insert(cf.key).second);
      CHECK((int)g.vertices.size() <= d + 1);
      CHECK((long long)codimension(g) == negative_weight_count(g).total());
      if (codimension(g) == 0) {
        ++open_strata;
        CHECK(isomorphic(g, maximal_graph(n, r, d)));
      }
    }
    CHECK(open_strata == 1);
  }
}

TEST_CASE("enumeration order is sorted unless shuffled", "[enumeration]") {
  auto plain = enumerate_graphs(0, 2, 2);
  for (size_t i = 0; i + 1 < plain.size(); ++i)
    CHECK(codimension(plain[i]) <= codimension(plain[i + 1]));

  EnumerateOptions opts;
  opts.shuffle_seed = 7;
  auto shuffled = enumerate_graphs(0, 2, 2, opts);
  REQUIRE(shuffled.size() == plain.size());
  auto key_set = [](const std::vector<Graph>& gs) {
    std::set<std::string> s;
    for (const auto& g : gs) s.insert(canonical_form(g).key);
    return s;
  };
  CHECK(key_set(plain) == key_set(shuffled));
}

TEST_CASE("enumeration ceiling", "[enumeration]") {
  EnumerateOptions opts;
  opts.ceiling = 3;
  try {
    enumerate_graphs(0, 2, 2, opts);
    FAIL("expected a resource_limit error");
  } catch (const error& e) {
    CHECK(e.code == errc::resource_limit);
  }
}

TEST_CASE("fixed locus factors of the degree-2 family", "[enumeration]") {
  using K = Factor::Kind;
  auto kinds = [](const Graph& g) {
    std::multiset<K> out;
    for (const auto& f : fixed_locus_spec(g).factors) out.insert(f.kind);
    return out;
  };
  CHECK(kinds(fixtures::star_d2()) == std::multiset<K>{K::point, K::target, K::target});
  CHECK(kinds(fixtures::edge2()) == std::multiset<K>{K::point, K::target});
  // the node on H contributes a single copy of H, not one per branch
  CHECK(kinds(fixtures::path_php()) == std::multiset<K>{K::point, K::point, K::target});
  CHECK(kinds(fixtures::edge1_h1()) == std::multiset<K>{K::point, K::map});
  CHECK(kinds(fixtures::single_h(2)) == std::multiset<K>{K::map});

  auto spec = fixed_locus_spec(fixtures::edge1_h1());
  for (const auto& f : spec.factors)
    if (f.kind == K::map) {
      CHECK(f.m == 1);
      CHECK(f.d_w == 1);
    }
}

TEST_CASE("curve factors appear at high-valency P-vertices", "[enumeration]") {
  Graph g = maximal_graph(2, 2, 2);  // central P has valency 4
  auto spec = fixed_locus_spec(g);
  int curves = 0;
  for (const auto& f : spec.factors)
    if (f.kind == Factor::Kind::curve) {
      ++curves;
      CHECK(f.m == 4);
    }
  CHECK(curves == 1);
}

TEST_CASE("factor and moduli dimensions", "[enumeration]") {
  CHECK(moduli_dim(2, 2, 0) == 5);
  CHECK(moduli_dim(1, 1, 0) == 0);
  CHECK(moduli_dim(3, 1, 0) == 4);
  CHECK(fixed_locus_dim(fixtures::star_d2(), 2) == 2);
  CHECK(fixed_locus_dim(fixtures::edge2(), 2) == 1);
  CHECK(fixed_locus_dim(fixtures::single_h(2), 2) == 2);   // deg-2 maps to a line
  CHECK(fixed_locus_dim(fixtures::edge1_h1(), 2) == 1);
  CHECK(fixed_locus_dim(fixtures::single_h(2), 3) == 5);   // conics in a plane
  for (const auto& g : enumerate_graphs(1, 2, 2))
    CHECK(fixed_locus_dim(g, 2) + codimension(g) <= moduli_dim(2, 2, 1));
}
