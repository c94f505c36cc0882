#include <algorithm>
#include <set>

#include "coadapt/morph/catalog.hpp"
#include "coadapt/morph/serialize.hpp"
#include "doctest.h"

using namespace coadapt;
using namespace coadapt::morph;

TEST_CASE("halfcheetah catalog: 7 graphs with DoF multiset {2,3,3,4,5,5,6}") {
  MorphologyPool pool = build_catalog(EnvKind::HalfCheetah);
  REQUIRE(pool.graphs.size() == 7);
  std::multiset<int> dofs;
  for (const auto& g : pool.graphs) dofs.insert(g.node_count());
  CHECK(dofs == std::multiset<int>{2, 3, 3, 4, 5, 5, 6});
}

TEST_CASE("crawler catalog: 5 graphs, 3-6 DoF") {
  MorphologyPool pool = build_catalog(EnvKind::Crawler);
  REQUIRE(pool.graphs.size() == 5);
  int lo = 99, hi = 0;
  for (const auto& g : pool.graphs) {
    lo = std::min(lo, g.node_count());
    hi = std::max(hi, g.node_count());
  }
  CHECK(lo == 3);
  CHECK(hi == 6);
}

TEST_CASE("multiped catalogs: 5 graphs, 4-6 DoF, identical to stairs variant") {
  MorphologyPool pool = build_catalog(EnvKind::MultiPed);
  MorphologyPool stairs = build_catalog(EnvKind::MultiPedStairs);
  REQUIRE(pool.graphs.size() == 5);
  REQUIRE(stairs.graphs.size() == 5);
  int lo = 99, hi = 0;
  for (size_t i = 0; i < pool.graphs.size(); ++i) {
    CHECK(pool.graphs[i].id() == stairs.graphs[i].id());
    lo = std::min(lo, pool.graphs[i].node_count());
    hi = std::max(hi, pool.graphs[i].node_count());
  }
  CHECK(lo == 4);
  CHECK(hi == 6);
}

TEST_CASE("every catalog graph satisfies the tree invariants") {
  for (const EnvKind kind : {EnvKind::HalfCheetah, EnvKind::Crawler, EnvKind::MultiPed}) {
    MorphologyPool pool = build_catalog(kind);
    std::set<std::string> ids;
    for (const auto& g : pool.graphs) {
      ids.insert(g.id());
      int roots = 0;
      for (const auto& n : g.nodes())
        if (n.parent == -1) ++roots;
      CHECK(roots == 1);
      // symmetric adjacency with +-1 directional features
      CHECK(g.directed_edges().size() == 2 * (g.nodes().size() - 1));
      for (size_t e = 0; e < g.directed_edges().size(); e += 2) {
        const auto& fwd = g.directed_edges()[e];
        const auto& bwd = g.directed_edges()[e + 1];
        CHECK(fwd.from == bwd.to);
        CHECK(fwd.to == bwd.from);
        CHECK(fwd.feature == 1.0);
        CHECK(bwd.feature == -1.0);
      }
    }
    CHECK(ids.size() == pool.graphs.size());  // ids unique
  }
}

TEST_CASE("design flat dimension: N for halfcheetah, 2N otherwise") {
  for (const auto& g : build_catalog(EnvKind::HalfCheetah).graphs)
    CHECK(g.design_dim() == g.node_count());
  for (const auto& g : build_catalog(EnvKind::Crawler).graphs)
    CHECK(g.design_dim() == 2 * g.node_count());
  for (const auto& g : build_catalog(EnvKind::MultiPed).graphs)
    CHECK(g.design_dim() == 2 * g.node_count());
}

TEST_CASE("unknown environment kind is rejected") {
  CHECK_THROWS_AS(parse_env_kind("walker3d"), std::invalid_argument);
}

TEST_CASE("random designs are uniform within bounds and deterministic") {
  MorphologyPool pool = build_catalog(EnvKind::HalfCheetah);
  const MorphologyGraph& g = pool.graphs[0];
  DesignSpace space = DesignSpace::of(g);
  num::Rng rng(77);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Design d = sample_random_design(space, rng);
    CHECK(d.within(space));
    sum += d.values[0];
  }
  CHECK(sum / n == doctest::Approx(0.4).epsilon(0.025));

  num::Rng r1(123), r2(123);
  CHECK(sample_random_design(space, r1).values == sample_random_design(space, r2).values);
}

TEST_CASE("clamp_design clamps, preserves in-bounds values, is idempotent") {
  MorphologyPool pool = build_catalog(EnvKind::HalfCheetah);
  const MorphologyGraph& g = pool.graphs[0];
  DesignSpace space = DesignSpace::of(g);
  Design d;
  d.values = {0.7, 0.35};
  Design c = clamp_design(d, space);
  CHECK(c.values[0] == 0.6);
  CHECK(c.values[1] == 0.35);
  CHECK(clamp_design(c, space).values == c.values);
}

TEST_CASE("serialization round-trips catalog graphs exactly") {
  for (const auto& g : build_catalog(EnvKind::MultiPed).graphs) {
    num::Rng rng(5);
    Design d = sample_random_design(DesignSpace::of(g), rng);
    const std::string text = serialize_morphology(g, &d);
    ParsedMorphology parsed = deserialize_morphology(text);
    CHECK(parsed.graph.id() == g.id());
    CHECK(parsed.graph.node_count() == g.node_count());
    REQUIRE(parsed.design.has_value());
    CHECK(parsed.design->values == d.values);
    for (int i = 0; i < g.node_count(); ++i) {
      CHECK(parsed.graph.nodes()[i].parent == g.nodes()[i].parent);
      CHECK(parsed.graph.nodes()[i].anchor_x == g.nodes()[i].anchor_x);
    }
  }
}

TEST_CASE("doubles round-trip bit-exactly") {
  MorphologyPool pool = build_catalog(EnvKind::HalfCheetah);
  const MorphologyGraph& g = pool.graphs[0];
  Design d;
  d.values = {0.30000000000000004, 0.59999999999999998};
  ParsedMorphology parsed = deserialize_morphology(serialize_morphology(g, &d));
  REQUIRE(parsed.design.has_value());
  CHECK(parsed.design->values[0] == 0.30000000000000004);
  CHECK(parsed.design->values[1] == 0.59999999999999998);
}

TEST_CASE("cyclic graphs are rejected") {
  const std::string text = R"({
    "format": "coadapt-morph-1",
    "nodes": [
      {"parent": 1, "anchor_x": 0.0, "params": []},
      {"parent": 0, "params": []}
    ]
  })";
  CHECK_THROWS_AS(deserialize_morphology(text), std::runtime_error);
}

TEST_CASE("malformed input reports a parse error") {
  CHECK_THROWS_AS(deserialize_morphology("{ not json"), std::runtime_error);
  CHECK_THROWS_AS(deserialize_morphology(R"({"format":"coadapt-morph-1"})"), std::runtime_error);
}

TEST_CASE("morphology id is invariant under node reordering") {
  // multiped-t212 reordered: list the middle chain first.
  MorphologyPool pool = build_catalog(EnvKind::MultiPed);
  const MorphologyGraph& orig = pool.graphs[2];  // t212
  std::vector<ParamSpec> params = orig.nodes()[0].params;

  std::vector<NodeSpec> reordered;
  auto mk = [&](int parent, std::optional<double> anchor) {
    NodeSpec n;
    n.parent = parent;
    n.anchor_x = anchor;
    n.params = params;
    return n;
  };
  // Original: chain(-0.5: n0,n1), chain(0.0: n2), chain(0.5: n3,n4);
  // n0 root, n2.parent=n0, n3.parent=n2. Same topology, new node order:
  reordered.push_back(mk(2, 0.0));    // 0: middle chain root (parent = -0.5 root at idx 2)
  reordered.push_back(mk(0, 0.5));    // 1: right chain root (parent = middle root)
  reordered.push_back(mk(-1, -0.5));  // 2: left chain root (graph root)
  reordered.push_back(mk(2, {}));     // 3: left chain second segment
  reordered.push_back(mk(1, {}));     // 4: right chain second segment
  MorphologyGraph g2 = MorphologyGraph::make(std::move(reordered), "scrambled");
  CHECK(g2.id() == orig.id());
}

TEST_CASE("different topologies get different ids") {
  MorphologyPool pool = build_catalog(EnvKind::HalfCheetah);
  // b1f2 vs b2f1 are isomorphic as bare trees but differ in anchors.
  CHECK(pool.graphs[1].id() != pool.graphs[2].id());
}
