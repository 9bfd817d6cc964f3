#include <gtest/gtest.h>

#include "helpers.hpp"
#include "trapp/trapp.hpp"

using namespace trapp;
namespace tt = trapp::testing;

TEST(RestrictedDijkstra, FigureDetourUnderTightCombination) {
  auto net = tt::demo_network();
  auto path = restricted_dijkstra(net, 7, 6, LimitTriple{2.5, 2.4, 10});
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(path->distance, 4);
  EXPECT_EQ(path->vertices, (std::vector<VertexId>{7, 4, 1, 2, 6}));
}

TEST(RestrictedDijkstra, SourceEqualsDestination) {
  auto net = tt::demo_network();
  auto path = restricted_dijkstra(net, 3, 3, Vehicle{1.0, 1.0, 1.0});
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(path->distance, 0);
  EXPECT_EQ(path->vertices, (std::vector<VertexId>{3}));
}

TEST(RestrictedDijkstra, AbsentWhenEveryCutIsBlocked) {
  RoadNetwork net(2, {{0, 1, 1, {1.8, kNoLimit, kNoLimit}}});
  EXPECT_FALSE(restricted_dijkstra(net, 0, 1, Vehicle{2.5, 1.0, 1.0}).has_value());
  EXPECT_TRUE(restricted_dijkstra(net, 0, 1, Vehicle{1.5, 1.0, 1.0}).has_value());
}

TEST(RestrictedDijkstra, UnknownVertexThrows) {
  auto net = tt::demo_network();
  EXPECT_THROW(restricted_dijkstra(net, 0, 99, Vehicle{1, 1, 1}), UnknownVertex);
}

TEST(RestrictedDijkstra, MatchesBruteForceOnSmallGraphs) {
  Rng rng(101);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    VertexId n = static_cast<VertexId>(4 + rng.uniform_below(9));  // up to 12
    auto net = tt::random_small_network(rng, n, 0.4);
    Vehicle c = tt::random_vehicle(rng);
    VertexId s = static_cast<VertexId>(rng.uniform_below(n));
    VertexId d = static_cast<VertexId>(rng.uniform_below(n));
    auto fast = restricted_dijkstra(net, s, d, c);
    auto slow = tt::brute_force_shortest(net, s, d, c);
    ASSERT_EQ(fast.has_value(), slow.has_value());
    if (fast) {
      EXPECT_EQ(fast->distance, slow->distance);
      EXPECT_TRUE(path_feasible(*fast, c, net));
      EXPECT_EQ(path_distance(*fast, net), fast->distance);
      ++compared;
    }
  }
  EXPECT_GT(compared, 50);
}

TEST(RestrictedDijkstra, MonotoneInActorSize) {
  // Growing the actor can only shrink the feasible edge set: distances
  // never decrease, and feasibility for the larger actor implies
  // feasibility for the smaller one.
  Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = tt::random_small_network(rng, 9, 0.4);
    LimitTriple small = tt::random_actor(rng);
    LimitTriple big = small;
    big.he = big.he == kNoLimit ? big.he : big.he + rng.uniform01();
    big.wt = big.wt == kNoLimit ? big.wt : big.wt + 5 * rng.uniform01();
    VertexId s = static_cast<VertexId>(rng.uniform_below(9));
    VertexId d = static_cast<VertexId>(rng.uniform_below(9));
    auto lo = restricted_dijkstra(net, s, d, small);
    auto hi = restricted_dijkstra(net, s, d, big);
    if (hi) {
      ASSERT_TRUE(lo.has_value());
      EXPECT_LE(lo->distance, hi->distance);
    }
  }
}

TEST(RestrictedDijkstra, DeterministicVertexSequences) {
  Rng rng(303);
  auto net = tt::random_small_network(rng, 12, 0.5);
  Vehicle c{1.5, 1.8, 4.0};
  for (int i = 0; i < 20; ++i) {
    auto a = restricted_dijkstra(net, 0, 11, c);
    auto b = restricted_dijkstra(net, 0, 11, c);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_EQ(a->vertices, b->vertices);
  }
}

TEST(CellShortestPath, FigureMidCombinationUsesStoredDetour) {
  auto net = tt::demo_network();
  auto decomp = tt::demo_decomposition(net);
  const Cell& cell = decomp.cell(tt::kDemoInnerCell);
  auto path = cell_shortest_path(net, cell, 7, 6, {2.0, 2.0, 15});
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(path->vertices, (std::vector<VertexId>{7, 4, 2, 6}));
  EXPECT_EQ(path->distance, 3);
}

TEST(CellShortestPath, OpenCombinationReducesToPlainDijkstra) {
  auto net = tt::demo_network();
  auto decomp = tt::demo_decomposition(net);
  const Cell& cell = decomp.cell(tt::kDemoInnerCell);
  auto path = cell_shortest_path(net, cell, 7, 6, {kNoLimit, kNoLimit, kNoLimit});
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(path->vertices, (std::vector<VertexId>{7, 4, 6}));
  EXPECT_EQ(path->distance, 2);
}

TEST(CellShortestPath, AbsentWhenCombinationBlocksEveryCut) {
  auto net = tt::demo_network();
  auto decomp = tt::demo_decomposition(net);
  const Cell& cell = decomp.cell(tt::kDemoInnerCell);
  // every 7->6 cut inside the cell carries some finite limit under this rc
  auto path = cell_shortest_path(net, cell, 7, 6, {4.5, kNoLimit, kNoLimit});
  EXPECT_FALSE(path.has_value());
  // cross-check: brute force over the induced subgraph agrees
  std::vector<Edge> induced;
  for (EdgeId id : cell.edges) induced.push_back(net.edge(id));
  RoadNetwork cell_net(net.vertex_count(), std::move(induced));
  EXPECT_FALSE(tt::brute_force_shortest(cell_net, 7, 6, LimitTriple{4.5, kNoLimit, kNoLimit})
                   .has_value());
}

TEST(CellShortestPath, ConfinedToInducedEdges) {
  // The outside route 7-0 / 6-8 must never leak into in-cell paths.
  auto net = tt::demo_network();
  auto decomp = tt::demo_decomposition(net);
  const Cell& cell = decomp.cell(tt::kDemoInnerCell);
  auto path = cell_shortest_path(net, cell, 7, 6, {1.8, kNoLimit, 40});
  ASSERT_TRUE(path.has_value());
  for (VertexId v : path->vertices) EXPECT_TRUE(cell.contains(v));
}

TEST(CellShortestPath, ReversedPairMirrorsForwardPair) {
  auto net = tt::demo_network();
  auto decomp = tt::demo_decomposition(net);
  const Cell& cell = decomp.cell(tt::kDemoInnerCell);
  auto fwd = cell_shortest_path(net, cell, 6, 7, {2.0, 2.0, 15});
  auto rev = cell_shortest_path(net, cell, 7, 6, {2.0, 2.0, 15});
  ASSERT_TRUE(fwd && rev);
  auto mirrored = rev->vertices;
  std::reverse(mirrored.begin(), mirrored.end());
  EXPECT_EQ(fwd->vertices, mirrored);
  EXPECT_EQ(fwd->distance, rev->distance);
}

TEST(CellShortestPath, VertexOutsideCellThrows) {
  auto net = tt::demo_network();
  auto decomp = tt::demo_decomposition(net);
  EXPECT_THROW(cell_shortest_path(net, decomp.cell(tt::kDemoInnerCell), 7, 8, {}), UnknownVertex);
}
