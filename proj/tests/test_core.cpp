#include <gtest/gtest.h>

#include "helpers.hpp"
#include "trapp/trapp.hpp"

using namespace trapp;
namespace tt = trapp::testing;

TEST(Dominates, FigureVehicleAgainstOpenWidthCombination) {
  // Small passenger vehicle fits the (1.8, -, 40) combination.
  Vehicle c{1.5, 2.0, 2.0};
  LimitTriple rc{1.8, kNoLimit, 40};
  EXPECT_TRUE(dominates(c, rc));
}

TEST(Dominates, TallVehicleRejected) {
  Vehicle c{2.5, 2.0, 3.0};
  LimitTriple rc{1.8, kNoLimit, 40};
  EXPECT_FALSE(dominates(c, rc));
}

TEST(Dominates, EqualityIsDominated) {
  Vehicle c{2.0, 2.2, 15};
  LimitTriple rc{2.0, 2.2, 15};
  EXPECT_TRUE(dominates(c, rc));
}

TEST(Dominates, ReflexiveAndTransitiveOnRandomTriples) {
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    LimitTriple a = tt::random_actor(rng);
    LimitTriple b = tt::random_actor(rng);
    LimitTriple c = tt::random_actor(rng);
    EXPECT_TRUE(componentwise_le(a, a));
    if (componentwise_le(a, b) && componentwise_le(b, c)) EXPECT_TRUE(componentwise_le(a, c));
  }
}

TEST(EdgeFeasible, TallVehicleBlockedByLowBridge) {
  LimitTriple limits{1.8, kNoLimit, kNoLimit};
  Vehicle c{2.5, 2.0, 3.0};
  EXPECT_FALSE(edge_feasible(limits, c));
}

TEST(EdgeFeasible, UnrestrictedEdgeTakesAnything) {
  LimitTriple open;
  EXPECT_TRUE(edge_feasible(open, Vehicle{9.0, 9.0, 99.0}));
  EXPECT_TRUE(edge_feasible(open, LimitTriple{kNoLimit, kNoLimit, kNoLimit}));
}

TEST(EdgeFeasible, BoundaryEqualityPasses) {
  LimitTriple limits{2.0, 2.0, 15};
  EXPECT_TRUE(edge_feasible(limits, LimitTriple{2.0, 2.0, 15}));
}

TEST(EdgeFeasible, MatchesDominatesForVehicles) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Vehicle c = tt::random_vehicle(rng);
    LimitTriple lim = tt::random_actor(rng);
    EXPECT_EQ(edge_feasible(lim, c), dominates(c, lim));
  }
}

TEST(PathDistance, FigureDetourPath) {
  auto net = tt::demo_network();
  Path p{{7, 4, 1, 2, 6}, 0};
  EXPECT_EQ(path_distance(p, net), 4);
}

TEST(PathDistance, SingleVertexIsZero) {
  auto net = tt::demo_network();
  EXPECT_EQ(path_distance(Path{{3}, 0}, net), 0);
}

TEST(PathDistance, MatchesEdgeLookupsOnRandomWalks) {
  Rng rng(11);
  auto net = tt::demo_network();
  for (int trial = 0; trial < 50; ++trial) {
    VertexId v = static_cast<VertexId>(rng.uniform_below(net.vertex_count()));
    Path p{{v}, 0};
    Distance expected = 0;
    for (int step = 0; step < 5; ++step) {
      auto nb = net.neighbors(p.vertices.back());
      if (nb.empty()) break;
      const auto& pick = nb[rng.uniform_below(nb.size())];
      expected += net.edge(pick.edge).length;
      p.vertices.push_back(pick.to);
    }
    EXPECT_EQ(path_distance(p, net), expected);
  }
}

TEST(PathDistance, NonAdjacentThrows) {
  auto net = tt::demo_network();
  EXPECT_THROW(path_distance(Path{{0, 6}, 0}, net), NonAdjacent);
}

TEST(PathDistance, AdditiveUnderConcatenation) {
  auto net = tt::demo_network();
  Path a{{7, 4, 2}, 0};
  Path b{{2, 6, 8}, 0};
  Path joined{{7, 4, 2, 6, 8}, 0};
  EXPECT_EQ(path_distance(joined, net), path_distance(a, net) + path_distance(b, net));
}

TEST(PathFeasible, StoredDetourFitsMidVehicle) {
  auto net = tt::demo_network();
  EXPECT_TRUE(path_feasible(Path{{7, 4, 2, 6}, 0}, Vehicle{2.0, 2.0, 10.0}, net));
}

TEST(PathFeasible, LowBridgeBlocksTallVehicle) {
  auto net = tt::demo_network();
  EXPECT_FALSE(path_feasible(Path{{7, 4, 6}, 0}, Vehicle{2.5, 2.0, 3.0}, net));
}

TEST(PathFeasible, EmptyEdgePathIsVacuouslyFeasible) {
  auto net = tt::demo_network();
  EXPECT_TRUE(path_feasible(Path{{5}, 0}, Vehicle{99, 99, 99}, net));
}

TEST(PathFeasible, DominationTransfersFeasibility) {
  // Any path feasible for an actor rc stays feasible for every vehicle
  // dominated by rc.
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    auto net = tt::random_small_network(rng, 8, 0.5);
    LimitTriple rc = tt::random_actor(rng);
    Vehicle c = tt::random_vehicle(rng);
    if (!dominates(c, rc)) continue;
    VertexId s = static_cast<VertexId>(rng.uniform_below(8));
    VertexId d = static_cast<VertexId>(rng.uniform_below(8));
    auto path = tt::brute_force_shortest(net, s, d, rc);
    if (!path) continue;
    EXPECT_TRUE(path_feasible(*path, rc, net));
    EXPECT_TRUE(path_feasible(*path, c, net));
  }
}

TEST(RoadNetwork, RejectsLoopsAndParallelEdges) {
  EXPECT_THROW(RoadNetwork(3, {{1, 1, 1, {}}}), InvalidParam);
  EXPECT_THROW(RoadNetwork(3, {{0, 1, 1, {}}, {1, 0, 2, {}}}), InvalidParam);
  EXPECT_THROW(RoadNetwork(2, {{0, 5, 1, {}}}), InvalidParam);
  EXPECT_THROW(RoadNetwork(2, {{0, 1, 0, {}}}), InvalidParam);
}

TEST(RoadNetwork, AdjacencyIsSymmetric) {
  auto net = tt::demo_network();
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    for (const auto& nb : net.neighbors(v)) {
      bool back = false;
      for (const auto& rev : net.neighbors(nb.to))
        if (rev.to == v) back = true;
      EXPECT_TRUE(back);
    }
  }
}

TEST(GraphIo, RoundTripsThroughText) {
  auto net = tt::demo_network();
  auto text = graph_to_text(net);
  auto back = graph_from_text(text);
  EXPECT_EQ(back.vertex_count(), net.vertex_count());
  ASSERT_EQ(back.edges().size(), net.edges().size());
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    EXPECT_EQ(back.edges()[i].u, net.edges()[i].u);
    EXPECT_EQ(back.edges()[i].v, net.edges()[i].v);
    EXPECT_EQ(back.edges()[i].length, net.edges()[i].length);
    EXPECT_EQ(back.edges()[i].limits, net.edges()[i].limits);
  }
  EXPECT_EQ(graph_to_text(back), text);
}

TEST(GraphIo, ReportsByteOffsetOnBadInput) {
  try {
    graph_from_text("2 E=1\n0 1 nonsense - - -\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_GT(e.offset, 0u);
  }
}

TEST(GraphIo, HeaderEdgeCountMismatchThrows) {
  EXPECT_THROW(graph_from_text("2 E=2\n0 1 1 - - -\n"), FormatError);
}
