#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "trapp/trapp.hpp"

namespace trapp::testing {

// Small three-cell network used across the suite. The middle cell
// {1..7} has one entry-side boundary vertex (7) and one exit-side boundary
// vertex (6); vertices 0 and 8 hang off them in their own cells. Its edge
// limits produce a catalog of 6 height, 4 width and 5 weight values
// (counting the open value), i.e. 120 possible combinations, and three
// interesting stored paths between 7 and 6:
//   rc (1.8, -, 40)  -> 7,4,6        distance 2
//   rc (2.0, 2.0, 15) -> 7,4,2,6      distance 3
//   rc (2.5, 2.4, 10) -> 7,4,1,2,6    distance 4
inline RoadNetwork demo_network() {
  std::vector<Edge> edges = {
      {0, 7, 1, {}},
      {6, 8, 1, {}},
      {4, 7, 1, {}},
      {4, 6, 1, {1.8, kNoLimit, 40}},
      {2, 4, 1, {2.0, 2.0, 15}},
      {2, 6, 1, {4.0, 3.0, kNoLimit}},
      {1, 4, 1, {2.5, 2.4, 20}},
      {1, 2, 1, {3.0, kNoLimit, 10}},
      {1, 3, 3, {2.5, kNoLimit, kNoLimit}},
      {3, 5, 2, {kNoLimit, 2.0, kNoLimit}},
      {2, 5, 3, {kNoLimit, kNoLimit, 10}},
  };
  return RoadNetwork(9, std::move(edges));
}

inline CellDecomposition demo_decomposition(const RoadNetwork& net) {
  std::vector<CellId> cell_of = {0, 1, 1, 1, 1, 1, 1, 1, 2};
  return CellDecomposition::from_assignment(net, cell_of);
}

inline constexpr CellId kDemoInnerCell = 1;

// Exhaustive minimum over all simple feasible paths; the independent
// oracle for small graphs.
template <class Actor>
std::optional<Path> brute_force_shortest(const RoadNetwork& net, VertexId s, VertexId d,
                                         const Actor& actor) {
  std::vector<bool> visited(net.vertex_count(), false);
  std::vector<VertexId> current{s};
  std::optional<Path> best;
  visited[s] = true;

  auto dfs = [&](auto&& self, VertexId v, Distance dist) -> void {
    if (v == d) {
      if (!best || dist < best->distance) best = Path{current, dist};
      return;
    }
    for (const auto& nb : net.neighbors(v)) {
      if (visited[nb.to]) continue;
      const Edge& e = net.edge(nb.edge);
      if (!edge_feasible(e.limits, actor)) continue;
      visited[nb.to] = true;
      current.push_back(nb.to);
      self(self, nb.to, dist + e.length);
      current.pop_back();
      visited[nb.to] = false;
    }
  };
  dfs(dfs, s, 0);
  return best;
}

// Random small graph for property tests: n vertices, edge probability p,
// lengths 1..6, limits drawn from a tiny palette (or left open).
inline RoadNetwork random_small_network(Rng& rng, VertexId n, double p) {
  const std::vector<double> he = {1.8, 2.5, 3.5};
  const std::vector<double> wi = {2.0, 2.4};
  const std::vector<double> wt = {5, 15, 30};
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (rng.uniform01() >= p) continue;
      Edge e{u, v, static_cast<std::uint32_t>(1 + rng.uniform_below(6)), {}};
      if (rng.uniform01() < 0.4) e.limits.he = he[rng.uniform_below(he.size())];
      if (rng.uniform01() < 0.3) e.limits.wi = wi[rng.uniform_below(wi.size())];
      if (rng.uniform01() < 0.4) e.limits.wt = wt[rng.uniform_below(wt.size())];
      edges.push_back(e);
    }
  }
  return RoadNetwork(n, std::move(edges));
}

inline Vehicle random_vehicle(Rng& rng) {
  return {0.5 + 3.5 * rng.uniform01(), 1.0 + 2.0 * rng.uniform01(), 0.5 + 35 * rng.uniform01()};
}

inline LimitTriple random_actor(Rng& rng) {
  LimitTriple rc;
  rc.he = rng.uniform01() < 0.2 ? kNoLimit : 0.5 + 3.5 * rng.uniform01();
  rc.wi = rng.uniform01() < 0.2 ? kNoLimit : 1.0 + 2.0 * rng.uniform01();
  rc.wt = rng.uniform01() < 0.2 ? kNoLimit : 0.5 + 35 * rng.uniform01();
  return rc;
}

}  // namespace trapp::testing
