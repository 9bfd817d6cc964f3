#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "trapp/types.hpp"

namespace trapp {

/// An undirected road segment. Stored with u < v; visible from both
/// endpoints through the adjacency structure. length is in integer length
/// units (>= 1) so that path distances compare exactly.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  std::uint32_t length = 1;
  LimitTriple limits;
};

struct AdjEntry {
  VertexId to;
  EdgeId edge;
};

/// Immutable undirected graph with per-edge restriction triples.
/// Loops and parallel edges are rejected at construction.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  RoadNetwork(VertexId vertex_count, std::vector<Edge> edges)
      : n_(vertex_count), edges_(std::move(edges)) {
    for (auto& e : edges_) {
      if (e.u == e.v) throw InvalidParam("loop edge " + std::to_string(e.u));
      if (e.u >= n_ || e.v >= n_)
        throw InvalidParam("edge endpoint out of range: " + std::to_string(e.u) + "-" +
                           std::to_string(e.v));
      if (e.length < 1) throw InvalidParam("edge length must be >= 1");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::vector<std::uint32_t> deg(n_, 0);
    for (const auto& e : edges_) {
      ++deg[e.u];
      ++deg[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    for (VertexId v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    adj_.resize(offsets_[n_]);
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      adj_[fill[e.u]++] = {e.v, id};
      adj_[fill[e.v]++] = {e.u, id};
    }
    for (VertexId v = 0; v < n_; ++v) {
      auto first = adj_.begin() + offsets_[v];
      auto last = adj_.begin() + offsets_[v + 1];
      std::sort(first, last, [](const AdjEntry& a, const AdjEntry& b) {
        return a.to != b.to ? a.to < b.to : a.edge < b.edge;
      });
      for (auto it = first; it + 1 < last; ++it)
        if (it->to == (it + 1)->to)
          throw InvalidParam("parallel edge " + std::to_string(v) + "-" + std::to_string(it->to));
    }
  }

  VertexId vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }

  std::span<const AdjEntry> neighbors(VertexId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }

  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const {
    if (u >= n_ || v >= n_) return std::nullopt;
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const AdjEntry& a, VertexId x) { return a.to < x; });
    if (it != nb.end() && it->to == v) return it->edge;
    return std::nullopt;
  }

  void check_vertex(VertexId v) const {
    if (v >= n_) throw UnknownVertex("vertex " + std::to_string(v));
  }

 private:
  VertexId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<AdjEntry> adj_;
};

/// A walk through the network together with its total length.
struct Path {
  std::vector<VertexId> vertices;
  Distance distance = 0;
};

/// Sum of traversed edge lengths; 0 for single-vertex (or empty) paths.
/// Throws NonAdjacent when consecutive vertices share no edge.
inline Distance path_distance(const Path& path, const RoadNetwork& net) {
  Distance total = 0;
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    auto id = net.find_edge(path.vertices[i], path.vertices[i + 1]);
    if (!id)
      throw NonAdjacent(std::to_string(path.vertices[i]) + "-" +
                        std::to_string(path.vertices[i + 1]));
    total += net.edge(*id).length;
  }
  return total;
}

template <class Actor>
inline bool path_feasible(const Path& path, const Actor& actor, const RoadNetwork& net) {
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    auto id = net.find_edge(path.vertices[i], path.vertices[i + 1]);
    if (!id)
      throw NonAdjacent(std::to_string(path.vertices[i]) + "-" +
                        std::to_string(path.vertices[i + 1]));
    if (!edge_feasible(net.edge(*id).limits, actor)) return false;
  }
  return true;
}

}  // namespace trapp
