#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "trapp/graph.hpp"
#include "trapp/partition.hpp"
#include "trapp/types.hpp"

namespace trapp {

/// Reusable search state so repeated queries avoid O(n) re-initialization.
/// One workspace per thread; the network itself is shared read-only.
class DijkstraWorkspace {
 public:
  void reset(std::size_t n) {
    if (dist_.size() < n) {
      dist_.resize(n);
      parent_v_.resize(n);
      parent_e_.resize(n);
      stamp_.resize(n, 0);
    }
    if (++round_ == 0) {  // stamp wraparound
      std::fill(stamp_.begin(), stamp_.end(), 0);
      round_ = 1;
    }
    heap_.clear();
  }

  bool seen(VertexId v) const { return stamp_[v] == round_; }
  Distance dist(VertexId v) const { return seen(v) ? dist_[v] : kUnreachable; }

  void label(VertexId v, Distance d, VertexId pv, EdgeId pe) {
    dist_[v] = d;
    parent_v_[v] = pv;
    parent_e_[v] = pe;
    stamp_[v] = round_;
  }

  /// Equal-distance offers keep the lexicographically smallest
  /// (predecessor, edge) pair: the search result is then independent of
  /// heap pop order.
  bool offer(VertexId v, Distance d, VertexId pv, EdgeId pe) {
    if (!seen(v) || d < dist_[v]) {
      label(v, d, pv, pe);
      return true;
    }
    if (d == dist_[v] && (pv < parent_v_[v] || (pv == parent_v_[v] && pe < parent_e_[v]))) {
      parent_v_[v] = pv;
      parent_e_[v] = pe;
    }
    return false;
  }

  VertexId parent(VertexId v) const { return parent_v_[v]; }

  void push(Distance d, VertexId v) {
    heap_.emplace_back(d, v);
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  }

  bool pop(Distance& d, VertexId& v) {
    if (heap_.empty()) return false;
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
    d = heap_.back().first;
    v = heap_.back().second;
    heap_.pop_back();
    return true;
  }

 private:
  std::vector<Distance> dist_;
  std::vector<VertexId> parent_v_;
  std::vector<EdgeId> parent_e_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t round_ = 0;
  std::vector<std::pair<Distance, VertexId>> heap_;
};

namespace detail {

inline Path walk_parents(const DijkstraWorkspace& ws, VertexId s, VertexId d) {
  Path path;
  path.distance = ws.dist(d);
  VertexId v = d;
  while (v != s) {
    path.vertices.push_back(v);
    v = ws.parent(v);
  }
  path.vertices.push_back(s);
  std::reverse(path.vertices.begin(), path.vertices.end());
  return path;
}

}  // namespace detail

/// Shortest feasible path for the actor, relaxing only edges the actor may
/// traverse. Returns nullopt when no feasible path exists (a normal result,
/// not an error). Fully deterministic: heap ties pop the smaller vertex id
/// and equal-distance parents resolve to the smaller (vertex, edge) pair.
template <class Actor>
std::optional<Path> restricted_dijkstra(const RoadNetwork& net, VertexId s, VertexId d,
                                        const Actor& actor, DijkstraWorkspace& ws) {
  net.check_vertex(s);
  net.check_vertex(d);
  if (s == d) return Path{{s}, 0};
  ws.reset(net.vertex_count());
  ws.label(s, 0, s, 0);
  ws.push(0, s);
  Distance du;
  VertexId u;
  while (ws.pop(du, u)) {
    if (du > ws.dist(u)) continue;
    if (u == d) return detail::walk_parents(ws, s, d);
    for (const auto& nb : net.neighbors(u)) {
      const Edge& e = net.edge(nb.edge);
      if (!edge_feasible(e.limits, actor)) continue;
      if (ws.offer(nb.to, du + e.length, u, nb.edge)) ws.push(du + e.length, nb.to);
    }
  }
  return std::nullopt;
}

template <class Actor>
std::optional<Path> restricted_dijkstra(const RoadNetwork& net, VertexId s, VertexId d,
                                        const Actor& actor) {
  DijkstraWorkspace ws;
  return restricted_dijkstra(net, s, d, actor, ws);
}

/// Compact copy of one cell's induced subgraph with local vertex ids, plus
/// tree search over it. Shortcut building runs one tree per (combination,
/// boundary source) instead of one point-to-point search per pair.
class CellRouter {
 public:
  CellRouter(const RoadNetwork& net, const Cell& cell) : verts_(cell.vertices) {
    const std::uint32_t k = static_cast<std::uint32_t>(verts_.size());
    local_.assign(net.vertex_count(), kNoLocal);
    for (std::uint32_t i = 0; i < k; ++i) local_[verts_[i]] = i;
    struct Arc {
      std::uint32_t to;
      std::uint32_t len;
      LimitTriple limits;
    };
    std::vector<std::vector<Arc>> tmp(k);
    for (EdgeId id : cell.edges) {
      const Edge& e = net.edge(id);
      std::uint32_t lu = local_[e.u], lv = local_[e.v];
      tmp[lu].push_back({lv, e.length, e.limits});
      tmp[lv].push_back({lu, e.length, e.limits});
    }
    offsets_.assign(k + 1, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
      std::sort(tmp[i].begin(), tmp[i].end(),
                [](const Arc& a, const Arc& b) { return a.to < b.to; });
      offsets_[i + 1] = offsets_[i] + static_cast<std::uint32_t>(tmp[i].size());
    }
    to_.reserve(offsets_[k]);
    len_.reserve(offsets_[k]);
    limits_.reserve(offsets_[k]);
    for (auto& arcs : tmp)
      for (auto& a : arcs) {
        to_.push_back(a.to);
        len_.push_back(a.len);
        limits_.push_back(a.limits);
      }
    dist_.assign(k, kUnreachable);
    parent_.assign(k, kNoLocal);
    stamp_.assign(k, 0);
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(verts_.size()); }
  VertexId global(std::uint32_t local) const { return verts_[local]; }
  std::uint32_t local(VertexId v) const { return local_[v]; }
  bool has(VertexId v) const { return v < local_.size() && local_[v] != kNoLocal; }

  /// Shortest-path tree from source (local id) over edges feasible for rc.
  void run_tree(std::uint32_t source, const LimitTriple& rc) {
    if (++round_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      round_ = 1;
    }
    heap_.clear();
    dist_[source] = 0;
    parent_[source] = source;
    stamp_[source] = round_;
    heap_.emplace_back(0, source);
    Distance du;
    std::uint32_t u;
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
      std::tie(du, u) = heap_.back();
      heap_.pop_back();
      if (du > dist(u)) continue;
      for (std::uint32_t a = offsets_[u]; a < offsets_[u + 1]; ++a) {
        if (!edge_feasible(limits_[a], rc)) continue;
        std::uint32_t v = to_[a];
        Distance nd = du + len_[a];
        if (stamp_[v] != round_ || nd < dist_[v]) {
          dist_[v] = nd;
          parent_[v] = u;
          stamp_[v] = round_;
          heap_.emplace_back(nd, v);
          std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
        } else if (nd == dist_[v] && u < parent_[v]) {
          parent_[v] = u;
        }
      }
    }
  }

  Distance dist(std::uint32_t v) const { return stamp_[v] == round_ ? dist_[v] : kUnreachable; }

  /// Global vertex sequence from the tree source to v; empty if unreached.
  std::vector<VertexId> tree_path(std::uint32_t v) const {
    if (stamp_[v] != round_) return {};
    std::vector<VertexId> seq;
    std::uint32_t x = v;
    while (parent_[x] != x) {
      seq.push_back(verts_[x]);
      x = parent_[x];
    }
    seq.push_back(verts_[x]);
    std::reverse(seq.begin(), seq.end());
    return seq;
  }

 private:
  static constexpr std::uint32_t kNoLocal = ~std::uint32_t{0};
  std::vector<VertexId> verts_;
  std::vector<std::uint32_t> local_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> to_;
  std::vector<std::uint32_t> len_;
  std::vector<LimitTriple> limits_;
  std::vector<Distance> dist_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t round_ = 0;
  std::vector<std::pair<Distance, std::uint32_t>> heap_;
};

/// Shortest path between two cell vertices using only the cell's induced
/// edges. The search always runs from the smaller vertex id and reverses
/// when needed, so a pair and its reverse report mirrored sequences (which
/// lets the path pool store one orientation).
inline std::optional<Path> cell_shortest_path(const RoadNetwork& net, const Cell& cell,
                                              VertexId u, VertexId v, const LimitTriple& rc) {
  net.check_vertex(u);
  net.check_vertex(v);
  if (!cell.contains(u)) throw UnknownVertex("vertex " + std::to_string(u) + " not in cell");
  if (!cell.contains(v)) throw UnknownVertex("vertex " + std::to_string(v) + " not in cell");
  if (u == v) return Path{{u}, 0};
  CellRouter router(net, cell);
  const bool flip = u > v;
  VertexId from = flip ? v : u, to = flip ? u : v;
  router.run_tree(router.local(from), rc);
  if (router.dist(router.local(to)) == kUnreachable) return std::nullopt;
  Path path;
  path.distance = router.dist(router.local(to));
  path.vertices = router.tree_path(router.local(to));
  if (flip) std::reverse(path.vertices.begin(), path.vertices.end());
  return path;
}

}  // namespace trapp
