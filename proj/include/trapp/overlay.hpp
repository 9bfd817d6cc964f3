#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <vector>

#include "trapp/datagen.hpp"
#include "trapp/dijkstra.hpp"
#include "trapp/graph.hpp"
#include "trapp/partition.hpp"
#include "trapp/shortcuts.hpp"
#include "trapp/types.hpp"

namespace trapp {

enum class PlanStatus { overlay, fallback, no_path };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::overlay: return "overlay";
    case PlanStatus::fallback: return "fallback";
    default: return "no_path";
  }
}

/// A route through the overlay before virtual edges are expanded.
struct OverlayPath {
  struct Leg {
    VertexId to;
    bool via_shortcut;
    std::uint32_t shortcut;  // index into ShortcutIndex::shortcuts
    std::uint32_t entry;     // entry position within that shortcut
  };
  VertexId start = 0;
  std::vector<Leg> legs;
  Distance distance = 0;
};

struct QueryResult {
  std::optional<Path> path;
  Distance distance = kUnreachable;
  PlanStatus status = PlanStatus::no_path;
  std::uint64_t scanned_entries = 0;  // total entries looked at by match()
  std::uint64_t match_calls = 0;
  std::int64_t overlay_ns = 0;
  std::int64_t fallback_ns = 0;
};

/// Replace every virtual leg by its pooled vertex sequence. Distances are
/// preserved exactly because entry distances are copies of pool distances.
inline Path expand(const OverlayPath& overlay, const ShortcutIndex& index) {
  Path path;
  path.distance = overlay.distance;
  path.vertices.push_back(overlay.start);
  for (const auto& leg : overlay.legs) {
    if (!leg.via_shortcut) {
      path.vertices.push_back(leg.to);
      continue;
    }
    if (leg.shortcut >= index.shortcuts.size())
      throw DanglingRef("shortcut " + std::to_string(leg.shortcut));
    const Shortcut& sc = index.shortcuts[leg.shortcut];
    if (leg.entry >= sc.entries.size()) throw DanglingRef("entry " + std::to_string(leg.entry));
    const auto& stored = index.pool.at(sc.entries[leg.entry].path_ref);
    if (sc.entries[leg.entry].reversed) {
      for (auto it = stored.vertices.rbegin() + 1; it != stored.vertices.rend(); ++it)
        path.vertices.push_back(*it);
    } else {
      for (auto it = stored.vertices.begin() + 1; it != stored.vertices.end(); ++it)
        path.vertices.push_back(*it);
    }
  }
  return path;
}

/// Structural view of the query-time graph for one (s, d) pair: the two
/// endpoint cells in full, every boundary vertex, all inter-cell edges, and
/// one virtual edge per shortcut of the remaining cells.
struct OverlayGraph {
  struct VirtualEdge {
    VertexId src, dst;
    std::uint32_t shortcut;
  };
  std::vector<VertexId> vertices;      // sorted
  std::vector<EdgeId> physical_edges;  // endpoint-cell induced + inter-cell
  std::vector<VirtualEdge> virtual_edges;

  bool has_vertex(VertexId v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
  }
};

inline OverlayGraph build_overlay(const RoadNetwork& net, const CellDecomposition& decomp,
                                  const ShortcutIndex& index, VertexId s, VertexId d) {
  net.check_vertex(s);
  net.check_vertex(d);
  const CellId cs = decomp.cell_of(s), cd = decomp.cell_of(d);
  if (cs == cd) throw InvalidParam("overlay endpoints share a cell");
  OverlayGraph g;
  for (VertexId v : decomp.cell(cs).vertices) g.vertices.push_back(v);
  for (VertexId v : decomp.cell(cd).vertices) g.vertices.push_back(v);
  for (CellId c = 0; c < decomp.cells().size(); ++c)
    for (VertexId v : decomp.boundary_vertices(c)) g.vertices.push_back(v);
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());

  g.physical_edges = decomp.cell(cs).edges;
  g.physical_edges.insert(g.physical_edges.end(), decomp.cell(cd).edges.begin(),
                          decomp.cell(cd).edges.end());
  g.physical_edges.insert(g.physical_edges.end(), decomp.cut_edges().begin(),
                          decomp.cut_edges().end());
  std::sort(g.physical_edges.begin(), g.physical_edges.end());

  for (std::uint32_t i = 0; i < index.shortcuts.size(); ++i) {
    const Shortcut& sc = index.shortcuts[i];
    CellId c = decomp.cell_of(sc.src);
    if (c == cs || c == cd) continue;
    g.virtual_edges.push_back({sc.src, sc.dst, i});
  }
  return g;
}

/// Answers (s, d, vehicle) queries. Shared inputs stay immutable; the
/// engine owns per-query scratch, so use one engine per thread.
class QueryEngine {
 public:
  QueryEngine(const RoadNetwork& net, const CellDecomposition& decomp, const ShortcutIndex& index,
              bool verify_matches = false)
      : net_(net), decomp_(decomp), index_(index), verify_matches_(verify_matches) {
    if (index.meta.n_vertices != net.vertex_count() ||
        index.meta.n_cells != decomp.cells().size() || index.meta.n_edges != net.edges().size())
      throw MismatchedIndex("index metadata does not match network/decomposition");
    const VertexId n = net.vertex_count();
    // shortcuts are sorted by (src, dst): per-src ranges form a CSR
    sc_offset_.assign(n + 1, 0);
    for (const auto& sc : index.shortcuts) {
      if (decomp.cell_of(sc.src) != decomp.cell_of(sc.dst))
        throw MismatchedIndex("shortcut endpoints in different cells");
      ++sc_offset_[sc.src + 1];
    }
    for (VertexId v = 0; v < n; ++v) sc_offset_[v + 1] += sc_offset_[v];
    dist_.resize(n);
    stamp_.assign(n, 0);
    parent_.resize(n);
  }

  QueryResult plan(const Query& q) {
    net_.check_vertex(q.s);
    net_.check_vertex(q.d);
    QueryResult result;
    const auto t0 = std::chrono::steady_clock::now();
    if (decomp_.cell_of(q.s) == decomp_.cell_of(q.d)) {
      // same-cell queries bypass the index entirely
      auto path = restricted_dijkstra(net_, q.s, q.d, q.vehicle, oracle_ws_);
      result.overlay_ns = elapsed_ns(t0);
      if (path) {
        result.distance = path->distance;
        result.path = std::move(path);
        result.status = PlanStatus::overlay;
      } else {
        result.status = PlanStatus::no_path;
      }
      return result;
    }
    auto overlay = search(q, result);
    result.overlay_ns = elapsed_ns(t0);
    if (overlay) {
      result.distance = overlay->distance;
      result.path = expand(*overlay, index_);
      result.status = PlanStatus::overlay;
      return result;
    }
    const auto t1 = std::chrono::steady_clock::now();
    auto exact = restricted_dijkstra(net_, q.s, q.d, q.vehicle, oracle_ws_);
    result.fallback_ns = elapsed_ns(t1);
    if (exact) {
      result.distance = exact->distance;
      result.path = std::move(exact);
      result.status = PlanStatus::fallback;  // counted as a failure
    } else {
      result.status = PlanStatus::no_path;
    }
    return result;
  }

 private:
  struct ParentLeg {
    VertexId from;
    std::uint32_t ref;    // edge id or shortcut index
    std::uint32_t entry;  // entry position for virtual legs
    bool via_shortcut;
  };

  static std::int64_t elapsed_ns(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                t0)
        .count();
  }

  bool seen(VertexId v) const { return stamp_[v] == round_; }

  bool offer(VertexId v, Distance nd, const ParentLeg& leg) {
    if (!seen(v) || nd < dist_[v]) {
      dist_[v] = nd;
      parent_[v] = leg;
      stamp_[v] = round_;
      return true;
    }
    if (nd == dist_[v]) {
      const ParentLeg& cur = parent_[v];
      auto key = [](const ParentLeg& l) {
        return std::tuple(l.from, l.via_shortcut, l.ref, l.entry);
      };
      if (key(leg) < key(cur)) parent_[v] = leg;
    }
    return false;
  }

  std::optional<OverlayPath> search(const Query& q, QueryResult& result) {
    const CellId cs = decomp_.cell_of(q.s), cd = decomp_.cell_of(q.d);
    if (++round_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      round_ = 1;
    }
    heap_.clear();
    dist_[q.s] = 0;
    stamp_[q.s] = round_;
    parent_[q.s] = {q.s, 0, 0, false};
    heap_.emplace_back(0, q.s);
    bool found = false;
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
      auto [du, u] = heap_.back();
      heap_.pop_back();
      if (stamp_[u] != round_ || du > dist_[u]) continue;
      if (u == q.d) {
        found = true;
        break;
      }
      const CellId cu = decomp_.cell_of(u);
      for (const auto& nb : net_.neighbors(u)) {
        const CellId ct = decomp_.cell_of(nb.to);
        if (cu == ct && cu != cs && cu != cd) continue;  // interior of a skipped cell
        const Edge& e = net_.edge(nb.edge);
        if (!edge_feasible(e.limits, q.vehicle)) continue;
        if (offer(nb.to, du + e.length, {u, nb.edge, 0, false}))
          push(du + e.length, nb.to);
      }
      if (cu != cs && cu != cd) {
        for (std::uint32_t si = sc_offset_[u]; si < sc_offset_[u + 1]; ++si) {
          const Shortcut& sc = index_.shortcuts[si];
          // cheapest possible jump cannot improve: skip the match scan
          const Distance floor = du + sc.entries.front().distance;
          if (seen(sc.dst) && floor >= dist_[sc.dst]) continue;
          ++result.match_calls;
          std::uint32_t hit = ~std::uint32_t{0};
          std::uint32_t scanned = 0;
          for (std::uint32_t ei = 0; ei < sc.entries.size(); ++ei) {
            ++scanned;
            if (dominates(q.vehicle, index_.rc_table[sc.entries[ei].rc_id])) {
              hit = ei;
              break;
            }
          }
          result.scanned_entries += scanned;
          if (verify_matches_) verify_match(sc, q.vehicle, hit);
          if (hit == ~std::uint32_t{0}) continue;
          const Distance nd = du + sc.entries[hit].distance;
          if (offer(sc.dst, nd, {u, si, hit, true})) push(nd, sc.dst);
        }
      }
    }
    if (!found) return std::nullopt;
    OverlayPath overlay;
    overlay.distance = dist_[q.d];
    std::vector<OverlayPath::Leg> rev;
    VertexId v = q.d;
    while (v != q.s) {
      const ParentLeg& leg = parent_[v];
      rev.push_back({v, leg.via_shortcut, leg.ref, leg.entry});
      v = leg.from;
    }
    overlay.start = q.s;
    overlay.legs.assign(rev.rbegin(), rev.rend());
    return overlay;
  }

  /// Presort correctness gate: the first feasible entry must be the
  /// full-scan minimum-distance feasible entry.
  void verify_match(const Shortcut& sc, const Vehicle& c, std::uint32_t hit) const {
    std::uint32_t best = ~std::uint32_t{0};
    for (std::uint32_t ei = 0; ei < sc.entries.size(); ++ei) {
      if (!dominates(c, index_.rc_table[sc.entries[ei].rc_id])) continue;
      if (best == ~std::uint32_t{0} || sc.entries[ei].distance < sc.entries[best].distance)
        best = ei;
    }
    bool ok = (hit == best) ||
              (hit != ~std::uint32_t{0} && best != ~std::uint32_t{0} &&
               sc.entries[hit].distance == sc.entries[best].distance);
    if (!ok) throw Error("presorted match diverged from full scan");
  }

  void push(Distance d, VertexId v) {
    heap_.emplace_back(d, v);
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  }

  const RoadNetwork& net_;
  const CellDecomposition& decomp_;
  const ShortcutIndex& index_;
  bool verify_matches_;
  std::vector<std::uint32_t> sc_offset_;
  std::vector<Distance> dist_;
  std::vector<std::uint32_t> stamp_;
  std::vector<ParentLeg> parent_;
  std::uint32_t round_ = 0;
  std::vector<std::pair<Distance, VertexId>> heap_;
  DijkstraWorkspace oracle_ws_;
};

/// One-shot convenience wrapper around QueryEngine.
inline QueryResult plan(const RoadNetwork& net, const CellDecomposition& decomp,
                        const ShortcutIndex& index, const Query& q) {
  QueryEngine engine(net, decomp, index);
  return engine.plan(q);
}

}  // namespace trapp
