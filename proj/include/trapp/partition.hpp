#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "trapp/graph.hpp"
#include "trapp/io.hpp"
#include "trapp/rng.hpp"
#include "trapp/types.hpp"

namespace trapp {

/// One partition cell: its vertex set and the edges induced by it.
struct Cell {
  CellId id = 0;
  std::vector<VertexId> vertices;  // sorted
  std::vector<EdgeId> edges;       // both endpoints inside

  bool contains(VertexId v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
  }
};

/// A total, disjoint vertex partition with precomputed cut edges and
/// per-cell boundary vertex sets. In the undirected setting a cell's entry
/// and exit vertices coincide: they are the endpoints of cut edges.
class CellDecomposition {
 public:
  static CellDecomposition from_assignment(const RoadNetwork& net,
                                           std::vector<CellId> cell_of) {
    if (cell_of.size() != net.vertex_count())
      throw InvalidParam("assignment size != vertex count");
    CellDecomposition d;
    d.cell_of_ = std::move(cell_of);
    CellId max_cell = 0;
    for (CellId c : d.cell_of_) max_cell = std::max(max_cell, c);
    d.cells_.resize(max_cell + 1);
    d.boundary_.resize(max_cell + 1);
    for (CellId c = 0; c <= max_cell; ++c) d.cells_[c].id = c;
    for (VertexId v = 0; v < net.vertex_count(); ++v)
      d.cells_[d.cell_of_[v]].vertices.push_back(v);
    for (const auto& cell : d.cells_)
      if (cell.vertices.empty()) throw InvalidParam("empty cell id in assignment");
    for (EdgeId id = 0; id < net.edges().size(); ++id) {
      const Edge& e = net.edge(id);
      CellId cu = d.cell_of_[e.u], cv = d.cell_of_[e.v];
      if (cu == cv) {
        d.cells_[cu].edges.push_back(id);
      } else {
        d.cut_edges_.push_back(id);
        d.boundary_[cu].push_back(e.u);
        d.boundary_[cv].push_back(e.v);
      }
    }
    for (auto& b : d.boundary_) {
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    return d;
  }

  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(CellId c) const {
    check_cell(c);
    return cells_[c];
  }
  CellId cell_of(VertexId v) const { return cell_of_[v]; }
  const std::vector<CellId>& assignment() const { return cell_of_; }
  const std::vector<EdgeId>& cut_edges() const { return cut_edges_; }

  const std::vector<VertexId>& boundary_vertices(CellId c) const {
    check_cell(c);
    return boundary_[c];
  }

  void check_cell(CellId c) const {
    if (c >= cells_.size()) throw UnknownCell("cell " + std::to_string(c));
  }

 private:
  std::vector<Cell> cells_;
  std::vector<CellId> cell_of_;
  std::vector<EdgeId> cut_edges_;
  std::vector<std::vector<VertexId>> boundary_;
};

inline const std::vector<VertexId>& boundary_vertices(const CellDecomposition& d, CellId c) {
  return d.boundary_vertices(c);
}

/// Seeded region growing, standing in for a heavyweight partitioner.
/// Repeatedly grows a cell from the lowest-id unassigned vertex up to
/// target_cell_size vertices, always absorbing the frontier vertex with the
/// most neighbors already inside the growing cell (this keeps the cut
/// small). Undersized leftovers merge into the adjacent cell they share the
/// most edges with, as long as the merged cell stays within 2x target.
inline CellDecomposition partition(const RoadNetwork& net, std::uint32_t target_cell_size,
                                   std::uint64_t seed) {
  if (target_cell_size < 2) throw InvalidParam("target_cell_size must be >= 2");
  const VertexId n = net.vertex_count();
  constexpr CellId kUnassigned = ~CellId{0};
  std::vector<CellId> cell_of(n, kUnassigned);
  std::vector<std::uint32_t> inside_neighbors(n, 0);
  std::vector<std::uint32_t> cell_size;

  // (inside-neighbor count, seed-mixed hash, vertex): lazy max-heap entries.
  struct Cand {
    std::uint32_t count;
    std::uint64_t hash;
    VertexId v;
    bool operator<(const Cand& o) const {
      if (count != o.count) return count < o.count;
      if (hash != o.hash) return hash > o.hash;
      return v > o.v;
    }
  };

  VertexId scan = 0;
  while (true) {
    while (scan < n && cell_of[scan] != kUnassigned) ++scan;
    if (scan >= n) break;
    const CellId cell = static_cast<CellId>(cell_size.size());
    std::priority_queue<Cand> frontier;
    frontier.push({0, 0, scan});
    std::uint32_t size = 0;
    while (size < target_cell_size && !frontier.empty()) {
      Cand top = frontier.top();
      frontier.pop();
      VertexId v = top.v;
      if (cell_of[v] != kUnassigned) continue;
      if (top.count != inside_neighbors[v]) continue;  // stale entry
      cell_of[v] = cell;
      ++size;
      for (const auto& nb : net.neighbors(v)) {
        if (cell_of[nb.to] != kUnassigned) continue;
        ++inside_neighbors[nb.to];
        frontier.push({inside_neighbors[nb.to], splitmix64(seed ^ nb.to), nb.to});
      }
    }
    // Frontier counts are relative to the current cell only.
    for (VertexId v = 0; v < n; ++v)
      if (cell_of[v] == kUnassigned) inside_neighbors[v] = 0;
    cell_size.push_back(size);
  }

  // Fold undersized cells into their best-connected neighbor cell.
  const std::uint32_t min_size = std::max<std::uint32_t>(2, target_cell_size / 2);
  const std::uint32_t max_size = 2 * target_cell_size;
  bool changed = true;
  while (changed && cell_size.size() > 1) {
    changed = false;
    for (CellId c = 0; c < cell_size.size(); ++c) {
      if (cell_size[c] == 0 || cell_size[c] >= min_size) continue;
      std::vector<std::uint32_t> shared(cell_size.size(), 0);
      for (const auto& e : net.edges()) {
        CellId cu = cell_of[e.u], cv = cell_of[e.v];
        if (cu == c && cv != c) ++shared[cv];
        if (cv == c && cu != c) ++shared[cu];
      }
      CellId best = kUnassigned;
      for (CellId o = 0; o < cell_size.size(); ++o) {
        if (o == c || shared[o] == 0) continue;
        if (cell_size[c] + cell_size[o] > max_size) continue;
        if (best == kUnassigned || shared[o] > shared[best]) best = o;
      }
      if (best == kUnassigned) continue;
      for (VertexId v = 0; v < n; ++v)
        if (cell_of[v] == c) cell_of[v] = best;
      cell_size[best] += cell_size[c];
      cell_size[c] = 0;
      changed = true;
    }
  }

  // Canonical ids: order of first appearance by vertex id.
  std::vector<CellId> remap(cell_size.size(), kUnassigned);
  CellId next = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (remap[cell_of[v]] == kUnassigned) remap[cell_of[v]] = next++;
    cell_of[v] = remap[cell_of[v]];
  }
  return CellDecomposition::from_assignment(net, cell_of);
}

/// Partition file: one "vertex_id cell_id" pair per line. Cell ids are
/// renumbered by first appearance on load.
inline std::string partition_to_text(const CellDecomposition& d) {
  std::string out;
  for (VertexId v = 0; v < d.assignment().size(); ++v) {
    out += std::to_string(v);
    out += ' ';
    out += std::to_string(d.cell_of(v));
    out += '\n';
  }
  return out;
}

inline CellDecomposition partition_from_text(const RoadNetwork& net, std::string_view text) {
  constexpr CellId kNone = ~CellId{0};
  std::vector<CellId> raw(net.vertex_count(), kNone);
  detail::for_each_line(text, [&](detail::LineScanner& scan) {
    auto v = scan.uint("vertex id");
    auto c = scan.uint("cell id");
    if (v >= net.vertex_count()) throw FormatError("vertex id out of range", scan.offset());
    if (raw[v] != kNone) throw FormatError("duplicate vertex id", scan.offset());
    raw[v] = static_cast<CellId>(c);
  });
  std::vector<CellId> remap;
  std::vector<CellId> cell_of(net.vertex_count());
  CellId next = 0;
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    if (raw[v] == kNone) throw FormatError("vertex " + std::to_string(v) + " missing", text.size());
    if (raw[v] >= remap.size()) remap.resize(raw[v] + 1, kNone);
    if (remap[raw[v]] == kNone) remap[raw[v]] = next++;
    cell_of[v] = remap[raw[v]];
  }
  return CellDecomposition::from_assignment(net, std::move(cell_of));
}

inline void save_partition(const std::string& path, const CellDecomposition& d) {
  detail::spit(path, partition_to_text(d));
}

inline CellDecomposition load_partition(const std::string& path, const RoadNetwork& net) {
  return partition_from_text(net, detail::slurp(path));
}

}  // namespace trapp
