#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trapp/combinations.hpp"
#include "trapp/dijkstra.hpp"
#include "trapp/graph.hpp"
#include "trapp/io.hpp"
#include "trapp/partition.hpp"
#include "trapp/types.hpp"

namespace trapp {

/// Deduplicated storage of actual vertex sequences. Many entries point at
/// one pooled sequence; a sequence is stored once, oriented from its
/// smaller endpoint, and referenced with a direction flag.
class PathPool {
 public:
  struct Stored {
    std::vector<VertexId> vertices;
    Distance distance;
  };

  std::uint32_t intern(std::vector<VertexId> vertices, Distance distance) {
    auto key = hash_seq(vertices);
    auto [it, inserted] = lookup_.try_emplace(key, std::vector<std::uint32_t>{});
    for (std::uint32_t id : it->second)
      if (paths_[id].vertices == vertices) return id;
    auto id = static_cast<std::uint32_t>(paths_.size());
    paths_.push_back({std::move(vertices), distance});
    it->second.push_back(id);
    (void)inserted;
    return id;
  }

  std::uint32_t append(std::vector<VertexId> vertices, Distance distance) {
    auto id = static_cast<std::uint32_t>(paths_.size());
    paths_.push_back({std::move(vertices), distance});
    return id;
  }

  const Stored& at(std::uint32_t id) const {
    if (id >= paths_.size()) throw DanglingRef("pool id " + std::to_string(id));
    return paths_[id];
  }

  std::size_t size() const { return paths_.size(); }

  std::uint64_t total_vertices() const {
    std::uint64_t total = 0;
    for (const auto& p : paths_) total += p.vertices.size();
    return total;
  }

  void drop_lookup() { lookup_.clear(); }

 private:
  static std::uint64_t hash_seq(const std::vector<VertexId>& seq) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ seq.size();
    for (VertexId v : seq) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  std::vector<Stored> paths_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> lookup_;
};

/// One stored path of a shortcut, in compact form. The combination lives in
/// the index-wide table (rc_id); the distance is copied next to the sort
/// key so matching never touches the pool.
struct ShortcutEntry {
  std::uint32_t distance;
  std::uint32_t path_ref;
  std::uint16_t rc_id;
  std::uint8_t reversed;
};

/// Materialized view of an entry.
struct ShortcutEntryView {
  LimitTriple rc;
  Distance distance;
  std::uint32_t path_ref;
  bool reversed;
};

/// All stored paths between one ordered boundary pair, ascending by
/// (distance, combination).
struct Shortcut {
  VertexId src = 0;
  VertexId dst = 0;
  std::vector<ShortcutEntry> entries;
};

struct IndexMeta {
  std::uint32_t version = 1;
  std::string strategy = "trapp";
  std::uint32_t n_vertices = 0;
  std::uint64_t n_edges = 0;
  std::uint32_t n_cells = 0;
  std::uint32_t target_cell_size = 0;
  std::uint64_t partition_seed = 0;
  std::uint64_t k = 0;
  double f = 0;
  std::int64_t random_budget = -1;
  std::uint64_t build_seed = 0;
};

struct StorageStats {
  std::uint64_t total_entries = 0;
  std::uint64_t distinct_paths = 0;
  std::uint64_t total_path_vertices = 0;
};

struct MatchResult {
  ShortcutEntryView entry;
  std::uint32_t scanned;  // entries looked at, including the hit
};

/// Per-cell shortcuts over a shared pool. Shortcuts are flat, ordered by
/// (src, dst); each pair belongs to exactly one cell (both endpoints are
/// boundary vertices of the cell the pair was built in).
class ShortcutIndex {
 public:
  IndexMeta meta;
  std::vector<LimitTriple> rc_table;  // sorted lexicographically
  PathPool pool;
  std::vector<Shortcut> shortcuts;

  ShortcutEntryView view(const ShortcutEntry& e) const {
    return {rc_table[e.rc_id], static_cast<Distance>(e.distance), e.path_ref, e.reversed != 0};
  }

  /// First feasible entry in ascending-distance order; the presort makes
  /// that the minimum-distance feasible entry.
  std::optional<MatchResult> match(const Shortcut& sc, const Vehicle& c) const {
    std::uint32_t scanned = 0;
    for (const ShortcutEntry& e : sc.entries) {
      ++scanned;
      if (dominates(c, rc_table[e.rc_id])) return MatchResult{view(e), scanned};
    }
    return std::nullopt;
  }

  StorageStats storage_stats() const {
    StorageStats st;
    for (const auto& sc : shortcuts) st.total_entries += sc.entries.size();
    st.distinct_paths = pool.size();
    st.total_path_vertices = pool.total_vertices();
    return st;
  }

  const Shortcut* find(VertexId src, VertexId dst) const {
    auto it = std::lower_bound(shortcuts.begin(), shortcuts.end(), std::pair{src, dst},
                               [](const Shortcut& s, const std::pair<VertexId, VertexId>& k) {
                                 return s.src != k.first ? s.src < k.first : s.dst < k.second;
                               });
    if (it != shortcuts.end() && it->src == src && it->dst == dst) return &*it;
    return nullptr;
  }
};

inline std::optional<MatchResult> match(const ShortcutIndex& index, const Shortcut& sc,
                                        const Vehicle& c) {
  return index.match(sc, c);
}

inline StorageStats storage_stats(const ShortcutIndex& index) { return index.storage_stats(); }

namespace detail {

inline std::uint16_t rc_id_of(const std::vector<LimitTriple>& table, const LimitTriple& rc) {
  auto it = std::lower_bound(table.begin(), table.end(), rc, lex_less);
  if (it == table.end() || !(*it == rc)) throw Error("combination missing from table");
  return static_cast<std::uint16_t>(it - table.begin());
}

}  // namespace detail

/// Build one cell's shortcuts: for every ordered boundary pair and every
/// combination, the shortest feasible in-cell path, pooled and presorted.
/// One tree run per (combination, source) covers all destinations at once;
/// the (v,u) entry reuses the (u,v) sequence reversed, which is exactly
/// what the direction-normalized per-pair search would return.
inline std::vector<Shortcut> build_cell_shortcuts(const RoadNetwork& net, const Cell& cell,
                                                  const std::vector<VertexId>& boundary,
                                                  const CombinationSet& combos,
                                                  const std::vector<LimitTriple>& rc_table,
                                                  PathPool& pool) {
  std::vector<Shortcut> result;
  if (boundary.size() < 2 || combos.empty()) return result;
  CellRouter router(net, cell);
  const std::size_t b = boundary.size();
  // entries for ordered pair (i, j) at slot i*b+j
  std::vector<std::vector<ShortcutEntry>> acc(b * b);
  for (const LimitTriple& rc : combos) {
    const std::uint16_t rc_id = detail::rc_id_of(rc_table, rc);
    for (std::size_t i = 0; i + 1 < b; ++i) {
      router.run_tree(router.local(boundary[i]), rc);
      for (std::size_t j = i + 1; j < b; ++j) {
        const std::uint32_t lj = router.local(boundary[j]);
        const Distance dist = router.dist(lj);
        if (dist == kUnreachable) continue;
        if (dist > 0xffffffffLL) throw Error("in-cell path distance exceeds 32 bits");
        auto id = pool.intern(router.tree_path(lj), dist);
        acc[i * b + j].push_back({static_cast<std::uint32_t>(dist), id, rc_id, 0});
        acc[j * b + i].push_back({static_cast<std::uint32_t>(dist), id, rc_id, 1});
      }
    }
  }
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      auto& entries = acc[i * b + j];
      if (entries.empty()) continue;
      // rc_table is sorted, so rc_id order is combination order
      std::sort(entries.begin(), entries.end(), [](const ShortcutEntry& a, const ShortcutEntry& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.rc_id < b.rc_id;
      });
      result.push_back({boundary[i], boundary[j], std::move(entries)});
    }
  }
  std::sort(result.begin(), result.end(), [](const Shortcut& a, const Shortcut& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  return result;
}

/// Assemble the full index from per-cell combination sets.
inline ShortcutIndex build_index(const RoadNetwork& net, const CellDecomposition& decomp,
                                 const std::vector<CombinationSet>& per_cell_combos,
                                 IndexMeta meta) {
  if (per_cell_combos.size() != decomp.cells().size())
    throw InvalidParam("combination sets do not match cell count");
  ShortcutIndex index;
  index.meta = std::move(meta);
  index.meta.n_vertices = net.vertex_count();
  index.meta.n_edges = net.edges().size();
  index.meta.n_cells = static_cast<std::uint32_t>(decomp.cells().size());
  CombinationSet all;
  for (const auto& combos : per_cell_combos) all.insert(all.end(), combos.begin(), combos.end());
  sort_unique(all);
  if (all.size() > 0xffff) throw Error("combination table exceeds 65535 entries");
  index.rc_table = std::move(all);
  for (CellId c = 0; c < decomp.cells().size(); ++c) {
    auto cell_shortcuts = build_cell_shortcuts(net, decomp.cell(c), decomp.boundary_vertices(c),
                                               per_cell_combos[c], index.rc_table, index.pool);
    for (auto& sc : cell_shortcuts) index.shortcuts.push_back(std::move(sc));
  }
  std::sort(index.shortcuts.begin(), index.shortcuts.end(),
            [](const Shortcut& a, const Shortcut& b) {
              return a.src != b.src ? a.src < b.src : a.dst < b.dst;
            });
  index.pool.drop_lookup();
  return index;
}

/// Versioned text container: [meta] key-value lines, [pool] lines
/// "id distance v0 v1 ...", [shortcuts] lines "src dst he wi wt path_id"
/// grouped by (src, dst) in presorted order. Entry distances reload from
/// the pool, so the mapping entry -> sequence survives the round trip
/// exactly.
inline std::string serialize(const ShortcutIndex& index) {
  std::string out;
  out += "[meta]\n";
  out += "version " + std::to_string(index.meta.version) + "\n";
  out += "strategy " + index.meta.strategy + "\n";
  out += "n_vertices " + std::to_string(index.meta.n_vertices) + "\n";
  out += "n_edges " + std::to_string(index.meta.n_edges) + "\n";
  out += "n_cells " + std::to_string(index.meta.n_cells) + "\n";
  out += "target_cell_size " + std::to_string(index.meta.target_cell_size) + "\n";
  out += "partition_seed " + std::to_string(index.meta.partition_seed) + "\n";
  out += "k " + std::to_string(index.meta.k) + "\n";
  out += "f " + fmt_double(index.meta.f) + "\n";
  out += "random_budget " + std::to_string(index.meta.random_budget) + "\n";
  out += "build_seed " + std::to_string(index.meta.build_seed) + "\n";
  out += "[pool]\n";
  for (std::uint32_t id = 0; id < index.pool.size(); ++id) {
    const auto& p = index.pool.at(id);
    out += std::to_string(id);
    out += ' ';
    out += std::to_string(p.distance);
    for (VertexId v : p.vertices) {
      out += ' ';
      out += std::to_string(v);
    }
    out += '\n';
  }
  out += "[shortcuts]\n";
  for (const auto& sc : index.shortcuts) {
    for (const auto& e : sc.entries) {
      const LimitTriple& rc = index.rc_table[e.rc_id];
      out += std::to_string(sc.src);
      out += ' ';
      out += std::to_string(sc.dst);
      out += ' ';
      out += fmt_limit(rc.he);
      out += ' ';
      out += fmt_limit(rc.wi);
      out += ' ';
      out += fmt_limit(rc.wt);
      out += ' ';
      out += std::to_string(e.path_ref);
      out += '\n';
    }
  }
  return out;
}

inline ShortcutIndex deserialize(std::string_view text) {
  ShortcutIndex index;
  enum class Section { none, meta, pool, shortcuts } section = Section::none;
  bool seen_meta = false, seen_pool = false, seen_shortcuts = false;
  struct RawEntry {
    VertexId src, dst;
    LimitTriple rc;
    std::uint32_t path_ref;
  };
  std::vector<RawEntry> raw;

  detail::for_each_line(text, [&](detail::LineScanner& scan) {
    auto first = scan.token("token");
    if (first == "[meta]") {
      section = Section::meta;
      seen_meta = true;
      return;
    }
    if (first == "[pool]") {
      if (!seen_meta) throw FormatError("[pool] before [meta]", scan.offset());
      section = Section::pool;
      seen_pool = true;
      return;
    }
    if (first == "[shortcuts]") {
      if (!seen_pool) throw FormatError("[shortcuts] before [pool]", scan.offset());
      section = Section::shortcuts;
      seen_shortcuts = true;
      return;
    }
    switch (section) {
      case Section::none:
        throw FormatError("content before [meta]", scan.offset());
      case Section::meta: {
        auto& m = index.meta;
        if (first == "version") m.version = static_cast<std::uint32_t>(scan.uint("version"));
        else if (first == "strategy") m.strategy = std::string(scan.token("strategy"));
        else if (first == "n_vertices") m.n_vertices = static_cast<std::uint32_t>(scan.uint("n_vertices"));
        else if (first == "n_edges") m.n_edges = scan.uint("n_edges");
        else if (first == "n_cells") m.n_cells = static_cast<std::uint32_t>(scan.uint("n_cells"));
        else if (first == "target_cell_size")
          m.target_cell_size = static_cast<std::uint32_t>(scan.uint("target_cell_size"));
        else if (first == "partition_seed") m.partition_seed = scan.uint("partition_seed");
        else if (first == "k") m.k = scan.uint("k");
        else if (first == "f") m.f = scan.real("f");
        else if (first == "random_budget")
          m.random_budget = static_cast<std::int64_t>(std::stoll(std::string(scan.token("random_budget"))));
        else if (first == "build_seed") m.build_seed = scan.uint("build_seed");
        else throw FormatError("unknown meta key '" + std::string(first) + "'", scan.offset());
        break;
      }
      case Section::pool: {
        std::uint64_t id = 0;
        auto [p, ec] = std::from_chars(first.data(), first.data() + first.size(), id);
        if (ec != std::errc{} || p != first.data() + first.size())
          throw FormatError("bad pool id", scan.offset());
        if (id != index.pool.size())
          throw FormatError("pool ids must be dense and ascending", scan.offset());
        auto distance = static_cast<Distance>(scan.uint("distance"));
        std::vector<VertexId> verts;
        while (!scan.done()) verts.push_back(static_cast<VertexId>(scan.uint("vertex")));
        if (verts.empty()) throw FormatError("pool path without vertices", scan.offset());
        index.pool.append(std::move(verts), distance);
        break;
      }
      case Section::shortcuts: {
        RawEntry e;
        std::uint64_t src = 0;
        auto [p, ec] = std::from_chars(first.data(), first.data() + first.size(), src);
        if (ec != std::errc{} || p != first.data() + first.size())
          throw FormatError("bad src vertex", scan.offset());
        e.src = static_cast<VertexId>(src);
        e.dst = static_cast<VertexId>(scan.uint("dst"));
        e.rc.he = scan.limit("he");
        e.rc.wi = scan.limit("wi");
        e.rc.wt = scan.limit("wt");
        e.path_ref = static_cast<std::uint32_t>(scan.uint("path_id"));
        if (e.path_ref >= index.pool.size())
          throw FormatError("path_id out of range", scan.offset());
        if (!scan.done()) throw FormatError("trailing data on shortcut line", scan.offset());
        raw.push_back(e);
        break;
      }
    }
  });
  if (!seen_meta || !seen_pool || !seen_shortcuts)
    throw FormatError("truncated index: missing section", text.size());

  CombinationSet table;
  for (const auto& e : raw) table.push_back(e.rc);
  sort_unique(table);
  if (table.size() > 0xffff) throw FormatError("combination table exceeds 65535 entries", 0);
  index.rc_table = std::move(table);
  for (const auto& e : raw) {
    if (index.shortcuts.empty() || index.shortcuts.back().src != e.src ||
        index.shortcuts.back().dst != e.dst) {
      index.shortcuts.push_back({e.src, e.dst, {}});
    }
    const auto& stored = index.pool.at(e.path_ref);
    bool reversed;
    if (stored.vertices.front() == e.src && stored.vertices.back() == e.dst) reversed = false;
    else if (stored.vertices.front() == e.dst && stored.vertices.back() == e.src) reversed = true;
    else throw FormatError("pooled path does not connect entry endpoints", text.size());
    index.shortcuts.back().entries.push_back({static_cast<std::uint32_t>(stored.distance),
                                              e.path_ref,
                                              detail::rc_id_of(index.rc_table, e.rc),
                                              static_cast<std::uint8_t>(reversed)});
  }
  for (auto& sc : index.shortcuts) {
    std::sort(sc.entries.begin(), sc.entries.end(),
              [](const ShortcutEntry& a, const ShortcutEntry& b) {
                return a.distance != b.distance ? a.distance < b.distance : a.rc_id < b.rc_id;
              });
  }
  std::sort(index.shortcuts.begin(), index.shortcuts.end(),
            [](const Shortcut& a, const Shortcut& b) {
              return a.src != b.src ? a.src < b.src : a.dst < b.dst;
            });
  for (std::size_t i = 0; i + 1 < index.shortcuts.size(); ++i)
    if (index.shortcuts[i].src == index.shortcuts[i + 1].src &&
        index.shortcuts[i].dst == index.shortcuts[i + 1].dst)
      throw FormatError("shortcut pair split across non-adjacent groups", text.size());
  return index;
}

inline void save_index(const std::string& path, const ShortcutIndex& index) {
  detail::spit(path, serialize(index));
}

inline ShortcutIndex load_index(const std::string& path) {
  return deserialize(detail::slurp(path));
}

}  // namespace trapp
