#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "trapp/graph.hpp"
#include "trapp/io.hpp"
#include "trapp/partition.hpp"
#include "trapp/rng.hpp"
#include "trapp/types.hpp"

namespace trapp {

/// Candidate finite limit values per restriction type, plus the fraction of
/// edges that receive a finite limit of that type (the rest stay open).
struct RestrictionPalette {
  std::vector<double> he{1.8, 2.0, 2.5, 3.0, 3.5, 4.0};
  std::vector<double> wi{2.0, 2.2, 2.4, 3.0};
  std::vector<double> wt{5, 10, 15, 20, 30, 40};
  double frac_he = 0.30;
  double frac_wi = 0.25;
  double frac_wt = 0.35;

  void validate() const {
    auto check = [](const std::vector<double>& vals, double frac, const char* name) {
      if (vals.empty()) throw InvalidParam(std::string(name) + " palette empty");
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(vals[i] > 0) || vals[i] == kNoLimit)
          throw InvalidParam(std::string(name) + " palette value must be finite positive");
        if (i > 0 && vals[i] <= vals[i - 1])
          throw InvalidParam(std::string(name) + " palette must be strictly ascending");
      }
      if (frac < 0 || frac > 1) throw InvalidParam(std::string(name) + " fraction outside [0,1]");
    };
    check(he, frac_he, "he");
    check(wi, frac_wi, "wi");
    check(wt, frac_wt, "wt");
  }
};

/// The vehicle multiset that drives combination filtering. cell_of is
/// either empty (one global flow shared by every cell) or one cell id per
/// vehicle.
struct TrafficFlow {
  std::vector<Vehicle> vehicles;
  std::vector<CellId> cell_of;

  bool per_cell() const { return !cell_of.empty(); }
};

struct VehicleClass {
  double weight;  // mix share
  double he_mu, he_sd;
  double wi_mu, wi_sd;
  double wt_mu, wt_sd;
};

/// Passenger cars dominate; vans, box trucks and heavy/oversize vehicles
/// make up the rest. Values are meters / meters / tonnes.
inline std::vector<VehicleClass> default_vehicle_mix() {
  return {
      {0.70, 1.6, 0.10, 1.8, 0.05, 1.8, 0.2},
      {0.15, 2.5, 0.12, 2.0, 0.07, 3.5, 0.4},
      {0.10, 3.5, 0.20, 2.35, 0.08, 11.0, 2.5},
      {0.05, 3.9, 0.25, 2.8, 0.15, 30.0, 5.0},
  };
}

/// Connected random geometric graph on the unit square. Vertices within
/// radius sqrt(avg_degree / (pi*n)) are linked; a deterministic
/// nearest-neighbor spanning pass then stitches any leftover components.
/// Lengths are the Euclidean distance scaled by 10^4, rounded, floor 1.
inline RoadNetwork gen_network(std::uint32_t n, double avg_degree, std::uint64_t seed) {
  if (n < 2) throw InvalidParam("need at least 2 vertices");
  if (avg_degree < 2) throw InvalidParam("avg_degree must be >= 2");
  Rng rng(mix_seed(seed, 0x6e6574));
  std::vector<double> x(n), y(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    x[i] = rng.uniform01();
    y[i] = rng.uniform01();
  }
  const double radius = std::sqrt(avg_degree / (3.141592653589793 * n));
  const double scale = 1e4;
  auto edge_len = [&](std::uint32_t a, std::uint32_t b) {
    double d = std::hypot(x[a] - x[b], y[a] - y[b]);
    return static_cast<std::uint32_t>(std::max<long long>(1, std::llround(d * scale)));
  };

  const std::uint32_t grid = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(1.0 / radius));
  auto cell_ix = [&](double c) {
    auto i = static_cast<std::uint32_t>(c * grid);
    return std::min(i, grid - 1);
  };
  std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(grid) * grid);
  for (std::uint32_t i = 0; i < n; ++i)
    buckets[static_cast<std::size_t>(cell_ix(y[i])) * grid + cell_ix(x[i])].push_back(i);

  std::vector<Edge> edges;
  std::vector<std::uint32_t> dsu(n);
  std::iota(dsu.begin(), dsu.end(), 0);
  auto find = [&](std::uint32_t v) {
    while (dsu[v] != v) v = dsu[v] = dsu[dsu[v]];
    return v;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) { dsu[find(a)] = find(b); };

  for (std::uint32_t u = 0; u < n; ++u) {
    std::uint32_t cx = cell_ix(x[u]), cy = cell_ix(y[u]);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        int bx = static_cast<int>(cx) + dx, by = static_cast<int>(cy) + dy;
        if (bx < 0 || by < 0 || bx >= static_cast<int>(grid) || by >= static_cast<int>(grid))
          continue;
        for (std::uint32_t v : buckets[static_cast<std::size_t>(by) * grid + bx]) {
          if (v <= u) continue;
          if (std::hypot(x[u] - x[v], y[u] - y[v]) > radius) continue;
          edges.push_back({u, v, edge_len(u, v), {}});
          unite(u, v);
        }
      }
    }
  }

  // Stitch components: repeatedly connect the smallest-id stranded
  // component to its nearest outside vertex.
  while (true) {
    std::uint32_t root0 = find(0);
    std::uint32_t stranded = n;
    for (std::uint32_t v = 0; v < n; ++v)
      if (find(v) != root0) {
        stranded = v;
        break;
      }
    if (stranded == n) break;
    std::uint32_t best = n;
    double best_d = 0;
    std::uint32_t comp = find(stranded);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (find(v) == comp) continue;
      double d = std::hypot(x[stranded] - x[v], y[stranded] - y[v]);
      if (best == n || d < best_d || (d == best_d && v < best)) {
        best = v;
        best_d = d;
      }
    }
    edges.push_back({std::min(stranded, best), std::max(stranded, best),
                     edge_len(stranded, best), {}});
    unite(stranded, best);
  }

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return RoadNetwork(n, std::move(edges));
}

/// Independently per type, each edge draws a palette value with the type's
/// fraction, otherwise stays unrestricted.
inline RoadNetwork assign_restrictions(const RoadNetwork& net, const RestrictionPalette& palette,
                                       std::uint64_t seed) {
  palette.validate();
  Rng rng(mix_seed(seed, 0x726573));
  std::vector<Edge> edges = net.edges();
  for (auto& e : edges) {
    e.limits = {};
    if (rng.uniform01() < palette.frac_he)
      e.limits.he = palette.he[rng.uniform_below(palette.he.size())];
    if (rng.uniform01() < palette.frac_wi)
      e.limits.wi = palette.wi[rng.uniform_below(palette.wi.size())];
    if (rng.uniform01() < palette.frac_wt)
      e.limits.wt = palette.wt[rng.uniform_below(palette.wt.size())];
  }
  return RoadNetwork(net.vertex_count(), std::move(edges));
}

/// Truncated-normal samples from the class mix; global flow (no cell ids).
inline TrafficFlow gen_traffic(std::size_t n_vehicles, const std::vector<VehicleClass>& mix,
                               std::uint64_t seed) {
  if (n_vehicles < 1) throw InvalidParam("need at least one vehicle");
  if (mix.empty()) throw InvalidParam("empty vehicle mix");
  double total = 0;
  for (const auto& m : mix) {
    if (m.weight < 0) throw InvalidParam("negative mix weight");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidParam("mix weights must sum to 1");
  Rng rng(mix_seed(seed, 0x747261));
  TrafficFlow flow;
  flow.vehicles.reserve(n_vehicles);
  for (std::size_t i = 0; i < n_vehicles; ++i) {
    double pick = rng.uniform01();
    std::size_t k = 0;
    double acc = 0;
    for (; k + 1 < mix.size(); ++k) {
      acc += mix[k].weight;
      if (pick < acc) break;
    }
    const auto& m = mix[k];
    Vehicle c;
    c.he = m.he_sd == 0 ? m.he_mu : rng.normal_positive(m.he_mu, m.he_sd);
    c.wi = m.wi_sd == 0 ? m.wi_mu : rng.normal_positive(m.wi_mu, m.wi_sd);
    c.wt = m.wt_sd == 0 ? m.wt_mu : rng.normal_positive(m.wt_mu, m.wt_sd);
    flow.vehicles.push_back(c);
  }
  return flow;
}

struct Query {
  VertexId s = 0;
  VertexId d = 0;
  Vehicle vehicle;
};

struct QuerySet {
  std::vector<Query> queries;
  std::uint64_t seed = 0;
};

/// Cross-cell endpoint pairs with vehicles drawn uniformly from the flow.
inline QuerySet gen_queries(const RoadNetwork& net, const CellDecomposition& decomp,
                            const TrafficFlow& traffic, std::size_t n, std::uint64_t seed) {
  if (decomp.cells().size() < 2)
    throw Infeasible("cross-cell queries need at least two cells");
  if (traffic.vehicles.empty()) throw InvalidParam("empty traffic flow");
  Rng rng(mix_seed(seed, 0x717279));
  QuerySet qs;
  qs.seed = seed;
  qs.queries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    VertexId s, d;
    do {
      s = static_cast<VertexId>(rng.uniform_below(net.vertex_count()));
      d = static_cast<VertexId>(rng.uniform_below(net.vertex_count()));
    } while (decomp.cell_of(s) == decomp.cell_of(d));
    Vehicle c = traffic.vehicles[rng.uniform_below(traffic.vehicles.size())];
    qs.queries.push_back({s, d, c});
  }
  return qs;
}

/// Traffic file: "he wi wt" or "he wi wt cell_id" per line.
inline std::string traffic_to_text(const TrafficFlow& flow) {
  std::string out;
  for (std::size_t i = 0; i < flow.vehicles.size(); ++i) {
    const Vehicle& c = flow.vehicles[i];
    out += fmt_double(c.he);
    out += ' ';
    out += fmt_double(c.wi);
    out += ' ';
    out += fmt_double(c.wt);
    if (flow.per_cell()) {
      out += ' ';
      out += std::to_string(flow.cell_of[i]);
    }
    out += '\n';
  }
  return out;
}

inline TrafficFlow traffic_from_text(std::string_view text) {
  TrafficFlow flow;
  bool first = true;
  bool with_cells = false;
  detail::for_each_line(text, [&](detail::LineScanner& scan) {
    Vehicle c;
    c.he = scan.real("he");
    c.wi = scan.real("wi");
    c.wt = scan.real("wt");
    if (!valid_vehicle(c)) throw FormatError("vehicle attributes must be finite positive", scan.offset());
    bool has_cell = !scan.done();
    if (first) {
      with_cells = has_cell;
      first = false;
    } else if (has_cell != with_cells) {
      throw FormatError("mixed traffic rows with and without cell id", scan.offset());
    }
    flow.vehicles.push_back(c);
    if (has_cell) flow.cell_of.push_back(static_cast<CellId>(scan.uint("cell id")));
  });
  return flow;
}

/// Query file: "s d he wi wt" per line.
inline std::string queries_to_text(const QuerySet& qs) {
  std::string out;
  for (const auto& q : qs.queries) {
    out += std::to_string(q.s);
    out += ' ';
    out += std::to_string(q.d);
    out += ' ';
    out += fmt_double(q.vehicle.he);
    out += ' ';
    out += fmt_double(q.vehicle.wi);
    out += ' ';
    out += fmt_double(q.vehicle.wt);
    out += '\n';
  }
  return out;
}

inline QuerySet queries_from_text(std::string_view text) {
  QuerySet qs;
  detail::for_each_line(text, [&](detail::LineScanner& scan) {
    Query q;
    q.s = static_cast<VertexId>(scan.uint("s"));
    q.d = static_cast<VertexId>(scan.uint("d"));
    q.vehicle.he = scan.real("he");
    q.vehicle.wi = scan.real("wi");
    q.vehicle.wt = scan.real("wt");
    if (!valid_vehicle(q.vehicle))
      throw FormatError("vehicle attributes must be finite positive", scan.offset());
    qs.queries.push_back(q);
  });
  return qs;
}

inline void save_traffic(const std::string& path, const TrafficFlow& flow) {
  detail::spit(path, traffic_to_text(flow));
}
inline TrafficFlow load_traffic(const std::string& path) {
  return traffic_from_text(detail::slurp(path));
}
inline void save_queries(const std::string& path, const QuerySet& qs) {
  detail::spit(path, queries_to_text(qs));
}
inline QuerySet load_queries(const std::string& path) {
  return queries_from_text(detail::slurp(path));
}

}  // namespace trapp
