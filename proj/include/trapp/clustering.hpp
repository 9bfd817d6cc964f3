#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "trapp/datagen.hpp"
#include "trapp/partition.hpp"
#include "trapp/rng.hpp"
#include "trapp/types.hpp"

namespace trapp {

struct VehicleCluster {
  std::vector<Vehicle> members;
};

/// Componentwise maximum over one cluster: every member is dominated by it,
/// so a path built under this triple serves the whole cluster.
struct RepVector {
  double he = 0;
  double wi = 0;
  double wt = 0;
};

inline RepVector representation_vector(const VehicleCluster& cluster) {
  if (cluster.members.empty()) throw InvalidParam("empty cluster");
  RepVector rv{0, 0, 0};
  for (const Vehicle& c : cluster.members) {
    rv.he = std::max(rv.he, c.he);
    rv.wi = std::max(rv.wi, c.wi);
    rv.wt = std::max(rv.wt, c.wt);
  }
  return rv;
}

namespace detail {

struct KmeansTrace {
  std::vector<double> objective;  // after each assignment step
};

using Point = std::array<double, 3>;

inline double sq_dist(const Point& a, const Point& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

/// Lloyd iterations on z-score-normalized attributes with k-means++
/// seeding. Clustering happens in normalized space; callers read raw
/// vehicles back out of the returned groups.
inline std::vector<std::vector<std::uint32_t>> kmeans_groups(const std::vector<Vehicle>& vehicles,
                                                             std::size_t k, std::uint64_t seed,
                                                             std::size_t max_iters,
                                                             KmeansTrace* trace) {
  const std::size_t n = vehicles.size();
  if (n == 0) throw InvalidParam("kmeans on empty input");
  if (k == 0) throw InvalidParam("kmeans with K = 0");

  Point mean{0, 0, 0}, sd{0, 0, 0};
  for (const Vehicle& c : vehicles) {
    mean[0] += c.he;
    mean[1] += c.wi;
    mean[2] += c.wt;
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (const Vehicle& c : vehicles) {
    sd[0] += (c.he - mean[0]) * (c.he - mean[0]);
    sd[1] += (c.wi - mean[1]) * (c.wi - mean[1]);
    sd[2] += (c.wt - mean[2]) * (c.wt - mean[2]);
  }
  for (auto& s : sd) {
    s = std::sqrt(s / static_cast<double>(n));
    if (s == 0) s = 1;  // constant attribute
  }
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i)
    pts[i] = {(vehicles[i].he - mean[0]) / sd[0], (vehicles[i].wi - mean[1]) / sd[1],
              (vehicles[i].wt - mean[2]) / sd[2]};

  // k-means++: when every remaining point coincides with a chosen center
  // the weighted draw has zero mass and seeding stops early, which caps K
  // at the number of distinct points.
  Rng rng(mix_seed(seed, 0x6b6d));
  std::vector<Point> centers;
  centers.push_back(pts[rng.uniform_below(n)]);
  std::vector<double> d2(n);
  while (centers.size() < k) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = sq_dist(pts[i], centers[0]);
      for (std::size_t c = 1; c < centers.size(); ++c)
        best = std::min(best, sq_dist(pts[i], centers[c]));
      d2[i] = best;
      total += best;
    }
    if (total == 0) break;
    double pick = rng.uniform01() * total;
    double acc = 0;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (pick < acc) {
        chosen = i;
        break;
      }
    }
    centers.push_back(pts[chosen]);
  }

  const std::size_t kk = centers.size();
  std::vector<std::uint32_t> assign(n, 0);
  std::vector<std::uint32_t> prev(n, ~std::uint32_t{0});
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    double objective = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = sq_dist(pts[i], centers[0]);
      std::uint32_t arg = 0;
      for (std::uint32_t c = 1; c < kk; ++c) {
        double d = sq_dist(pts[i], centers[c]);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      assign[i] = arg;
      objective += best;
    }
    if (trace) trace->objective.push_back(objective);
    if (assign == prev) break;
    prev = assign;
    std::vector<Point> sums(kk, Point{0, 0, 0});
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int a = 0; a < 3; ++a) sums[assign[i]][a] += pts[i][a];
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < kk; ++c)
      if (counts[c] > 0)
        for (int a = 0; a < 3; ++a) centers[c][a] = sums[c][a] / static_cast<double>(counts[c]);
  }

  std::vector<std::vector<std::uint32_t>> groups(kk);
  for (std::size_t i = 0; i < n; ++i) groups[assign[i]].push_back(static_cast<std::uint32_t>(i));
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

}  // namespace detail

inline std::vector<VehicleCluster> kmeans(const std::vector<Vehicle>& vehicles, std::size_t k,
                                          std::uint64_t seed, std::size_t max_iters = 100,
                                          detail::KmeansTrace* trace = nullptr) {
  auto groups = detail::kmeans_groups(vehicles, k, seed, max_iters, trace);
  std::vector<VehicleCluster> clusters(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    clusters[g].members.reserve(groups[g].size());
    for (std::uint32_t i : groups[g]) clusters[g].members.push_back(vehicles[i]);
  }
  return clusters;
}

inline std::vector<Vehicle> cell_traffic(const TrafficFlow& traffic, CellId cell) {
  if (!traffic.per_cell()) return traffic.vehicles;
  std::vector<Vehicle> out;
  for (std::size_t i = 0; i < traffic.vehicles.size(); ++i)
    if (traffic.cell_of[i] == cell) out.push_back(traffic.vehicles[i]);
  return out;
}

/// Per-cell representation vectors: cluster each cell's flow (the global
/// flow when no per-cell assignment exists) and emit componentwise maxima,
/// ordered by cell id then cluster index. Cells with no vehicles of their
/// own get an empty list.
inline std::vector<std::vector<RepVector>> representation_vectors_all(
    const CellDecomposition& decomp, const TrafficFlow& traffic, std::size_t k,
    std::uint64_t seed) {
  if (traffic.vehicles.empty()) throw InvalidParam("empty traffic flow");
  std::vector<std::vector<RepVector>> out(decomp.cells().size());
  if (!traffic.per_cell()) {
    auto clusters = kmeans(traffic.vehicles, k, seed);
    std::vector<RepVector> rvs;
    rvs.reserve(clusters.size());
    for (const auto& cl : clusters) rvs.push_back(representation_vector(cl));
    for (auto& cell_rvs : out) cell_rvs = rvs;
    return out;
  }
  for (CellId c = 0; c < decomp.cells().size(); ++c) {
    auto vehicles = cell_traffic(traffic, c);
    if (vehicles.empty()) continue;
    auto clusters = kmeans(vehicles, k, mix_seed(seed, c));
    for (const auto& cl : clusters) out[c].push_back(representation_vector(cl));
  }
  return out;
}

}  // namespace trapp
