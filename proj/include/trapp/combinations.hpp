#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "trapp/clustering.hpp"
#include "trapp/graph.hpp"
#include "trapp/partition.hpp"
#include "trapp/rng.hpp"
#include "trapp/types.hpp"

namespace trapp {

/// Distinct limit values occurring on a cell's edges, per type, sorted
/// ascending. kNoLimit appears as the last value of a type exactly when
/// some cell edge carries no limit of that type.
struct RestrictionCatalog {
  std::vector<double> he;
  std::vector<double> wi;
  std::vector<double> wt;
};

/// Deduplicated restriction combinations, kept sorted lexicographically.
using CombinationSet = std::vector<LimitTriple>;

inline void sort_unique(CombinationSet& set) {
  std::sort(set.begin(), set.end(), lex_less);
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

inline RestrictionCatalog collect_catalog(const RoadNetwork& net, const Cell& cell) {
  RestrictionCatalog cat;
  bool open_he = false, open_wi = false, open_wt = false;
  for (EdgeId id : cell.edges) {
    const LimitTriple& lim = net.edge(id).limits;
    if (lim.he == kNoLimit) open_he = true; else cat.he.push_back(lim.he);
    if (lim.wi == kNoLimit) open_wi = true; else cat.wi.push_back(lim.wi);
    if (lim.wt == kNoLimit) open_wt = true; else cat.wt.push_back(lim.wt);
  }
  auto finish = [](std::vector<double>& vals, bool open) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (open || vals.empty()) vals.push_back(kNoLimit);
  };
  finish(cat.he, open_he);
  finish(cat.wi, open_wi);
  finish(cat.wt, open_wt);
  return cat;
}

namespace detail {

/// Nearest finite catalog value by absolute difference; ties take the
/// larger value (it dominates strictly more vehicles). Falls back to
/// kNoLimit when the type has no finite values at all.
inline double nearest_value(double x, const std::vector<double>& values) {
  std::size_t finite = values.size();
  while (finite > 0 && values[finite - 1] == kNoLimit) --finite;
  if (finite == 0) return kNoLimit;
  auto end = values.begin() + static_cast<std::ptrdiff_t>(finite);
  auto it = std::lower_bound(values.begin(), end, x);
  if (it == end) return *(end - 1);
  if (it == values.begin()) return *it;
  double hi = *it, lo = *(it - 1);
  return (x - lo) < (hi - x) ? lo : hi;
}

}  // namespace detail

/// Mapping of a representation vector onto real cell restrictions: each
/// attribute independently snaps to the nearest catalog value.
inline LimitTriple map_vector(const RepVector& rv, const RestrictionCatalog& cat) {
  return {detail::nearest_value(rv.he, cat.he), detail::nearest_value(rv.wi, cat.wi),
          detail::nearest_value(rv.wt, cat.wt)};
}

/// Map every cell's representation vectors and deduplicate.
inline std::vector<CombinationSet> refine_all(const std::vector<std::vector<RepVector>>& rvs,
                                              const std::vector<RestrictionCatalog>& catalogs) {
  if (rvs.size() != catalogs.size()) throw InvalidParam("cell count mismatch");
  std::vector<CombinationSet> out(rvs.size());
  for (std::size_t c = 0; c < rvs.size(); ++c) {
    for (const RepVector& rv : rvs[c]) out[c].push_back(map_vector(rv, catalogs[c]));
    sort_unique(out[c]);
  }
  return out;
}

/// Benefit of a candidate combination: how many vehicles it would dominate
/// that no componentwise-smaller (or equal) existing combination already
/// dominates.
inline std::size_t theta(const LimitTriple& rc, const CombinationSet& existing,
                         const std::vector<Vehicle>& vehicles) {
  std::size_t count = 0;
  for (const Vehicle& c : vehicles) {
    if (!dominates(c, rc)) continue;
    bool covered = false;
    for (const LimitTriple& other : existing) {
      if (componentwise_le(other, rc) && dominates(c, other)) {
        covered = true;
        break;
      }
    }
    if (!covered) ++count;
  }
  return count;
}

/// Combination rematch: swap one attribute of an existing combination with
/// a value one or two sorted positions away (among the attribute values the
/// set already uses) and keep the recombination when it newly serves at
/// least f * |vehicles| of the flow. Works on a snapshot of the input, so
/// additions never cascade.
inline CombinationSet rematch(const CombinationSet& input, const std::vector<Vehicle>& vehicles,
                              double f, const RestrictionCatalog& catalog) {
  (void)catalog;  // values are recombined from the set itself
  if (f < 0 || f > 1) throw InvalidParam("f outside [0,1]");
  CombinationSet snapshot = input;
  sort_unique(snapshot);
  const double threshold = f * static_cast<double>(vehicles.size());

  std::array<std::vector<double>, 3> values;
  for (const LimitTriple& rc : snapshot) {
    values[0].push_back(rc.he);
    values[1].push_back(rc.wi);
    values[2].push_back(rc.wt);
  }
  for (auto& vals : values) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  }
  auto component = [](LimitTriple& rc, int t) -> double& {
    return t == 0 ? rc.he : t == 1 ? rc.wi : rc.wt;
  };

  CombinationSet result = snapshot;
  for (const LimitTriple& rc : snapshot) {
    for (int t = 0; t < 3; ++t) {
      const auto& vals = values[t];
      LimitTriple probe = rc;
      auto pos = static_cast<std::size_t>(
          std::lower_bound(vals.begin(), vals.end(), component(probe, t)) - vals.begin());
      for (std::size_t step = 1; step <= 2; ++step) {
        for (int dir : {+1, -1}) {
          std::ptrdiff_t at = static_cast<std::ptrdiff_t>(pos) +
                              dir * static_cast<std::ptrdiff_t>(step);
          if (at < 0 || at >= static_cast<std::ptrdiff_t>(vals.size())) continue;
          LimitTriple candidate = rc;
          component(candidate, t) = vals[static_cast<std::size_t>(at)];
          if (static_cast<double>(theta(candidate, snapshot, vehicles)) >= threshold)
            result.push_back(candidate);
        }
      }
    }
  }
  sort_unique(result);
  return result;
}

/// Full cross product of the catalog: the All baseline.
inline CombinationSet all_combinations(const RestrictionCatalog& cat) {
  CombinationSet out;
  out.reserve(cat.he.size() * cat.wi.size() * cat.wt.size());
  for (double he : cat.he)
    for (double wi : cat.wi)
      for (double wt : cat.wt) out.push_back({he, wi, wt});
  sort_unique(out);
  return out;
}

/// Uniform sample without replacement from the full cross product: the
/// Random baseline.
inline CombinationSet random_combinations(const RestrictionCatalog& cat, std::size_t budget,
                                          std::uint64_t seed) {
  CombinationSet all = all_combinations(cat);
  Rng rng(mix_seed(seed, 0x726e64));
  std::size_t take = std::min(budget, all.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + rng.uniform_below(all.size() - i);
    std::swap(all[i], all[j]);
  }
  all.resize(take);
  sort_unique(all);
  return all;
}

}  // namespace trapp
