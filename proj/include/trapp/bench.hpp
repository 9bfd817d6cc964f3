#pragma once

#include <map>
#include <string>
#include <vector>

#include "trapp/clustering.hpp"
#include "trapp/combinations.hpp"
#include "trapp/datagen.hpp"
#include "trapp/overlay.hpp"
#include "trapp/shortcuts.hpp"

namespace trapp {

/// Aggregated evaluation of one strategy over one query set. Counts are
/// pure functions of the inputs; only mean_query_time_us varies run to run.
struct Metrics {
  std::string strategy;
  std::uint64_t seed = 0;
  std::uint64_t k = 0;
  double f = 0;
  std::int64_t random_budget = -1;
  std::uint64_t n_queries = 0;
  std::uint64_t n_optimal = 0;
  std::uint64_t n_suboptimal = 0;
  std::uint64_t n_failures = 0;    // overlay failed, oracle succeeded
  std::uint64_t n_infeasible = 0;  // no feasible path exists at all
  double mean_error_rate = 0;      // over successful overlay queries
  double failure_rate = 0;
  double optimal_proportion = 0;
  std::uint64_t total_entries = 0;
  std::uint64_t distinct_paths = 0;
  double mean_entries_per_shortcut = 0;
  double mean_scanned_entries = 0;  // per match() call
  double mean_query_time_us = 0;
};

struct QueryRecord {
  Query query;
  Distance distance = kUnreachable;
  Distance oracle_distance = kUnreachable;
  PlanStatus status = PlanStatus::no_path;
  std::uint64_t scanned_entries = 0;
  std::uint64_t match_calls = 0;
  double plan_us = 0;
  double oracle_us = 0;
};

struct EvalOptions {
  bool warmup = false;          // run every query once untimed first
  bool verify_matches = false;  // cross-check match() against a full scan
  bool check_soundness = true;  // recompute path feasibility and distance
};

namespace detail {

inline double us(std::int64_t ns) { return static_cast<double>(ns) / 1000.0; }

}  // namespace detail

/// Replay a query set against one index (nullptr = plain restricted
/// Dijkstra) and aggregate the evaluation metrics. Every query also runs
/// the exact oracle as the error/optimality baseline.
inline Metrics evaluate(const RoadNetwork& net, const CellDecomposition& decomp,
                        const ShortcutIndex* index, const QuerySet& queries,
                        const EvalOptions& options = {},
                        std::vector<QueryRecord>* detail_out = nullptr) {
  Metrics m;
  m.n_queries = queries.queries.size();
  DijkstraWorkspace oracle_ws;
  std::optional<QueryEngine> engine;
  if (index) {
    engine.emplace(net, decomp, *index, options.verify_matches);
    auto st = index->storage_stats();
    m.strategy = index->meta.strategy;
    m.k = index->meta.k;
    m.f = index->meta.f;
    m.random_budget = index->meta.random_budget;
    m.seed = index->meta.build_seed;
    m.total_entries = st.total_entries;
    m.distinct_paths = st.distinct_paths;
    m.mean_entries_per_shortcut =
        index->shortcuts.empty()
            ? 0
            : static_cast<double>(st.total_entries) / static_cast<double>(index->shortcuts.size());
  } else {
    m.strategy = "dijkstra";
  }

  if (options.warmup) {
    for (const Query& q : queries.queries) {
      if (engine) {
        (void)engine->plan(q);
      } else {
        (void)restricted_dijkstra(net, q.s, q.d, q.vehicle, oracle_ws);
      }
    }
  }

  long double time_us_sum = 0;
  long double delta_sum = 0;
  std::uint64_t delta_count = 0;
  std::uint64_t scanned_sum = 0, calls_sum = 0;

  for (const Query& q : queries.queries) {
    QueryRecord rec;
    rec.query = q;

    QueryResult r;
    if (engine) {
      r = engine->plan(q);
      rec.plan_us = detail::us(r.overlay_ns + r.fallback_ns);
    } else {
      auto t0 = std::chrono::steady_clock::now();
      auto path = restricted_dijkstra(net, q.s, q.d, q.vehicle, oracle_ws);
      rec.plan_us = detail::us(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count());
      if (path) {
        r.distance = path->distance;
        r.path = std::move(path);
        r.status = PlanStatus::overlay;
      } else {
        r.status = PlanStatus::no_path;
      }
    }
    time_us_sum += rec.plan_us;
    scanned_sum += r.scanned_entries;
    calls_sum += r.match_calls;
    rec.status = r.status;
    rec.distance = r.distance;
    rec.scanned_entries = r.scanned_entries;
    rec.match_calls = r.match_calls;

    auto t1 = std::chrono::steady_clock::now();
    auto oracle_path = restricted_dijkstra(net, q.s, q.d, q.vehicle, oracle_ws);
    rec.oracle_us = detail::us(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                   std::chrono::steady_clock::now() - t1)
                                   .count());
    rec.oracle_distance = oracle_path ? oracle_path->distance : kUnreachable;

    if (options.check_soundness && r.path) {
      if (!path_feasible(*r.path, q.vehicle, net))
        throw Error("planned path infeasible for its vehicle");
      if (path_distance(*r.path, net) != r.distance)
        throw Error("planned path distance mismatch");
      if (oracle_path && r.distance < oracle_path->distance)
        throw Error("planned path shorter than the exact oracle");
      if (!oracle_path)
        throw Error("planned path exists where the oracle finds none");
    }

    switch (r.status) {
      case PlanStatus::overlay:
        if (oracle_path) {
          double delta = static_cast<double>(r.distance - oracle_path->distance) /
                         static_cast<double>(oracle_path->distance);
          delta_sum += delta;
          ++delta_count;
          if (r.distance == oracle_path->distance) ++m.n_optimal;
          else ++m.n_suboptimal;
        }
        break;
      case PlanStatus::fallback:
        ++m.n_failures;
        break;
      case PlanStatus::no_path:
        ++m.n_infeasible;
        break;
    }
    if (detail_out) detail_out->push_back(std::move(rec));
  }

  if (m.n_queries > 0) {
    m.failure_rate = static_cast<double>(m.n_failures) / static_cast<double>(m.n_queries);
    m.optimal_proportion = static_cast<double>(m.n_optimal) / static_cast<double>(m.n_queries);
    m.mean_query_time_us = static_cast<double>(time_us_sum / m.n_queries);
  }
  if (delta_count > 0) m.mean_error_rate = static_cast<double>(delta_sum / delta_count);
  if (calls_sum > 0)
    m.mean_scanned_entries = static_cast<double>(scanned_sum) / static_cast<double>(calls_sum);
  return m;
}

struct BuildParams {
  std::string strategy = "trapp";  // trapp | all | random
  std::uint64_t k = 30;
  double f = 0.03;
  std::int64_t random_budget = -1;  // <0: match per-cell TRAPP combo counts
  std::uint64_t seed = 0;
  std::uint32_t target_cell_size = 0;  // recorded in meta
  std::uint64_t partition_seed = 0;    // recorded in meta
};

/// Per-cell combination sets for the TRAPP pipeline: cluster, map onto each
/// cell's catalog, rematch. Identical (combinations, catalog) cells reuse
/// one rematch result, which matters when the flow is global.
inline std::vector<CombinationSet> trapp_combinations(const RoadNetwork& net,
                                                      const CellDecomposition& decomp,
                                                      const TrafficFlow& traffic,
                                                      std::uint64_t k, double f,
                                                      std::uint64_t seed,
                                                      std::vector<RestrictionCatalog>* catalogs_out
                                                      = nullptr) {
  std::vector<RestrictionCatalog> catalogs;
  catalogs.reserve(decomp.cells().size());
  for (const Cell& cell : decomp.cells()) catalogs.push_back(collect_catalog(net, cell));
  auto rvs = representation_vectors_all(decomp, traffic, k, seed);
  auto refined = refine_all(rvs, catalogs);

  struct SetLess {
    bool operator()(const CombinationSet& a, const CombinationSet& b) const {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), lex_less);
    }
  };
  std::map<CombinationSet, CombinationSet, SetLess> memo;
  std::vector<CombinationSet> result(decomp.cells().size());
  for (CellId c = 0; c < decomp.cells().size(); ++c) {
    if (refined[c].empty()) continue;
    if (!traffic.per_cell()) {
      auto it = memo.find(refined[c]);
      if (it != memo.end()) {
        result[c] = it->second;
        continue;
      }
    }
    auto vehicles = cell_traffic(traffic, c);
    result[c] = rematch(refined[c], vehicles, f, catalogs[c]);
    if (!traffic.per_cell()) memo.emplace(refined[c], result[c]);
  }
  if (catalogs_out) *catalogs_out = std::move(catalogs);
  return result;
}

inline ShortcutIndex build_strategy_index(const RoadNetwork& net, const CellDecomposition& decomp,
                                          const TrafficFlow& traffic, const BuildParams& params,
                                          const std::vector<std::size_t>* random_budgets = nullptr) {
  IndexMeta meta;
  meta.strategy = params.strategy;
  meta.k = params.k;
  meta.f = params.f;
  meta.random_budget = params.random_budget;
  meta.build_seed = params.seed;
  meta.target_cell_size = params.target_cell_size;
  meta.partition_seed = params.partition_seed;

  std::vector<CombinationSet> combos(decomp.cells().size());
  if (params.strategy == "trapp") {
    combos = trapp_combinations(net, decomp, traffic, params.k, params.f, params.seed);
  } else if (params.strategy == "all") {
    for (CellId c = 0; c < decomp.cells().size(); ++c)
      combos[c] = all_combinations(collect_catalog(net, decomp.cell(c)));
  } else if (params.strategy == "random") {
    for (CellId c = 0; c < decomp.cells().size(); ++c) {
      std::size_t budget;
      if (random_budgets) budget = (*random_budgets)[c];
      else if (params.random_budget >= 0) budget = static_cast<std::size_t>(params.random_budget);
      else throw InvalidParam("random strategy needs a budget");
      combos[c] = random_combinations(collect_catalog(net, decomp.cell(c)), budget,
                                      mix_seed(params.seed, c));
    }
  } else {
    throw InvalidParam("unknown strategy '" + params.strategy + "'");
  }
  return build_index(net, decomp, combos, std::move(meta));
}

struct CompareResult {
  std::vector<Metrics> rows;
  std::vector<std::vector<QueryRecord>> details;  // aligned with rows
};

/// One Metrics row per strategy over identical inputs. strategy "random"
/// with budget < 0 mirrors TRAPP's realized per-cell combination counts.
inline CompareResult compare(const RoadNetwork& net, const CellDecomposition& decomp,
                             const TrafficFlow& traffic, const QuerySet& queries,
                             const std::vector<std::string>& strategies, BuildParams base,
                             const EvalOptions& options = {}) {
  if (strategies.empty()) throw InvalidParam("no strategies given");
  CompareResult out;
  std::vector<std::size_t> trapp_budgets;
  bool need_budgets = base.random_budget < 0;
  for (const auto& s : strategies)
    if (s == "random" && need_budgets && trapp_budgets.empty()) {
      auto combos = trapp_combinations(net, decomp, traffic, base.k, base.f, base.seed);
      trapp_budgets.reserve(combos.size());
      for (const auto& cs : combos) trapp_budgets.push_back(cs.size());
    }
  for (const auto& s : strategies) {
    out.details.emplace_back();
    if (s == "dijkstra") {
      out.rows.push_back(evaluate(net, decomp, nullptr, queries, options, &out.details.back()));
      out.rows.back().seed = base.seed;
      continue;
    }
    BuildParams p = base;
    p.strategy = s;
    ShortcutIndex index =
        build_strategy_index(net, decomp, traffic, p,
                             (s == "random" && need_budgets) ? &trapp_budgets : nullptr);
    out.rows.push_back(evaluate(net, decomp, &index, queries, options, &out.details.back()));
  }
  return out;
}

/// CSV: one row per strategy; the timing column sits last so byte-level
/// comparisons can strip it.
inline std::string metrics_csv(const std::vector<Metrics>& rows) {
  std::string out =
      "strategy,seed,k,f,random_budget,n_queries,total_entries,distinct_paths,"
      "mean_entries_per_shortcut,mean_scanned_entries,failure_rate,mean_error_rate,"
      "optimal_proportion,n_optimal,n_suboptimal,n_failures,n_infeasible,mean_query_time_us\n";
  for (const auto& m : rows) {
    out += m.strategy;
    out += ',';
    out += std::to_string(m.seed);
    out += ',';
    out += std::to_string(m.k);
    out += ',';
    out += fmt_double(m.f);
    out += ',';
    out += std::to_string(m.random_budget);
    out += ',';
    out += std::to_string(m.n_queries);
    out += ',';
    out += std::to_string(m.total_entries);
    out += ',';
    out += std::to_string(m.distinct_paths);
    out += ',';
    out += fmt_double(m.mean_entries_per_shortcut);
    out += ',';
    out += fmt_double(m.mean_scanned_entries);
    out += ',';
    out += fmt_double(m.failure_rate);
    out += ',';
    out += fmt_double(m.mean_error_rate);
    out += ',';
    out += fmt_double(m.optimal_proportion);
    out += ',';
    out += std::to_string(m.n_optimal);
    out += ',';
    out += std::to_string(m.n_suboptimal);
    out += ',';
    out += std::to_string(m.n_failures);
    out += ',';
    out += std::to_string(m.n_infeasible);
    out += ',';
    out += fmt_double(m.mean_query_time_us);
    out += '\n';
  }
  return out;
}

}  // namespace trapp
