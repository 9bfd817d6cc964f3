#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "trapp/trapp.hpp"

using namespace trapp;
namespace tt = trapp::testing;

namespace {

double kmeans_objective(const std::vector<Vehicle>& pts, const std::vector<int>& assign, int k) {
  // squared distance to cluster means on raw coordinates
  std::vector<std::array<double, 3>> sum(k, {0, 0, 0});
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sum[assign[i]][0] += pts[i].he;
    sum[assign[i]][1] += pts[i].wi;
    sum[assign[i]][2] += pts[i].wt;
    ++count[assign[i]];
  }
  double obj = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int c = assign[i];
    double dx = pts[i].he - sum[c][0] / count[c];
    double dy = pts[i].wi - sum[c][1] / count[c];
    double dz = pts[i].wt - sum[c][2] / count[c];
    obj += dx * dx + dy * dy + dz * dz;
  }
  return obj;
}

}  // namespace

TEST(Kmeans, SingleClusterHoldsEverything) {
  auto flow = gen_traffic(200, default_vehicle_mix(), 1);
  auto clusters = kmeans(flow.vehicles, 1, 1);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].members.size(), flow.vehicles.size());
}

TEST(Kmeans, RecoversTwoSeparatedMasses) {
  // two tight masses; optimal 2-partition found by brute force must match
  std::vector<Vehicle> pts;
  Rng rng(5);
  for (int i = 0; i < 6; ++i)
    pts.push_back({1.5 + 0.01 * rng.uniform01(), 1.8 + 0.01 * rng.uniform01(),
                   2.0 + 0.01 * rng.uniform01()});
  for (int i = 0; i < 6; ++i)
    pts.push_back({3.9 + 0.01 * rng.uniform01(), 2.8 + 0.01 * rng.uniform01(),
                   30.0 + 0.1 * rng.uniform01()});

  // brute-force optimal 2-partition over all assignments
  double best_obj = -1;
  std::vector<int> best_assign;
  for (int mask = 1; mask < (1 << 12) - 1; ++mask) {
    std::vector<int> assign(12);
    for (int i = 0; i < 12; ++i) assign[i] = (mask >> i) & 1;
    double obj = kmeans_objective(pts, assign, 2);
    if (best_obj < 0 || obj < best_obj) {
      best_obj = obj;
      best_assign = assign;
    }
  }

  auto clusters = kmeans(pts, 2, 3);
  ASSERT_EQ(clusters.size(), 2u);
  // compare as sets of member multisets
  auto low_first = [](const VehicleCluster& c) { return c.members[0].he < 2.5; };
  const auto& low = low_first(clusters[0]) ? clusters[0] : clusters[1];
  const auto& high = low_first(clusters[0]) ? clusters[1] : clusters[0];
  EXPECT_EQ(low.members.size(), 6u);
  EXPECT_EQ(high.members.size(), 6u);
  for (const auto& c : low.members) EXPECT_LT(c.he, 2.5);
  for (const auto& c : high.members) EXPECT_GT(c.he, 2.5);
  // the brute-force optimum separates the same masses
  int flips = 0;
  for (int i = 1; i < 12; ++i)
    if ((best_assign[i] == best_assign[0]) != (i < 6)) ++flips;
  EXPECT_EQ(flips, 0);
}

TEST(Kmeans, IdenticalPointsCollapseToOneCluster) {
  std::vector<Vehicle> pts(40, Vehicle{2.0, 2.0, 5.0});
  auto clusters = kmeans(pts, 5, 9);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].members.size(), 40u);
}

TEST(Kmeans, ObjectiveNonIncreasingAcrossIterations) {
  auto flow = gen_traffic(2000, default_vehicle_mix(), 4);
  detail::KmeansTrace trace;
  (void)kmeans(flow.vehicles, 30, 4, 100, &trace);
  ASSERT_GT(trace.objective.size(), 1u);
  for (std::size_t i = 1; i < trace.objective.size(); ++i)
    EXPECT_LE(trace.objective[i], trace.objective[i - 1] + 1e-9);
}

TEST(Kmeans, DeterministicInSeedAndInput) {
  auto flow = gen_traffic(500, default_vehicle_mix(), 8);
  auto a = kmeans(flow.vehicles, 10, 2);
  auto b = kmeans(flow.vehicles, 10, 2);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].members, b[i].members);
}

TEST(Kmeans, RejectsBadParameters) {
  EXPECT_THROW(kmeans({}, 3, 0), InvalidParam);
  EXPECT_THROW(kmeans({{1, 1, 1}}, 0, 0), InvalidParam);
}

TEST(RepresentationVector, ComponentwiseMaxByHand) {
  VehicleCluster cluster{{{1.5, 1.8, 1.6}, {1.7, 1.7, 2.0}}};
  auto rv = representation_vector(cluster);
  EXPECT_EQ(rv.he, 1.7);
  EXPECT_EQ(rv.wi, 1.8);
  EXPECT_EQ(rv.wt, 2.0);
}

TEST(RepresentationVector, SingletonIsItself) {
  VehicleCluster cluster{{{2.5, 2.0, 3.5}}};
  auto rv = representation_vector(cluster);
  EXPECT_EQ(rv.he, 2.5);
  EXPECT_EQ(rv.wi, 2.0);
  EXPECT_EQ(rv.wt, 3.5);
}

TEST(RepresentationVector, EqualsIndependentFold) {
  auto flow = gen_traffic(50, default_vehicle_mix(), 6);
  VehicleCluster cluster{flow.vehicles};
  auto rv = representation_vector(cluster);
  double he = 0, wi = 0, wt = 0;
  for (const auto& c : flow.vehicles) {
    he = std::max(he, c.he);
    wi = std::max(wi, c.wi);
    wt = std::max(wt, c.wt);
  }
  EXPECT_EQ(rv.he, he);
  EXPECT_EQ(rv.wi, wi);
  EXPECT_EQ(rv.wt, wt);
}

TEST(RepresentationVector, DominatesEveryMember) {
  // coverage guarantee behind the whole filtering scheme
  auto flow = gen_traffic(3000, default_vehicle_mix(), 7);
  auto clusters = kmeans(flow.vehicles, 30, 7);
  std::size_t members = 0;
  for (const auto& cl : clusters) {
    auto rv = representation_vector(cl);
    LimitTriple rc{rv.he, rv.wi, rv.wt};
    for (const auto& c : cl.members) EXPECT_TRUE(dominates(c, rc));
    members += cl.members.size();
  }
  EXPECT_EQ(members, flow.vehicles.size());
}

TEST(RepresentationVectorsAll, GlobalFlowSharedAcrossCells) {
  auto net = gen_network(200, 4.4, 3);
  auto decomp = partition(net, 32, 3);
  auto traffic = gen_traffic(400, default_vehicle_mix(), 3);
  auto rvs = representation_vectors_all(decomp, traffic, 1, 3);
  ASSERT_EQ(rvs.size(), decomp.cells().size());
  // K=1: every cell sees the single global componentwise max
  auto global = representation_vector(VehicleCluster{traffic.vehicles});
  for (const auto& cell_rvs : rvs) {
    ASSERT_EQ(cell_rvs.size(), 1u);
    EXPECT_EQ(cell_rvs[0].he, global.he);
    EXPECT_EQ(cell_rvs[0].wi, global.wi);
    EXPECT_EQ(cell_rvs[0].wt, global.wt);
  }
}

TEST(RepresentationVectorsAll, PerCellFlowsClusterIndependently) {
  auto net = tt::demo_network();
  auto decomp = tt::demo_decomposition(net);
  TrafficFlow traffic;
  traffic.vehicles = {{1.5, 1.8, 1.6}, {1.6, 1.7, 1.8}, {3.5, 2.4, 12.0}, {3.2, 2.3, 11.0}};
  traffic.cell_of = {0, 0, 1, 1};
  auto rvs = representation_vectors_all(decomp, traffic, 2, 1);
  ASSERT_EQ(rvs.size(), 3u);
  // cell 0 only sees the two small vehicles
  for (const auto& rv : rvs[0]) EXPECT_LE(rv.he, 1.6);
  // cell 1 only sees the two trucks
  for (const auto& rv : rvs[1]) EXPECT_GE(rv.he, 3.2);
  // cell 2 has no traffic of its own
  EXPECT_TRUE(rvs[2].empty());
  // manual per-cell clustering agrees for cell 1
  auto manual = kmeans(cell_traffic(traffic, 1), 2, mix_seed(1, 1));
  std::size_t total = 0;
  for (const auto& cl : manual) total += cl.members.size();
  EXPECT_EQ(total, 2u);
}

TEST(RepresentationVectorsAll, CapAtK) {
  auto net = gen_network(100, 4.4, 2);
  auto decomp = partition(net, 25, 2);
  auto traffic = gen_traffic(10000, default_vehicle_mix(), 5);
  auto rvs = representation_vectors_all(decomp, traffic, 30, 5);
  for (const auto& cell_rvs : rvs) EXPECT_LE(cell_rvs.size(), 30u);
}
