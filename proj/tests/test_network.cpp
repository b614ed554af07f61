#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "epicon/network.hpp"

using namespace epicon;

namespace {

// 4-cycle 0-1-2-3-0.
Graph cycle4() { return Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }

std::vector<bool> mask(std::size_t n, std::initializer_list<NodeId> on) {
  std::vector<bool> m(n, false);
  for (NodeId i : on) m[i] = true;
  return m;
}

}  // namespace

TEST(Graph, FromEdges) {
  const Graph g = cycle4();
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(g.in_neighbors(0), (std::vector<NodeId>{1, 3}));
  EXPECT_THROW(Graph::from_edges(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), std::invalid_argument);
}

TEST(Graph, MinDegree) {
  EXPECT_EQ(min_degree(Graph::complete(6)), 5u);
  const Graph star = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(min_degree(star), 1u);
  EXPECT_EQ(star.degree(0), 3u);
}

TEST(Rgg, LargeRadiusIsComplete) {
  const Graph g = generate_rgg(200, 100.0, 150.0, 3);
  EXPECT_EQ(min_degree(g), 199u);
  EXPECT_EQ(g.edge_count(), 200u * 199u / 2u);
}

TEST(Rgg, SingleNode) {
  const Graph g = generate_rgg(1, 100.0, 50.0, 3);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.isolated_count(), 1u);
}

TEST(Rgg, MatchesPairwiseDistances) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = generate_rgg(150, 100.0, 30.0, seed);
    const auto& pos = g.positions();
    ASSERT_EQ(pos.size(), 150u);
    std::size_t dmin = 1000;
    for (NodeId i = 0; i < 150; ++i) {
      EXPECT_GE(pos[i].x, 0.0);
      EXPECT_LE(pos[i].x, 100.0);
      std::size_t d = 0;
      for (NodeId j = 0; j < 150; ++j) {
        if (i == j) continue;
        const bool close = std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y) <= 30.0;
        EXPECT_EQ(g.has_edge(j, i), close);
        EXPECT_EQ(g.has_edge(i, j), g.has_edge(j, i));
        d += close ? 1 : 0;
      }
      EXPECT_EQ(g.degree(i), d);
      dmin = std::min(dmin, d);
    }
    EXPECT_EQ(min_degree(g), dmin);
  }
}

TEST(Rgg, Deterministic) {
  const Graph a = generate_rgg(80, 100.0, 40.0, 9);
  const Graph b = generate_rgg(80, 100.0, 40.0, 9);
  const Graph c = generate_rgg(80, 100.0, 40.0, 10);
  std::ostringstream sa, sb, sc;
  write_edge_list(sa, a);
  write_edge_list(sb, b);
  write_edge_list(sc, c);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str(), sc.str());
}

TEST(EdgeList, RoundTrip) {
  const Graph g = generate_rgg(40, 100.0, 35.0, 4);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream in(out.str());
  const Graph back = read_edge_list(in);
  EXPECT_EQ(back.size(), g.size());
  EXPECT_EQ(back.seed(), g.seed());
  EXPECT_EQ(back.radius(), g.radius());
  for (NodeId i = 0; i < g.size(); ++i) {
    EXPECT_EQ(back.in_neighbors(i), g.in_neighbors(i));
    EXPECT_EQ(back.positions()[i].x, g.positions()[i].x);
    EXPECT_EQ(back.positions()[i].y, g.positions()[i].y);
  }
  std::ostringstream again;
  write_edge_list(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(EdgeList, Malformed) {
  std::istringstream bad("3 100 50\n");
  EXPECT_ANY_THROW(read_edge_list(bad));
}

TEST(Partition, SingleGroup) {
  const Graph g = Graph::complete(7);
  const Partition p = partition_nodes(g, 1, PartitionMode::IndexSplit, 1);
  EXPECT_EQ(p.count(), 1u);
  EXPECT_EQ(p.members(0).size(), 7u);
}

TEST(Partition, BalancedHalves) {
  const Graph g = generate_rgg(1000, 100.0, 10.0, 1);
  const Partition p = partition_nodes(g, 2, PartitionMode::IndexSplit, 5);
  EXPECT_EQ(p.members(0).size(), 500u);
  EXPECT_EQ(p.members(1).size(), 500u);
  const Partition q = partition_nodes(g, 3, PartitionMode::IndexSplit, 5);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_GE(q.members(s).size(), 333u);
    EXPECT_LE(q.members(s).size(), 334u);
  }
}

TEST(Partition, SpatialLeftHalfFirst) {
  const Graph g = generate_rgg(100, 100.0, 10.0, 2);
  const Partition p = partition_nodes(g, 2, PartitionMode::Spatial, 0);
  double left_max = -1.0, right_min = 1e9;
  for (NodeId i : p.members(0)) left_max = std::max(left_max, g.positions()[i].x);
  for (NodeId i : p.members(1)) right_min = std::min(right_min, g.positions()[i].x);
  EXPECT_LE(left_max, right_min);
}

TEST(Partition, Errors) {
  const Graph g = Graph::complete(3);
  EXPECT_THROW(partition_nodes(g, 0, PartitionMode::IndexSplit, 1), std::invalid_argument);
  EXPECT_THROW(partition_nodes(g, 4, PartitionMode::IndexSplit, 1), std::invalid_argument);
}

TEST(LocalRatio, HandCount) {
  const Graph g = cycle4();
  const Partition p(2, {0, 0, 1, 1}, PartitionMode::IndexSplit);
  EXPECT_DOUBLE_EQ(local_infection_ratio(g, p, mask(4, {2}), 0), 0.25);
  EXPECT_EQ(local_infection_ratio(g, p, mask(4, {}), 0), 0.0);
  EXPECT_EQ(local_infection_ratio(g, p, mask(4, {0, 1, 2, 3}), 1), 1.0);
}

TEST(LocalRatio, EmptyUnionIsZero) {
  const Graph g = Graph::from_edges(3, {{0, 1}});
  const Partition p(2, {0, 0, 1}, PartitionMode::IndexSplit);
  EXPECT_EQ(local_infection_ratio(g, p, mask(3, {0, 1, 2}), 1), 0.0);
}

TEST(LocalRatio, MonotoneInInfectedSet) {
  std::mt19937_64 rng(3);
  const Graph g = generate_rgg(60, 100.0, 30.0, 8);
  const Partition p = partition_nodes(g, 3, PartitionMode::IndexSplit, 8);
  std::vector<bool> infected(60, false);
  std::vector<double> prev(3, 0.0);
  std::vector<NodeId> order(60);
  for (NodeId i = 0; i < 60; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (NodeId i : order) {
    infected[i] = true;
    for (std::size_t s = 0; s < 3; ++s) {
      const double r = local_infection_ratio(g, p, infected, s);
      EXPECT_GE(r, prev[s]);
      prev[s] = r;
    }
  }
}

TEST(Heterogeneity, MaxDeviation) {
  const Graph g = cycle4();
  const Partition p(2, {0, 0, 1, 1}, PartitionMode::IndexSplit);
  const auto infected = mask(4, {2});
  const double global = 0.25;
  double want = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    want = std::max(want, std::abs(local_infection_ratio(g, p, infected, s) - global));
  }
  EXPECT_DOUBLE_EQ(heterogeneity(g, p, infected), want);
}

TEST(Homogeneity, NoInfectionPasses) {
  const Graph g = generate_rgg(50, 100.0, 30.0, 1);
  const Partition p = partition_nodes(g, 2, PartitionMode::IndexSplit, 1);
  const auto r = homogeneity_check(g, p, std::vector<bool>(50, false));
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.worst_ratio, 0.0);
}

TEST(Homogeneity, SingletonGroupsAlwaysPass) {
  const Graph g = generate_rgg(30, 100.0, 40.0, 6);
  std::vector<std::uint32_t> own(30);
  for (std::uint32_t i = 0; i < 30; ++i) own[i] = i;
  const Partition p(30, own, PartitionMode::IndexSplit);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<bool> infected(30);
    for (std::size_t i = 0; i < 30; ++i) infected[i] = rng() % 3 == 0;
    EXPECT_EQ(homogeneity_check(g, p, infected).violations, 0u);
  }
}

TEST(Homogeneity, GatheredInfectionViolates) {
  const Graph g = generate_rgg(100, 100.0, 30.0, 12);
  const Partition p = partition_nodes(g, 2, PartitionMode::IndexSplit, 12);
  // Infect the left strip only: neighbors of the strip see far more than
  // their subgroup's average.
  std::vector<bool> infected(100, false);
  for (NodeId i = 0; i < 100; ++i) infected[i] = g.positions()[i].x < 15.0;
  const auto r = homogeneity_check(g, p, infected);
  EXPECT_GT(r.violations, 0u);
  EXPECT_GT(r.worst_ratio, 1.0);
}
