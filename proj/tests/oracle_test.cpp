#include <limits>

#include <gtest/gtest.h>

#include "dbfs/engine.hpp"
#include "dbfs/errors.hpp"
#include "dbfs/oracle.hpp"
#include "dbfs/partitioner.hpp"
#include "test_graphs.hpp"

namespace dbfs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(OracleDistribute, NormalSource) {
  const std::vector<std::uint64_t> deg(20, 1);
  const auto home = oracle::distribute({13, 2}, deg, 4, {3, 2});
  EXPECT_EQ(home.rank, 13u % 3);
  EXPECT_EQ(home.gpu, (13u / 3) % 2);
  EXPECT_EQ(home.kind, SubgraphKind::nn);
}

TEST(OracleDistribute, EqualDegreeDelegatesUseMin) {
  std::vector<std::uint64_t> deg(20, 1);
  deg[11] = 9;
  deg[5] = 9;
  const auto home = oracle::distribute({11, 5}, deg, 4, {4, 3});
  EXPECT_EQ(home.rank, 5u % 4);
  EXPECT_EQ(home.gpu, (5u / 4) % 3);
  EXPECT_EQ(home.kind, SubgraphKind::dd);
}

TEST(OracleDobfs, ForcedForwardCountsIncidentEdges) {
  const EdgeList g = testing::rmat(10, 3);
  const DegreeTable deg = compute_out_degrees(g);
  for (VertexId s : random_sources(g.n, 5, 4)) {
    const auto levels = oracle::reference_bfs(g, s);
    std::uint64_t expect = 0;
    for (VertexId v = 0; v < g.n; ++v) {
      if (levels[v] != kUnreached) expect += deg[v];
    }
    EXPECT_EQ(oracle::dobfs_inspections(g, s, {kInf, 0.0}), expect);
  }
}

TEST(OracleDobfs, StarLeavesInspectOneParent) {
  // Source leaf 1; the second iteration runs backward and each of the other
  // nine leaves finds the center on its first and only parent.
  const EdgeList g = testing::star(10);
  EXPECT_EQ(oracle::dobfs_inspections(g, 1, {0.1, 0.0}), 1u + 9u);
  EXPECT_EQ(oracle::dobfs_inspections(g, 1, {kInf, 0.0}), 20u);
}

TEST(OracleDobfs, Scale10WorkloadBound) {
  const EdgeList g = testing::rmat(10, 7);
  const PartitionedGraph pg = partition_graph(g, 16, {2, 2});
  for (VertexId s : random_sources(g.n, 5, 6)) {
    BfsOptions o;
    o.source = s;
    const BfsRun run = run_bfs(pg, o);
    const double m_prime = static_cast<double>(oracle::dobfs_inspections(g, s, 16, default_direction_factors()));
    const double dpb = double(pg.d()) * pg.shape.workers() * run.delegate_parent_checks;
    EXPECT_LE(double(run.inspections.total()), m_prime + dpb + 1e-6) << "source " << s;
  }
}

TEST(OracleDobfs, PerKindForcedForwardCountsIncidentEdges) {
  const EdgeList g = testing::rmat(10, 3);
  const DegreeTable deg = compute_out_degrees(g);
  std::array<DirectionFactors, kDoKinds> push{};
  for (auto& f : push) f = {kInf, 0.0};
  for (VertexId s : random_sources(g.n, 5, 4)) {
    const auto levels = oracle::reference_bfs(g, s);
    std::uint64_t expect = 0;
    for (VertexId v = 0; v < g.n; ++v) {
      if (levels[v] != kUnreached) expect += deg[v];
    }
    EXPECT_EQ(oracle::dobfs_inspections(g, s, 16, push), expect);
  }
}

TEST(OracleBounds, RefusesHugeGraphs) {
  EdgeList g;
  g.n = oracle::kMaxVertices + 1;
  EXPECT_THROW(oracle::reference_bfs(g, 0), ResourceError);
}

TEST(SameMultiset, CountsMultiplicity) {
  EXPECT_TRUE(oracle::same_multiset({{0, 1}, {0, 1}, {2, 3}}, {{2, 3}, {0, 1}, {0, 1}}));
  EXPECT_FALSE(oracle::same_multiset({{0, 1}, {0, 1}}, {{0, 1}}));
}

}  // namespace
}  // namespace dbfs
