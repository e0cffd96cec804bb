#include <cmath>

#include <gtest/gtest.h>

#include "dbfs/engine.hpp"
#include "dbfs/errors.hpp"
#include "dbfs/oracle.hpp"
#include "dbfs/report.hpp"
#include "test_graphs.hpp"

namespace dbfs {
namespace {

BfsOptions options(Mode mode, VertexId source) {
  BfsOptions o;
  o.mode = mode;
  o.source = source;
  return o;
}

TEST(ReferenceBfs, Path) {
  const EdgeList g = testing::undirected(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(oracle::reference_bfs(g, 0), (std::vector<Level>{0, 1, 2}));
}

TEST(ReferenceBfs, DisconnectedVertex) {
  const EdgeList g = testing::undirected(3, {{0, 1}});
  EXPECT_EQ(oracle::reference_bfs(g, 0)[2], kUnreached);
}

TEST(ReferenceBfs, TriangleWithPendant) {
  // Triangle 0-1-2, pendant 3 on vertex 2, source 3.
  const EdgeList g = testing::undirected(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  EXPECT_EQ(oracle::reference_bfs(g, 3), (std::vector<Level>{2, 2, 1, 0}));
  EXPECT_EQ(oracle::reference_bfs(g, 0), (std::vector<Level>{0, 1, 1, 2}));
}

TEST(RunBfs, IsolatedSource) {
  EdgeList g = testing::undirected(6, {{0, 1}, {1, 2}});
  for (ClusterShape shape : {ClusterShape{1, 1}, ClusterShape{2, 2}}) {
    const PartitionedGraph pg = partition_graph(g, 1, shape);
    const BfsRun run = run_bfs(pg, options(Mode::dobfs, 4));
    EXPECT_EQ(run.levels[4], 0u);
    EXPECT_EQ(run.reached(), 1u);
    EXPECT_EQ(run.iterations, 1u);
  }
}

TEST(RunBfs, SourceOutOfRange) {
  const PartitionedGraph pg = partition_graph(testing::undirected(3, {{0, 1}}), 4, {1, 1});
  EXPECT_THROW(run_bfs(pg, options(Mode::bfs, 3)), DomainError);
}

TEST(RunBfs, NoDelegatesSingleWorker) {
  const EdgeList g = testing::rmat(10);
  const PartitionedGraph pg = partition_graph(g, 1u << 20, {1, 1});
  ASSERT_EQ(pg.d(), 0u);
  for (VertexId s : random_sources(g.n, 5, 3)) {
    EXPECT_EQ(run_bfs(pg, options(Mode::dobfs, s)).levels, oracle::reference_bfs(g, s));
  }
}

TEST(RunBfs, DelegateSource) {
  const EdgeList g = testing::two_hub_graph();
  const PartitionedGraph pg = partition_graph(g, 5, {3, 1});
  for (VertexId s : {7u, 8u, 0u, 11u}) {
    for (Mode mode : {Mode::bfs, Mode::dobfs}) {
      EXPECT_EQ(run_bfs(pg, options(mode, s)).levels, oracle::reference_bfs(g, s)) << s;
    }
  }
}

TEST(RunBfs, AggressiveFactorsStillExact) {
  // Factors that push every kind backward as early as possible.
  const EdgeList g = testing::rmat(11, 6);
  const PartitionedGraph pg = partition_graph(g, 16, {2, 2});
  BfsOptions o = options(Mode::dobfs, 0);
  for (auto& f : o.factors) f = {0.0, 0.0};
  for (VertexId s : random_sources(g.n, 8, 1)) {
    o.source = s;
    const BfsRun run = run_bfs(pg, o);
    EXPECT_EQ(run.levels, oracle::reference_bfs(g, s));
    if (run.iterations > 2) EXPECT_GT(run.inspections.total_backward(), 0u);
  }
}

TEST(RunBfs, Scale12EightWorkersTwentySources) {
  const EdgeList g = testing::rmat(12, 21);
  const PartitionedGraph pg = partition_graph(g, auto_theta(12), {4, 2});
  for (VertexId s : random_sources(g.n, 20, 99)) {
    const BfsRun run = run_bfs(pg, options(Mode::dobfs, s));
    const auto expect = oracle::reference_bfs(g, s);
    ASSERT_EQ(run.levels, expect) << "source " << s;
    for (Level l : run.levels) {
      if (l != kUnreached) EXPECT_LT(l, run.iterations);
    }
  }
}

TEST(RunBfs, ShapeInvariance) {
  const EdgeList g = testing::rmat(11, 8);
  const VertexId s = g.edges[10].src;
  std::vector<Level> first;
  for (ClusterShape shape : {ClusterShape{1, 1}, ClusterShape{2, 1}, ClusterShape{1, 2}, ClusterShape{4, 2},
                             ClusterShape{3, 3}}) {
    const auto levels = run_bfs(partition_graph(g, 32, shape), options(Mode::dobfs, s)).levels;
    if (first.empty()) first = levels;
    EXPECT_EQ(levels, first) << shape.to_string();
  }
}

TEST(RunBfs, OptionCombinationsAgree) {
  const EdgeList g = testing::rmat(11, 12);
  const PartitionedGraph pg = partition_graph(g, 24, {2, 2});
  const VertexId s = g.edges[0].dst;
  const auto expect = oracle::reference_bfs(g, s);
  std::uint64_t plain_bytes = 0;
  for (bool local : {false, true}) {
    for (bool unique : {false, true}) {
      BfsOptions o = options(Mode::dobfs, s);
      o.comm.local_all2all = local;
      o.comm.uniquify = unique;
      const BfsRun run = run_bfs(pg, o);
      EXPECT_EQ(run.levels, expect);
      EXPECT_LE(run.comm.normal_bytes(), 4 * pg.kind_total(SubgraphKind::nn));
      if (!local && !unique) plain_bytes = run.comm.normal_bytes();
      if (unique) EXPECT_LE(run.comm.normal_bytes(), plain_bytes);
    }
  }
}

TEST(RunBfs, ReplayAndThreadsDeterministic) {
  const EdgeList g = testing::rmat(11, 13);
  const PartitionedGraph pg = partition_graph(g, 20, {2, 2});
  BfsOptions o = options(Mode::dobfs, g.edges[3].src);
  o.threads = 1;
  const BfsRun a = run_bfs(pg, o);
  o.threads = 4;
  const BfsRun b = run_bfs(pg, o);
  EXPECT_EQ(a.levels, b.levels);
  EXPECT_EQ(a.per_iteration, b.per_iteration);
  EXPECT_EQ(a.comm, b.comm);
  EXPECT_EQ(run_report(pg, o, a).dump(), run_report(pg, o, b).dump());
}

TEST(RunBfs, MaskTrafficLaw) {
  const EdgeList g = testing::rmat(12, 2);
  const PartitionedGraph pg = partition_graph(g, 16, {2, 2});
  const BfsRun run = run_bfs(pg, options(Mode::dobfs, g.edges[0].src));
  EXPECT_EQ(run.comm.mask_bits(), 2ull * pg.d() * pg.shape.p_rank * run.comm.reductions());
  EXPECT_LE(run.comm.reductions(), run.iterations);
}

TEST(RunBfs, LocalDirectionScopeExact) {
  const EdgeList g = testing::rmat(12, 5);
  const PartitionedGraph pg = partition_graph(g, auto_theta(12), {2, 2});
  BfsOptions o = options(Mode::dobfs, 0);
  o.direction_scope = DirectionScope::local;
  for (VertexId s : random_sources(g.n, 6, 3)) {
    o.source = s;
    EXPECT_EQ(run_bfs(pg, o).levels, oracle::reference_bfs(g, s));
  }
}

TEST(RunBfs, GlobalScopeDirectionsIndependentOfShape) {
  // With global decisions every shape takes the same per-kind directions.
  const EdgeList g = testing::rmat(12, 9);
  for (VertexId s : random_sources(g.n, 4, 12)) {
    std::vector<std::array<bool, kDoKinds>> first;
    for (ClusterShape shape : {ClusterShape{1, 1}, ClusterShape{2, 2}, ClusterShape{4, 2}}) {
      const BfsRun run = run_bfs(partition_graph(g, 24, shape), options(Mode::dobfs, s));
      std::vector<std::array<bool, kDoKinds>> dirs;
      for (const auto& it : run.per_iteration) {
        std::array<bool, kDoKinds> b{};
        for (std::size_t k = 0; k < kDoKinds; ++k) b[k] = it.backward_workers[k] > 0;
        dirs.push_back(b);
      }
      if (first.empty()) first = dirs;
      EXPECT_EQ(dirs, first) << shape.to_string() << " source " << s;
    }
  }
}

TEST(RunBfs, OneWorkerMatchesPerKindOracle) {
  const EdgeList g = testing::rmat(11, 14);
  const std::uint64_t theta = auto_theta(11);
  const PartitionedGraph pg = partition_graph(g, theta, {1, 1});
  for (VertexId s : random_sources(g.n, 10, 5)) {
    const BfsRun run = run_bfs(pg, options(Mode::dobfs, s));
    EXPECT_EQ(run.inspections.total(), oracle::dobfs_inspections(g, s, theta, default_direction_factors()))
        << "source " << s;
  }
}

TEST(RunBfs, ForwardOnlyModeNeverPulls) {
  const EdgeList g = testing::rmat(11);
  const PartitionedGraph pg = partition_graph(g, 16, {2, 1});
  const BfsRun run = run_bfs(pg, options(Mode::bfs, g.edges[0].src));
  EXPECT_EQ(run.inspections.total_backward(), 0u);
  EXPECT_EQ(run.backward_iterations, 0u);
  EXPECT_EQ(run.forward_visited, run.reached());
}

TEST(RunBfs, DobfsInspectsNoMoreThanBfs) {
  const EdgeList g = testing::rmat(13, 4);
  const PartitionedGraph pg = partition_graph(g, auto_theta(13), {2, 2});
  for (VertexId s : random_sources(g.n, 5, 8)) {
    const BfsRun plain = run_bfs(pg, options(Mode::bfs, s));
    const BfsRun dobfs = run_bfs(pg, options(Mode::dobfs, s));
    EXPECT_EQ(plain.levels, dobfs.levels);
    EXPECT_LE(dobfs.inspections.total(), plain.inspections.total());
  }
}

TEST(Teps, Formula) {
  EXPECT_DOUBLE_EQ(compute_teps((1ull << 20) * 32, 1.0), static_cast<double>((1ull << 20) * 16));
  EXPECT_DOUBLE_EQ(compute_teps(1000, 0.5), 2 * compute_teps(1000, 1.0));
  EXPECT_THROW(compute_teps(10, 0.0), DomainError);
}

TEST(Teps, RunMatchesRecomputation) {
  const EdgeList g = testing::rmat(12);
  const PartitionedGraph pg = partition_graph(g, 16, {1, 1});
  const BfsRun run = run_bfs(pg, options(Mode::dobfs, g.edges[0].src));
  ASSERT_GT(run.elapsed_seconds, 0.0);
  EXPECT_DOUBLE_EQ(run.teps, (static_cast<double>(g.m()) / 2) / run.elapsed_seconds);
}

TEST(Benchmark, AllIsolatedIsEmpty) {
  const PartitionedGraph pg = partition_graph(testing::undirected(5, {{0, 1}}), 4, {1, 1});
  const std::vector<VertexId> sources = {2, 3, 4};
  EXPECT_THROW(benchmark(pg, sources, {}), EmptyReportError);
}

TEST(Benchmark, OneValidSource) {
  const PartitionedGraph pg = partition_graph(testing::undirected(5, {{0, 1}, {1, 2}}), 4, {1, 1});
  const std::vector<VertexId> sources = {4, 0};
  const BenchmarkReport r = benchmark(pg, sources, {});
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.discarded, 1u);
  EXPECT_NEAR(r.geomean_teps, r.runs[0].teps, 1e-12 * r.runs[0].teps);
}

TEST(Benchmark, GeometricMean) {
  const std::vector<double> v = {1.0, 4.0};
  EXPECT_DOUBLE_EQ(geometric_mean(v), 2.0);
  EXPECT_THROW(geometric_mean(std::vector<double>{}), DomainError);
  EXPECT_THROW(geometric_mean(std::vector<double>{1.0, 0.0}), DomainError);
}

TEST(Digest, StableAcrossCalls) {
  const std::vector<Level> a = {0, 1, kUnreached};
  EXPECT_EQ(levels_digest(a), levels_digest(a));
  const std::vector<Level> b = {0, 2, kUnreached};
  EXPECT_NE(levels_digest(a), levels_digest(b));
  EXPECT_EQ(levels_digest(std::vector<Level>{}), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hex_digest(0xabcULL), "0000000000000abc");
}

TEST(Sources, Reproducible) {
  EXPECT_EQ(random_sources(1000, 10, 4), random_sources(1000, 10, 4));
  for (VertexId v : random_sources(7, 100, 1)) EXPECT_LT(v, 7u);
}

}  // namespace
}  // namespace dbfs
