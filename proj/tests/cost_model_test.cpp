#include <cmath>

#include <gtest/gtest.h>

#include "dbfs/cost_model.hpp"
#include "dbfs/engine.hpp"
#include "dbfs/errors.hpp"
#include "test_graphs.hpp"

namespace dbfs {
namespace {

CostModelParams base(std::uint64_t p_rank, std::uint64_t p_gpu) {
  CostModelParams c;
  c.n = 1 << 20;
  c.m = 32.0 * (1 << 20);
  c.p_rank = p_rank;
  c.p_gpu = p_gpu;
  c.iterations = 8;
  c.backward_iterations = 3;
  c.forward_visited = 1 << 20;
  c.d = 4096;
  c.e_nn = 1e6;
  return c;
}

TEST(Cost1D, Formula) {
  CostModelParams c = base(4, 1);
  c.m = std::ldexp(1.0, 25);
  const Cost1D r = cost_1d(c);
  EXPECT_DOUBLE_EQ(r.volume, std::ldexp(1.0, 28));
  EXPECT_DOUBLE_EQ(r.time, std::ldexp(1.0, 26) * 1e-9);
}

TEST(Cost1D, SingleWorkerAndDoubling) {
  CostModelParams c = base(1, 1);
  EXPECT_DOUBLE_EQ(cost_1d(c).time, 8 * c.m * c.g);
  CostModelParams two = base(2, 1);
  EXPECT_DOUBLE_EQ(cost_1d(two).time, cost_1d(c).time / 2);
  EXPECT_DOUBLE_EQ(cost_1d(two).volume, cost_1d(c).volume);
}

TEST(Cost2D, SingleWorkerIsFree) {
  const Cost2D r = cost_2d(base(1, 1));
  EXPECT_EQ(r.forward_volume, 0.0);
  EXPECT_EQ(r.backward_volume, 0.0);
  EXPECT_EQ(r.time, 0.0);
}

TEST(Cost2D, Substitution) {
  CostModelParams c = base(4, 4);
  c.n = std::ldexp(1.0, 20);
  c.forward_visited = c.n;
  c.backward_iterations = 3;
  const Cost2D r = cost_2d(c);
  // sqrt(16) = 4, log2(4) = 2.
  const double n = std::ldexp(1.0, 20);
  EXPECT_DOUBLE_EQ(r.forward_volume, 8 * n * 4 * 2);
  EXPECT_DOUBLE_EQ(r.backward_volume, 2 * n * 3 * 4 * 2 / 8);
  EXPECT_DOUBLE_EQ(r.time, (4 * n + n * 3 / 8) * (2.0 / 4.0) * 1e-9);
}

TEST(Cost2D, NonSquareRejected) {
  EXPECT_THROW(cost_2d(base(2, 1)), DomainError);
  EXPECT_THROW(cost_2d(base(3, 4)), DomainError);
}

TEST(Cost2D, WeakScalingStrictlyIncreasing) {
  double prev = 0;
  for (std::uint64_t side = 2; side <= 64; side *= 2) {
    const std::uint64_t p = side * side;
    CostModelParams c = base(p, 1);
    c.n = std::ldexp(1.0, 20) * p;
    c.forward_visited = c.n;
    const double t = cost_2d(c).time;
    EXPECT_GT(t, prev) << p;
    prev = t;
  }
}

TEST(CostDelegate, OneRankLeavesOnlyNn) {
  CostModelParams c = base(1, 4);
  const CostDelegate r = cost_delegate(c);
  EXPECT_DOUBLE_EQ(r.time, 4 * c.e_nn / 4 * c.g);
  EXPECT_DOUBLE_EQ(r.volume, c.d / 4 * c.iterations + 4 * c.e_nn);
  EXPECT_EQ(r.weak_scaling_time, 0.0);
}

TEST(CostDelegate, SimplifiedFormUnderDelegateCap) {
  for (std::uint64_t p_rank : {2u, 8u, 64u}) {
    CostModelParams c = base(p_rank, 4);
    c.d = 4 * c.n / static_cast<double>(c.p());
    c.e_nn = 0;
    const CostDelegate r = cost_delegate(c);
    EXPECT_NEAR(r.time, r.weak_scaling_time, 1e-12 * r.time);
    EXPECT_DOUBLE_EQ(r.weak_scaling_time, c.n * std::log2(double(p_rank)) / double(c.p()) * c.iterations * c.g);
  }
}

TEST(CostDelegate, MeasuredVolumeBelowModel) {
  const EdgeList g = testing::rmat(12);
  const PartitionedGraph pg = partition_graph(g, auto_theta(12), {2, 2});
  for (VertexId s : random_sources(g.n, 5, 2)) {
    BfsOptions o;
    o.source = s;
    const BfsRun run = run_bfs(pg, o);
    CostModelParams c;
    c.n = double(pg.n);
    c.m = double(pg.m);
    c.p_rank = pg.shape.p_rank;
    c.p_gpu = pg.shape.p_gpu;
    c.iterations = run.iterations;
    c.d = pg.d();
    c.e_nn = double(pg.kind_total(SubgraphKind::nn));
    EXPECT_LE(run.comm.mask_bytes() + double(run.comm.normal_bytes()), cost_delegate(c).volume);
  }
}

TEST(CostModel, RejectsNegative) {
  CostModelParams c = base(1, 1);
  c.n = -1;
  EXPECT_THROW(cost_1d(c), DomainError);
  c = base(0, 1);
  EXPECT_THROW(cost_delegate(c), DomainError);
}

TEST(Sweep, ScalesSizesAndKeepsDelegates) {
  const CostModelParams c = base(4, 4);
  const std::vector<std::uint64_t> ps = {16, 64, 256};
  const auto rows = weak_scaling_sweep(c, ps);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[1].params.n, c.n * 4);
  EXPECT_DOUBLE_EQ(rows[2].params.e_nn, c.e_nn * 16);
  EXPECT_DOUBLE_EQ(rows[2].params.d, c.d);
  EXPECT_EQ(rows[2].p_rank, 64u);
  EXPECT_TRUE(rows[0].has_2d);
  const std::vector<std::uint64_t> bad = {6};
  EXPECT_THROW(weak_scaling_sweep(c, bad), DomainError);
}

TEST(Fit, ExactLine) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {3, 5, 7, 9};
  const LinearFit f = fit_line(x, y);
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_DOUBLE_EQ(f.r_squared, 1.0);
  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{1}), DomainError);
}

}  // namespace
}  // namespace dbfs
