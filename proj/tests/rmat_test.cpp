#include <algorithm>
#include <set>
#include <map>

#include <gtest/gtest.h>

#include "dbfs/errors.hpp"
#include "dbfs/partitioner.hpp"
#include "dbfs/rmat.hpp"
#include "test_graphs.hpp"

namespace dbfs {
namespace {

TEST(Rmat, Scale20HasGraph500EdgeCounts) {
  RmatParams params;
  params.scale = 20;
  const EdgeList g = generate_rmat(params);
  EXPECT_EQ(g.n, 1048576u);
  EXPECT_EQ(g.m(), 16777216u);
  EXPECT_EQ(symmetrize(g).m(), (std::uint64_t{1} << 20) * 32);
}

TEST(Rmat, ScaleZeroIsOneSelfLoop) {
  RmatParams params;
  params.scale = 0;
  params.edge_factor = 1;
  const EdgeList g = generate_rmat(params);
  ASSERT_EQ(g.m(), 1u);
  EXPECT_EQ(g.edges[0], (Edge{0, 0}));
  EXPECT_EQ(g.n, 1u);
}

TEST(Rmat, SameSeedSameBytes) {
  RmatParams params;
  params.scale = 12;
  params.seed = 77;
  EXPECT_EQ(generate_rmat(params).edges, generate_rmat(params).edges);
  params.seed = 78;
  RmatParams other = params;
  other.seed = 77;
  EXPECT_NE(generate_rmat(params).edges, generate_rmat(other).edges);
}

TEST(Rmat, IdsBelowN) {
  RmatParams params;
  params.scale = 9;
  for (const Edge& e : generate_rmat(params).edges) {
    ASSERT_LT(e.src, 512u);
    ASSERT_LT(e.dst, 512u);
  }
}

TEST(Rmat, SkewFollowsQuadrantWeights) {
  // With a = 0.57 the top bit of the source is 0 with probability a + b = 0.76.
  RmatParams params;
  params.scale = 14;
  const EdgeList g = generate_rmat(params);
  const auto low = std::count_if(g.edges.begin(), g.edges.end(),
                                 [](const Edge& e) { return e.src < (VertexId{1} << 13); });
  EXPECT_NEAR(static_cast<double>(low) / g.m(), 0.76, 0.01);
}

TEST(Rmat, RejectsBadParameters) {
  RmatParams params;
  params.scale = 25;
  EXPECT_THROW(generate_rmat(params), ResourceError);
  params.scale = 4;
  params.a = 0.6;
  EXPECT_THROW(generate_rmat(params), DomainError);
  params.a = 0.57;
  params.edge_factor = 0;
  EXPECT_THROW(generate_rmat(params), DomainError);
}

TEST(HashRandomize, IdentityLeavesInputUnchanged) {
  RmatParams params;
  params.scale = 8;
  const EdgeList g = generate_rmat(params);
  EXPECT_EQ(hash_randomize_vertices(g, VertexPermutation::identity(8)).edges, g.edges);
}

TEST(HashRandomize, Scale10IsABijection) {
  const auto perm = VertexPermutation::from_seed(10, 12345);
  std::set<VertexId> images;
  for (VertexId v = 0; v < 1024; ++v) {
    const VertexId image = perm(v);
    ASSERT_LT(image, 1024u);
    images.insert(image);
  }
  EXPECT_EQ(images.size(), 1024u);
}

TEST(HashRandomize, BijectiveForEverySmallWidth) {
  for (unsigned bits = 0; bits <= 12; ++bits) {
    const auto perm = VertexPermutation::from_seed(bits, bits * 31 + 7);
    std::set<VertexId> images;
    for (VertexId v = 0; v < (VertexId{1} << bits); ++v) images.insert(perm(v));
    EXPECT_EQ(images.size(), VertexId{1} << bits) << "bits=" << bits;
  }
}

TEST(HashRandomize, PreservesDegreeMultisetAndSizes) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RmatParams params;
    params.scale = 10;
    params.seed = seed;
    const EdgeList g = generate_rmat(params);
    const EdgeList h = hash_randomize_vertices(g, seed * 11);
    EXPECT_EQ(h.n, g.n);
    EXPECT_EQ(h.m(), g.m());
    auto dg = compute_out_degrees(g);
    auto dh = compute_out_degrees(h);
    std::sort(dg.begin(), dg.end());
    std::sort(dh.begin(), dh.end());
    EXPECT_EQ(dg, dh);
  }
}

TEST(HashRandomize, RequiresPowerOfTwo) {
  EdgeList g;
  g.n = 12;
  EXPECT_THROW(hash_randomize_vertices(g, 1), DomainError);
}

TEST(Symmetrize, AddsReverse) {
  EdgeList g;
  g.n = 2;
  g.edges = {{0, 1}};
  const EdgeList s = symmetrize(g);
  EXPECT_EQ(s.edges, (std::vector<Edge>{{0, 1}, {1, 0}}));
  EXPECT_TRUE(s.symmetric);
}

TEST(Symmetrize, SelfLoopTwice) {
  EdgeList g;
  g.n = 4;
  g.edges = {{3, 3}};
  EXPECT_EQ(symmetrize(g).edges, (std::vector<Edge>{{3, 3}, {3, 3}}));
}

TEST(Symmetrize, Scale8MultisetOracle) {
  RmatParams params;
  params.scale = 8;
  const EdgeList s = symmetrize(generate_rmat(params));
  // Brute force: count every ordered pair both ways.
  std::map<std::pair<VertexId, VertexId>, int> count;
  for (const Edge& e : s.edges) ++count[{e.src, e.dst}];
  for (const auto& [key, c] : count) {
    const auto rev = count.find({key.second, key.first});
    ASSERT_NE(rev, count.end());
    ASSERT_EQ(rev->second, c);
  }
  EXPECT_TRUE(has_symmetric_multiset(s));
}

TEST(Symmetrize, TwiceDoublesMultiplicities) {
  const EdgeList g = testing::rmat(6);
  const EdgeList twice = symmetrize(g);
  EXPECT_EQ(twice.m(), 2 * g.m());
  EXPECT_TRUE(has_symmetric_multiset(twice));
  std::map<std::pair<VertexId, VertexId>, int> once_count;
  std::map<std::pair<VertexId, VertexId>, int> twice_count;
  for (const Edge& e : g.edges) ++once_count[{e.src, e.dst}];
  for (const Edge& e : twice.edges) ++twice_count[{e.src, e.dst}];
  for (const auto& [key, c] : once_count) EXPECT_EQ(twice_count[key], 2 * c);
}

TEST(Symmetrize, DetectsAsymmetry) {
  EdgeList g;
  g.n = 3;
  g.edges = {{0, 1}, {1, 0}, {1, 2}};
  EXPECT_FALSE(has_symmetric_multiset(g));
}

}  // namespace
}  // namespace dbfs
