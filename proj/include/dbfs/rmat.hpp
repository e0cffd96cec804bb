#pragma once

#include <cstdint>

#include "dbfs/edge_list.hpp"

namespace dbfs {

inline constexpr unsigned kDefaultMaxScale = 24;

/// Graph500-style RMAT parameters. `quad_d` is the fourth quadrant weight.
struct RmatParams {
  unsigned scale = 10;
  unsigned edge_factor = 16;
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double quad_d = 0.05;
  std::uint64_t seed = 1;
  unsigned max_scale = kDefaultMaxScale;

  /// Throws DomainError for bad probabilities, ResourceError above max_scale.
  void validate() const;
};

/// Exactly 2^scale * edge_factor directed edges, before symmetrization.
///
/// Each edge is drawn from its own splitmix64 stream keyed by (seed, edge
/// index), so any subset of edges can be generated independently and the
/// result does not depend on generation order. Each of the `scale` recursion
/// levels consumes one 53-bit uniform draw and picks a quadrant by comparing
/// it against the cumulative weights a, a+b, a+b+c. No per-level noise is
/// applied. Self-loops and duplicates are kept.
EdgeList generate_rmat(const RmatParams& params);

/// A bijection on [0, 2^bits).
///
/// x -> x*K1 + s1, x ^= x >> h, x -> x*K2 + s2, x ^= x >> h  (all mod 2^bits)
/// with K1 = 0x9E3779B97F4A7C15, K2 = 0xBF58476D1CE4E5B9 (both odd, so
/// multiplication is invertible mod 2^bits), h = max(1, ceil(bits/2)), and
/// s1, s2 taken from splitmix64(seed). Each step is invertible, so the
/// composition is a permutation.
class VertexPermutation {
 public:
  static VertexPermutation identity(unsigned bits);
  static VertexPermutation from_seed(unsigned bits, std::uint64_t seed);

  VertexId operator()(VertexId v) const noexcept;
  unsigned bits() const noexcept { return bits_; }
  bool is_identity() const noexcept { return identity_; }

 private:
  VertexPermutation(unsigned bits, bool identity, std::uint64_t s1, std::uint64_t s2);

  unsigned bits_;
  bool identity_;
  std::uint64_t mask_;
  std::uint64_t s1_;
  std::uint64_t s2_;
  unsigned shift_;
};

/// Relabels every endpoint through `perm`. Requires n == 2^perm.bits().
EdgeList hash_randomize_vertices(const EdgeList& g, const VertexPermutation& perm);

/// Seeded relabeling; n must be a power of two (DomainError otherwise).
EdgeList hash_randomize_vertices(const EdgeList& g, std::uint64_t seed);

/// Appends the reverse of every edge (self-loops are duplicated).
EdgeList symmetrize(const EdgeList& g);

/// Full desk pipeline: generate, relabel, symmetrize.
EdgeList make_rmat_graph(const RmatParams& params);

namespace detail {
std::uint64_t splitmix64(std::uint64_t& state) noexcept;
}

}  // namespace dbfs
