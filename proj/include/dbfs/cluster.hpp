#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "dbfs/edge_list.hpp"

namespace dbfs {

struct WorkerId {
  std::uint32_t rank = 0;
  std::uint32_t gpu = 0;

  friend bool operator==(const WorkerId&, const WorkerId&) = default;
};

/// p_rank ranks with p_gpu workers each.
///
/// Workers are flattened as gpu * p_rank + rank. With that ordering the home
/// of vertex v, (v mod p_rank, (v / p_rank) mod p_gpu), flattens to v mod p,
/// so the owner-local id v / p is dense on every worker.
struct ClusterShape {
  std::uint32_t p_rank = 1;
  std::uint32_t p_gpu = 1;

  std::uint32_t workers() const noexcept { return p_rank * p_gpu; }

  std::uint32_t rank_of(VertexId v) const noexcept { return static_cast<std::uint32_t>(v % p_rank); }
  std::uint32_t gpu_of(VertexId v) const noexcept {
    return static_cast<std::uint32_t>((v / p_rank) % p_gpu);
  }
  WorkerId home_of(VertexId v) const noexcept { return {rank_of(v), gpu_of(v)}; }

  std::uint32_t flat(WorkerId w) const noexcept { return w.gpu * p_rank + w.rank; }
  WorkerId unflat(std::uint32_t index) const noexcept { return {index % p_rank, index / p_rank}; }

  std::uint32_t owner(VertexId v) const noexcept { return static_cast<std::uint32_t>(v % workers()); }
  std::uint64_t local_id(VertexId v) const noexcept { return v / workers(); }
  VertexId global_id(std::uint32_t worker, std::uint64_t local) const noexcept {
    return local * workers() + worker;
  }
  /// Number of vertices in [0, n) owned by `worker`.
  std::uint64_t owned_count(VertexId n, std::uint32_t worker) const noexcept {
    return n > worker ? (n - worker + workers() - 1) / workers() : 0;
  }

  /// "NxRxG": nodes x ranks-per-node x gpus-per-rank; p_rank = N*R. "RxG" is
  /// also accepted. Throws ConfigError on malformed input.
  static ClusterShape parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const ClusterShape&, const ClusterShape&) = default;
};

}  // namespace dbfs
