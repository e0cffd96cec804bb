#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dbfs/cluster.hpp"
#include "dbfs/subgraph.hpp"
#include "dbfs/traversal.hpp"

namespace dbfs {

struct DelegateMask {
  Bitmask bits;
  bool dirty = false;

  explicit DelegateMask(std::size_t d = 0) : bits(d) {}

  void mark(std::size_t delegate) {
    bits.set(delegate);
    dirty = true;
  }
  void clear() {
    bits.reset();
    dirty = false;
  }

  friend bool operator==(const DelegateMask&, const DelegateMask&) = default;
};

/// A normal vertex discovered through an nn edge, addressed by global id.
struct NormalUpdate {
  VertexId vertex = 0;
  Level level = 0;

  friend auto operator<=>(const NormalUpdate&, const NormalUpdate&) = default;
};

/// The same record after conversion to the receiver's 32-bit local id.
struct LocalUpdate {
  LocalId vertex = 0;
  Level level = 0;

  friend auto operator<=>(const LocalUpdate&, const LocalUpdate&) = default;
};

/// One bin per destination worker.
using Outbox = std::vector<std::vector<NormalUpdate>>;
using Inbox = std::vector<LocalUpdate>;

/// Whether a real deployment would use MPI_Allreduce or MPI_Iallreduce for
/// the global mask phase. The simulation behaves identically for both.
enum class ReductionMode : std::uint8_t { blocking, nonblocking };

struct CommOptions {
  bool local_all2all = false;
  bool uniquify = false;
  ReductionMode reduction = ReductionMode::blocking;

  friend bool operator==(const CommOptions&, const CommOptions&) = default;
};

/// Wire accounting for one BSP iteration. Volumes follow the communication
/// model (1 bit per delegate per mask, 4 bytes per normal vertex record).
struct IterationComm {
  bool mask_reduced = false;
  std::uint64_t mask_bits = 0;
  std::uint64_t normal_records = 0;   // records crossing the global stage
  std::uint64_t local_records = 0;    // records moved by local-all2all
  std::uint64_t in_memory_bytes = 0;  // sizeof(NormalUpdate) per record sent
  std::uint64_t message_count = 0;    // nonempty bins, both stages
  std::uint64_t pair_count = 0;       // distinct (src, dst) pairs, global stage

  double mask_bytes() const noexcept { return static_cast<double>(mask_bits) / 8.0; }
  std::uint64_t normal_bytes() const noexcept { return 4 * normal_records; }

  friend bool operator==(const IterationComm&, const IterationComm&) = default;
};

struct CommStats {
  std::vector<IterationComm> per_iteration;
  /// p x p, row = sender; set once a global-stage message used the pair.
  std::vector<std::uint8_t> pair_used;

  void reset(std::uint32_t workers);
  void add(const IterationComm& it);

  std::uint64_t mask_bits() const noexcept;
  double mask_bytes() const noexcept { return static_cast<double>(mask_bits()) / 8.0; }
  std::uint64_t normal_records() const noexcept;
  std::uint64_t normal_bytes() const noexcept { return 4 * normal_records(); }
  std::uint64_t local_records() const noexcept;
  std::uint64_t message_count() const noexcept;
  std::uint64_t distinct_pairs() const noexcept;
  /// S': iterations that performed a delegate mask reduction.
  std::uint32_t reductions() const noexcept;

  friend bool operator==(const CommStats&, const CommStats&) = default;
};

/// OR of all worker masks, reduced per rank and then across ranks. When no
/// mask is dirty nothing is sent and an all-zero mask is returned; otherwise
/// 2 * d * p_rank bits are accounted. Throws StructuralError on length mismatch.
DelegateMask reduce_delegate_masks(std::span<const DelegateMask> masks, ClusterShape shape, IterationComm& stats);

/// Moves every record from worker (r, g) to worker (r, g') where g' is the
/// gpu index of its destination, so the global stage only links workers with
/// equal gpu index. Records that change worker are counted as local traffic.
std::vector<Outbox> local_all2all(std::vector<Outbox> outboxes, ClusterShape shape, IterationComm& stats);

/// Collapses repeated vertex ids within one bin, keeping the lowest level.
void uniquify(std::vector<NormalUpdate>& bin);

/// Delivers every record to its owner, optionally after local-all2all and
/// uniquify, converting ids to the receiver's local numbering. Throws
/// RoutingError for a record sitting in a bin its owner does not match.
std::vector<Inbox> exchange_normal_vertices(std::vector<Outbox> outboxes, ClusterShape shape,
                                            const CommOptions& opts, IterationComm& stats,
                                            std::vector<std::uint8_t>* pair_used = nullptr);

}  // namespace dbfs
