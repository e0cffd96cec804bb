#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dbfs/comm.hpp"
#include "dbfs/subgraph.hpp"
#include "dbfs/traversal.hpp"

namespace dbfs {

enum class Mode : std::uint8_t { bfs, dobfs };

/// Where direction switches are decided. `global` sums the per-kind workload
/// estimates over all workers (a small all-reduce) so every worker takes the
/// same direction per kind; `local` lets each worker decide on its own data.
enum class DirectionScope : std::uint8_t { global, local };

struct BfsOptions {
  Mode mode = Mode::dobfs;
  std::array<DirectionFactors, kDoKinds> factors = default_direction_factors();
  bool allow_switch_back = true;
  DirectionScope direction_scope = DirectionScope::global;
  CommOptions comm;
  VertexId source = 0;
  std::uint64_t seed = 0;
  /// Worker-step parallelism; 0 reads DELEGATE_BFS_THREADS (default 1).
  unsigned threads = 0;
};

/// Edge inspections split by subgraph kind and direction.
struct Inspections {
  std::array<std::uint64_t, kSubgraphKinds> forward{};
  std::array<std::uint64_t, kSubgraphKinds> backward{};

  std::uint64_t total() const noexcept;
  std::uint64_t total_forward() const noexcept;
  std::uint64_t total_backward() const noexcept;
  /// Backward scans done on behalf of delegates (nd and dd pulls).
  std::uint64_t delegate_backward() const noexcept;

  Inspections& operator+=(const Inspections& other) noexcept;
  friend bool operator==(const Inspections&, const Inspections&) = default;
};

struct IterationRecord {
  std::uint32_t iteration = 0;
  std::uint64_t frontier_normals = 0;
  std::uint64_t frontier_delegates = 0;
  /// Workers that ran each DO kind backward this iteration.
  std::array<std::uint32_t, kDoKinds> backward_workers{};
  Inspections inspections;
  IterationComm comm;

  bool any_backward() const noexcept;
  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct PhaseTimes {
  double previsit = 0.0;
  double visit = 0.0;
  double normal_exchange = 0.0;
  double mask_reduction = 0.0;
};

struct BfsRun {
  VertexId source = 0;
  /// Hop distance per global vertex, kUnreached if not reached.
  std::vector<Level> levels;
  /// S: iterations that had a nonempty frontier.
  std::uint32_t iterations = 0;
  std::vector<IterationRecord> per_iteration;
  Inspections inspections;
  CommStats comm;
  /// Vertices labeled in iterations with no backward visit (n_t).
  std::uint64_t forward_visited = 0;
  /// Iterations with at least one backward visit (S_b).
  std::uint32_t backward_iterations = 0;
  /// Mean delegate backward inspections per delegate per worker (b).
  double delegate_parent_checks = 0.0;
  /// Single-processor DOBFS inspections (m'); filled by callers with the oracle.
  std::optional<std::uint64_t> oracle_inspections;
  std::uint64_t m = 0;
  double elapsed_seconds = 0.0;
  double teps = 0.0;
  PhaseTimes phases;

  std::uint64_t reached() const noexcept;
  std::uint64_t levels_digest() const noexcept;
};

/// Runs one BFS over the partitioned graph. Throws DomainError if the source
/// is not a vertex of the graph.
BfsRun run_bfs(const PartitionedGraph& pg, const BfsOptions& opts);

/// Graph500 convention: (m / 2) / elapsed with m the doubled edge count.
/// Throws DomainError if elapsed is not positive.
double compute_teps(std::uint64_t m, double elapsed_seconds);

/// FNV-1a over the levels as little-endian 32-bit words.
std::uint64_t levels_digest(std::span<const Level> levels) noexcept;

struct BenchmarkReport {
  std::vector<BfsRun> runs;  // kept runs, levels dropped
  std::uint32_t discarded = 0;
  double geomean_teps = 0.0;
  PhaseTimes mean_phases;
  double mean_elapsed = 0.0;
};

/// Runs every source, keeps runs with more than one iteration, and reports
/// the geometric mean TEPS. Throws EmptyReportError if nothing is kept.
BenchmarkReport benchmark(const PartitionedGraph& pg, std::span<const VertexId> sources, const BfsOptions& opts);

/// Geometric mean of positive values.
double geometric_mean(std::span<const double> values);

/// Uniform random sources in [0, n), reproducible from `seed`.
std::vector<VertexId> random_sources(VertexId n, std::size_t count, std::uint64_t seed);

/// DELEGATE_BFS_THREADS if set and positive, else 1.
unsigned thread_count_from_env();

}  // namespace dbfs
