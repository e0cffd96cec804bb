#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dbfs/csr.hpp"

namespace dbfs {

using Level = std::uint32_t;
inline constexpr Level kUnreached = std::numeric_limits<Level>::max();

enum class Direction : std::uint8_t { forward, backward };

/// The three subgraph kinds that may run backward. nn is always pushed.
enum class DoKind : std::uint8_t { dd = 0, dn = 1, nd = 2 };
inline constexpr std::size_t kDoKinds = 3;
inline constexpr std::array<DoKind, kDoKinds> kAllDoKinds = {DoKind::dd, DoKind::dn, DoKind::nd};

constexpr const char* to_string(DoKind kind) noexcept {
  switch (kind) {
    case DoKind::dd: return "dd";
    case DoKind::dn: return "dn";
    case DoKind::nd: return "nd";
  }
  return "?";
}

constexpr const char* to_string(Direction dir) noexcept {
  return dir == Direction::forward ? "forward" : "backward";
}

struct DirectionFactors {
  double to_backward = 0.0;  // factor0
  double to_forward = 0.0;   // factor1

  friend bool operator==(const DirectionFactors&, const DirectionFactors&) = default;
};

/// factor0 of (0.5, 0.05, 1e-7) for dd, dn, nd; factor1 is factor0 / 10.
std::array<DirectionFactors, kDoKinds> default_direction_factors() noexcept;

/// Forward-only factors: plain BFS.
std::array<DirectionFactors, kDoKinds> forward_only_factors() noexcept;

struct DirectionState {
  std::array<Direction, kDoKinds> current{};
  std::array<DirectionFactors, kDoKinds> factors = default_direction_factors();
  bool allow_switch_back = true;

  Direction operator[](DoKind kind) const noexcept { return current[static_cast<std::size_t>(kind)]; }
};

struct WorkloadEstimate {
  double forward = 0.0;            // FV: out-degree sum over the frontier
  double backward = 0.0;           // BV
  std::uint64_t unvisited_reverse = 0;  // |U|
  std::uint64_t frontier = 0;           // q
  std::uint64_t unvisited_forward = 0;  // s
};

/// Expected parents scanned before the first newly visited one, summed over
/// U, in the large-degree limit: |U| / a with a = q / (q + s). Infinite when
/// the frontier is empty.
double estimate_backward_workload(std::uint64_t unvisited_reverse, std::uint64_t frontier,
                                  std::uint64_t unvisited_forward) noexcept;

WorkloadEstimate make_estimate(std::uint64_t forward_workload, std::uint64_t unvisited_reverse,
                               std::uint64_t frontier, std::uint64_t unvisited_forward) noexcept;

/// Forward switches to backward when FV > factor0 * BV; backward switches to
/// forward when FV < factor1 * BV (unless switching back is disabled).
Direction decide_direction(const WorkloadEstimate& est, Direction current, DirectionFactors factors,
                           bool allow_switch_back = true) noexcept;

/// Updates `state` for `kind` and returns the new direction.
Direction decide_direction(const WorkloadEstimate& est, DirectionState& state, DoKind kind) noexcept;

/// Labels unreached inputs with `level` and returns the inputs now sitting
/// at `level`, sorted and without duplicates. Inputs labeled earlier at a
/// lower level are dropped.
template <typename Id>
std::vector<Id> label_frontier(std::span<const Id> inputs, std::span<Level> levels, Level level) {
  std::vector<Id> frontier;
  frontier.reserve(inputs.size());
  for (Id v : inputs) {
    Level& lv = levels[v];
    if (lv == kUnreached) lv = level;
    if (lv == level) frontier.push_back(v);
  }
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
  return frontier;
}

template <typename Id>
struct VisitQueue {
  std::vector<Id> vertices;
  std::uint64_t workload = 0;  // FV
};

/// Keeps frontier vertices that have at least one edge in `csr`.
template <typename Id, typename Index>
VisitQueue<Id> build_queue(std::span<const Id> frontier, const Csr<Index>& csr) {
  VisitQueue<Id> queue;
  for (Id v : frontier) {
    const std::uint64_t deg = csr.degree(v);
    if (deg == 0) continue;
    queue.vertices.push_back(v);
    queue.workload += deg;
  }
  return queue;
}

/// Label, dedupe, and drop vertices with no edges in `csr`.
template <typename Id, typename Index>
VisitQueue<Id> previsit(std::span<const Id> inputs, std::span<Level> levels, Level level,
                        const Csr<Index>& csr) {
  const std::vector<Id> frontier = label_frontier(inputs, levels, level);
  return build_queue(std::span<const Id>(frontier), csr);
}

/// Push: every edge out of the queue is inspected once and its destination
/// handed to `sink`. Returns the inspection count.
template <typename Id, typename Index, typename Sink>
std::uint64_t visit_forward(const Csr<Index>& csr, std::span<const Id> queue, Sink&& sink) {
  std::uint64_t inspections = 0;
  for (Id u : queue) {
    for (Index v : csr.row(u)) {
      ++inspections;
      sink(v);
    }
  }
  return inspections;
}

/// Pull: each candidate accepted by `is_unvisited` scans its row in the
/// reverse subgraph until `is_parent` holds, then `on_found` is called and
/// the scan stops. Inspections include the successful one.
template <typename Candidates, typename Index, typename IsUnvisited, typename IsParent, typename OnFound>
std::uint64_t visit_backward(const Csr<Index>& reverse, const Candidates& candidates, IsUnvisited&& is_unvisited,
                             IsParent&& is_parent, OnFound&& on_found) {
  std::uint64_t inspections = 0;
  for (auto u : candidates) {
    if (!is_unvisited(u)) continue;
    for (Index parent : reverse.row(u)) {
      ++inspections;
      if (is_parent(parent)) {
        on_found(u);
        break;
      }
    }
  }
  return inspections;
}

}  // namespace dbfs
