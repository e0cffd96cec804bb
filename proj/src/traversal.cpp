#include "dbfs/traversal.hpp"

#include <cmath>

namespace dbfs {

std::array<DirectionFactors, kDoKinds> default_direction_factors() noexcept {
  return {DirectionFactors{0.5, 0.05}, DirectionFactors{0.05, 0.005}, DirectionFactors{1e-7, 1e-8}};
}

std::array<DirectionFactors, kDoKinds> forward_only_factors() noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {DirectionFactors{inf, 0.0}, DirectionFactors{inf, 0.0}, DirectionFactors{inf, 0.0}};
}

double estimate_backward_workload(std::uint64_t unvisited_reverse, std::uint64_t frontier,
                                  std::uint64_t unvisited_forward) noexcept {
  if (frontier == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(unvisited_reverse) *
         (static_cast<double>(frontier) + static_cast<double>(unvisited_forward)) / static_cast<double>(frontier);
}

WorkloadEstimate make_estimate(std::uint64_t forward_workload, std::uint64_t unvisited_reverse,
                               std::uint64_t frontier, std::uint64_t unvisited_forward) noexcept {
  return {static_cast<double>(forward_workload),
          estimate_backward_workload(unvisited_reverse, frontier, unvisited_forward), unvisited_reverse, frontier,
          unvisited_forward};
}

namespace {
// factor * BV, with a zero factor always giving 0 and an infinite factor
// always giving infinity.
double scaled(double factor, double bv) noexcept {
  if (factor == 0.0) return 0.0;
  if (std::isinf(factor)) return factor;
  if (bv == 0.0) return 0.0;
  return factor * bv;
}
}  // namespace

Direction decide_direction(const WorkloadEstimate& est, Direction current, DirectionFactors factors,
                           bool allow_switch_back) noexcept {
  if (current == Direction::forward) {
    return est.forward > scaled(factors.to_backward, est.backward) ? Direction::backward : Direction::forward;
  }
  if (allow_switch_back && est.forward < scaled(factors.to_forward, est.backward)) return Direction::forward;
  return Direction::backward;
}

Direction decide_direction(const WorkloadEstimate& est, DirectionState& state, DoKind kind) noexcept {
  const auto i = static_cast<std::size_t>(kind);
  state.current[i] = decide_direction(est, state.current[i], state.factors[i], state.allow_switch_back);
  return state.current[i];
}

}  // namespace dbfs
