#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dbfs {

/// Inputs of the analytic communication models. Sizes are doubles so weak
/// scaling sweeps can go past what fits in a desk-scale run.
struct CostModelParams {
  double n = 0;
  double m = 0;
  std::uint64_t p_rank = 1;
  std::uint64_t p_gpu = 1;
  double g = 1e-9;          // seconds per byte
  double iterations = 0;    // S
  double backward_iterations = 0;  // S_b
  double forward_visited = 0;      // n_t
  double d = 0;
  double e_nn = 0;

  std::uint64_t p() const noexcept { return p_rank * p_gpu; }
  /// DomainError on negative values or an empty shape.
  void validate() const;
};

struct Cost1D {
  double volume = 0;
  double time = 0;
};

struct Cost2D {
  double forward_volume = 0;
  double backward_volume = 0;
  double time = 0;
};

struct CostDelegate {
  double volume = 0;
  double time = 0;
  /// n log(p_rank) / p * S * g: the delegate term with d = 4n/p, nn term dropped.
  double weak_scaling_time = 0;
};

/// Broadcast of newly visited vertices: 8m bytes, 8m/p * g seconds.
Cost1D cost_1d(const CostModelParams& params);

/// Square processor grid; log base 2. Throws DomainError unless p is a
/// perfect square.
Cost2D cost_2d(const CostModelParams& params);

/// Mask reductions on every iteration plus every nn edge cut:
/// volume d p_rank / 4 * S + 4 E_nn, time (d log p_rank / 4 * S + 4 E_nn / p) g.
CostDelegate cost_delegate(const CostModelParams& params);

struct CostSweepRow {
  std::uint64_t p = 0;
  std::uint64_t p_rank = 0;
  CostModelParams params;
  Cost1D one_d;
  bool has_2d = false;
  Cost2D two_d;
  CostDelegate delegate;
};

/// Weak scaling from `base` (taken as describing `base.p()` workers): n, m,
/// n_t and E_nn grow with p, d and the iteration counts stay fixed, p_gpu is
/// kept and p_rank = p / p_gpu. Each p must be a multiple of p_gpu.
std::vector<CostSweepRow> weak_scaling_sweep(const CostModelParams& base, std::span<const std::uint64_t> p_values);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace dbfs
