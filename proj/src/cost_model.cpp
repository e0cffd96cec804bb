#include "dbfs/cost_model.hpp"

#include <cmath>
#include <string>

#include "dbfs/errors.hpp"

namespace dbfs {

void CostModelParams::validate() const {
  for (double v : {n, m, g, iterations, backward_iterations, forward_visited, d, e_nn}) {
    if (!(v >= 0.0)) throw DomainError("cost model: parameters must be nonnegative");
  }
  if (p_rank == 0 || p_gpu == 0) throw DomainError("cost model: p_rank and p_gpu must be positive");
}

Cost1D cost_1d(const CostModelParams& params) {
  params.validate();
  const double volume = 8.0 * params.m;
  return {volume, volume / static_cast<double>(params.p()) * params.g};
}

Cost2D cost_2d(const CostModelParams& params) {
  params.validate();
  const auto p = params.p();
  const auto side = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(p))));
  if (side * side != p) throw DomainError("cost_2d: p = " + std::to_string(p) + " is not a perfect square");
  const double root = static_cast<double>(side);
  const double log_root = std::log2(root);
  Cost2D c;
  c.forward_volume = 8.0 * params.forward_visited * root * log_root;
  c.backward_volume = 2.0 * params.n * params.backward_iterations * root * log_root / 8.0;
  c.time = (4.0 * params.forward_visited + params.n * params.backward_iterations / 8.0) * (log_root / root) * params.g;
  return c;
}

CostDelegate cost_delegate(const CostModelParams& params) {
  params.validate();
  const double p = static_cast<double>(params.p());
  const double pr = static_cast<double>(params.p_rank);
  const double log_pr = std::log2(pr);
  CostDelegate c;
  c.volume = params.d * pr / 4.0 * params.iterations + 4.0 * params.e_nn;
  c.time = (params.d * log_pr / 4.0 * params.iterations + 4.0 * params.e_nn / p) * params.g;
  c.weak_scaling_time = params.n * log_pr / p * params.iterations * params.g;
  return c;
}

std::vector<CostSweepRow> weak_scaling_sweep(const CostModelParams& base, std::span<const std::uint64_t> p_values) {
  base.validate();
  const double base_p = static_cast<double>(base.p());
  std::vector<CostSweepRow> rows;
  for (std::uint64_t p : p_values) {
    if (p == 0 || p % base.p_gpu != 0) {
      throw DomainError("sweep: p = " + std::to_string(p) + " is not a multiple of p_gpu");
    }
    const double grow = static_cast<double>(p) / base_p;
    CostSweepRow row;
    row.p = p;
    row.p_rank = p / base.p_gpu;
    row.params = base;
    row.params.p_rank = row.p_rank;
    row.params.n = base.n * grow;
    row.params.m = base.m * grow;
    row.params.forward_visited = base.forward_visited * grow;
    row.params.e_nn = base.e_nn * grow;
    row.one_d = cost_1d(row.params);
    const auto side = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(p))));
    row.has_2d = side * side == p;
    if (row.has_2d) row.two_d = cost_2d(row.params);
    row.delegate = cost_delegate(row.params);
    rows.push_back(row);
  }
  return rows;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need at least two paired points");
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / k;
  const double my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw DomainError("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace dbfs
