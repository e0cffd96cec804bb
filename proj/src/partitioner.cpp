#include "dbfs/partitioner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "dbfs/errors.hpp"

namespace dbfs {

ClusterShape ClusterShape::parse(std::string_view text) {
  std::vector<std::uint32_t> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find('x', pos), text.size());
    std::uint32_t value = 0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + next;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || value == 0) {
      throw ConfigError("shape", "expected NxRxG with positive integers, got \"" + std::string(text) + "\"");
    }
    parts.push_back(value);
    pos = next + 1;
  }
  if (parts.size() == 3) return {parts[0] * parts[1], parts[2]};
  if (parts.size() == 2) return {parts[0], parts[1]};
  throw ConfigError("shape", "expected NxRxG, got \"" + std::string(text) + "\"");
}

std::string ClusterShape::to_string() const {
  return "1x" + std::to_string(p_rank) + "x" + std::to_string(p_gpu);
}

DegreeTable compute_out_degrees(const EdgeList& g) {
  DegreeTable degree(g.n, 0);
  for (const Edge& e : g.edges) ++degree[e.src];
  return degree;
}

std::uint64_t auto_theta(unsigned scale) {
  const double raw = 64.0 * std::pow(std::sqrt(2.0), static_cast<double>(scale) - 30.0);
  return static_cast<std::uint64_t>(std::clamp(std::round(raw), 16.0, 512.0));
}

VertexClassification classify_vertices(DegreeTable degrees, std::uint64_t theta) {
  VertexClassification cls;
  cls.theta = theta;
  cls.out_degree = std::move(degrees);
  cls.delegate_of.assign(cls.out_degree.size(), kNotDelegate);
  for (VertexId v = 0; v < cls.out_degree.size(); ++v) {
    if (cls.out_degree[v] <= theta) continue;
    if (cls.delegate_to_global.size() >= kNotDelegate) {
      throw CapacityError("classify: delegate count exceeds 32-bit id space");
    }
    cls.delegate_of[v] = static_cast<DelegateId>(cls.delegate_to_global.size());
    cls.delegate_to_global.push_back(v);
  }
  return cls;
}

SubgraphKind kind_of(const Edge& e, const VertexClassification& cls) noexcept {
  const bool src_delegate = cls.is_delegate(e.src);
  const bool dst_delegate = cls.is_delegate(e.dst);
  if (!src_delegate) return dst_delegate ? SubgraphKind::nd : SubgraphKind::nn;
  return dst_delegate ? SubgraphKind::dd : SubgraphKind::dn;
}

Placement place_edge(const Edge& e, const VertexClassification& cls, ClusterShape shape) noexcept {
  VertexId home = 0;
  if (!cls.is_delegate(e.src)) {
    home = e.src;
  } else if (!cls.is_delegate(e.dst)) {
    home = e.dst;
  } else {
    const auto du = cls.out_degree[e.src];
    const auto dv = cls.out_degree[e.dst];
    home = du < dv ? e.src : du > dv ? e.dst : std::min(e.src, e.dst);
  }
  return {shape.flat(shape.home_of(home)), kind_of(e, cls)};
}

std::uint64_t EdgeBuckets::total() const noexcept {
  std::uint64_t sum = 0;
  for (std::uint32_t w = 0; w < workers.size(); ++w) sum += worker_total(w);
  return sum;
}

std::uint64_t EdgeBuckets::kind_total(SubgraphKind kind) const noexcept {
  std::uint64_t sum = 0;
  for (const auto& w : workers) sum += w[static_cast<std::size_t>(kind)].size();
  return sum;
}

std::uint64_t EdgeBuckets::worker_total(std::uint32_t worker) const noexcept {
  std::uint64_t sum = 0;
  for (const auto& bucket : workers[worker]) sum += bucket.size();
  return sum;
}

EdgeBuckets distribute_edges(const EdgeList& g, const VertexClassification& cls, ClusterShape shape) {
  EdgeBuckets buckets;
  buckets.shape = shape;
  buckets.workers.resize(shape.workers());
  for (const Edge& e : g.edges) {
    const Placement where = place_edge(e, cls, shape);
    buckets.workers[where.worker][static_cast<std::size_t>(where.kind)].push_back(e);
  }
  return buckets;
}

BucketReport verify_buckets(const EdgeBuckets& buckets, const VertexClassification& cls) {
  BucketReport report;
  const ClusterShape shape = buckets.shape;
  const std::uint32_t p = shape.workers();
  const VertexId n = cls.n();
  report.normal_bound = (n + p - 1) / p;
  report.min_edges = std::numeric_limits<std::uint64_t>::max();

  for (std::uint32_t w = 0; w < p; ++w) {
    const auto& kinds = buckets.workers[w];

    std::vector<Edge> closed;
    for (SubgraphKind k : {SubgraphKind::nd, SubgraphKind::dn, SubgraphKind::dd}) {
      const auto& bucket = kinds[static_cast<std::size_t>(k)];
      closed.insert(closed.end(), bucket.begin(), bucket.end());
    }
    std::vector<Edge> reversed;
    reversed.reserve(closed.size());
    for (const Edge& e : closed) reversed.push_back({e.dst, e.src});
    std::sort(closed.begin(), closed.end());
    std::sort(reversed.begin(), reversed.end());
    if (closed != reversed) {
      report.symmetric = false;
      // The first edge present more often than its reverse.
      std::vector<Edge> missing;
      std::set_difference(closed.begin(), closed.end(), reversed.begin(), reversed.end(),
                          std::back_inserter(missing));
      const Edge culprit = missing.empty() ? closed.front() : missing.front();
      report.violations.push_back({w, culprit, "reverse edge not on the same worker"});
    }

    std::unordered_set<VertexId> normals;
    std::unordered_set<VertexId> delegates;
    auto note = [&](VertexId v, const Edge& e) {
      if (cls.is_delegate(v)) {
        delegates.insert(v);
        return;
      }
      normals.insert(v);
      if (shape.owner(v) != w) {
        report.bounded = false;
        report.violations.push_back({w, e, "normal endpoint not owned by this worker"});
      }
    };
    for (std::size_t k = 0; k < kSubgraphKinds; ++k) {
      const auto kind = static_cast<SubgraphKind>(k);
      for (const Edge& e : kinds[k]) {
        if (kind_of(e, cls) != kind) {
          report.violations.push_back({w, e, std::string("edge filed under ") + to_string(kind)});
        }
        note(e.src, e);
        if (kind != SubgraphKind::nn) note(e.dst, e);
      }
    }
    report.max_normals_per_worker = std::max<std::uint64_t>(report.max_normals_per_worker, normals.size());
    report.max_delegates_per_worker =
        std::max<std::uint64_t>(report.max_delegates_per_worker, delegates.size());
    if (normals.size() > report.normal_bound || delegates.size() > cls.d()) {
      report.bounded = false;
      report.violations.push_back({w, {}, "distinct vertex count exceeds bound"});
    }

    const std::uint64_t edges = buckets.worker_total(w);
    report.min_edges = std::min(report.min_edges, edges);
    report.max_edges = std::max(report.max_edges, edges);
  }
  if (p == 0) report.min_edges = 0;
  const double mean = p == 0 ? 0.0 : static_cast<double>(buckets.total()) / p;
  report.imbalance = mean > 0 ? static_cast<double>(report.max_edges - report.min_edges) / mean : 0.0;
  return report;
}

}  // namespace dbfs
