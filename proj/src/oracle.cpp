#include "dbfs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "dbfs/errors.hpp"

namespace dbfs::oracle {

namespace {

void check_size(const EdgeList& g) {
  if (g.n > kMaxVertices) throw ResourceError("oracle: graph exceeds the 2^20 vertex cap");
}

// Undirected adjacency: every edge contributes u->v and v->u.
std::vector<std::vector<VertexId>> undirected_adjacency(const EdgeList& g) {
  std::vector<std::vector<VertexId>> adj(g.n);
  for (const Edge& e : g.edges) {
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  return adj;
}

}  // namespace

std::vector<Level> reference_bfs(const EdgeList& g, VertexId source) {
  check_size(g);
  if (source >= g.n) throw DomainError("oracle: source out of range");
  const auto adj = undirected_adjacency(g);
  std::vector<Level> dist(g.n, kUnreached);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (VertexId v : adj[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

EdgeHome distribute(const Edge& e, const std::vector<std::uint64_t>& out_degree, std::uint64_t theta,
                    ClusterShape shape) {
  const VertexId u = e.src;
  const VertexId v = e.dst;
  auto P = [&](VertexId x) { return static_cast<std::uint32_t>(x % shape.p_rank); };
  auto G = [&](VertexId x) { return static_cast<std::uint32_t>((x / shape.p_rank) % shape.p_gpu); };
  auto normal = [&](VertexId x) { return out_degree[x] <= theta; };

  EdgeHome home;
  if (normal(u)) {
    home.rank = P(u);
    home.gpu = G(u);
  } else if (normal(v)) {
    home.rank = P(v);
    home.gpu = G(v);
  } else if (out_degree[u] < out_degree[v]) {
    home.rank = P(u);
    home.gpu = G(u);
  } else if (out_degree[u] > out_degree[v]) {
    home.rank = P(v);
    home.gpu = G(v);
  } else {
    home.rank = P(std::min(u, v));
    home.gpu = G(std::min(u, v));
  }

  if (normal(u) && normal(v)) {
    home.kind = SubgraphKind::nn;
  } else if (normal(u)) {
    home.kind = SubgraphKind::nd;
  } else if (normal(v)) {
    home.kind = SubgraphKind::dn;
  } else {
    home.kind = SubgraphKind::dd;
  }
  return home;
}

namespace {

// The switching rule written out again: forward -> backward when
// fv > f0 * bv, backward -> forward when fv < f1 * bv.
bool next_backward(bool backward, double fv, double bv, DirectionFactors factors, bool allow_switch_back) {
  const auto times = [&](double f) {
    if (f == 0.0) return 0.0;
    if (std::isinf(f)) return f;
    return bv == 0.0 ? 0.0 : f * bv;
  };
  if (!backward) return fv > times(factors.to_backward);
  if (allow_switch_back && fv < times(factors.to_forward)) return false;
  return true;
}

}  // namespace

std::uint64_t dobfs_inspections(const EdgeList& g, VertexId source, DirectionFactors factors,
                                bool allow_switch_back) {
  check_size(g);
  if (source >= g.n) throw DomainError("oracle: source out of range");
  std::vector<std::vector<VertexId>> out(g.n);
  for (const Edge& e : g.edges) out[e.src].push_back(e.dst);

  std::vector<Level> level(g.n, kUnreached);
  level[source] = 0;
  std::vector<VertexId> frontier{source};
  bool backward = false;
  std::uint64_t inspections = 0;

  for (Level cur = 0; !frontier.empty(); ++cur) {
    std::uint64_t fv = 0;
    std::uint64_t q = 0;
    for (VertexId u : frontier) {
      if (!out[u].empty()) {
        fv += out[u].size();
        ++q;
      }
    }
    std::uint64_t unvisited = 0;
    for (VertexId x = 0; x < g.n; ++x) {
      if (level[x] == kUnreached && !out[x].empty()) ++unvisited;
    }
    if (q > 0) {
      const double bv = static_cast<double>(unvisited) * static_cast<double>(q + unvisited) / static_cast<double>(q);
      backward = next_backward(backward, static_cast<double>(fv), bv, factors, allow_switch_back);
    }

    std::vector<VertexId> next;
    if (q == 0) {
      // nothing can be reached from vertices without edges
    } else if (!backward) {
      for (VertexId u : frontier) {
        for (VertexId v : out[u]) {
          ++inspections;
          if (level[v] == kUnreached) {
            level[v] = cur + 1;
            next.push_back(v);
          }
        }
      }
    } else {
      for (VertexId x = 0; x < g.n; ++x) {
        if (level[x] != kUnreached || out[x].empty()) continue;
        for (VertexId parent : out[x]) {
          ++inspections;
          if (level[parent] == cur) {
            level[x] = cur + 1;
            next.push_back(x);
            break;
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return inspections;
}

std::uint64_t dobfs_inspections(const EdgeList& g, VertexId source, std::uint64_t theta,
                                const std::array<DirectionFactors, kDoKinds>& factors, bool allow_switch_back) {
  check_size(g);
  if (source >= g.n) throw DomainError("oracle: source out of range");
  std::vector<std::uint64_t> degree(g.n, 0);
  for (const Edge& e : g.edges) ++degree[e.src];
  std::vector<bool> hub(g.n);
  for (VertexId x = 0; x < g.n; ++x) hub[x] = degree[x] > theta;

  // Out-edges split by the class of the destination.
  std::vector<std::vector<VertexId>> to_normal(g.n), to_hub(g.n);
  for (const Edge& e : g.edges) (hub[e.dst] ? to_hub : to_normal)[e.src].push_back(e.dst);

  enum { kHubHub = 0, kHubNormal = 1, kNormalHub = 2 };
  std::array<bool, 3> backward{};
  std::vector<Level> level(g.n, kUnreached);
  level[source] = 0;
  std::vector<VertexId> frontier{source};
  std::uint64_t inspections = 0;

  for (Level cur = 0; !frontier.empty(); ++cur) {
    // Work and sizes measured before anything in this iteration is visited.
    std::array<std::uint64_t, 3> fv{}, q{};
    for (VertexId u : frontier) {
      const auto& to_n = to_normal[u];
      const auto& to_h = to_hub[u];
      if (hub[u]) {
        if (!to_h.empty()) fv[kHubHub] += to_h.size(), ++q[kHubHub];
        if (!to_n.empty()) fv[kHubNormal] += to_n.size(), ++q[kHubNormal];
      } else if (!to_h.empty()) {
        fv[kNormalHub] += to_h.size(), ++q[kNormalHub];
      }
    }
    std::vector<VertexId> pull_hub_hub, pull_normal, pull_hub_normal;
    for (VertexId x = 0; x < g.n; ++x) {
      if (level[x] != kUnreached) continue;
      if (hub[x]) {
        if (!to_hub[x].empty()) pull_hub_hub.push_back(x);
        if (!to_normal[x].empty()) pull_hub_normal.push_back(x);
      } else if (!to_hub[x].empty()) {
        pull_normal.push_back(x);
      }
    }
    const auto bv = [](std::uint64_t u, std::uint64_t frontier_size, std::uint64_t s) {
      if (frontier_size == 0) return std::numeric_limits<double>::infinity();
      return static_cast<double>(u) * static_cast<double>(frontier_size + s) / static_cast<double>(frontier_size);
    };
    const std::array<double, 3> estimates = {
        bv(pull_hub_hub.size(), q[kHubHub], pull_hub_hub.size()),
        bv(pull_normal.size(), q[kHubNormal], pull_hub_normal.size()),
        bv(pull_hub_normal.size(), q[kNormalHub], pull_normal.size())};
    for (int k = 0; k < 3; ++k) {
      if (q[k] > 0) {
        backward[k] = next_backward(backward[k], static_cast<double>(fv[k]), estimates[k], factors[k],
                                    allow_switch_back);
      }
    }

    std::vector<VertexId> next;
    const auto reach = [&](VertexId v) {
      if (level[v] == kUnreached) {
        level[v] = cur + 1;
        next.push_back(v);
      }
    };
    const auto push = [&](const std::vector<VertexId>& targets) {
      for (VertexId v : targets) {
        ++inspections;
        reach(v);
      }
    };
    // Pull over the reverse edges; by symmetry those are the out-edges.
    const auto pull = [&](const std::vector<VertexId>& candidates, const std::vector<std::vector<VertexId>>& parents) {
      for (VertexId x : candidates) {
        for (VertexId parent : parents[x]) {
          ++inspections;
          if (level[parent] <= cur) {
            reach(x);
            break;
          }
        }
      }
    };

    for (VertexId u : frontier) {
      if (!hub[u]) push(to_normal[u]);
    }
    if (q[kHubHub] > 0) {
      if (!backward[kHubHub]) {
        for (VertexId u : frontier) {
          if (hub[u]) push(to_hub[u]);
        }
      } else {
        pull(pull_hub_hub, to_hub);
      }
    }
    if (q[kHubNormal] > 0) {
      if (!backward[kHubNormal]) {
        for (VertexId u : frontier) {
          if (hub[u]) push(to_normal[u]);
        }
      } else {
        pull(pull_normal, to_hub);
      }
    }
    if (q[kNormalHub] > 0) {
      if (!backward[kNormalHub]) {
        for (VertexId u : frontier) {
          if (!hub[u]) push(to_hub[u]);
        }
      } else {
        pull(pull_hub_normal, to_normal);
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return inspections;
}

double simulate_backward_scan(std::uint64_t vertices, std::uint64_t degree, double a, std::uint32_t trials,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution newly_visited(a);
  std::uint64_t total = 0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    for (std::uint64_t u = 0; u < vertices; ++u) {
      for (std::uint64_t i = 0; i < degree; ++i) {
        ++total;
        if (newly_visited(rng)) break;
      }
    }
  }
  return static_cast<double>(total) / trials;
}

bool same_multiset(std::vector<Edge> a, std::vector<Edge> b) {
  std::map<std::pair<VertexId, VertexId>, std::int64_t> count;
  for (const Edge& e : a) ++count[{e.src, e.dst}];
  for (const Edge& e : b) --count[{e.src, e.dst}];
  return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 0; });
}

}  // namespace dbfs::oracle
