#include "dbfs/engine.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "dbfs/errors.hpp"

namespace dbfs {

std::uint64_t Inspections::total() const noexcept { return total_forward() + total_backward(); }

std::uint64_t Inspections::total_forward() const noexcept {
  std::uint64_t sum = 0;
  for (auto v : forward) sum += v;
  return sum;
}

std::uint64_t Inspections::total_backward() const noexcept {
  std::uint64_t sum = 0;
  for (auto v : backward) sum += v;
  return sum;
}

std::uint64_t Inspections::delegate_backward() const noexcept {
  return backward[static_cast<std::size_t>(SubgraphKind::nd)] + backward[static_cast<std::size_t>(SubgraphKind::dd)];
}

Inspections& Inspections::operator+=(const Inspections& other) noexcept {
  for (std::size_t k = 0; k < kSubgraphKinds; ++k) {
    forward[k] += other.forward[k];
    backward[k] += other.backward[k];
  }
  return *this;
}

bool IterationRecord::any_backward() const noexcept {
  for (auto w : backward_workers) {
    if (w > 0) return true;
  }
  return false;
}

std::uint64_t BfsRun::reached() const noexcept {
  return static_cast<std::uint64_t>(
      std::count_if(levels.begin(), levels.end(), [](Level l) { return l != kUnreached; }));
}

std::uint64_t BfsRun::levels_digest() const noexcept { return dbfs::levels_digest(levels); }

std::uint64_t levels_digest(std::span<const Level> levels) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (Level l : levels) {
    for (int i = 0; i < 4; ++i) {
      hash ^= (l >> (8 * i)) & 0xFF;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

double compute_teps(std::uint64_t m, double elapsed_seconds) {
  if (!(elapsed_seconds > 0.0)) throw DomainError("teps: elapsed time must be positive");
  return (static_cast<double>(m) / 2.0) / elapsed_seconds;
}

unsigned thread_count_from_env() {
  if (const char* env = std::getenv("DELEGATE_BFS_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return 1;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
void for_each_worker(std::uint32_t workers, unsigned threads, Fn&& fn) {
  if (threads <= 1 || workers <= 1) {
    for (std::uint32_t w = 0; w < workers; ++w) fn(w);
    return;
  }
  std::atomic<std::uint32_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned count = std::min<unsigned>(threads, workers);
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (std::uint32_t w = next++; w < workers; w = next++) fn(w);
    });
  }
}

std::vector<std::uint32_t> set_bits(const Bitmask& mask) {
  std::vector<std::uint32_t> out;
  out.reserve(mask.count());
  for (auto i = mask.find_first(); i != Bitmask::npos; i = mask.find_next(i)) {
    out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

constexpr std::size_t idx(SubgraphKind k) { return static_cast<std::size_t>(k); }
constexpr std::size_t idx(DoKind k) { return static_cast<std::size_t>(k); }

// State one simulated worker owns for the duration of a run.
struct Worker {
  const WorkerSubgraphs* graph = nullptr;
  std::vector<Level> normal_level;
  std::vector<Level> delegate_level;
  Bitmask delegate_visited;
  DirectionState directions;
  DelegateMask pending;
  Outbox outbox;
  Inbox inbox;
  std::vector<LocalId> discovered;
  std::vector<LocalId> frontier_normals;
  std::vector<DelegateId> frontier_delegates;
  Inspections step;
  std::array<bool, kDoKinds> backward{};

  void previsit(Level level, const Bitmask& new_delegates) {
    std::vector<LocalId> inputs = std::move(discovered);
    discovered.clear();
    inputs.reserve(inputs.size() + inbox.size());
    for (const LocalUpdate& rec : inbox) inputs.push_back(rec.vertex);
    inbox.clear();
    frontier_normals = label_frontier<LocalId>(inputs, normal_level, level);

    frontier_delegates.clear();
    for (auto i = new_delegates.find_first(); i != Bitmask::npos; i = new_delegates.find_next(i)) {
      if (delegate_visited.test(i)) continue;
      delegate_visited.set(i);
      delegate_level[i] = level;
      frontier_delegates.push_back(static_cast<DelegateId>(i));
    }
  }

  // Queues and the local inputs of the three workload estimates.
  VisitQueue<LocalId> nn_q, nd_q;
  VisitQueue<DelegateId> dn_q, dd_q;
  Bitmask unvisited_dd;
  Bitmask unvisited_dn;
  std::uint64_t unvisited_nd = 0;
  std::array<WorkloadEstimate, kDoKinds> local_estimate{};

  void prepare(Mode mode) {
    const WorkerSubgraphs& g = *graph;
    nn_q = build_queue<LocalId>(frontier_normals, g.nn);
    nd_q = build_queue<LocalId>(frontier_normals, g.nd);
    dn_q = build_queue<DelegateId>(frontier_delegates, g.dn);
    dd_q = build_queue<DelegateId>(frontier_delegates, g.dd);
    if (mode != Mode::dobfs) return;
    unvisited_dd = g.dd_sources - delegate_visited;
    unvisited_dn = g.dn_sources - delegate_visited;
    unvisited_nd = 0;
    for (LocalId v : g.nd_sources) unvisited_nd += normal_level[v] == kUnreached ? 1 : 0;
    const std::uint64_t udd = unvisited_dd.count();
    const std::uint64_t udn = unvisited_dn.count();
    local_estimate[idx(DoKind::dd)] = make_estimate(dd_q.workload, udd, dd_q.vertices.size(), udd);
    local_estimate[idx(DoKind::dn)] = make_estimate(dn_q.workload, unvisited_nd, dn_q.vertices.size(), udn);
    local_estimate[idx(DoKind::nd)] = make_estimate(nd_q.workload, udn, nd_q.vertices.size(), unvisited_nd);
  }

  // Local scope: each worker switches on its own estimates.
  void decide_locally() {
    for (DoKind k : kAllDoKinds) {
      if (local_estimate[idx(k)].frontier > 0) decide_direction(local_estimate[idx(k)], directions, k);
    }
  }

  void visit(Level level, ClusterShape shape) {
    const WorkerSubgraphs& g = *graph;
    const Level next = level + 1;
    step = {};
    backward = {};

    auto delegate_open = [&](DelegateId v) { return !delegate_visited.test(v) && !pending.bits.test(v); };
    auto delegate_parent = [&](DelegateId v) { return delegate_level[v] <= level; };
    auto normal_parent = [&](LocalId v) { return normal_level[v] <= level; };
    auto discover_normal = [&](LocalId v) {
      normal_level[v] = next;
      discovered.push_back(v);
    };
    auto discover_delegate = [&](std::uint32_t v) { pending.mark(v); };

    // nn: always pushed; every destination goes to its owner's bin.
    step.forward[idx(SubgraphKind::nn)] = visit_forward<LocalId>(
        g.nn, nn_q.vertices, [&](VertexId v) { outbox[shape.owner(v)].push_back({v, next}); });

    if (!dd_q.vertices.empty()) {
      if (directions[DoKind::dd] == Direction::forward) {
        step.forward[idx(SubgraphKind::dd)] = visit_forward<DelegateId>(g.dd, dd_q.vertices, [&](DelegateId v) {
          if (delegate_open(v)) discover_delegate(v);
        });
      } else {
        backward[idx(DoKind::dd)] = true;
        step.backward[idx(SubgraphKind::dd)] = visit_backward(
            g.dd, set_bits(unvisited_dd), [](std::uint32_t) { return true; }, delegate_parent, discover_delegate);
      }
    }

    if (!dn_q.vertices.empty()) {
      if (directions[DoKind::dn] == Direction::forward) {
        step.forward[idx(SubgraphKind::dn)] = visit_forward<DelegateId>(g.dn, dn_q.vertices, [&](LocalId v) {
          if (normal_level[v] == kUnreached) discover_normal(v);
        });
      } else {
        backward[idx(DoKind::dn)] = true;
        step.backward[idx(SubgraphKind::dn)] = visit_backward(
            g.nd, g.nd_sources, [&](LocalId v) { return normal_level[v] == kUnreached; }, delegate_parent,
            discover_normal);
      }
    }

    if (!nd_q.vertices.empty()) {
      if (directions[DoKind::nd] == Direction::forward) {
        step.forward[idx(SubgraphKind::nd)] = visit_forward<LocalId>(g.nd, nd_q.vertices, [&](DelegateId v) {
          if (delegate_open(v)) discover_delegate(v);
        });
      } else {
        backward[idx(DoKind::nd)] = true;
        step.backward[idx(SubgraphKind::nd)] = visit_backward(
            g.dn, set_bits(unvisited_dn), [](std::uint32_t) { return true; }, normal_parent, discover_delegate);
      }
    }
  }
};

// Sums each kind's estimate inputs over the workers. Delegate-side counts are
// replicated, so they come from the union masks rather than a sum.
void decide_globally(const std::vector<Worker>& workers, const Bitmask& any_dd, const Bitmask& any_dn,
                     DirectionState& directions) {
  if (workers.empty()) return;
  const Worker& first = workers.front();
  const std::uint64_t udd = (any_dd - first.delegate_visited).count();
  const std::uint64_t udn = (any_dn - first.delegate_visited).count();
  std::uint64_t q_dd = 0, q_dn = 0;
  for (DelegateId v : first.frontier_delegates) {
    q_dd += any_dd.test(v) ? 1 : 0;
    q_dn += any_dn.test(v) ? 1 : 0;
  }
  std::uint64_t fv_dd = 0, fv_dn = 0, fv_nd = 0, q_nd = 0, und = 0;
  for (const Worker& wk : workers) {
    fv_dd += wk.dd_q.workload;
    fv_dn += wk.dn_q.workload;
    fv_nd += wk.nd_q.workload;
    q_nd += wk.nd_q.vertices.size();
    und += wk.unvisited_nd;
  }
  const std::array<WorkloadEstimate, kDoKinds> est = {make_estimate(fv_dd, udd, q_dd, udd),
                                                      make_estimate(fv_dn, und, q_dn, udn),
                                                      make_estimate(fv_nd, udn, q_nd, und)};
  for (DoKind k : kAllDoKinds) {
    if (est[idx(k)].frontier > 0) decide_direction(est[idx(k)], directions, k);
  }
}

}  // namespace

BfsRun run_bfs(const PartitionedGraph& pg, const BfsOptions& opts) {
  if (opts.source >= pg.n) {
    throw DomainError("bfs: source " + std::to_string(opts.source) + " is not below n = " + std::to_string(pg.n));
  }
  const auto start = Clock::now();
  const ClusterShape shape = pg.shape;
  const std::uint32_t p = shape.workers();
  const std::size_t d = pg.d();
  const unsigned threads = opts.threads == 0 ? thread_count_from_env() : opts.threads;

  BfsRun run;
  run.source = opts.source;
  run.m = pg.m;
  run.comm.reset(p);

  std::vector<Worker> workers(p);
  for (std::uint32_t w = 0; w < p; ++w) {
    Worker& wk = workers[w];
    wk.graph = &pg.workers[w];
    wk.normal_level.assign(pg.workers[w].local_normals, kUnreached);
    wk.delegate_level.assign(d, kUnreached);
    wk.delegate_visited.resize(d);
    wk.pending = DelegateMask(d);
    wk.outbox.assign(p, {});
    wk.directions.factors = opts.mode == Mode::bfs ? forward_only_factors() : opts.factors;
    wk.directions.allow_switch_back = opts.allow_switch_back;
  }

  // Delegates with dd or dn edges on any worker; fixed for the run.
  Bitmask any_dd(d), any_dn(d);
  for (const WorkerSubgraphs& g : pg.workers) {
    any_dd |= g.dd_sources;
    any_dn |= g.dn_sources;
  }
  DirectionState directions;
  directions.factors = opts.factors;
  directions.allow_switch_back = opts.allow_switch_back;

  Bitmask new_delegates(d);
  if (const DelegateId src = pg.delegate_of(opts.source); src != kNotDelegate) {
    new_delegates.set(src);
  } else {
    workers[shape.owner(opts.source)].discovered.push_back(static_cast<LocalId>(shape.local_id(opts.source)));
  }

  for (Level level = 0;; ++level) {
    auto t0 = Clock::now();
    for_each_worker(p, threads, [&](std::uint32_t w) { workers[w].previsit(level, new_delegates); });
    IterationRecord rec;
    rec.iteration = level;
    for (const Worker& wk : workers) rec.frontier_normals += wk.frontier_normals.size();
    rec.frontier_delegates = p == 0 ? 0 : workers.front().frontier_delegates.size();
    run.phases.previsit += seconds_since(t0);
    if (rec.frontier_normals == 0 && rec.frontier_delegates == 0) break;
    run.iterations = level + 1;

    t0 = Clock::now();
    for_each_worker(p, threads, [&](std::uint32_t w) { workers[w].prepare(opts.mode); });
    if (opts.mode == Mode::dobfs) {
      if (opts.direction_scope == DirectionScope::local) {
        for (Worker& wk : workers) wk.decide_locally();
      } else {
        decide_globally(workers, any_dd, any_dn, directions);
        for (Worker& wk : workers) wk.directions = directions;
      }
    }
    for_each_worker(p, threads, [&](std::uint32_t w) { workers[w].visit(level, shape); });
    for (const Worker& wk : workers) {
      rec.inspections += wk.step;
      for (std::size_t k = 0; k < kDoKinds; ++k) rec.backward_workers[k] += wk.backward[k] ? 1 : 0;
    }
    run.phases.visit += seconds_since(t0);

    t0 = Clock::now();
    std::vector<Outbox> outboxes(p);
    for (std::uint32_t w = 0; w < p; ++w) {
      outboxes[w] = std::move(workers[w].outbox);
      workers[w].outbox.assign(p, {});
    }
    auto inboxes = exchange_normal_vertices(std::move(outboxes), shape, opts.comm, rec.comm, &run.comm.pair_used);
    for (std::uint32_t w = 0; w < p; ++w) workers[w].inbox = std::move(inboxes[w]);
    run.phases.normal_exchange += seconds_since(t0);

    t0 = Clock::now();
    std::vector<DelegateMask> masks;
    masks.reserve(p);
    for (Worker& wk : workers) masks.push_back(std::move(wk.pending));
    new_delegates = reduce_delegate_masks(masks, shape, rec.comm).bits;
    for (Worker& wk : workers) wk.pending = DelegateMask(d);
    run.phases.mask_reduction += seconds_since(t0);

    run.inspections += rec.inspections;
    run.comm.add(rec.comm);
    run.per_iteration.push_back(rec);
  }

  run.levels.assign(pg.n, kUnreached);
  for (std::uint32_t w = 0; w < p; ++w) {
    const auto& lv = workers[w].normal_level;
    for (std::uint64_t l = 0; l < lv.size(); ++l) {
      if (lv[l] != kUnreached) run.levels[shape.global_id(w, l)] = lv[l];
    }
  }
  if (p > 0) {
    for (std::size_t i = 0; i < d; ++i) run.levels[pg.delegate_to_global[i]] = workers.front().delegate_level[i];
  }

  for (const auto& it : run.per_iteration) run.backward_iterations += it.any_backward() ? 1 : 0;
  for (Level l : run.levels) {
    if (l == kUnreached) continue;
    if (l == 0 || !run.per_iteration[l - 1].any_backward()) ++run.forward_visited;
  }
  if (d > 0 && p > 0) {
    run.delegate_parent_checks =
        static_cast<double>(run.inspections.delegate_backward()) / (static_cast<double>(d) * static_cast<double>(p));
  }

  run.elapsed_seconds = seconds_since(start);
  run.teps = run.elapsed_seconds > 0 ? compute_teps(pg.m, run.elapsed_seconds) : 0.0;
  return run;
}

double geometric_mean(std::span<const double> values) {
  if (values.empty()) throw DomainError("geometric mean of an empty set");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw DomainError("geometric mean needs positive values");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

BenchmarkReport benchmark(const PartitionedGraph& pg, std::span<const VertexId> sources, const BfsOptions& opts) {
  BenchmarkReport report;
  std::vector<double> rates;
  for (VertexId s : sources) {
    BfsOptions o = opts;
    o.source = s;
    BfsRun run = run_bfs(pg, o);
    if (run.iterations <= 1 || !(run.teps > 0.0)) {
      ++report.discarded;
      continue;
    }
    rates.push_back(run.teps);
    report.mean_phases.previsit += run.phases.previsit;
    report.mean_phases.visit += run.phases.visit;
    report.mean_phases.normal_exchange += run.phases.normal_exchange;
    report.mean_phases.mask_reduction += run.phases.mask_reduction;
    report.mean_elapsed += run.elapsed_seconds;
    run.levels.clear();
    run.levels.shrink_to_fit();
    report.runs.push_back(std::move(run));
  }
  if (rates.empty()) throw EmptyReportError("benchmark: every run finished within one iteration");
  const double k = static_cast<double>(rates.size());
  report.mean_phases.previsit /= k;
  report.mean_phases.visit /= k;
  report.mean_phases.normal_exchange /= k;
  report.mean_phases.mask_reduction /= k;
  report.mean_elapsed /= k;
  report.geomean_teps = geometric_mean(rates);
  return report;
}

std::vector<VertexId> random_sources(VertexId n, std::size_t count, std::uint64_t seed) {
  if (n == 0) throw DomainError("random_sources: empty graph");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  std::vector<VertexId> out(count);
  for (auto& s : out) s = pick(rng);
  return out;
}

}  // namespace dbfs
