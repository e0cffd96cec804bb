#include "dbfs/comm.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dbfs/errors.hpp"

namespace dbfs {

void CommStats::reset(std::uint32_t workers) {
  per_iteration.clear();
  pair_used.assign(static_cast<std::size_t>(workers) * workers, 0);
}

void CommStats::add(const IterationComm& it) { per_iteration.push_back(it); }

std::uint64_t CommStats::mask_bits() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& it : per_iteration) sum += it.mask_bits;
  return sum;
}

std::uint64_t CommStats::normal_records() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& it : per_iteration) sum += it.normal_records;
  return sum;
}

std::uint64_t CommStats::local_records() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& it : per_iteration) sum += it.local_records;
  return sum;
}

std::uint64_t CommStats::message_count() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& it : per_iteration) sum += it.message_count;
  return sum;
}

std::uint64_t CommStats::distinct_pairs() const noexcept {
  return static_cast<std::uint64_t>(std::count(pair_used.begin(), pair_used.end(), std::uint8_t{1}));
}

std::uint32_t CommStats::reductions() const noexcept {
  return static_cast<std::uint32_t>(
      std::count_if(per_iteration.begin(), per_iteration.end(), [](const auto& it) { return it.mask_reduced; }));
}

DelegateMask reduce_delegate_masks(std::span<const DelegateMask> masks, ClusterShape shape, IterationComm& stats) {
  if (masks.size() != shape.workers()) {
    throw StructuralError("reduce: expected " + std::to_string(shape.workers()) + " masks, got " +
                          std::to_string(masks.size()));
  }
  const std::size_t d = masks.empty() ? 0 : masks.front().bits.size();
  for (const auto& m : masks) {
    if (m.bits.size() != d) throw StructuralError("reduce: delegate masks differ in length");
  }
  DelegateMask global(d);
  const bool any_dirty = std::any_of(masks.begin(), masks.end(), [](const auto& m) { return m.dirty; });
  if (!any_dirty) return global;

  // Phase 1: every gpu of a rank pushes its mask to gpu 0 of that rank.
  std::vector<Bitmask> per_rank(shape.p_rank, Bitmask(d));
  for (std::uint32_t r = 0; r < shape.p_rank; ++r) {
    for (std::uint32_t g = 0; g < shape.p_gpu; ++g) per_rank[r] |= masks[shape.flat({r, g})].bits;
  }
  // Phase 2: all-reduce across ranks.
  for (const auto& m : per_rank) global.bits |= m;
  global.dirty = global.bits.any();

  stats.mask_reduced = true;
  stats.mask_bits += 2 * static_cast<std::uint64_t>(d) * shape.p_rank;
  return global;
}

std::vector<Outbox> local_all2all(std::vector<Outbox> outboxes, ClusterShape shape, IterationComm& stats) {
  const std::uint32_t p = shape.workers();
  if (shape.p_gpu == 1) return outboxes;
  std::vector<Outbox> regrouped(p, Outbox(p));
  for (std::uint32_t src = 0; src < p; ++src) {
    const WorkerId from = shape.unflat(src);
    for (std::uint32_t dst = 0; dst < p; ++dst) {
      auto& bin = outboxes[src][dst];
      if (bin.empty()) continue;
      const WorkerId to = shape.unflat(dst);
      const std::uint32_t gather = shape.flat({from.rank, to.gpu});
      if (gather != src) {
        stats.local_records += bin.size();
        ++stats.message_count;
      }
      auto& target = regrouped[gather][dst];
      target.insert(target.end(), bin.begin(), bin.end());
    }
  }
  return regrouped;
}

void uniquify(std::vector<NormalUpdate>& bin) {
  std::sort(bin.begin(), bin.end());
  bin.erase(std::unique(bin.begin(), bin.end(),
                        [](const NormalUpdate& a, const NormalUpdate& b) { return a.vertex == b.vertex; }),
            bin.end());
}

std::vector<Inbox> exchange_normal_vertices(std::vector<Outbox> outboxes, ClusterShape shape,
                                            const CommOptions& opts, IterationComm& stats,
                                            std::vector<std::uint8_t>* pair_used) {
  const std::uint32_t p = shape.workers();
  if (outboxes.size() != p) throw StructuralError("exchange: one outbox per worker expected");
  for (const auto& box : outboxes) {
    if (box.size() != p) throw StructuralError("exchange: one bin per destination expected");
  }
  if (opts.local_all2all) outboxes = local_all2all(std::move(outboxes), shape, stats);

  std::vector<Inbox> inboxes(p);
  std::uint64_t pairs = 0;
  for (std::uint32_t src = 0; src < p; ++src) {
    for (std::uint32_t dst = 0; dst < p; ++dst) {
      auto& bin = outboxes[src][dst];
      if (bin.empty()) continue;
      if (opts.uniquify) uniquify(bin);
      ++stats.message_count;
      ++pairs;
      if (pair_used) (*pair_used)[static_cast<std::size_t>(src) * p + dst] = 1;
      stats.normal_records += bin.size();
      stats.in_memory_bytes += bin.size() * sizeof(NormalUpdate);
      auto& inbox = inboxes[dst];
      for (const NormalUpdate& rec : bin) {
        if (shape.owner(rec.vertex) != dst) {
          throw RoutingError("exchange: vertex " + std::to_string(rec.vertex) + " sent to worker " +
                             std::to_string(dst) + " but owned by " + std::to_string(shape.owner(rec.vertex)));
        }
        inbox.push_back({static_cast<LocalId>(shape.local_id(rec.vertex)), rec.level});
      }
    }
  }
  stats.pair_count += pairs;
  return inboxes;
}

}  // namespace dbfs
