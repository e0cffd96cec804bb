#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dbfs/errors.hpp"

namespace dbfs {

enum class SubgraphKind : std::uint8_t { nn = 0, nd = 1, dn = 2, dd = 3 };

inline constexpr std::size_t kSubgraphKinds = 4;

constexpr const char* to_string(SubgraphKind kind) noexcept {
  switch (kind) {
    case SubgraphKind::nn: return "nn";
    case SubgraphKind::nd: return "nd";
    case SubgraphKind::dn: return "dn";
    case SubgraphKind::dd: return "dd";
  }
  return "?";
}

/// Compressed sparse rows. `Index` is the column id width: 64-bit global ids
/// for nn destinations, 32-bit local or delegate ids for everything else.
template <typename Index>
struct Csr {
  using index_type = Index;

  std::vector<std::uint64_t> row_offsets{0};
  std::vector<Index> col_indices;

  std::size_t rows() const noexcept { return row_offsets.size() - 1; }
  std::size_t nnz() const noexcept { return col_indices.size(); }

  std::uint64_t degree(std::size_t row) const noexcept {
    return row_offsets[row + 1] - row_offsets[row];
  }
  std::span<const Index> row(std::size_t r) const noexcept {
    return {col_indices.data() + row_offsets[r], static_cast<std::size_t>(degree(r))};
  }

  /// Stable counting sort of (row, col) pairs into CSR form; column order
  /// within a row follows input order.
  static Csr from_pairs(std::size_t rows, std::span<const std::pair<std::uint64_t, Index>> pairs) {
    Csr csr;
    csr.row_offsets.assign(rows + 1, 0);
    for (const auto& [r, c] : pairs) ++csr.row_offsets[r + 1];
    for (std::size_t r = 0; r < rows; ++r) csr.row_offsets[r + 1] += csr.row_offsets[r];
    csr.col_indices.resize(pairs.size());
    std::vector<std::uint64_t> cursor(csr.row_offsets.begin(), csr.row_offsets.end() - 1);
    for (const auto& [r, c] : pairs) csr.col_indices[cursor[r]++] = c;
    return csr;
  }

  /// Offsets monotone, last offset equals nnz, every column below `col_bound`.
  void validate(std::uint64_t col_bound) const {
    if (row_offsets.empty() || row_offsets.front() != 0) throw StructuralError("csr: bad first offset");
    for (std::size_t r = 0; r < rows(); ++r) {
      if (row_offsets[r + 1] < row_offsets[r]) throw StructuralError("csr: offsets decrease");
    }
    if (row_offsets.back() != col_indices.size()) throw StructuralError("csr: last offset != nnz");
    for (Index c : col_indices) {
      if (static_cast<std::uint64_t>(c) >= col_bound) throw StructuralError("csr: column out of range");
    }
  }

  friend bool operator==(const Csr&, const Csr&) = default;
};

}  // namespace dbfs
