#pragma once

#include <filesystem>

#include "dbfs/edge_list.hpp"

namespace dbfs {

// Text:   one "src dst" decimal pair per line; '#' starts a comment. A
//         comment of the form "# n <count>" fixes the vertex count.
// Binary: optional 16-byte header {"DEL1", u32 zero pad, u64 n}, then
//         (u64 src, u64 dst) pairs. Everything little-endian.
enum class EdgeFormat { text, binary };

/// ".bin" / ".del" select binary; everything else is text.
EdgeFormat format_for_path(const std::filesystem::path& path);

/// n = 1 + max id unless a header gives it. Throws ParseError (with line
/// number) on malformed text, FormatError on out-of-range ids or a truncated
/// binary body, IoError when the file cannot be opened.
EdgeList load_edge_list(const std::filesystem::path& path, EdgeFormat format);

void write_edge_list(const EdgeList& g, const std::filesystem::path& path, EdgeFormat format,
                     bool with_header = true);

}  // namespace dbfs
