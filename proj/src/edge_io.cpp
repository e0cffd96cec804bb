#include "dbfs/edge_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "dbfs/errors.hpp"

namespace dbfs {

std::vector<Edge> sorted_edges(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  return edges;
}

bool has_symmetric_multiset(const EdgeList& g) {
  std::vector<Edge> forward = sorted_edges(g.edges);
  std::vector<Edge> reversed;
  reversed.reserve(g.edges.size());
  for (const Edge& e : g.edges) reversed.push_back({e.dst, e.src});
  std::sort(reversed.begin(), reversed.end());
  return forward == reversed;
}

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'E', 'L', '1'};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Parses one unsigned decimal token starting at `pos`; advances past it.
// Returns false if no digits were found.
bool parse_id(std::string_view line, std::size_t& pos, std::uint64_t& out, std::size_t line_no) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  const char* begin = line.data() + pos;
  const char* end = line.data() + line.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec == std::errc::result_out_of_range) {
    throw FormatError("line " + std::to_string(line_no) + ": vertex id does not fit in 64 bits");
  }
  if (ec != std::errc{}) return false;
  pos += static_cast<std::size_t>(ptr - begin);
  return true;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

EdgeList load_text(std::istream& in) {
  EdgeList g;
  bool have_header = false;
  VertexId header_n = 0;
  VertexId max_id = 0;
  bool any = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      if (body.size() > 2 && body[0] == 'n' && (body[1] == ' ' || body[1] == '\t')) {
        std::size_t pos = 1;
        std::uint64_t value = 0;
        if (!parse_id(body, pos, value, line_no) || !trim(body.substr(pos)).empty()) {
          throw ParseError("malformed vertex-count header", line_no);
        }
        have_header = true;
        header_n = value;
      }
      continue;
    }
    std::size_t pos = 0;
    Edge e;
    if (!parse_id(line, pos, e.src, line_no) || pos == line.size() ||
        (line[pos] != ' ' && line[pos] != '\t') || !parse_id(line, pos, e.dst, line_no)) {
      throw ParseError("expected \"src dst\"", line_no);
    }
    std::string_view rest = trim(line.substr(pos));
    if (!rest.empty() && rest.front() != '#') throw ParseError("trailing characters", line_no);
    if (have_header && (e.src >= header_n || e.dst >= header_n)) {
      throw FormatError("line " + std::to_string(line_no) + ": vertex id exceeds header n");
    }
    max_id = std::max({max_id, e.src, e.dst});
    any = true;
    g.edges.push_back(e);
  }
  if (!have_header && any && max_id == ~VertexId{0}) {
    throw FormatError("vertex id 2^64-1 leaves no room for a vertex count");
  }
  g.n = have_header ? header_n : (any ? max_id + 1 : 0);
  return g;
}

EdgeList load_binary(std::istream& in) {
  std::vector<unsigned char> data{std::istreambuf_iterator<char>(in), {}};
  EdgeList g;
  std::size_t offset = 0;
  bool have_header = false;
  if (data.size() >= 16 && std::memcmp(data.data(), kMagic.data(), kMagic.size()) == 0) {
    have_header = true;
    g.n = get_u64(data.data() + 8);
    offset = 16;
  }
  if ((data.size() - offset) % 16 != 0) {
    throw FormatError("binary edge body is not a whole number of 16-byte pairs");
  }
  g.edges.reserve((data.size() - offset) / 16);
  VertexId max_id = 0;
  for (; offset < data.size(); offset += 16) {
    Edge e{get_u64(data.data() + offset), get_u64(data.data() + offset + 8)};
    if (have_header && (e.src >= g.n || e.dst >= g.n)) {
      throw FormatError("edge " + std::to_string(g.edges.size()) + ": vertex id exceeds header n");
    }
    max_id = std::max({max_id, e.src, e.dst});
    g.edges.push_back(e);
  }
  if (!have_header) {
    if (!g.edges.empty() && max_id == ~VertexId{0}) {
      throw FormatError("vertex id 2^64-1 leaves no room for a vertex count");
    }
    g.n = g.edges.empty() ? 0 : max_id + 1;
  }
  return g;
}

}  // namespace

EdgeFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".bin" || ext == ".del") ? EdgeFormat::binary : EdgeFormat::text;
}

EdgeList load_edge_list(const std::filesystem::path& path, EdgeFormat format) {
  std::ifstream in(path, format == EdgeFormat::binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  return format == EdgeFormat::binary ? load_binary(in) : load_text(in);
}

void write_edge_list(const EdgeList& g, const std::filesystem::path& path, EdgeFormat format,
                     bool with_header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == EdgeFormat::binary) {
    if (with_header) {
      out.write(kMagic.data(), kMagic.size());
      const std::array<char, 4> pad{};
      out.write(pad.data(), pad.size());
      put_u64(out, g.n);
    }
    for (const Edge& e : g.edges) {
      put_u64(out, e.src);
      put_u64(out, e.dst);
    }
  } else {
    if (with_header) out << "# n " << g.n << '\n';
    for (const Edge& e : g.edges) out << e.src << ' ' << e.dst << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dbfs
