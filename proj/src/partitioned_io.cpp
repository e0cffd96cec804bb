// Per-worker partition file "worker-<index>.dpg", all integers little-endian:
//
//   header   "DPG1" | u32 version (1) | u32 worker | u32 p_rank | u32 p_gpu |
//            u32 reserved | u64 n | u64 m | u64 theta | u64 d | u64 local_normals
//   4 x CSR  in order nn, nd, dn, dd:
//            u64 rows | u64 nnz | (rows + 1) x u64 offsets | nnz x column
//            (columns are u64 for nn, u32 otherwise)
//   id map   d x u64 delegate global ids (ascending)
//   sources  u64 count | count x u32 nd source list
//   masks    dn then dd: u64 block count | blocks x u64 (bit i of the mask is
//            bit i % 64 of block i / 64)

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dbfs/errors.hpp"
#include "dbfs/subgraph.hpp"

namespace dbfs {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'P', 'G', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    std::array<char, sizeof(T)> bytes{};
    auto raw = static_cast<std::uint64_t>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((raw >> (8 * i)) & 0xFF);
    out_.write(bytes.data(), bytes.size());
  }

  template <typename Index>
  void put_csr(const Csr<Index>& csr) {
    put<std::uint64_t>(csr.rows());
    put<std::uint64_t>(csr.nnz());
    for (auto off : csr.row_offsets) put<std::uint64_t>(off);
    for (auto col : csr.col_indices) put<Index>(col);
  }

  void put_mask(const Bitmask& mask) {
    std::vector<std::uint64_t> blocks(mask.num_blocks());
    boost::to_block_range(mask, blocks.begin());
    put<std::uint64_t>(blocks.size());
    for (auto b : blocks) put<std::uint64_t>(b);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::vector<unsigned char> data, std::string name) : data_(std::move(data)), name_(std::move(name)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::uint64_t raw = 0;
    for (std::size_t i = sizeof(T); i-- > 0;) raw = (raw << 8) | data_[pos_ + i];
    pos_ += sizeof(T);
    return static_cast<T>(raw);
  }

  template <typename Index>
  Csr<Index> get_csr() {
    Csr<Index> csr;
    const auto rows = get<std::uint64_t>();
    const auto nnz = get<std::uint64_t>();
    if (rows >= data_.size() || nnz > data_.size()) throw FormatError(name_ + ": truncated");
    need((rows + 1) * 8 + nnz * sizeof(Index));
    csr.row_offsets.resize(rows + 1);
    for (auto& off : csr.row_offsets) off = get<std::uint64_t>();
    csr.col_indices.resize(nnz);
    for (auto& col : csr.col_indices) col = get<Index>();
    return csr;
  }

  Bitmask get_mask(std::size_t bits) {
    const auto count = get<std::uint64_t>();
    if (count > data_.size()) throw FormatError(name_ + ": truncated");
    need(count * 8);
    std::vector<std::uint64_t> blocks(count);
    for (auto& b : blocks) b = get<std::uint64_t>();
    Bitmask mask(blocks.begin(), blocks.end());
    if (mask.size() < bits) throw FormatError(name_ + ": source mask too short");
    mask.resize(bits);
    return mask;
  }

  void expect_magic() {
    need(kMagic.size());
    if (std::memcmp(data_.data() + pos_, kMagic.data(), kMagic.size()) != 0) {
      throw FormatError(name_ + ": bad magic, expected DPG1");
    }
    pos_ += kMagic.size();
  }

  bool at_end() const noexcept { return pos_ == data_.size(); }

 private:
  void need(std::uint64_t bytes) const {
    if (bytes > data_.size() - pos_) throw FormatError(name_ + ": truncated");
  }

  std::vector<unsigned char> data_;
  std::string name_;
  std::size_t pos_ = 0;
};

std::filesystem::path worker_file(const std::filesystem::path& dir, std::uint32_t worker) {
  return dir / ("worker-" + std::to_string(worker) + ".dpg");
}

}  // namespace

void save_partitioned_graph(const PartitionedGraph& pg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& w : pg.workers) {
    const auto path = worker_file(dir, w.worker);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kMagic.data(), kMagic.size());
    Writer wr(out);
    wr.put<std::uint32_t>(kVersion);
    wr.put<std::uint32_t>(w.worker);
    wr.put<std::uint32_t>(pg.shape.p_rank);
    wr.put<std::uint32_t>(pg.shape.p_gpu);
    wr.put<std::uint32_t>(0);
    wr.put<std::uint64_t>(pg.n);
    wr.put<std::uint64_t>(pg.m);
    wr.put<std::uint64_t>(pg.theta);
    wr.put<std::uint64_t>(pg.d());
    wr.put<std::uint64_t>(w.local_normals);
    wr.put_csr(w.nn);
    wr.put_csr(w.nd);
    wr.put_csr(w.dn);
    wr.put_csr(w.dd);
    for (VertexId v : pg.delegate_to_global) wr.put<std::uint64_t>(v);
    wr.put<std::uint64_t>(w.nd_sources.size());
    for (LocalId v : w.nd_sources) wr.put<std::uint32_t>(v);
    wr.put_mask(w.dn_sources);
    wr.put_mask(w.dd_sources);
    if (!out) throw IoError("write failed for " + path.string());
  }
}

PartitionedGraph load_partitioned_graph(const std::filesystem::path& dir) {
  PartitionedGraph pg;
  std::uint32_t expected_workers = 1;
  for (std::uint32_t w = 0; w < expected_workers; ++w) {
    const auto path = worker_file(dir, w);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Reader rd({std::istreambuf_iterator<char>(in), {}}, path.string());
    rd.expect_magic();
    if (rd.get<std::uint32_t>() != kVersion) throw FormatError(path.string() + ": unsupported version");
    WorkerSubgraphs ws;
    ws.worker = rd.get<std::uint32_t>();
    ClusterShape shape{rd.get<std::uint32_t>(), rd.get<std::uint32_t>()};
    rd.get<std::uint32_t>();
    const auto n = rd.get<std::uint64_t>();
    const auto m = rd.get<std::uint64_t>();
    const auto theta = rd.get<std::uint64_t>();
    const auto d = rd.get<std::uint64_t>();
    ws.local_normals = rd.get<std::uint64_t>();
    if (ws.worker != w || shape.p_rank == 0 || shape.p_gpu == 0) {
      throw FormatError(path.string() + ": inconsistent worker header");
    }
    if (w == 0) {
      pg.shape = shape;
      pg.n = n;
      pg.m = m;
      pg.theta = theta;
      expected_workers = shape.workers();
      pg.workers.reserve(expected_workers);
    } else if (shape != pg.shape || n != pg.n || m != pg.m || theta != pg.theta || d != pg.d()) {
      throw FormatError(path.string() + ": header disagrees with worker 0");
    }
    ws.nn = rd.get_csr<VertexId>();
    ws.nd = rd.get_csr<LocalId>();
    ws.dn = rd.get_csr<LocalId>();
    ws.dd = rd.get_csr<DelegateId>();
    if (d > n) throw FormatError(path.string() + ": more delegates than vertices");
    std::vector<VertexId> delegates(d);
    for (auto& v : delegates) v = rd.get<std::uint64_t>();
    if (w == 0) {
      pg.delegate_to_global = std::move(delegates);
    } else if (delegates != pg.delegate_to_global) {
      throw FormatError(path.string() + ": delegate map disagrees with worker 0");
    }
    const auto source_count = rd.get<std::uint64_t>();
    if (source_count > ws.local_normals) throw FormatError(path.string() + ": source list too long");
    ws.nd_sources.resize(source_count);
    for (auto& v : ws.nd_sources) v = rd.get<std::uint32_t>();
    ws.dn_sources = rd.get_mask(d);
    ws.dd_sources = rd.get_mask(d);
    if (!rd.at_end()) throw FormatError(path.string() + ": trailing bytes");

    ws.nn.validate(pg.n);
    ws.nd.validate(d);
    ws.dn.validate(ws.local_normals);
    ws.dd.validate(d);
    if (ws.nn.rows() != ws.local_normals || ws.nd.rows() != ws.local_normals || ws.dn.rows() != d ||
        ws.dd.rows() != d) {
      throw FormatError(path.string() + ": CSR row counts do not match header");
    }
    pg.workers.push_back(std::move(ws));
  }
  return pg;
}

}  // namespace dbfs
