#include "dbfs/rmat.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "dbfs/errors.hpp"

namespace dbfs {

namespace detail {
std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

namespace {

constexpr std::uint64_t kMulA = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kMulB = 0xBF58476D1CE4E5B9ULL;

double unit_draw(std::uint64_t& state) noexcept {
  return static_cast<double>(detail::splitmix64(state) >> 11) * 0x1.0p-53;
}

std::uint64_t edge_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t key = seed;
  std::uint64_t s = detail::splitmix64(key) ^ (index * kMulB);
  detail::splitmix64(s);
  return s;
}

}  // namespace

void RmatParams::validate() const {
  for (double w : {a, b, c, quad_d}) {
    if (!(w >= 0.0) || w > 1.0) throw DomainError("rmat: quadrant weights must lie in [0, 1]");
  }
  if (std::abs(a + b + c + quad_d - 1.0) > 1e-9) {
    throw DomainError("rmat: quadrant weights must sum to 1");
  }
  if (edge_factor < 1) throw DomainError("rmat: edge_factor must be >= 1");
  if (scale > max_scale) {
    throw ResourceError("rmat: scale " + std::to_string(scale) + " exceeds the configured cap of " +
                        std::to_string(max_scale));
  }
}

EdgeList generate_rmat(const RmatParams& params) {
  params.validate();
  const std::uint64_t n = std::uint64_t{1} << params.scale;
  const std::uint64_t count = n * params.edge_factor;
  const double ab = params.a + params.b;
  const double abc = ab + params.c;

  EdgeList g;
  g.n = n;
  g.edges.resize(count);
  for (std::uint64_t e = 0; e < count; ++e) {
    std::uint64_t state = edge_stream(params.seed, e);
    VertexId u = 0;
    VertexId v = 0;
    for (unsigned level = 0; level < params.scale; ++level) {
      const double r = unit_draw(state);
      const unsigned row = r >= ab ? 1 : 0;
      const unsigned col = (r >= params.a && r < ab) || r >= abc ? 1 : 0;
      u = (u << 1) | row;
      v = (v << 1) | col;
    }
    g.edges[e] = {u, v};
  }
  return g;
}

VertexPermutation::VertexPermutation(unsigned bits, bool identity, std::uint64_t s1,
                                     std::uint64_t s2)
    : bits_(bits),
      identity_(identity),
      mask_(bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1),
      s1_(s1),
      s2_(s2),
      shift_(bits <= 1 ? 1 : (bits + 1) / 2) {}

VertexPermutation VertexPermutation::identity(unsigned bits) {
  return VertexPermutation(bits, true, 0, 0);
}

VertexPermutation VertexPermutation::from_seed(unsigned bits, std::uint64_t seed) {
  std::uint64_t state = seed;
  const std::uint64_t s1 = detail::splitmix64(state);
  const std::uint64_t s2 = detail::splitmix64(state);
  return VertexPermutation(bits, false, s1, s2);
}

VertexId VertexPermutation::operator()(VertexId v) const noexcept {
  if (identity_) return v;
  std::uint64_t x = v & mask_;
  x = (x * kMulA + s1_) & mask_;
  x ^= x >> shift_;
  x = (x * kMulB + s2_) & mask_;
  x ^= x >> shift_;
  return x;
}

EdgeList hash_randomize_vertices(const EdgeList& g, const VertexPermutation& perm) {
  if (perm.is_identity()) return g;
  if (perm.bits() >= 64 || g.n != (std::uint64_t{1} << perm.bits())) {
    throw DomainError("hash_randomize: n must equal 2^bits of the permutation");
  }
  EdgeList out;
  out.n = g.n;
  out.symmetric = g.symmetric;
  out.edges.reserve(g.edges.size());
  for (const Edge& e : g.edges) out.edges.push_back({perm(e.src), perm(e.dst)});
  return out;
}

EdgeList hash_randomize_vertices(const EdgeList& g, std::uint64_t seed) {
  if (g.n == 0 || !std::has_single_bit(g.n)) {
    throw DomainError("hash_randomize: vertex count is not a power of two");
  }
  const auto bits = static_cast<unsigned>(std::countr_zero(g.n));
  return hash_randomize_vertices(g, VertexPermutation::from_seed(bits, seed));
}

EdgeList symmetrize(const EdgeList& g) {
  EdgeList out;
  out.n = g.n;
  out.symmetric = true;
  out.edges.reserve(2 * g.edges.size());
  for (const Edge& e : g.edges) {
    out.edges.push_back(e);
    out.edges.push_back({e.dst, e.src});
  }
  return out;
}

EdgeList make_rmat_graph(const RmatParams& params) {
  std::uint64_t state = params.seed ^ 0xD1B54A32D192ED03ULL;
  const std::uint64_t hash_seed = detail::splitmix64(state);
  return symmetrize(hash_randomize_vertices(generate_rmat(params), hash_seed));
}

}  // namespace dbfs
