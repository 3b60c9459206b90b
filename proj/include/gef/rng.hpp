#pragma once

// Counter-based random numbers.
//
// Every draw is addressed by (master_seed, sample_index, stream_tag, block):
// the Philox4x32-10 bijection maps the 128-bit counter
// {block, stream_tag, sample_index_lo, sample_index_hi} under the 64-bit key
// master_seed to 128 random bits. Nothing is sequential across samples, so a
// Monte Carlo loop over sample_index can be split between threads in any way
// and still reproduce the same bits.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace gef {

using complex = std::complex<double>;

// Independent streams inside one sample.
enum class StreamTag : std::uint32_t {
  coefficients = 0,  // ζ_k of the Taylor series
  lattice = 1,       // perturbed-lattice displacements
  jitter = 2,        // continuity jitter for discrete statistics
  auxiliary = 3,     // validator side draws (Laplace variables, curve placement)
  covariance = 4,    // random test matrices
};

struct SeedLineage {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
  std::uint32_t stream_tag = 0;

  SeedLineage with_index(std::uint64_t index) const { return {master_seed, index, stream_tag}; }
  SeedLineage with_stream(StreamTag tag) const {
    return {master_seed, sample_index, static_cast<std::uint32_t>(tag)};
  }
  friend bool operator==(const SeedLineage&, const SeedLineage&) = default;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, std::array<std::uint32_t, 2> key);

// 128 random bits for block `block` of the lineage's stream.
PhiloxBlock random_block(const SeedLineage& lineage, std::uint32_t block);

// (0, 1] with 53 random bits; never returns 0 so log() is finite.
inline double uniform_open_closed(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}
// [0, 1).
inline double uniform_closed_open(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Standard complex Gaussian (density e^{-|w|^2}/π) from one block:
// sqrt(-log u1) * exp(2πi u2), i.e. polar Box–Muller of (g1 + i g2)/√2.
complex complex_gaussian_at(const SeedLineage& lineage, std::uint32_t block);

// Sequential view over one stream, for consumers that need a variable number
// of draws (lattice displacements, validators).
class CounterStream {
 public:
  explicit CounterStream(const SeedLineage& lineage) : lineage_(lineage) {}

  std::uint64_t next_u64();
  double uniform() { return uniform_closed_open(next_u64()); }
  double uniform_positive() { return uniform_open_closed(next_u64()); }
  double exponential() { return -std::log(uniform_positive()); }
  complex complex_gaussian();
  double normal();

 private:
  SeedLineage lineage_;
  std::uint32_t block_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace gef
