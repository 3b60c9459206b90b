#include "gef/rng.hpp"

#include <numbers>

namespace gef {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline std::uint64_t join(std::uint32_t lo, std::uint32_t hi) {
  return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

complex polar_box_muller(std::uint64_t a, std::uint64_t b) {
  const double radius = std::sqrt(-std::log(uniform_open_closed(a)));
  const double angle = 2.0 * std::numbers::pi * uniform_closed_open(b);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

PhiloxBlock random_block(const SeedLineage& lineage, std::uint32_t block) {
  const PhiloxBlock counter = {block, lineage.stream_tag,
                               static_cast<std::uint32_t>(lineage.sample_index),
                               static_cast<std::uint32_t>(lineage.sample_index >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(lineage.master_seed),
                                            static_cast<std::uint32_t>(lineage.master_seed >> 32)};
  return philox4x32_10(counter, key);
}

complex complex_gaussian_at(const SeedLineage& lineage, std::uint32_t block) {
  const PhiloxBlock bits = random_block(lineage, block);
  return polar_box_muller(join(bits[0], bits[1]), join(bits[2], bits[3]));
}

std::uint64_t CounterStream::next_u64() {
  if (used_ > 2) {
    buffer_ = random_block(lineage_, block_++);
    used_ = 0;
  }
  const std::uint64_t out = join(buffer_[used_], buffer_[used_ + 1]);
  used_ += 2;
  return out;
}

complex CounterStream::complex_gaussian() {
  const std::uint64_t a = next_u64();
  const std::uint64_t b = next_u64();
  return polar_box_muller(a, b);
}

double CounterStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const complex z = complex_gaussian() * std::numbers::sqrt2;
  spare_normal_ = z.imag();
  has_spare_normal_ = true;
  return z.real();
}

}  // namespace gef
