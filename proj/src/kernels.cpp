#include "gef/parallel/kernels.hpp"

namespace gef {

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

namespace {

int count_one(const VarianceProfile& profile, double R, int K, std::uint64_t seed, std::uint64_t index,
              const BatchOptions& options) {
  SeriesSample s = sample_coefficients(profile, K, SeedLineage{seed, index, 0}, options.targets);
  s.r_valid = std::max(R, 1.0) + kRadiusSlack;
  return count_zeros_winding(s, R, options.winding).count;
}

}  // namespace

std::vector<int> zero_counts_serial(const VarianceProfile& profile, double R, std::uint64_t seed,
                                    std::uint64_t first, std::uint64_t count, const BatchOptions& options) {
  const int K = planned_order(profile, R, options.targets);
  return map_samples_serial<int>(first, count,
                                 [&](std::uint64_t i) { return count_one(profile, R, K, seed, i, options); });
}

std::vector<int> zero_counts(const VarianceProfile& profile, double R, std::uint64_t seed, std::uint64_t first,
                             std::uint64_t count, const BatchOptions& options) {
  const int K = planned_order(profile, R, options.targets);
  return map_samples<int>(first, count, options.threads,
                          [&](std::uint64_t i) { return count_one(profile, R, K, seed, i, options); });
}

}  // namespace gef
