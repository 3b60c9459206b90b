#pragma once

// Monte Carlo maps over sample indices.
//
// map_samples writes result[i] = f(first + i) from an OpenMP loop; every value
// depends only on its index, so callers reduce the vector in index order and
// get the same bits for any thread count. map_samples_serial is the reference
// loop the parallel one is tested and benchmarked against.

#include <cstdint>
#include <exception>
#include <vector>

#include <omp.h>

#include "gef/profile.hpp"
#include "gef/series.hpp"
#include "gef/zeros.hpp"

namespace gef {

// 0 keeps the OpenMP default.
int resolve_threads(int threads);

template <class T, class F>
std::vector<T> map_samples_serial(std::uint64_t first, std::uint64_t count, F&& f) {
  std::vector<T> out(count);
  for (std::uint64_t i = 0; i < count; ++i) out[i] = f(first + i);
  return out;
}

template <class T, class F>
std::vector<T> map_samples(std::uint64_t first, std::uint64_t count, int threads, F&& f) {
  std::vector<T> out(count);
  // The exception of the lowest failing index wins, as in the serial loop.
  std::exception_ptr error;
  std::int64_t error_index = -1;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve_threads(threads))
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(first + static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(gef_map_samples_error)
      if (error_index < 0 || i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

struct BatchOptions {
  TruncationTargets targets{};
  WindingOptions winding{};
  int threads = 0;
};

// n(R) by winding for samples first..first+count-1 of `seed` under `profile`.
std::vector<int> zero_counts_serial(const VarianceProfile& profile, double R, std::uint64_t seed,
                                    std::uint64_t first, std::uint64_t count, const BatchOptions& options = {});
std::vector<int> zero_counts(const VarianceProfile& profile, double R, std::uint64_t seed, std::uint64_t first,
                             std::uint64_t count, const BatchOptions& options = {});

}  // namespace gef
