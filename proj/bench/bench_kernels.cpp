// Serial reference loop against the OpenMP kernel on the same sample range.
//
//   bench_kernels [R] [samples] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "gef/lattice.hpp"
#include "gef/parallel/kernels.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const double R = argc > 1 ? std::atof(argv[1]) : 4.0;
  const auto n = static_cast<std::uint64_t>(argc > 2 ? std::atoll(argv[2]) : 2000);
  const int threads = argc > 3 ? std::atoi(argv[3]) : 0;
  const auto profile = gef::VarianceProfile::constant_one();
  gef::BatchOptions opt;
  opt.threads = threads;

  std::vector<int> serial, parallel;
  const double ts = seconds([&] { serial = gef::zero_counts_serial(profile, R, 7, 0, n, opt); });
  const double tp = seconds([&] { parallel = gef::zero_counts(profile, R, 7, 0, n, opt); });
  std::printf("zero_counts     R=%g n=%llu threads=%d  serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%s\n", R,
              static_cast<unsigned long long>(n), gef::resolve_threads(threads), ts, tp, ts / tp,
              serial == parallel ? "yes" : "no");

  std::vector<int> ls, lp;
  const double lts = seconds([&] {
    ls = gef::map_samples_serial<int>(0, n, [&](std::uint64_t i) {
      return gef::lattice_count(gef::sample_perturbed_lattice({2.0, R, gef::SeedLineage{7, i, 0}, false}), R);
    });
  });
  const double ltp = seconds([&] { lp = gef::lattice_counts(2.0, R, 7, 0, n, threads); });
  std::printf("lattice_counts  R=%g n=%llu threads=%d  serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%s\n", R,
              static_cast<unsigned long long>(n), gef::resolve_threads(threads), lts, ltp, lts / ltp,
              ls == lp ? "yes" : "no");
  return serial == parallel && ls == lp ? 0 : 1;
}
