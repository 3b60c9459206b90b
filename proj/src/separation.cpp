#include "gef/separation.hpp"

#include <algorithm>
#include <cmath>

#include "gef/errors.hpp"

namespace gef {

namespace {

void check_instance(const SeparationInstance& in) {
  if (in.m.empty()) throw PreconditionError("instance needs N >= 1");
  if (!(in.Q >= 1.0)) throw PreconditionError("instance needs Q >= 1");
  for (auto v : in.m)
    if (v < 0) throw PreconditionError("weights must be non-negative");
}

double mass_ratio(const SeparationInstance& in, const std::vector<std::size_t>& J_prime) {
  double total = 0.0, kept = 0.0;
  for (auto v : in.m) total += static_cast<double>(v);
  for (auto j : J_prime) kept += std::pow(static_cast<double>(in.m[j]), 1.5);
  if (total == 0.0) return 0.0;
  if (kept == 0.0) return INFINITY;
  return total / (5.0 * in.Q * kept);
}

bool separated(const SeparationInstance& in, const std::vector<std::size_t>& J_prime) {
  const std::size_t N = in.m.size();
  for (std::size_t a = 0; a < J_prime.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      const std::size_t j = J_prime[a], k = J_prime[b];
      const double need = in.Q * (std::sqrt(double(in.m[j])) + std::sqrt(double(in.m[k])));
      if (static_cast<double>(cyclic_distance(j, k, N)) < need) return false;
    }
  return true;
}

}  // namespace

std::size_t cyclic_distance(std::size_t j, std::size_t k, std::size_t N) {
  const std::size_t d = j > k ? j - k : k - j;
  return std::min(d, N - d);
}

SeparationResult select_separated(const SeparationInstance& in) {
  check_instance(in);
  const std::size_t N = in.m.size();
  std::vector<char> claimed(N, 0);
  std::size_t remaining = N;
  SeparationResult res;
  double claimed_mass = 0.0, kept = 0.0;
  while (remaining > 0) {
    std::size_t pick = N;
    for (std::size_t j = 0; j < N; ++j)
      if (!claimed[j] && (pick == N || in.m[j] > in.m[pick])) pick = j;
    const double radius = 2.0 * in.Q * std::sqrt(static_cast<double>(in.m[pick]));
    claimed[pick] = 1;
    --remaining;
    claimed_mass += static_cast<double>(in.m[pick]);
    res.J_prime.push_back(pick);
    kept += std::pow(static_cast<double>(in.m[pick]), 1.5);
    for (std::size_t j = 0; j < N; ++j) {
      if (claimed[j]) continue;
      const auto d = static_cast<double>(cyclic_distance(j, pick, N));
      if (d > 0.0 && d < radius) {
        claimed[j] = 1;
        --remaining;
        claimed_mass += static_cast<double>(in.m[j]);
      }
    }
    if (claimed_mass > 5.0 * in.Q * kept * (1.0 + 1e-12)) throw NumericError("greedy step broke the mass invariant");
  }
  std::sort(res.J_prime.begin(), res.J_prime.end());
  res.certificate.separation_ok = separated(in, res.J_prime);
  res.certificate.mass_ratio = mass_ratio(in, res.J_prime);
  return res;
}

bool verify_selection(const SeparationInstance& in, const std::vector<std::size_t>& J_prime) {
  check_instance(in);
  std::vector<char> seen(in.m.size(), 0);
  for (auto j : J_prime) {
    if (j >= in.m.size() || seen[j]) return false;
    seen[j] = 1;
  }
  return separated(in, J_prime) && mass_ratio(in, J_prime) <= 1.0;
}

}  // namespace gef
