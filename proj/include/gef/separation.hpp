#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gef {

// Non-negative weights m_0..m_{N-1} on a cycle of length N, and Q ≥ 1.
struct SeparationInstance {
  std::vector<std::int64_t> m;
  double Q = 1.0;
};

struct SeparationCertificate {
  bool separation_ok = false;
  // Σ_J m_j / (5Q Σ_{J'} m_j^{3/2}); the mass condition holds iff ≤ 1 (0/0 counts as 0).
  double mass_ratio = 0.0;
};

struct SeparationResult {
  std::vector<std::size_t> J_prime;  // sorted, 0-based
  SeparationCertificate certificate;
};

// min(|j-k|, N - |j-k|)
std::size_t cyclic_distance(std::size_t j, std::size_t k, std::size_t N);

// Greedy construction: repeatedly take the unclaimed index of largest m
// (smallest index on ties), add it to J', and claim every unclaimed j with
// 0 < |j - j_1|_* < 2Q√m_{j_1}. After each step the claimed mass is checked
// against 5Q Σ_{J'} m^{3/2}. Throws PreconditionError for an empty instance,
// negative m or Q < 1.
SeparationResult select_separated(const SeparationInstance& instance);

// |j-k|_* ≥ Q(√m_j + √m_k) for distinct j, k in J', and Σ_all m ≤ 5Q Σ_{J'} m^{3/2}.
// Out-of-range or repeated indices make the selection invalid.
bool verify_selection(const SeparationInstance& instance, const std::vector<std::size_t>& J_prime);

}  // namespace gef
