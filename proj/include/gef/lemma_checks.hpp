#pragma once

#include <cstdint>

#include "gef/rng.hpp"

namespace gef {

// Randomized sweeps over the decay, decorrelation and separation statements.
// Configuration i is drawn from the auxiliary (or covariance) stream of sample i.

struct CovarianceDecaySweep {
  std::uint64_t n = 0;
  double max_ratio = 0.0;  // max |E ζ_{k1}(w1) conj ζ_{k2}(w2)| / (2e^{-d²/8})
  double violations = 0;   // configurations with |cov| > bound + 1e-12
};

// w1, w2 uniform in the disk of radius 8, k1, k2 uniform in 0..24, redrawn
// until d = |w1 - w2| - √k1 - √k2 > 0.
CovarianceDecaySweep covariance_decay_sweep(std::uint64_t n, const SeedLineage& lineage, int threads = 0);

struct DecorrelationSweep {
  std::uint64_t n = 0;
  double max_whitening_error = 0.0;  // max |M Γ M† - I|
  double max_s_over_delta = 0.0;
  double violations = 0;  // error > 1e-10, s_i > δ_i, or a thrown certificate
};

// Sizes uniform in 1..16.
DecorrelationSweep decorrelation_sweep(std::uint64_t n, const SeedLineage& lineage, int threads = 0);

struct SeparationSweep {
  std::uint64_t n = 0;
  double max_mass_ratio = 0.0;
  double violations = 0;  // a certificate condition fails or verify_selection disagrees
};

// N uniform in 1..64, m_j uniform in 0..32, Q uniform in {1, 2, 3}.
SeparationSweep separation_sweep(std::uint64_t n, const SeedLineage& lineage, int threads = 0);

}  // namespace gef
