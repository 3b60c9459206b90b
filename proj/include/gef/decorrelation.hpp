#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gef/rng.hpp"

namespace gef {

using ComplexMatrix = Eigen::MatrixXcd;

// Covariance Γ_ij = E ξ_i ξ̄_j of standard complex Gaussians, Hermitian with unit
// diagonal, with row bounds Σ_{j≠i} |Γ_ij| ≤ δ_i ≤ 1/3.
struct CovarianceMatrix {
  ComplexMatrix gamma;
  std::vector<double> delta;

  // δ_i defaults to the off-diagonal row sums. Throws PreconditionError for a
  // non-square, non-Hermitian or non-unit-diagonal Γ, for δ_i below its row
  // sum, or for δ_i > 1/3.
  static CovarianceMatrix make(ComplexMatrix gamma, std::vector<double> delta = {});
};

// ζ = mixing·ξ are independent standard Gaussians and ξ_i = ζ_i + s_i η_i with
// s_i η_i = Σ_j Δ̃_ij ξ_j, Δ̃ = I - Γ^{-1/2}.
struct Decomposition {
  ComplexMatrix mixing;                 // Γ^{-1/2}
  std::vector<double> s;                // Σ_j |Δ̃_ij|
  std::vector<double> certified_bound;  // δ_i
  std::vector<double> residual_sd;      // sqrt((Δ̃ Γ Δ̃†)_ii), the exact sd of s_i η_i
  int terms = 0;                        // Neumann terms used beyond the identity
};

// Γ^{-1/2} = Σ_k α_k Δ^k with Δ = I - Γ and α_k = C(2k,k)/4^k, stopped once a
// term's largest row sum is ≤ 1e-14. Each power is checked against
// Σ_j |(Δ^k)_ij| ≤ δ_i/3^{k-1}; a failed check or s_i > δ_i throws NumericError.
Decomposition decorrelate(const CovarianceMatrix& cov);

// Random admissible Γ of the given size: Hermitian off-diagonal entries scaled so
// the largest row sum is uniform in (0, 1/3].
CovarianceMatrix random_admissible_covariance(int size, const SeedLineage& lineage);

// max |(M Γ M† - I)_ij|
double whitening_error(const ComplexMatrix& mixing, const ComplexMatrix& gamma);

}  // namespace gef
