#pragma once

#include <vector>

#include "gef/series.hpp"

namespace gef {

// Matrix of the translation operator T_w g(z) = g(w+z) e^{-z w̄} e^{-|w|²/2}
// in the basis e_k = z^k/√k!: at(n, k) = ⟨T_w e_k, e_n⟩ for n ≤ K_out, k ≤ K_in.
//
// Entries use the Laguerre closed form
//   n ≥ k:  √(k!/n!) (-w̄)^{n-k} e^{-|w|²/2} L_k^{(n-k)}(|w|²)
//   n < k:  √(n!/k!)  w^{k-n}   e^{-|w|²/2} L_n^{(k-n)}(|w|²)
// evaluated by the three-term recurrence in extended precision with a
// running log scale.
struct TranslationMatrix {
  complex w{};
  int K_in = 0;
  int K_out = 0;
  std::vector<complex> entries;  // row-major, (K_out+1) x (K_in+1)

  complex at(int n, int k) const { return entries[static_cast<std::size_t>(n) * (K_in + 1) + k]; }
  // Σ_{n ≤ K_out} |at(n,k)|²; at most 1, near 1 once K_out covers the column.
  double column_norm_squared(int k) const;
};

TranslationMatrix translation_matrix(complex w, int K_in, int K_out);

// Coefficients of T_w f: ζ_n(w) = Σ_k at(n,k) c_k. The result is certified on
// |z| ≤ min(r_valid - |w|, certified_radius(K_out)) with the tail budgets added.
SeriesSample translate_sample(const SeriesSample& sample, complex w, int K_out,
                              const TruncationTargets& targets = {});
SeriesSample translate_sample(const SeriesSample& sample, const TranslationMatrix& matrix,
                              const TruncationTargets& targets = {});

}  // namespace gef
