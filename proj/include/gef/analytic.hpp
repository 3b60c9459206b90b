#pragma once

#include <vector>

#include "gef/profile.hpp"

namespace gef {

// E n_g(r) = ½ r 𝔠'(r)/𝔠(r) with 𝔠(r) = Σ a_k² r^{2k}/k!.
//
// constant_one returns r² exactly. jlm_banded uses
//   r² + Σ_bands (a_k²-1)(k-r²) t_k / (1 + Σ_bands (a_k²-1) t_k),  t_k = r^{2k} e^{-r²}/k!,
// which needs only the band terms. explicit_table sums its finitely many terms
// in log space. r = 0 gives 0.
double edelman_kostlan_mean(const VarianceProfile& profile, double r);

// (R² - E n_g(R)) / R^α for jlm_banded(R, α) at r = R.
double deficit_constant(double R, double alpha);

struct DeficitFit {
  std::vector<double> R;
  std::vector<double> per_R;  // deficit_constant at each R
  double c1 = 0.0;            // min over R: one constant valid for all of them
};

DeficitFit fit_deficit_constant(const std::vector<double>& R_list, double alpha);

}  // namespace gef
