#include "gef/decorrelation.hpp"

#include <algorithm>
#include <cmath>

#include "gef/errors.hpp"

namespace gef {

namespace {

double row_abs_sum(const ComplexMatrix& m, int i) { return m.row(i).cwiseAbs().sum(); }

double off_diagonal_abs_sum(const ComplexMatrix& m, int i) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (j != i) s += std::abs(m(i, j));
  return s;
}

}  // namespace

CovarianceMatrix CovarianceMatrix::make(ComplexMatrix gamma, std::vector<double> delta) {
  const auto n = gamma.rows();
  if (n == 0 || gamma.cols() != n) throw PreconditionError("covariance must be a non-empty square matrix");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(gamma(i, i) - 1.0) > 1e-12) throw PreconditionError("covariance needs a unit diagonal");
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(gamma(i, j) - std::conj(gamma(j, i))) > 1e-12) throw PreconditionError("covariance must be Hermitian");
  }
  if (delta.empty()) {
    delta.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) delta[i] = off_diagonal_abs_sum(gamma, static_cast<int>(i));
  }
  if (static_cast<Eigen::Index>(delta.size()) != n) throw PreconditionError("delta has the wrong length");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double off = off_diagonal_abs_sum(gamma, static_cast<int>(i));
    if (delta[i] < off) throw PreconditionError("delta_i is below the off-diagonal row sum");
    if (delta[i] > 1.0 / 3.0) throw PreconditionError("delta_i exceeds 1/3");
  }
  return {std::move(gamma), std::move(delta)};
}

Decomposition decorrelate(const CovarianceMatrix& cov) {
  const auto n = cov.gamma.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix Delta = id - cov.gamma;
  ComplexMatrix mixing = id;
  ComplexMatrix power = id;
  double alpha = 1.0;
  Decomposition out;
  for (int k = 1; k <= 400; ++k) {
    power = power * Delta;
    alpha *= (2.0 * k - 1.0) / (2.0 * k);
    double largest = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rs = row_abs_sum(power, static_cast<int>(i));
      const double envelope = cov.delta[i] / std::pow(3.0, k - 1);
      if (rs > envelope * (1.0 + 1e-12) + 1e-300) throw NumericError("Neumann term exceeds its geometric envelope");
      largest = std::max(largest, alpha * rs);
    }
    mixing += alpha * power;
    out.terms = k;
    if (largest <= 1e-14) break;
    if (k == 400) throw NumericError("Neumann series did not converge");
  }
  const ComplexMatrix tilde = id - mixing;
  const ComplexMatrix resid = tilde * cov.gamma * tilde.adjoint();
  out.mixing = std::move(mixing);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = row_abs_sum(tilde, static_cast<int>(i));
    if (s > cov.delta[i] * (1.0 + 1e-12)) throw NumericError("residual scale exceeds delta_i");
    out.s.push_back(s);
    out.certified_bound.push_back(cov.delta[i]);
    out.residual_sd.push_back(std::sqrt(std::max(0.0, resid(i, i).real())));
  }
  return out;
}

CovarianceMatrix random_admissible_covariance(int size, const SeedLineage& lineage) {
  if (size < 1) throw PreconditionError("size must be >= 1");
  CounterStream rng(lineage.with_stream(StreamTag::covariance));
  ComplexMatrix g = ComplexMatrix::Identity(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < i; ++j) {
      // Heavy-tailed magnitudes give both near-diagonal and strongly coupled rows.
      const complex v = rng.complex_gaussian() * std::pow(rng.uniform_positive(), 3.0);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  double largest = 0.0;
  for (int i = 0; i < size; ++i) largest = std::max(largest, row_abs_sum(g, i) - 1.0);
  if (largest > 0.0) {
    const double target = rng.uniform_positive() / 3.0 * (1.0 - 1e-12);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (i != j) g(i, j) *= target / largest;
  }
  return CovarianceMatrix::make(std::move(g));
}

double whitening_error(const ComplexMatrix& mixing, const ComplexMatrix& gamma) {
  const ComplexMatrix w = mixing * gamma * mixing.adjoint();
  return (w - ComplexMatrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
}

}  // namespace gef
