#include "robineit/forward_series.hpp"

#include "robineit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace reit::series {

namespace {

void check_params(double rho, double gamma) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("series path needs 0 < rho < 1");
  if (!(gamma >= 0.0)) throw DomainError("series path needs gamma >= 0");
}

}  // namespace

ModeCoefficients mode_coefficients(int n, double rho, double gamma) {
  check_params(rho, gamma);
  if (n == 0) {
    const double b0 = gamma * rho / (1.0 - gamma * rho * std::log(rho));
    return {1.0, b0, 1.0 + b0 * std::log(rho)};
  }
  const double m = std::abs(n);
  const double p = std::pow(rho, 2.0 * m);
  const double den = 2.0 * m + gamma * rho * (1.0 - p);
  const double a = (2.0 * m + gamma * rho) / den;
  const double b = -gamma * rho * p / den;
  return {a, b, a + b / p};
}

double mode_eigenvalue(int n, double rho, double gamma) {
  const auto c = mode_coefficients(n, rho, gamma);
  // d_r u(1) is b_0 for n = 0 and |n| (a_n - b_n) otherwise.
  return n == 0 ? c.b.real() : (c.a - c.b).real();
}

double gap_eigenvalue(int n, double rho, double gamma) {
  if (n == 0) return mode_eigenvalue(0, rho, gamma);
  // |n|(sigma_n - 1) written without the cancellation in sigma_n - 1.
  check_params(rho, gamma);
  const double m = std::abs(n);
  const double p = std::pow(rho, 2.0 * m);
  return m * 2.0 * gamma * rho * p / (2.0 * m + gamma * rho * (1.0 - p));
}

SeriesCoefficients::SeriesCoefficients(double rho, double gamma, int truncation)
    : rho_(rho), gamma_(gamma), truncation_(truncation) {
  check_params(rho, gamma);
  if (truncation < 0) throw DomainError("truncation order must be nonnegative");
  sigma_.resize(truncation + 1);
  for (int n = 0; n <= truncation; ++n) sigma_[n] = mode_eigenvalue(n, rho, gamma);
}

double SeriesCoefficients::sigma(int n) const {
  if (std::abs(n) > truncation_) throw DomainError("mode beyond truncation");
  return sigma_[std::abs(n)];
}

double SeriesCoefficients::gap_eigenvalue(int n) const {
  if (std::abs(n) > truncation_) return 0.0;
  return series::gap_eigenvalue(n, rho_, gamma_);
}

cplx kernel(double theta, double phi, const SeriesCoefficients& coeffs) {
  // Real and even in theta - phi because the eigenvalues depend on |n| only.
  const double d = theta - phi;
  double k = coeffs.gap_eigenvalue(0);
  for (int n = 1; n <= coeffs.truncation(); ++n) k += 2.0 * coeffs.gap_eigenvalue(n) * std::cos(n * d);
  return k;
}

CurrentGapMatrix assemble_series_operator(const BoundaryGrid& grid, const SeriesCoefficients& coeffs) {
  const int K = grid.size();
  // Circulant: one kernel row, then shifted.
  std::vector<cplx> row(K);
  for (int d = 0; d < K; ++d) row[d] = kernel(grid.angle(d), 0.0, coeffs) * grid.weight() / kTwoPi;
  Eigen::MatrixXcd a(K, K);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k) a(j, k) = row[((j - k) % K + K) % K];
  return {std::move(a), CurrentGapMatrix::Layout::nodal, Provenance::series, grid, std::nullopt};
}

std::vector<TruncationRow> truncation_error_report(double rho, double gamma, int n_min,
                                                   int n_max, int n_ref) {
  if (n_min < 0 || n_max < n_min || n_ref <= n_max)
    throw DomainError("truncation report needs 0 <= n_min <= n_max < n_ref");
  const BoundaryGrid grid(std::max(64, 2 * n_ref + 2));
  const auto reference = assemble_series_operator(grid, SeriesCoefficients(rho, gamma, n_ref));
  std::vector<TruncationRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    const auto a = assemble_series_operator(grid, SeriesCoefficients(rho, gamma, n));
    rows.push_back({n, spectral_norm(Eigen::MatrixXcd(reference.values - a.values)),
                    std::pow(rho, 2.0 * (n + 1)) / std::sqrt(n + 1.0)});
  }
  return rows;
}

}  // namespace reit::series
