#pragma once

// Closed-form current-gap operator for a concentric circular inclusion of
// radius rho with constant gamma. Every Fourier mode is an eigenfunction, so
// the operator is a convolution on the unit circle.

#include "robineit/core.hpp"

#include <vector>

namespace reit::series {

struct ModeCoefficients {
  cplx a, b, c;  // outer r^|n|, outer r^-|n| (ln r for n = 0), inner r^|n|, per unit datum
};

/// Interface-matched coefficients of mode n for unit boundary datum.
ModeCoefficients mode_coefficients(int n, double rho, double gamma);

/// sigma_n for n != 0, sigma_0 for n == 0. gamma == 0 is allowed (no inclusion).
double mode_eigenvalue(int n, double rho, double gamma);

/// Eigenvalue of (Lambda - Lambda0) on e^{i n theta}: sigma_0, or |n|(sigma_n - 1).
double gap_eigenvalue(int n, double rho, double gamma);

class SeriesCoefficients {
 public:
  SeriesCoefficients(double rho, double gamma, int truncation);

  double rho() const { return rho_; }
  double gamma() const { return gamma_; }
  int truncation() const { return truncation_; }
  double sigma(int n) const;            // |n| <= truncation
  double gap_eigenvalue(int n) const;   // zero beyond the truncation
  ModeCoefficients coefficients(int n) const { return mode_coefficients(n, rho_, gamma_); }

 private:
  double rho_, gamma_;
  int truncation_;
  std::vector<double> sigma_;  // index |n|
};

/// Truncated K(theta, phi) = sigma_0 + sum_{1<=|n|<=N} |n|(sigma_n - 1) e^{i n (theta - phi)}.
cplx kernel(double theta, double phi, const SeriesCoefficients& coeffs);

/// A_jk = (1/2pi) w_k K(theta_j, theta_k) on the boundary grid (nodal layout).
CurrentGapMatrix assemble_series_operator(const BoundaryGrid& grid, const SeriesCoefficients& coeffs);

struct TruncationRow {
  int n;
  double error;  // spectral-norm distance to the reference truncation
  double bound;  // rho^{2(N+1)} / sqrt(N+1)
};

/// Nodal-operator distance between truncation N and n_ref, for each N in [n_min, n_max].
/// The grid has max(64, 2 n_ref + 2) nodes so no retained mode aliases.
std::vector<TruncationRow> truncation_error_report(double rho, double gamma, int n_min,
                                                   int n_max, int n_ref = 40);

}  // namespace reit::series
