#pragma once

#include <Eigen/Dense>

namespace reit {

/// Execution policy for the data-parallel sweeps. `serial` is the reference
/// path; `parallel` runs the same per-item kernel under OpenMP and must give
/// bit-identical output.
enum class Exec { serial, parallel };

struct Svd {
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXcd u;               // left singular vectors, columns
  Eigen::MatrixXcd v;               // right singular vectors, columns
};

/// Full SVD (square U and V).
Svd svd(const Eigen::MatrixXcd& a);

double spectral_norm(const Eigen::MatrixXcd& a);
double spectral_norm(const Eigen::MatrixXd& a);

/// Least-squares slope of y against x.
double fit_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace reit
