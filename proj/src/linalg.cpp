#include "robineit/linalg.hpp"

#include <Eigen/SVD>

namespace reit {

Svd svd(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> s(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {s.singularValues(), s.matrixU(), s.matrixV()};
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues()(0);
}

double spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
}

double fit_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double mx = x.mean(), my = y.mean();
  const Eigen::VectorXd dx = x.array() - mx;
  return dx.dot(y.array().matrix() - Eigen::VectorXd::Constant(y.size(), my)) / dx.squaredNorm();
}

}  // namespace reit
