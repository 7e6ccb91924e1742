#include "robineit/greens.hpp"

#include <cmath>

namespace reit::greens {

namespace {

void require_interior(Point p, const char* what) {
  if (!(p.norm() < 1.0)) throw DomainError(std::string(what) + " must lie inside the unit disk");
}

}  // namespace

double green_image(Point x, Point z) {
  // |z| |x - z/|z|^2| = | |z| x - z/|z| |, which tends to 1 as z -> 0.
  const double r = z.norm();
  if (r == 0.0) return 0.0;
  const Point d = x * r - z * (1.0 / r);
  return std::log(d.norm()) / kTwoPi;
}

GreenEval green_parts(Point x, Point z) {
  require_interior(x, "x");
  require_interior(z, "z");
  const double d = distance(x, z);
  if (d == 0.0) throw DomainError("Green's function is singular at x == z");
  return {-std::log(d) / kTwoPi, green_image(x, z)};
}

double green(Point x, Point z) { return green_parts(x, z).value(); }

double poisson_normal_derivative(Point x, double theta_z) {
  const double r2 = x.x * x.x + x.y * x.y;
  if (!(r2 < 1.0)) throw DomainError("poisson_normal_derivative needs |x| < 1");
  const double cross = x.x * std::cos(theta_z) + x.y * std::sin(theta_z);  // |x| cos(theta_x - theta_z)
  return -(1.0 - r2) / (kTwoPi * (r2 + 1.0 - 2.0 * cross));
}

Eigen::VectorXcd probe_vector(Point z, const BoundaryGrid& grid) {
  Eigen::VectorXcd b(grid.size());
  for (int k = 0; k < grid.size(); ++k) b(k) = poisson_normal_derivative(z, grid.angle(k));
  return b;
}

}  // namespace reit::greens
