#pragma once

// Dirichlet Green's function of -Laplace on the unit disk and its boundary
// normal derivative (the negative Poisson kernel).

#include "robineit/core.hpp"

namespace reit::greens {

struct GreenEval {
  double singular;  // -(1/2pi) ln|x - z|
  double image;     //  (1/2pi) ln(|z| |x - z*|), smooth for x, z inside the disk
  double value() const { return singular + image; }
};

/// Both parts of G(x, z); x != z, |x| < 1, |z| < 1.
GreenEval green_parts(Point x, Point z);
double green(Point x, Point z);

/// Smooth image part only; also valid when x == z.
double green_image(Point x, Point z);

/// d/dnu(z) G(x, z) at the boundary point z = (cos theta_z, sin theta_z).
double poisson_normal_derivative(Point x, double theta_z);

/// b_z: poisson_normal_derivative(z, theta_k) over the boundary grid.
Eigen::VectorXcd probe_vector(Point z, const BoundaryGrid& grid);

}  // namespace reit::greens
