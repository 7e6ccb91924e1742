#pragma once

// Regularized factorization method: noisy data, spectral filters, the
// Picard-type indicator and the normalized imaging functional W.

#include "robineit/core.hpp"
#include "robineit/linalg.hpp"
#include "robineit/music.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace reit::fm {

inline constexpr double kAlphaCircular = 1e-7;
inline constexpr double kAlphaGeneral = 1e-5;

/// Entrywise relative noise: A^delta_ij = A_ij (1 + delta E_ij), ||E||_2 = 1,
/// E_ij drawn uniform(-1, 1) before rescaling. Deterministic in `seed`.
Eigen::MatrixXcd hadamard_noise(const Eigen::MatrixXcd& a, double delta, std::uint64_t seed);

/// Real uniform(-1, 1) matrix rescaled to unit spectral norm.
Eigen::MatrixXd unit_noise_matrix(int rows, int cols, std::uint64_t seed);

struct NoisySystem {
  Eigen::MatrixXcd clean;
  double delta = 0.0;
  std::uint64_t seed = 0;
  Eigen::MatrixXcd noisy;
  Svd svd;  // of `noisy`
};

NoisySystem apply_noise(const Eigen::MatrixXcd& a, double delta, std::uint64_t seed);

struct Tikhonov {
  double alpha;
};
struct Landweber {
  double alpha;                 // 1/m, m a positive integer
  std::optional<double> beta;   // default 1 / (2 sigma_1^2)
};
struct SpectralCutoff {
  double alpha;
};
using FilterSpec = std::variant<Tikhonov, Landweber, SpectralCutoff>;

std::string filter_name(const FilterSpec& spec);
double filter_alpha(const FilterSpec& spec);
void validate(const FilterSpec& spec);

/// Fill in the Landweber default beta from the largest singular value.
FilterSpec resolve(const FilterSpec& spec, double sigma_1);

/// phi(t; alpha) for the given filter. Landweber needs beta set and beta t^2 <= 1.
double filter_value(const FilterSpec& spec, double t);

/// sum_j phi^2(sigma_j)/sigma_j |(u_j, b)|^2 for an explicit probe vector b.
double indicator(const NoisySystem& sys, const FilterSpec& spec, const Eigen::VectorXcd& b);
/// Same with b = probe_vector(z) on the system's boundary grid.
double indicator(const NoisySystem& sys, const FilterSpec& spec, Point z,
                 const BoundaryGrid& grid);

/// W = W_reg / max W_reg with W_reg = 1 / indicator.
IndicatorField W_field(const NoisySystem& sys, const FilterSpec& spec, const SamplingGrid& grid,
                       const BoundaryGrid& boundary, Exec exec = Exec::parallel);

}  // namespace reit::fm

namespace reit {

struct Segment {
  Point a, b;
  bool operator==(const Segment&) const = default;
};

/// Marching-squares contour of {W = c} with linear interpolation along cell
/// edges. Only cells whose four corners are valid contribute.
std::vector<Segment> level_set(const IndicatorField& field, double c);

struct ContourStats {
  int points = 0;
  double mean_radius = 0.0;
  double radial_std = 0.0;
};
ContourStats contour_stats(const std::vector<Segment>& contour);

/// Lattice mask of {W >= c} over valid points.
std::vector<unsigned char> superlevel_mask(const IndicatorField& field, double c);
double jaccard(const std::vector<unsigned char>& a, const std::vector<unsigned char>& b);

}  // namespace reit
