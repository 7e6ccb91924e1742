#pragma once

// MUSIC localization of small inclusions from current-gap data.

#include "robineit/core.hpp"
#include "robineit/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace reit {

/// Values of an imaging functional on a sampling grid. Lattice points that
/// the grid masks out hold NaN.
struct IndicatorField {
  SamplingGrid grid;
  std::vector<double> values;  // lattice order, size nx * ny
  std::string method;
  std::vector<std::pair<std::string, std::string>> metadata;

  double at(int i, int j) const { return values[grid.flat(i, j)]; }
  double max() const;
  double median() const;
};

}  // namespace reit

namespace reit::music {

inline constexpr double kDefaultRankThreshold = 0.01;

struct ResponseMatrix {
  Eigen::MatrixXcd f;  // (N+1) x (N+1), rows: voltage index n, cols: pairing index m
  Svd svd;
  int rank = -1;
  double threshold = kDefaultRankThreshold;

  int size() const { return static_cast<int>(f.rows()); }
};

/// F_{n,m} = (2pi/K) sum_k e^{i m theta_k} [(Lambda - Lambda0) e^{i n theta}](theta_k).
ResponseMatrix assemble_F(const CurrentGapMatrix& data);

/// Wrap an explicit matrix (synthetic tests, rescaled data).
ResponseMatrix make_response(Eigen::MatrixXcd f);

/// Number of singular values >= tau * sigma_1; 0 for the zero matrix.
int detect_rank(const ResponseMatrix& f, double tau = kDefaultRankThreshold);
/// detect_rank and store the result in `f`.
void set_rank(ResponseMatrix& f, double tau = kDefaultRankThreshold);

/// (u0(x, f_0), ..., u0(x, f_N)).
Eigen::VectorXcd probe_phi(Point x, int n_max);

/// ||P phi_x||^2 with P the projection onto the span of the left singular
/// vectors r+1..N+1.
double noise_projection(const ResponseMatrix& f, Point x);

/// W_MUSIC = 1 / ||P phi_x||^2 over the valid sampling points.
IndicatorField W_music(const ResponseMatrix& f, const SamplingGrid& grid,
                       Exec exec = Exec::parallel);

/// Synthetic leading-order F = U T U^T for the given centres and weights T_jj.
Eigen::MatrixXcd synthetic_F(const std::vector<Point>& centers, const std::vector<double>& weights,
                             int n_max);

}  // namespace reit::music

namespace reit {

struct Peak {
  Point location;
  double value;
  int i, j;  // lattice indices
};

/// Local maxima over the 8-neighbourhood, sorted by value. With `expected`
/// the top J are returned, otherwise every maximum above 10x the field median.
std::vector<Peak> extract_peaks(const IndicatorField& field, std::optional<int> expected = {});

}  // namespace reit
