#pragma once

// Forward solvers for (Lambda - Lambda0) on general inclusions.
//
// The trace psi = u|_{dD} solves the second-kind equation
//
//     psi(z) + int_{dD} G(z, x) gamma(x) psi(x) ds(x) = u0(z),   z on dD,
//
// discretized by a Nystrom method: the logarithmic part of G on each closed
// component uses the periodic product-quadrature weights for
// ln(4 sin^2((s - t)/2)), everything else uses the trapezoid rule. The
// current gap at the outer boundary is then a smooth quadrature against the
// normal derivative of G.
//
// The Born and leading-order asymptotic generators for small inclusions
// live here too because they share the same boundary nodes.

#include "robineit/core.hpp"
#include "robineit/linalg.hpp"

#include <Eigen/LU>

#include <vector>

namespace reit::bie {

inline constexpr int kDefaultCurveNodes = 128;
inline constexpr int kDefaultDiscNodes = 32;  // per small-disc component

/// Nodes on dD. Each closed component k occupies [start[k], start[k+1]) and is
/// sampled at t_j = 2 pi j / M_k.
struct BoundaryNodes {
  std::vector<Point> points;
  std::vector<double> param;  // curve parameter t_j
  std::vector<double> speed;  // |x'(t_j)|
  std::vector<double> gamma;  // gamma(t_j)
  std::vector<int> start;     // component offsets, size = components + 1

  int size() const { return static_cast<int>(points.size()); }
  int components() const { return static_cast<int>(start.size()) - 1; }
  int component_size(int k) const { return start[k + 1] - start[k]; }
  /// Trapezoid arclength weight of node i.
  double weight(int i) const;
};

/// `nodes` is the node count of a single curve, or per component for SmallDiscs.
BoundaryNodes discretize(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                         int nodes);

/// Weights R_d, d = (i - j) mod M, with
/// int_0^{2pi} ln(4 sin^2((t_i - t)/2)) f(t) dt ~= sum_j R_{(i-j) mod M} f(t_j).
std::vector<double> log_quadrature_weights(int m_nodes);

/// Assembled and factorized Nystrom system (I + G Gamma) for one inclusion.
class BieDiscretization {
 public:
  BieDiscretization(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                    int nodes, Exec exec = Exec::parallel);

  const BoundaryNodes& nodes() const { return nodes_; }
  const Eigen::MatrixXd& system_matrix() const { return system_; }
  /// Reciprocal condition estimate of the system matrix.
  double rcond() const { return rcond_; }

  /// Trace of u on dD for the voltage e^{i n theta}.
  Eigen::VectorXcd solve_trace(int n) const;
  /// -int gamma psi d_nu G ds at every node of the outer grid.
  Eigen::VectorXcd current_gap(const Eigen::VectorXcd& trace, const BoundaryGrid& grid) const;

 private:
  BoundaryNodes nodes_;
  Eigen::MatrixXd system_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
};

Eigen::VectorXcd solve_trace(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                             int n, int nodes = kDefaultCurveNodes);

Eigen::VectorXcd current_gap(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                             int n, const BoundaryGrid& grid, int nodes = kDefaultCurveNodes);

/// Current gap with u replaced by the harmonic lifting u0 on dD.
Eigen::VectorXcd born_current_gap(const SmallDiscs& geometry, const RobinCoefficient& gamma,
                                  int n, const BoundaryGrid& grid,
                                  int nodes = kDefaultDiscNodes);

/// Arclength average of gamma over each component of the small discs.
std::vector<double> component_gamma_average(const SmallDiscs& geometry,
                                            const RobinCoefficient& gamma,
                                            int nodes = kDefaultDiscNodes);

/// Point-source sum -eps sum_j |dB_j| Avg(gamma_j) u0(x_j) d_nu G(x_j, .).
Eigen::VectorXcd asymptotic_current_gap(const SmallDiscs& geometry,
                                        const std::vector<double>& gamma_avg, int n,
                                        const BoundaryGrid& grid);

// Whole-basis assembly. Rows follow the basis order; each row is independent,
// so the parallel path distributes rows over threads.
CurrentGapMatrix assemble_bie(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                              const FourierBasisSet& basis, const BoundaryGrid& grid,
                              int nodes, Exec exec = Exec::parallel);
CurrentGapMatrix assemble_born(const SmallDiscs& geometry, const RobinCoefficient& gamma,
                               const FourierBasisSet& basis, const BoundaryGrid& grid,
                               int nodes = kDefaultDiscNodes, Exec exec = Exec::parallel);
CurrentGapMatrix assemble_asymptotic(const SmallDiscs& geometry, const RobinCoefficient& gamma,
                                     const FourierBasisSet& basis, const BoundaryGrid& grid,
                                     int nodes = kDefaultDiscNodes);

struct ScalingRow {
  double epsilon;
  double full_minus_born;
  double born;
  double full_minus_asymptotic;
};

/// Frobenius norms of the basis-by-node data for each epsilon (base.epsilon is ignored).
std::vector<ScalingRow> asymptotic_scaling_report(const SmallDiscs& base,
                                                  const RobinCoefficient& gamma,
                                                  const std::vector<double>& epsilons,
                                                  int basis_order = 20,
                                                  const BoundaryGrid& grid = BoundaryGrid(),
                                                  int nodes = kDefaultDiscNodes);

struct ScalingSlopes {
  double born;
  double full_minus_born;
  double full_minus_asymptotic;
};
ScalingSlopes fit_scaling_slopes(const std::vector<ScalingRow>& rows);

}  // namespace reit::bie
