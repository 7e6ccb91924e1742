#include "robineit/forward_bie.hpp"

#include "robineit/greens.hpp"

#include <cmath>
#include <sstream>

namespace reit::bie {

double BoundaryNodes::weight(int i) const {
  int k = 0;
  while (start[k + 1] <= i) ++k;
  return kTwoPi / component_size(k) * speed[i];
}

namespace {

void push_node(BoundaryNodes& out, Point p, double t, double speed, double g) {
  out.points.push_back(p);
  out.param.push_back(t);
  out.speed.push_back(speed);
  out.gamma.push_back(g);
}

}  // namespace

BoundaryNodes discretize(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                         int nodes) {
  validate(geometry);
  if (nodes < 4 || nodes % 2 != 0) throw DomainError("node count must be even and >= 4");
  BoundaryNodes out;
  out.start.push_back(0);
  if (const auto* discs = std::get_if<SmallDiscs>(&geometry)) {
    for (const auto& c : discs->components) {
      const double r = discs->epsilon * c.shape_radius;
      for (int j = 0; j < nodes; ++j) {
        const double t = kTwoPi * j / nodes;
        push_node(out, c.center + Point{std::cos(t), std::sin(t)} * r, t, r, gamma(t));
      }
      out.start.push_back(out.size());
    }
  } else {
    for (int j = 0; j < nodes; ++j) {
      const double t = kTwoPi * j / nodes;
      const auto cp = boundary_curve(geometry, t);
      push_node(out, cp.point, t, cp.speed, gamma(t));
    }
    out.start.push_back(out.size());
  }
  return out;
}

std::vector<double> log_quadrature_weights(int m_nodes) {
  if (m_nodes < 2 || m_nodes % 2 != 0) throw DomainError("log quadrature needs an even node count");
  const int half = m_nodes / 2;
  std::vector<double> r(m_nodes);
  for (int d = 0; d < m_nodes; ++d) {
    double s = 0.0;
    for (int k = 1; k < half; ++k) s += std::cos(k * d * kPi / half) / k;
    r[d] = -kTwoPi / half * s - kPi / (double(half) * half) * (d % 2 == 0 ? 1.0 : -1.0);
  }
  return r;
}

// --- Nystrom system ------------------------------------------------------------

namespace {

// Row i of the kernel matrix G (without the gamma * speed column scaling).
void kernel_row(const BoundaryNodes& nd, const std::vector<std::vector<double>>& logw, int i,
                Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
  int ci = 0;
  while (nd.start[ci + 1] <= i) ++ci;
  const Point xi = nd.points[i];
  for (int cj = 0; cj < nd.components(); ++cj) {
    const int m = nd.component_size(cj);
    const double h = kTwoPi / m;
    for (int j = nd.start[cj]; j < nd.start[cj + 1]; ++j) {
      const Point xj = nd.points[j];
      if (ci != cj) {
        row(j) = h * greens::green(xi, xj);
        continue;
      }
      const int d = ((i - j) % m + m) % m;
      double smooth;
      if (i == j) {
        smooth = -std::log(nd.speed[i]) / kTwoPi + greens::green_image(xi, xj);
      } else {
        const double half = 0.5 * (nd.param[i] - nd.param[j]);
        const double s2 = 4.0 * std::sin(half) * std::sin(half);
        smooth = -std::log(distance(xi, xj)) / kTwoPi + std::log(s2) / (2.0 * kTwoPi) +
                 greens::green_image(xi, xj);
      }
      row(j) = -logw[cj][d] / (2.0 * kTwoPi) + h * smooth;
    }
  }
}

}  // namespace

BieDiscretization::BieDiscretization(const InclusionGeometry& geometry,
                                     const RobinCoefficient& gamma, int nodes, Exec exec)
    : nodes_(discretize(geometry, gamma, nodes)) {
  const int n = nodes_.size();
  std::vector<std::vector<double>> logw;
  for (int c = 0; c < nodes_.components(); ++c)
    logw.push_back(log_quadrature_weights(nodes_.component_size(c)));

  Eigen::MatrixXd g(n, n);
  if (exec == Exec::serial) {
    for (int i = 0; i < n; ++i) kernel_row(nodes_, logw, i, g.row(i));
  } else {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) kernel_row(nodes_, logw, i, g.row(i));
  }
  Eigen::VectorXd scale(n);
  for (int j = 0; j < n; ++j) scale(j) = nodes_.gamma[j] * nodes_.speed[j];
  system_ = Eigen::MatrixXd::Identity(n, n) + g * scale.asDiagonal();
  lu_.compute(system_);
  rcond_ = lu_.rcond();
  if (!(rcond_ > 1e-13)) {
    std::ostringstream msg;
    msg << "Nystrom system is numerically singular (rcond estimate " << rcond_ << ", "
        << n << " nodes)";
    throw SolverError(msg.str(), rcond_);
  }
}

Eigen::VectorXcd BieDiscretization::solve_trace(int n) const {
  const int m = nodes_.size();
  Eigen::MatrixXd rhs(m, 2);
  for (int i = 0; i < m; ++i) {
    const cplx u0 = harmonic_lifting(nodes_.points[i], n);
    rhs(i, 0) = u0.real();
    rhs(i, 1) = u0.imag();
  }
  const Eigen::MatrixXd sol = lu_.solve(rhs);
  Eigen::VectorXcd psi(m);
  for (int i = 0; i < m; ++i) psi(i) = {sol(i, 0), sol(i, 1)};
  return psi;
}

namespace {

// -sum_j w_j gamma_j values_j d_nu G(x_j, theta_k) for each outer node k.
Eigen::VectorXcd gap_quadrature(const BoundaryNodes& nd, const Eigen::VectorXcd& values,
                                const BoundaryGrid& grid) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.size());
  for (int i = 0; i < nd.size(); ++i) {
    const cplx wv = nd.weight(i) * nd.gamma[i] * values(i);
    for (int k = 0; k < grid.size(); ++k)
      out(k) -= wv * greens::poisson_normal_derivative(nd.points[i], grid.angle(k));
  }
  return out;
}

}  // namespace

Eigen::VectorXcd BieDiscretization::current_gap(const Eigen::VectorXcd& trace,
                                                const BoundaryGrid& grid) const {
  if (trace.size() != nodes_.size()) throw DomainError("trace size does not match the nodes");
  return gap_quadrature(nodes_, trace, grid);
}

Eigen::VectorXcd solve_trace(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                             int n, int nodes) {
  return BieDiscretization(geometry, gamma, nodes).solve_trace(n);
}

Eigen::VectorXcd current_gap(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                             int n, const BoundaryGrid& grid, int nodes) {
  const BieDiscretization d(geometry, gamma, nodes);
  return d.current_gap(d.solve_trace(n), grid);
}

Eigen::VectorXcd born_current_gap(const SmallDiscs& geometry, const RobinCoefficient& gamma,
                                  int n, const BoundaryGrid& grid, int nodes) {
  const auto nd = discretize(geometry, gamma, nodes);
  Eigen::VectorXcd u0(nd.size());
  for (int i = 0; i < nd.size(); ++i) u0(i) = harmonic_lifting(nd.points[i], n);
  return gap_quadrature(nd, u0, grid);
}

std::vector<double> component_gamma_average(const SmallDiscs& geometry,
                                            const RobinCoefficient& gamma, int nodes) {
  // Circles are parametrized by arclength up to a constant, so the arclength
  // average is the plain trapezoid mean in t.
  std::vector<double> avg;
  for (size_t c = 0; c < geometry.components.size(); ++c) {
    double s = 0.0;
    for (int j = 0; j < nodes; ++j) s += gamma(kTwoPi * j / nodes);
    avg.push_back(s / nodes);
  }
  return avg;
}

Eigen::VectorXcd asymptotic_current_gap(const SmallDiscs& geometry,
                                        const std::vector<double>& gamma_avg, int n,
                                        const BoundaryGrid& grid) {
  if (gamma_avg.size() != geometry.components.size())
    throw DomainError("one gamma average per component is required");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.size());
  for (size_t j = 0; j < geometry.components.size(); ++j) {
    const auto& c = geometry.components[j];
    const cplx strength =
        geometry.epsilon * kTwoPi * c.shape_radius * gamma_avg[j] * harmonic_lifting(c.center, n);
    for (int k = 0; k < grid.size(); ++k)
      out(k) -= strength * greens::poisson_normal_derivative(c.center, grid.angle(k));
  }
  return out;
}

// --- whole-basis assembly --------------------------------------------------------

namespace {

template <class RowFn>
Eigen::MatrixXcd assemble_rows(int rows, int cols, Exec exec, RowFn&& fn) {
  Eigen::MatrixXcd out(rows, cols);
  if (exec == Exec::serial) {
    for (int r = 0; r < rows; ++r) out.row(r) = fn(r).transpose();
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < rows; ++r) out.row(r) = fn(r).transpose();
  }
  return out;
}

}  // namespace

CurrentGapMatrix assemble_bie(const InclusionGeometry& geometry, const RobinCoefficient& gamma,
                              const FourierBasisSet& basis, const BoundaryGrid& grid, int nodes,
                              Exec exec) {
  const BieDiscretization d(geometry, gamma, nodes, exec);
  auto values = assemble_rows(basis.size(), grid.size(), exec, [&](int r) {
    return d.current_gap(d.solve_trace(basis.index(r)), grid);
  });
  CurrentGapMatrix out{std::move(values), CurrentGapMatrix::Layout::basis_by_node,
                       Provenance::bie, grid, basis};
  out.check_finite();
  return out;
}

CurrentGapMatrix assemble_born(const SmallDiscs& geometry, const RobinCoefficient& gamma,
                               const FourierBasisSet& basis, const BoundaryGrid& grid, int nodes,
                               Exec exec) {
  const auto nd = discretize(geometry, gamma, nodes);
  auto values = assemble_rows(basis.size(), grid.size(), exec, [&](int r) {
    Eigen::VectorXcd u0(nd.size());
    for (int i = 0; i < nd.size(); ++i) u0(i) = harmonic_lifting(nd.points[i], basis.index(r));
    return gap_quadrature(nd, u0, grid);
  });
  return {std::move(values), CurrentGapMatrix::Layout::basis_by_node, Provenance::born, grid,
          basis};
}

CurrentGapMatrix assemble_asymptotic(const SmallDiscs& geometry, const RobinCoefficient& gamma,
                                     const FourierBasisSet& basis, const BoundaryGrid& grid,
                                     int nodes) {
  validate(geometry);
  const auto avg = component_gamma_average(geometry, gamma, nodes);
  Eigen::MatrixXcd values(basis.size(), grid.size());
  for (int r = 0; r < basis.size(); ++r)
    values.row(r) = asymptotic_current_gap(geometry, avg, basis.index(r), grid).transpose();
  return {std::move(values), CurrentGapMatrix::Layout::basis_by_node, Provenance::asymptotic,
          grid, basis};
}

std::vector<ScalingRow> asymptotic_scaling_report(const SmallDiscs& base,
                                                  const RobinCoefficient& gamma,
                                                  const std::vector<double>& epsilons,
                                                  int basis_order, const BoundaryGrid& grid,
                                                  int nodes) {
  const auto basis = FourierBasisSet::music(basis_order);
  std::vector<ScalingRow> rows;
  for (double eps : epsilons) {
    SmallDiscs g = base;
    g.epsilon = eps;
    const auto full = assemble_bie(g, gamma, basis, grid, nodes);
    const auto born = assemble_born(g, gamma, basis, grid, nodes);
    const auto asym = assemble_asymptotic(g, gamma, basis, grid, nodes);
    rows.push_back({eps, (full.values - born.values).norm(), born.values.norm(),
                    (full.values - asym.values).norm()});
  }
  return rows;
}

ScalingSlopes fit_scaling_slopes(const std::vector<ScalingRow>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw DomainError("slope fit needs at least two epsilon values");
  Eigen::VectorXd le(n), lb(n), lfb(n), lfa(n);
  for (int i = 0; i < n; ++i) {
    le(i) = std::log(rows[i].epsilon);
    lb(i) = std::log(rows[i].born);
    lfb(i) = std::log(rows[i].full_minus_born);
    lfa(i) = std::log(rows[i].full_minus_asymptotic);
  }
  return {fit_slope(le, lb), fit_slope(le, lfb), fit_slope(le, lfa)};
}

}  // namespace reit::bie
