#pragma once

// Shared domain types: boundary and sampling grids, inclusion geometry,
// the Robin transmission coefficient, Fourier voltage bases and the
// discretized current-gap operator.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace reit {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A linear solve failed; carries the conditioning estimate that triggered it.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  double norm() const;
  double angle() const;  // polar angle in (-pi, pi]
  Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  Point operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);
Point rotate(Point p, double angle);

/// Equally spaced nodes on the unit circle with trapezoid weights.
class BoundaryGrid {
 public:
  static constexpr int kDefaultNodes = 64;

  explicit BoundaryGrid(int node_count = kDefaultNodes);

  int size() const { return node_count_; }
  double angle(int k) const { return kTwoPi * k / node_count_; }
  double weight() const { return kTwoPi / node_count_; }
  Point node(int k) const;

 private:
  int node_count_;
};

/// Tensor-product grid over a rectangle, restricted to points with |z| < 1 - h.
///
/// The full rectangular lattice is kept so that neighbourhood queries (peak
/// search, marching squares) stay simple; `valid(i, j)` masks out points that
/// were discarded near or outside the unit circle.
class SamplingGrid {
 public:
  static constexpr double kDefaultStep = 0.0202;

  SamplingGrid(double x_min = -1.0, double x_max = 1.0, double y_min = -1.0,
               double y_max = 1.0, double step = kDefaultStep);

  /// Grid built from explicit axis coordinates; points with |z| >= 1 - step are masked.
  static SamplingGrid from_axes(std::vector<double> xs, std::vector<double> ys, double step);

  int nx() const { return static_cast<int>(xs_.size()); }
  int ny() const { return static_cast<int>(ys_.size()); }
  double step() const { return step_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  // Row-major in y: flat index = j * nx + i.
  int flat(int i, int j) const { return j * nx() + i; }
  Point point(int i, int j) const { return {xs_[i], ys_[j]}; }
  bool valid(int i, int j) const { return mask_[flat(i, j)] != 0; }

  /// Flattened list of the valid sampling points.
  std::vector<Point> points() const;
  /// Flat lattice indices of the valid points, same order as `points()`.
  const std::vector<int>& valid_indices() const { return valid_; }
  int lattice_size() const { return nx() * ny(); }

 private:
  struct Empty {};
  explicit SamplingGrid(Empty) {}
  void build_mask();

  std::vector<double> xs_, ys_;
  double step_ = kDefaultStep;
  std::vector<unsigned char> mask_;
  std::vector<int> valid_;
};

// --- inclusion geometry ---------------------------------------------------

struct ConcentricDisc {
  double radius;
};

struct StarShaped {
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::string label = "star";

  /// rho(t) = r0 (1 + amp cos(freq t)).
  static StarShaped cosine(double r0, double amp, int freq, std::string label = "star");
  /// Same curve rotated counter-clockwise by `angle`.
  StarShaped rotated(double angle) const;
};

struct SmallDisc {
  Point center;
  double shape_radius = 1.0;  // radius of B_j before scaling by epsilon
};

struct SmallDiscs {
  std::vector<SmallDisc> components;
  double epsilon;
};

using InclusionGeometry = std::variant<ConcentricDisc, StarShaped, SmallDiscs>;

/// Throws DomainError if the geometry violates its invariants.
void validate(const InclusionGeometry& geometry);

/// Minimum pairwise centre distance c0 for SmallDiscs (infinity for J < 2).
double min_center_distance(const SmallDiscs& discs);

struct CurvePoint {
  Point point;
  double speed;   // |x'(t)|
  Point normal;   // unit outward normal
};

/// Boundary point, arclength factor and outward normal of a star-shaped curve.
CurvePoint boundary_curve(const InclusionGeometry& geometry, double theta);

// --- transmission coefficient -----------------------------------------------

/// gamma as a function of the boundary parameter, with cached bounds.
class RobinCoefficient {
 public:
  static RobinCoefficient constant(double value);
  /// 1 / (4 + exp(cos t)).
  static RobinCoefficient inverse_exp_cos();
  /// Periodic linear interpolation of equally spaced samples on [0, 2pi).
  static RobinCoefficient tabulated(std::vector<double> samples);
  static RobinCoefficient from_function(std::function<double(double)> fn, std::string label);

  double operator()(double theta) const { return fn_(theta); }
  double min() const { return min_; }
  double max() const { return max_; }
  bool is_constant() const { return constant_.has_value(); }
  std::optional<double> constant_value() const { return constant_; }
  const std::string& label() const { return label_; }

  RobinCoefficient rotated(double angle) const;

 private:
  RobinCoefficient(std::function<double(double)> fn, std::string label,
                   std::optional<double> constant);

  std::function<double(double)> fn_;
  std::string label_;
  std::optional<double> constant_;
  double min_ = 0.0;
  double max_ = 0.0;
};

// --- Fourier voltage basis ----------------------------------------------------

class FourierBasisSet {
 public:
  enum class Kind { music, symmetric };

  /// Indices 0..N.
  static FourierBasisSet music(int n_max);
  /// Indices -N..N.
  static FourierBasisSet symmetric(int n_max);

  Kind kind() const { return kind_; }
  int n_max() const { return n_max_; }
  int size() const { return static_cast<int>(indices_.size()); }
  int index(int row) const { return indices_[row]; }
  const std::vector<int>& indices() const { return indices_; }

  /// Samples of e^{i n theta_k} on the boundary grid, one row per basis index.
  Eigen::MatrixXcd samples(const BoundaryGrid& grid) const;

  bool operator==(const FourierBasisSet&) const = default;

 private:
  FourierBasisSet(Kind kind, int n_max);
  Kind kind_;
  int n_max_;
  std::vector<int> indices_;
};

/// |x|^{|n|} e^{i n theta_x}: the harmonic extension of e^{i n theta} into the disk.
cplx harmonic_lifting(Point x, int n);

// --- discretized current-gap operator -------------------------------------

enum class Provenance { series, bie, born, asymptotic };
std::string to_string(Provenance p);

struct CurrentGapMatrix {
  enum class Layout {
    basis_by_node,  // row r: (Lambda - Lambda0) e^{i n_r theta} at each boundary node
    nodal           // K x K map from nodal voltages to nodal currents
  };

  Eigen::MatrixXcd values;
  Layout layout;
  Provenance provenance;
  BoundaryGrid grid;
  std::optional<FourierBasisSet> basis;  // set for basis_by_node

  void check_finite() const;
};

/// K x K nodal operator from basis data on a symmetric basis with 2N+1 <= K.
CurrentGapMatrix to_nodal(const CurrentGapMatrix& data);

/// Basis-by-node data from a nodal operator by applying it to sampled e^{i n theta}.
CurrentGapMatrix to_basis(const CurrentGapMatrix& nodal, const FourierBasisSet& basis);

}  // namespace reit
