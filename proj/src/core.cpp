#include "robineit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace reit {

double Point::norm() const { return std::hypot(x, y); }
double Point::angle() const { return std::atan2(y, x); }

double distance(Point a, Point b) { return (a - b).norm(); }

Point rotate(Point p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// --- grids -------------------------------------------------------------------

BoundaryGrid::BoundaryGrid(int node_count) : node_count_(node_count) {
  if (node_count <= 0) throw DomainError("boundary grid needs a positive node count");
}

Point BoundaryGrid::node(int k) const {
  const double t = angle(k);
  return {std::cos(t), std::sin(t)};
}

namespace {

std::vector<double> axis(double lo, double hi, double step) {
  // The tolerance absorbs rounding in (hi - lo) / step for end points that land on the lattice.
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + i * step;
  return v;
}

}  // namespace

SamplingGrid::SamplingGrid(double x_min, double x_max, double y_min, double y_max, double step)
    : step_(step) {
  if (!(step > 0.0)) throw DomainError("sampling step must be positive");
  if (x_min > x_max || y_min > y_max) throw DomainError("empty sampling rectangle");
  if (x_min < -1.0 || x_max > 1.0 || y_min < -1.0 || y_max > 1.0)
    throw DomainError("sampling rectangle must lie in [-1, 1]^2");
  xs_ = axis(x_min, x_max, step);
  ys_ = axis(y_min, y_max, step);
  build_mask();
}

SamplingGrid SamplingGrid::from_axes(std::vector<double> xs, std::vector<double> ys,
                                     double step) {
  if (xs.empty() || ys.empty()) throw DomainError("sampling axes must be nonempty");
  if (!(step > 0.0)) throw DomainError("sampling step must be positive");
  SamplingGrid g{Empty{}};
  g.xs_ = std::move(xs);
  g.ys_ = std::move(ys);
  g.step_ = step;
  g.build_mask();
  return g;
}

void SamplingGrid::build_mask() {
  mask_.assign(static_cast<size_t>(nx()) * ny(), 0);
  valid_.clear();
  for (int j = 0; j < ny(); ++j)
    for (int i = 0; i < nx(); ++i)
      if (std::hypot(xs_[i], ys_[j]) < 1.0 - step_) {
        mask_[flat(i, j)] = 1;
        valid_.push_back(flat(i, j));
      }
}

std::vector<Point> SamplingGrid::points() const {
  std::vector<Point> out;
  out.reserve(valid_.size());
  for (int f : valid_) out.push_back(point(f % nx(), f / nx()));
  return out;
}

// --- geometry ----------------------------------------------------------------

StarShaped StarShaped::cosine(double r0, double amp, int freq, std::string label) {
  StarShaped s;
  s.rho = [=](double t) { return r0 * (1.0 + amp * std::cos(freq * t)); };
  s.drho = [=](double t) { return -r0 * amp * freq * std::sin(freq * t); };
  s.label = std::move(label);
  return s;
}

StarShaped StarShaped::rotated(double angle) const {
  StarShaped s;
  s.rho = [r = rho, angle](double t) { return r(t - angle); };
  s.drho = [d = drho, angle](double t) { return d(t - angle); };
  s.label = label;
  return s;
}

double min_center_distance(const SmallDiscs& discs) {
  double best = std::numeric_limits<double>::infinity();
  const auto& c = discs.components;
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = i + 1; j < c.size(); ++j)
      best = std::min(best, distance(c[i].center, c[j].center));
  return best;
}

void validate(const InclusionGeometry& geometry) {
  std::visit(
      [](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConcentricDisc>) {
          if (!(g.radius > 0.0 && g.radius < 1.0))
            throw DomainError("concentric disc radius must lie in (0, 1)");
        } else if constexpr (std::is_same_v<T, StarShaped>) {
          if (!g.rho || !g.drho) throw DomainError("star-shaped curve needs rho and rho'");
          constexpr int kProbe = 2048;
          for (int k = 0; k < kProbe; ++k) {
            const double r = g.rho(kTwoPi * k / kProbe);
            if (!(r > 0.0 && r < 1.0))
              throw DomainError("star-shaped radius must satisfy 0 < rho(theta) < 1");
          }
        } else {
          if (!(g.epsilon > 0.0)) throw DomainError("small-disc scale epsilon must be positive");
          const auto& c = g.components;
          for (size_t i = 0; i < c.size(); ++i) {
            const double ri = g.epsilon * c[i].shape_radius;
            if (!(c[i].shape_radius > 0.0)) throw DomainError("disc shape radius must be positive");
            if (c[i].center.norm() + ri >= 1.0)
              throw DomainError("small disc touches or crosses the unit circle");
            for (size_t j = 0; j < i; ++j) {
              const double d = distance(c[i].center, c[j].center);
              if (d <= 0.0) throw DomainError("small-disc centres must be distinct");
              if (d <= ri + g.epsilon * c[j].shape_radius)
                throw DomainError("small discs overlap");
            }
          }
        }
      },
      geometry);
}

CurvePoint boundary_curve(const InclusionGeometry& geometry, double theta) {
  double r = 0.0, dr = 0.0;
  if (const auto* d = std::get_if<ConcentricDisc>(&geometry)) {
    r = d->radius;
  } else if (const auto* s = std::get_if<StarShaped>(&geometry)) {
    r = s->rho(theta);
    dr = s->drho(theta);
  } else {
    throw DomainError("boundary_curve needs a concentric disc or star-shaped curve");
  }
  const double c = std::cos(theta), sn = std::sin(theta);
  const Point p{r * c, r * sn};
  const Point tangent{dr * c - r * sn, dr * sn + r * c};
  const double speed = std::hypot(r, dr);
  // Counter-clockwise parametrization: outward normal is the tangent rotated by -90 degrees.
  const Point normal{tangent.y / speed, -tangent.x / speed};
  return {p, speed, normal};
}

// --- gamma -------------------------------------------------------------------

RobinCoefficient::RobinCoefficient(std::function<double(double)> fn, std::string label,
                                   std::optional<double> constant)
    : fn_(std::move(fn)), label_(std::move(label)), constant_(constant) {
  if (constant_) {
    min_ = max_ = *constant_;
    return;
  }
  constexpr int kProbe = 4096;
  min_ = std::numeric_limits<double>::infinity();
  max_ = -min_;
  for (int k = 0; k < kProbe; ++k) {
    const double v = fn_(kTwoPi * k / kProbe);
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }
}

RobinCoefficient RobinCoefficient::constant(double value) {
  return RobinCoefficient([value](double) { return value; }, "constant", value);
}

RobinCoefficient RobinCoefficient::inverse_exp_cos() {
  return RobinCoefficient([](double t) { return 1.0 / (4.0 + std::exp(std::cos(t))); },
                          "paper_gamma", std::nullopt);
}

RobinCoefficient RobinCoefficient::tabulated(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("tabulated gamma needs at least one sample");
  auto fn = [s = std::move(samples)](double t) {
    const int n = static_cast<int>(s.size());
    double u = std::fmod(t, kTwoPi);
    if (u < 0) u += kTwoPi;
    const double pos = u / kTwoPi * n;
    const int i0 = static_cast<int>(std::floor(pos)) % n;
    const int i1 = (i0 + 1) % n;
    const double w = pos - std::floor(pos);
    return (1.0 - w) * s[i0] + w * s[i1];
  };
  return RobinCoefficient(std::move(fn), "tabulated", std::nullopt);
}

RobinCoefficient RobinCoefficient::from_function(std::function<double(double)> fn,
                                                 std::string label) {
  return RobinCoefficient(std::move(fn), std::move(label), std::nullopt);
}

RobinCoefficient RobinCoefficient::rotated(double angle) const {
  if (constant_) return *this;
  return RobinCoefficient([f = fn_, angle](double t) { return f(t - angle); }, label_,
                          std::nullopt);
}

// --- Fourier basis -----------------------------------------------------------

FourierBasisSet::FourierBasisSet(Kind kind, int n_max) : kind_(kind), n_max_(n_max) {
  if (n_max < 0) throw DomainError("basis order must be nonnegative");
  const int lo = kind == Kind::music ? 0 : -n_max;
  for (int n = lo; n <= n_max; ++n) indices_.push_back(n);
}

FourierBasisSet FourierBasisSet::music(int n_max) { return {Kind::music, n_max}; }
FourierBasisSet FourierBasisSet::symmetric(int n_max) { return {Kind::symmetric, n_max}; }

Eigen::MatrixXcd FourierBasisSet::samples(const BoundaryGrid& grid) const {
  Eigen::MatrixXcd e(size(), grid.size());
  for (int r = 0; r < size(); ++r)
    for (int k = 0; k < grid.size(); ++k) e(r, k) = std::polar(1.0, indices_[r] * grid.angle(k));
  return e;
}

cplx harmonic_lifting(Point x, int n) {
  const double r = x.norm();
  if (!(r < 1.0)) throw DomainError("harmonic lifting is defined for |x| < 1 only");
  if (n == 0) return 1.0;
  if (r == 0.0) return 0.0;
  return std::polar(std::pow(r, std::abs(n)), n * x.angle());
}

// --- current-gap matrix --------------------------------------------------------

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::series: return "series";
    case Provenance::bie: return "bie";
    case Provenance::born: return "born";
    case Provenance::asymptotic: return "asymptotic";
  }
  return "unknown";
}

void CurrentGapMatrix::check_finite() const {
  if (!values.allFinite()) throw SolverError("current-gap matrix has non-finite entries", 0.0);
}

CurrentGapMatrix to_nodal(const CurrentGapMatrix& data) {
  if (data.layout != CurrentGapMatrix::Layout::basis_by_node || !data.basis)
    throw DomainError("to_nodal expects basis-by-node data");
  const auto& basis = *data.basis;
  const int K = data.grid.size();
  if (basis.kind() != FourierBasisSet::Kind::symmetric || basis.size() > K)
    throw DomainError("nodal transform needs a symmetric basis with 2N+1 <= K");
  // Nodal voltages v -> Fourier coefficients (1/K) E^H v -> currents sum_n c_n g_n.
  const Eigen::MatrixXcd e = basis.samples(data.grid);
  CurrentGapMatrix out{data.values.transpose() * e.conjugate() / static_cast<double>(K),
                       CurrentGapMatrix::Layout::nodal, data.provenance, data.grid,
                       std::nullopt};
  return out;
}

CurrentGapMatrix to_basis(const CurrentGapMatrix& nodal, const FourierBasisSet& basis) {
  if (nodal.layout != CurrentGapMatrix::Layout::nodal)
    throw DomainError("to_basis expects a nodal operator");
  const Eigen::MatrixXcd e = basis.samples(nodal.grid);
  return {(nodal.values * e.transpose()).transpose(), CurrentGapMatrix::Layout::basis_by_node,
          nodal.provenance, nodal.grid, basis};
}

}  // namespace reit
