#include "robineit/music.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reit {

double IndicatorField::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values)
    if (!std::isnan(v)) m = std::max(m, v);
  return m;
}

double IndicatorField::median() const {
  std::vector<double> v;
  for (double x : values)
    if (!std::isnan(x)) v.push_back(x);
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + mid));
}

std::vector<Peak> extract_peaks(const IndicatorField& field, std::optional<int> expected) {
  const auto& g = field.grid;
  std::vector<Peak> peaks;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.valid(i, j)) continue;
      const double v = field.at(i, j);
      bool is_max = true;
      for (int dj = -1; dj <= 1 && is_max; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= g.nx() || b >= g.ny() || !g.valid(a, b)) continue;
          const double w = field.at(a, b);
          // Ties go to the neighbour earlier in lattice order so plateaus yield one peak.
          const bool earlier = g.flat(a, b) < g.flat(i, j);
          if (w > v || (earlier && w == v)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({g.point(i, j), v, i, j});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  if (expected) {
    if (static_cast<int>(peaks.size()) > *expected) peaks.resize(*expected);
    return peaks;
  }
  const double cut = 10.0 * field.median();
  std::erase_if(peaks, [cut](const Peak& p) { return !(p.value > cut); });
  return peaks;
}

}  // namespace reit

namespace reit::music {

ResponseMatrix assemble_F(const CurrentGapMatrix& data) {
  if (data.layout != CurrentGapMatrix::Layout::basis_by_node || !data.basis)
    throw DomainError("assemble_F expects basis-by-node data");
  const auto& basis = *data.basis;
  if (basis.kind() != FourierBasisSet::Kind::music)
    throw DomainError("assemble_F expects the basis 0..N");
  if (data.values.cols() != data.grid.size())
    throw DomainError("data columns do not match the boundary grid");
  // Bilinear pairing: the data factor is not conjugated.
  const Eigen::MatrixXcd g = basis.samples(data.grid);  // (N+1) x K, row m: e^{i m theta_k}
  return make_response(data.values * g.transpose() * data.grid.weight());
}

ResponseMatrix make_response(Eigen::MatrixXcd f) {
  if (f.rows() != f.cols()) throw DomainError("response matrix must be square");
  ResponseMatrix r;
  r.svd = svd(f);
  r.f = std::move(f);
  return r;
}

int detect_rank(const ResponseMatrix& f, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("rank threshold must lie in (0, 1)");
  const auto& s = f.svd.singular_values;
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  while (r < s.size() && s(r) >= tau * s(0)) ++r;
  return r;
}

void set_rank(ResponseMatrix& f, double tau) {
  f.rank = detect_rank(f, tau);
  f.threshold = tau;
}

Eigen::VectorXcd probe_phi(Point x, int n_max) {
  Eigen::VectorXcd phi(n_max + 1);
  for (int n = 0; n <= n_max; ++n) phi(n) = harmonic_lifting(x, n);
  return phi;
}

double noise_projection(const ResponseMatrix& f, Point x) {
  const int n = f.size();
  if (f.rank < 0) throw DomainError("rank has not been detected");
  if (f.rank >= n) throw DomainError("noise subspace is empty (rank equals N+1)");
  const Eigen::VectorXcd phi = probe_phi(x, n - 1);
  double s = 0.0;
  for (int l = f.rank; l < n; ++l) s += std::norm(f.svd.u.col(l).dot(phi));  // (phi, u_l)
  return s;
}

namespace {

double w_point(const ResponseMatrix& f, Point x) {
  return 1.0 / std::max(noise_projection(f, x), std::numeric_limits<double>::min());
}

}  // namespace

IndicatorField W_music(const ResponseMatrix& f, const SamplingGrid& grid, Exec exec) {
  if (f.rank < 0) throw DomainError("rank has not been detected");
  if (f.rank >= f.size()) throw DomainError("noise subspace is empty (rank equals N+1)");
  IndicatorField field{grid,
                       std::vector<double>(grid.lattice_size(),
                                           std::numeric_limits<double>::quiet_NaN()),
                       "music",
                       {}};
  const auto& idx = grid.valid_indices();
  const int count = static_cast<int>(idx.size());
  const int nx = grid.nx();
  if (exec == Exec::serial) {
    for (int p = 0; p < count; ++p)
      field.values[idx[p]] = w_point(f, grid.point(idx[p] % nx, idx[p] / nx));
  } else {
#pragma omp parallel for schedule(static)
    for (int p = 0; p < count; ++p)
      field.values[idx[p]] = w_point(f, grid.point(idx[p] % nx, idx[p] / nx));
  }
  field.metadata = {{"rank", std::to_string(f.rank)},
                    {"rank_threshold", std::to_string(f.threshold)}};
  return field;
}

Eigen::MatrixXcd synthetic_F(const std::vector<Point>& centers, const std::vector<double>& weights,
                             int n_max) {
  if (centers.size() != weights.size()) throw DomainError("one weight per centre is required");
  const int J = static_cast<int>(centers.size());
  Eigen::MatrixXcd u(n_max + 1, J);
  for (int j = 0; j < J; ++j) u.col(j) = probe_phi(centers[j], n_max);
  Eigen::VectorXcd t(J);
  for (int j = 0; j < J; ++j) t(j) = weights[j];
  return u * t.asDiagonal() * u.transpose();
}

}  // namespace reit::music
