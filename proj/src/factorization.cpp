#include "robineit/factorization.hpp"

#include "robineit/greens.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace reit::fm {

Eigen::MatrixXd unit_noise_matrix(int rows, int cols, std::uint64_t seed) {
  // Explicit bits-to-double map so the stream is identical across standard libraries.
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd e(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) e(i, j) = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  const double norm = spectral_norm(e);
  if (norm > 0.0) e /= norm;
  return e;
}

Eigen::MatrixXcd hadamard_noise(const Eigen::MatrixXcd& a, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw DomainError("noise level must be nonnegative");
  if (delta == 0.0) return a;
  const Eigen::MatrixXd e = unit_noise_matrix(static_cast<int>(a.rows()), static_cast<int>(a.cols()), seed);
  return a.array() * (1.0 + delta * e.array()).cast<cplx>();
}

NoisySystem apply_noise(const Eigen::MatrixXcd& a, double delta, std::uint64_t seed) {
  NoisySystem sys;
  sys.clean = a;
  sys.delta = delta;
  sys.seed = seed;
  sys.noisy = hadamard_noise(a, delta, seed);
  sys.svd = svd(sys.noisy);
  return sys;
}

// --- filters -------------------------------------------------------------------

std::string filter_name(const FilterSpec& spec) {
  switch (spec.index()) {
    case 0: return "tikhonov";
    case 1: return "landweber";
    default: return "cutoff";
  }
}

double filter_alpha(const FilterSpec& spec) {
  return std::visit([](const auto& f) { return f.alpha; }, spec);
}

namespace {

long landweber_steps(double alpha) {
  const double m = 1.0 / alpha;
  const double r = std::round(m);
  if (r < 1.0 || std::abs(m - r) > 1e-6 * r)
    throw DomainError("Landweber alpha must be 1/m for a positive integer m");
  return static_cast<long>(r);
}

}  // namespace

void validate(const FilterSpec& spec) {
  if (!(filter_alpha(spec) > 0.0)) throw DomainError("regularization parameter must be positive");
  if (const auto* lw = std::get_if<Landweber>(&spec)) {
    landweber_steps(lw->alpha);
    if (lw->beta && !(*lw->beta > 0.0)) throw DomainError("Landweber beta must be positive");
  }
}

FilterSpec resolve(const FilterSpec& spec, double sigma_1) {
  validate(spec);
  if (const auto* lw = std::get_if<Landweber>(&spec)) {
    Landweber out = *lw;
    if (!out.beta) {
      if (!(sigma_1 > 0.0)) throw DomainError("default Landweber beta needs sigma_1 > 0");
      out.beta = 1.0 / (2.0 * sigma_1 * sigma_1);
    } else if (sigma_1 > 0.0 && !(*out.beta < 1.0 / (sigma_1 * sigma_1))) {
      throw DomainError("Landweber beta must be below 1 / sigma_1^2");
    }
    return out;
  }
  return spec;
}

double filter_value(const FilterSpec& spec, double t) {
  if (!(t >= 0.0)) throw DomainError("filter argument must be nonnegative");
  const double t2 = t * t;
  if (const auto* f = std::get_if<Tikhonov>(&spec)) {
    if (!(f->alpha > 0.0)) throw DomainError("regularization parameter must be positive");
    return t2 / (t2 + f->alpha);
  }
  if (const auto* f = std::get_if<SpectralCutoff>(&spec)) {
    if (!(f->alpha > 0.0)) throw DomainError("regularization parameter must be positive");
    return t2 >= f->alpha ? 1.0 : 0.0;
  }
  const auto& lw = std::get<Landweber>(spec);
  if (!lw.beta) throw DomainError("Landweber beta is unresolved");
  const double bt2 = *lw.beta * t2;
  if (bt2 > 1.0) throw DomainError("Landweber filter undefined for beta t^2 > 1");
  // 1 - (1 - beta t^2)^m without cancellation for small beta t^2.
  return -std::expm1(landweber_steps(lw.alpha) * std::log1p(-bt2));
}

// --- indicator -----------------------------------------------------------------

double indicator(const NoisySystem& sys, const FilterSpec& spec, const Eigen::VectorXcd& b) {
  const auto& s = sys.svd.singular_values;
  if (b.size() != sys.svd.u.rows()) throw DomainError("probe length does not match the system");
  double sum = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    if (s(j) == 0.0) continue;
    const double phi = filter_value(spec, s(j));
    if (phi == 0.0) continue;
    sum += phi * phi / s(j) * std::norm(sys.svd.u.col(j).dot(b));
  }
  return sum;
}

double indicator(const NoisySystem& sys, const FilterSpec& spec, Point z,
                 const BoundaryGrid& grid) {
  return indicator(sys, spec, greens::probe_vector(z, grid));
}

IndicatorField W_field(const NoisySystem& sys, const FilterSpec& spec, const SamplingGrid& grid,
                       const BoundaryGrid& boundary, Exec exec) {
  const double sigma_1 = sys.svd.singular_values.size() ? sys.svd.singular_values(0) : 0.0;
  const FilterSpec f = resolve(spec, sigma_1);
  const auto& idx = grid.valid_indices();
  const int count = static_cast<int>(idx.size());
  const int nx = grid.nx();
  std::vector<double> ind(count);
  if (exec == Exec::serial) {
    for (int p = 0; p < count; ++p) ind[p] = indicator(sys, f, grid.point(idx[p] % nx, idx[p] / nx), boundary);
  } else {
#pragma omp parallel for schedule(static)
    for (int p = 0; p < count; ++p) ind[p] = indicator(sys, f, grid.point(idx[p] % nx, idx[p] / nx), boundary);
  }

  double smallest_positive = std::numeric_limits<double>::infinity();
  int zeros = 0;
  for (double v : ind) {
    if (v > 0.0) smallest_positive = std::min(smallest_positive, v);
    else ++zeros;
  }
  IndicatorField field{grid,
                       std::vector<double>(grid.lattice_size(),
                                           std::numeric_limits<double>::quiet_NaN()),
                       "fm",
                       {}};
  if (count == 0) return field;
  if (!std::isfinite(smallest_positive)) smallest_positive = 1.0;  // indicator vanishes everywhere
  double wmax = 0.0;
  for (int p = 0; p < count; ++p) {
    const double w = 1.0 / (ind[p] > 0.0 ? ind[p] : smallest_positive);
    field.values[idx[p]] = w;
    wmax = std::max(wmax, w);
  }
  for (int p = 0; p < count; ++p) field.values[idx[p]] /= wmax;

  field.metadata = {{"filter", filter_name(f)}, {"zero_indicator_points", std::to_string(zeros)}};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", filter_alpha(f));
  field.metadata.emplace_back("alpha", buf);
  if (const auto* lw = std::get_if<Landweber>(&f)) {
    std::snprintf(buf, sizeof buf, "%.17g", *lw->beta);
    field.metadata.emplace_back("beta", buf);
  }
  return field;
}

}  // namespace reit::fm
