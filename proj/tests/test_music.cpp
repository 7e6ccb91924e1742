#include "robineit/forward_bie.hpp"
#include "robineit/forward_series.hpp"
#include "robineit/factorization.hpp"
#include "robineit/music.hpp"

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace reit;

namespace {

const std::vector<Point> kCenters{{-0.25, -0.25}, {0.25, 0.25}};

music::ResponseMatrix example_response(const std::vector<Point>& centers, double delta) {
  SmallDiscs d;
  d.epsilon = 0.01;
  for (Point c : centers) d.components.push_back({c});
  auto data = bie::assemble_born(d, RobinCoefficient::constant(1.0), FourierBasisSet::music(20),
                                 BoundaryGrid());
  data.values = fm::hadamard_noise(data.values, delta, 1);
  auto f = music::assemble_F(data);
  music::set_rank(f);
  return f;
}

}  // namespace

TEST_SUITE("music") {

TEST_CASE("synthetic F matches the direct product") {
  const auto f = music::synthetic_F(kCenters, {0.3, 0.7}, 8);
  const Eigen::MatrixXcd ref = oracle::utu({{-0.25, -0.25}, {0.25, 0.25}}, {0.3, 0.7}, 8);
  CHECK((f - ref).norm() < 1e-14 * ref.norm());
}

TEST_CASE("rank detection on exact data") {
  auto f = music::make_response(music::synthetic_F(kCenters, {1e-4, 1e-4}, 20));
  // For centres z and -z with equal weights the two nonzero singular values
  // split into even and odd monomials, so sigma_2 / sigma_1 = |z|^2.
  const auto& sv = f.svd.singular_values;
  CHECK(sv(1) / sv(0) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(sv(2) / sv(0) < 1e-14);
  for (double tau : {1.0001e-10, 1e-6, 1e-3, 0.1, 0.12}) CHECK(music::detect_rank(f, tau) == 2);
  CHECK(music::detect_rank(f, 0.13) == 1);
  auto wide = music::make_response(music::synthetic_F({{0.8, 0.0}, {-0.8, 0.0}}, {1.0, 1.0}, 20));
  for (double tau : {1.0001e-10, 0.3, 0.4999}) CHECK(music::detect_rank(wide, tau) == 2);
  CHECK_THROWS_AS(music::detect_rank(f, 0.0), DomainError);
  CHECK_THROWS_AS(music::detect_rank(f, 1.0), DomainError);
  CHECK(music::detect_rank(music::make_response(Eigen::MatrixXcd::Zero(4, 4))) == 0);
}

TEST_CASE("noise projection vanishes exactly at the centres") {
  auto f = music::make_response(music::synthetic_F(kCenters, {1e-4, 1e-4}, 20));
  CHECK_THROWS_AS(music::noise_projection(f, {0.0, 0.0}), DomainError);
  music::set_rank(f);
  for (Point c : kCenters) CHECK(std::sqrt(music::noise_projection(f, c)) < 1e-8);
  for (Point far : {Point{0.0, 0.6}, Point{-0.5, 0.1}, Point{0.0, 0.0}})
    CHECK(std::sqrt(music::noise_projection(f, far)) > 1e-3);
}

TEST_CASE("range test with three centres at random far points") {
  const std::vector<Point> c{{0.3, 0.1}, {-0.4, 0.35}, {0.05, -0.5}};
  auto f = music::make_response(music::synthetic_F(c, {2e-4, 1e-4, 3e-4}, 20));
  music::set_rank(f);
  CHECK(f.rank == 3);
  for (Point p : c) CHECK(std::sqrt(music::noise_projection(f, p)) <= 1e-8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  int tested = 0;
  while (tested < 200) {
    const Point x{u(rng), u(rng)};
    double d = 1e9;
    for (Point p : c) d = std::min(d, distance(x, p));
    if (x.norm() >= 0.9 || d < 0.1) continue;
    CHECK(std::sqrt(music::noise_projection(f, x)) >= 1e-3);
    ++tested;
  }
}

TEST_CASE("Vandermonde factor has full column rank") {
  Eigen::MatrixXcd u(21, 2);
  for (int n = 0; n <= 20; ++n) {
    u(n, 0) = music::probe_phi(kCenters[0], 20)(n);
    u(n, 1) = music::probe_phi(kCenters[1], 20)(n);
  }
  CHECK(svd(u).singular_values(1) > 0.1);
}

TEST_CASE("probe vector is the harmonic lifting of the monomials") {
  const auto phi = music::probe_phi({0.3, -0.2}, 4);
  for (int n = 0; n <= 4; ++n) CHECK(std::abs(phi(n) - std::pow(cplx(0.3, -0.2), n)) < 1e-15);
}

TEST_CASE("response matrix from data is symmetric") {
  const auto f = example_response(kCenters, 0.0);
  CHECK((f.f - f.f.transpose()).norm() <= 1e-8 * f.f.norm());
  CHECK(f.rank == 2);
}

TEST_CASE("F needs music-basis data") {
  const auto nodal = series::assemble_series_operator(BoundaryGrid(16), series::SeriesCoefficients(0.5, 1.0, 4));
  CHECK_THROWS_AS(music::assemble_F(nodal), DomainError);
}

TEST_CASE("W_MUSIC peaks near the centres under 1% noise") {
  const auto f = example_response(kCenters, 0.01);
  CHECK(f.rank == 2);
  const auto field = music::W_music(f, SamplingGrid());
  const auto peaks = extract_peaks(field);
  REQUIRE(peaks.size() == 2);
  for (const auto& p : peaks) {
    double best = 1e9;
    for (Point c : kCenters) best = std::min(best, distance(p.location, c));
    CHECK(best < 0.05);
  }
  CHECK(peaks[0].value >= peaks[1].value);
}

TEST_CASE("serial and parallel W_MUSIC agree bit for bit") {
  const auto f = example_response(kCenters, 0.01);
  const SamplingGrid grid(-0.5, 0.5, -0.5, 0.5);
  const auto a = music::W_music(f, grid, Exec::serial);
  const auto b = music::W_music(f, grid, Exec::parallel);
  REQUIRE(a.values.size() == b.values.size());
  for (size_t i = 0; i < a.values.size(); ++i)
    CHECK((a.values[i] == b.values[i] || (std::isnan(a.values[i]) && std::isnan(b.values[i]))));
}

TEST_CASE("peak extraction with a requested count") {
  const SamplingGrid grid(-0.5, 0.5, -0.5, 0.5, 0.1);
  IndicatorField field{grid, std::vector<double>(grid.lattice_size(), 1.0), "test", {}};
  field.values[grid.flat(2, 2)] = 5.0;
  field.values[grid.flat(7, 7)] = 4.0;
  field.values[grid.flat(5, 2)] = 3.0;
  const auto two = extract_peaks(field, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].i == 2);
  CHECK(two[1].i == 7);
  const auto all = extract_peaks(field);
  CHECK(all.empty());
  field.values.assign(field.values.size(), 0.01);
  field.values[grid.flat(2, 2)] = 5.0;
  CHECK(extract_peaks(field).size() == 1);
}

TEST_CASE("indicator field statistics skip masked points") {
  const SamplingGrid grid;
  IndicatorField field{grid, std::vector<double>(grid.lattice_size(), std::numeric_limits<double>::quiet_NaN()), "t", {}};
  for (int f : grid.valid_indices()) field.values[f] = 2.0;
  CHECK(field.max() == 2.0);
  CHECK(field.median() == 2.0);
}

}
