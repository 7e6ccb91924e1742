#include "robineit/core.hpp"
#include "robineit/forward_series.hpp"

#include <doctest.h>

#include <cmath>

using namespace reit;

TEST_SUITE("core") {

TEST_CASE("boundary grid nodes and weights") {
  const BoundaryGrid g(64);
  CHECK(g.size() == 64);
  CHECK(g.angle(16) == doctest::Approx(kPi / 2));
  CHECK(g.weight() == doctest::Approx(kTwoPi / 64));
  CHECK(g.node(32).x == doctest::Approx(-1.0));
  CHECK_THROWS_AS(BoundaryGrid(0), DomainError);
}

TEST_CASE("sampling grid lattice and mask") {
  const SamplingGrid g;
  CHECK(g.nx() == 100);
  CHECK(g.ny() == 100);
  CHECK(g.xs()[38] == doctest::Approx(-0.2324));
  CHECK(g.xs()[62] == doctest::Approx(0.2524));
  for (const Point& p : g.points()) CHECK(p.norm() < 1.0 - g.step());
  CHECK_FALSE(g.valid(0, 0));
  CHECK(g.valid(50, 50));
  CHECK_THROWS_AS(SamplingGrid(-1, 1, -1, 1, 0.0), DomainError);
  CHECK_THROWS_AS(SamplingGrid(-2, 1, -1, 1), DomainError);
}

TEST_CASE("geometry validation") {
  CHECK_NOTHROW(validate(ConcentricDisc{0.5}));
  CHECK_THROWS_AS(validate(ConcentricDisc{1.0}), DomainError);
  CHECK_THROWS_AS(validate(ConcentricDisc{0.0}), DomainError);
  CHECK_NOTHROW(validate(StarShaped::cosine(0.25, 0.15, 3)));
  CHECK_THROWS_AS(validate(StarShaped::cosine(0.9, 0.2, 3)), DomainError);

  SmallDiscs ok{{{{-0.25, -0.25}}, {{0.25, 0.25}}}, 0.01};
  CHECK_NOTHROW(validate(ok));
  CHECK(min_center_distance(ok) == doctest::Approx(std::sqrt(0.5)));

  SmallDiscs touching{{{{0.995, 0.0}}}, 0.01};
  CHECK_THROWS_AS(validate(touching), DomainError);
  SmallDiscs same{{{{0.1, 0.1}}, {{0.1, 0.1}}}, 0.01};
  CHECK_THROWS_AS(validate(same), DomainError);
  SmallDiscs overlap{{{{0.0, 0.0}}, {{0.015, 0.0}}}, 0.01};
  CHECK_THROWS_AS(validate(overlap), DomainError);
}

TEST_CASE("star curve normal is outward and unit") {
  const InclusionGeometry acorn = StarShaped::cosine(0.25, 0.15, 3);
  for (double t : {0.0, 0.4, 1.7, 3.0, 5.5}) {
    const auto c = boundary_curve(acorn, t);
    CHECK(c.normal.norm() == doctest::Approx(1.0));
    CHECK(c.normal.x * c.point.x + c.normal.y * c.point.y > 0.0);
  }
  const auto c = boundary_curve(ConcentricDisc{0.5}, 1.0);
  CHECK(c.speed == doctest::Approx(0.5));
  CHECK(c.normal.x == doctest::Approx(std::cos(1.0)));
}

TEST_CASE("transmission coefficient variants") {
  const auto g = RobinCoefficient::inverse_exp_cos();
  CHECK(g(0.0) == doctest::Approx(1.0 / (4.0 + std::exp(1.0))));
  CHECK(g.min() == doctest::Approx(1.0 / (4.0 + std::exp(1.0))).epsilon(1e-6));
  CHECK(g.max() == doctest::Approx(1.0 / (4.0 + std::exp(-1.0))).epsilon(1e-6));
  CHECK_FALSE(g.is_constant());

  const auto c = RobinCoefficient::constant(2.0);
  CHECK(c.is_constant());
  CHECK(*c.constant_value() == 2.0);

  const auto t = RobinCoefficient::tabulated({1.0, 3.0});
  CHECK(t(0.0) == doctest::Approx(1.0));
  CHECK(t(kPi / 2) == doctest::Approx(2.0));
  CHECK(t(kPi) == doctest::Approx(3.0));
  CHECK(t(-kPi / 2) == doctest::Approx(2.0));

  CHECK(g.rotated(0.7)(1.0) == doctest::Approx(g(0.3)));
}

TEST_CASE("Fourier basis sets") {
  const auto m = FourierBasisSet::music(20);
  CHECK(m.size() == 21);
  CHECK(m.index(0) == 0);
  const auto s = FourierBasisSet::symmetric(3);
  CHECK(s.size() == 7);
  CHECK(s.index(0) == -3);
  const auto e = s.samples(BoundaryGrid(8));
  CHECK(std::abs(e(0, 1) - std::polar(1.0, -3 * kTwoPi / 8)) < 1e-15);
}

TEST_CASE("harmonic lifting") {
  CHECK(std::abs(harmonic_lifting({0.0, 0.0}, 0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(harmonic_lifting({0.0, 0.0}, 2)) < 1e-15);
  const cplx v = harmonic_lifting({0.3, 0.4}, 2);
  CHECK(std::abs(v - std::pow(cplx(0.3, 0.4), 2)) < 1e-14);
  const cplx w = harmonic_lifting({0.3, 0.4}, -2);
  CHECK(std::abs(w - std::pow(cplx(0.3, -0.4), 2)) < 1e-14);
  CHECK_THROWS_AS(harmonic_lifting({1.0, 0.0}, 1), DomainError);
}

TEST_CASE("nodal and basis layouts are inverse on band-limited data") {
  const BoundaryGrid grid(32);
  const auto nodal = series::assemble_series_operator(grid, series::SeriesCoefficients(0.5, 1.0, 10));
  const auto basis = FourierBasisSet::symmetric(15);
  const auto data = to_basis(nodal, basis);
  CHECK(data.layout == CurrentGapMatrix::Layout::basis_by_node);
  const auto back = to_nodal(data);
  CHECK((back.values - nodal.values).norm() < 1e-14 * nodal.values.norm());
  CHECK_THROWS_AS(to_nodal(to_basis(nodal, FourierBasisSet::symmetric(16))), DomainError);
  CHECK_THROWS_AS(to_nodal(nodal), DomainError);
}

TEST_CASE("non-finite data is reported") {
  auto a = series::assemble_series_operator(BoundaryGrid(8), series::SeriesCoefficients(0.5, 1.0, 2));
  CHECK_NOTHROW(a.check_finite());
  a.values(0, 0) = std::nan("");
  CHECK_THROWS_AS(a.check_finite(), SolverError);
}

}
