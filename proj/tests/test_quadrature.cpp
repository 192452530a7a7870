#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spinest/quadrature.hpp"

using spinest::GaussLegendre;

TEST_CASE("weights sum to 2") {
  for (std::size_t n : {1u, 2u, 5u, 17u, 64u, 128u}) {
    GaussLegendre gl(n);
    double sum = 0.0;
    for (double w : gl.weights()) sum += w;
    CHECK(sum == Catch::Approx(2.0).margin(1e-13));
  }
}

TEST_CASE("exact for polynomials up to degree 2n-1") {
  GaussLegendre gl(8);
  for (int d = 0; d <= 15; ++d) {
    double expected = (d % 2 == 0) ? 2.0 / (d + 1.0) : 0.0;
    double got = gl.integrate([d](double x) { return std::pow(x, d); });
    CHECK(got == Catch::Approx(expected).margin(1e-13));
  }
}

TEST_CASE("converges on a smooth non-polynomial") {
  GaussLegendre gl(32);
  double got = gl.integrate([](double x) { return std::exp(x); });
  CHECK(got == Catch::Approx(std::exp(1.0) - std::exp(-1.0)).margin(1e-13));
}

TEST_CASE("nodes are symmetric and sorted") {
  GaussLegendre gl(11);
  for (std::size_t i = 0; i + 1 < gl.size(); ++i) {
    CHECK(gl.nodes()[i] < gl.nodes()[i + 1]);
  }
  for (std::size_t i = 0; i < gl.size(); ++i) {
    CHECK(gl.nodes()[i] == Catch::Approx(-gl.nodes()[gl.size() - 1 - i]).margin(1e-14));
  }
}

TEST_CASE("rejects zero nodes") {
  CHECK_THROWS_AS(GaussLegendre(0), std::invalid_argument);
}
