#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spinest/bloch.hpp"

using namespace spinest;

namespace {
const BlochVector zhat{0, 0, 1};
const BlochVector xhat{1, 0, 0};
}  // namespace

TEST_CASE("pure-state sampling is uniform on the sphere") {
  RngStream rng = derive_substream(42, 0);
  const long n = 1'000'000;
  double sum_z = 0.0, sum_z2 = 0.0;
  for (long i = 0; i < n; ++i) {
    BlochVector v = sample_pure_state(rng);
    REQUIRE(std::abs(v.norm() - 1.0) < 1e-12);
    sum_z += v.z;
    sum_z2 += v.z * v.z;
  }
  // var(z) = 1/3, var(z^2) = 4/45
  CHECK(std::abs(sum_z / n) < 3.0 * (1.0 / std::sqrt(3.0)) / 1000.0);
  CHECK(std::abs(sum_z2 / n - 1.0 / 3.0) <
        3.0 * std::sqrt(4.0 / 45.0) / 1000.0);
}

TEST_CASE("sampling is deterministic per substream") {
  RngStream r1 = derive_substream(7, 3);
  RngStream r2 = derive_substream(7, 3);
  BlochVector a = sample_pure_state(r1);
  BlochVector b = sample_pure_state(r2);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.z == b.z);
}

TEST_CASE("expectation values") {
  CHECK(expectation(zhat, zhat) == 1.0);
  CHECK(expectation(zhat, xhat) == 0.0);
  double th = M_PI / 3.0;
  BlochVector tilted{std::sin(th), 0, std::cos(th)};
  CHECK(expectation(zhat, tilted) == Catch::Approx(0.5).margin(1e-15));
  CHECK_THROWS_AS(expectation({0, 0, 2}, zhat), std::invalid_argument);
}

TEST_CASE("expectation is odd in the state") {
  RngStream rng = derive_substream(9, 0);
  for (int i = 0; i < 100; ++i) {
    BlochVector a = sample_pure_state(rng);
    BlochVector r = sample_pure_state(rng);
    CHECK(expectation(a, r) + expectation(a, -r) == Catch::Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("angle between directions") {
  CHECK(angle_between(zhat, zhat) == Catch::Approx(0.0).margin(1e-12));
  CHECK(angle_between(zhat, xhat) == Catch::Approx(M_PI / 2).margin(1e-12));
  double eta = std::asin(2.0 / 3.0);
  BlochVector b{std::sin(eta), 0, std::cos(eta)};
  CHECK(angle_between(zhat, b) == Catch::Approx(eta).margin(1e-12));
  CHECK_THROWS_AS(angle_between(zhat, {0, 0, 0.5}), std::invalid_argument);
}

TEST_CASE("sphere averages of monomials") {
  SphereAverageSpec spec{64};
  CHECK(average_over_sphere([](double) { return 1.0; }, spec) ==
        Catch::Approx(1.0).margin(1e-14));
  CHECK(average_over_sphere([](double u) { return u; }, spec) ==
        Catch::Approx(0.0).margin(1e-14));
  CHECK(average_over_sphere([](double u) { return u * u; }, spec) ==
        Catch::Approx(1.0 / 3.0).margin(1e-14));
  // exact up to quadrature degree: odd -> 0, even n -> 1/(n+1)
  for (int n = 0; n <= 20; ++n) {
    double expected = (n % 2 == 0) ? 1.0 / (n + 1.0) : 0.0;
    double got = average_over_sphere(
        [n](double u) { return std::pow(u, n); }, spec);
    CHECK(got == Catch::Approx(expected).margin(1e-13));
  }
}

TEST_CASE("trace distance") {
  CHECK(trace_distance(zhat, zhat) == 0.0);
  CHECK(trace_distance(zhat, -zhat) == 2.0);
  CHECK(trace_distance(zhat, xhat) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
}

TEST_CASE("trace distance is a metric on random triples") {
  RngStream rng = derive_substream(11, 0);
  for (int i = 0; i < 200; ++i) {
    BlochVector a = sample_pure_state(rng);
    BlochVector b = sample_pure_state(rng);
    BlochVector c = sample_pure_state(rng);
    CHECK(trace_distance(a, b) == trace_distance(b, a));
    CHECK(trace_distance(a, c) <=
          trace_distance(a, b) + trace_distance(b, c) + 1e-12);
  }
}
