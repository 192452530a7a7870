#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "spinest/rng.hpp"

using namespace spinest;

TEST_CASE("substreams are reproducible") {
  RngStream a = derive_substream(123, 456);
  RngStream b = derive_substream(123, 456);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("adjacent substreams differ immediately") {
  RngStream a = derive_substream(123, 0);
  RngStream b = derive_substream(123, 1);
  CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("no first-draw collisions over many substreams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100'000; ++i) {
    seen.insert(derive_substream(99, i).next_u64());
  }
  CHECK(seen.size() == 100'000);
}

TEST_CASE("uniform stays in [0,1) and is roughly uniform") {
  RngStream r = derive_substream(7, 7);
  double sum = 0.0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == Catch::Approx(0.5).margin(0.01));
}
