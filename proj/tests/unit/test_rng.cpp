#include <set>

#include "doctest.h"
#include "vnd/rng.hpp"

using namespace vnd;

TEST_CASE("same seed reproduces the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(42), d(43);
  bool differ = false;
  for (int i = 0; i < 10; ++i) differ = differ || c.uniform() != d.uniform();
  CHECK(differ);
}

TEST_CASE("uniform stays in [0, 1) and fills the interval") {
  Rng rng(1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("normal has roughly zero mean and unit variance") {
  Rng rng(2);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.05);
}

TEST_CASE("unit vectors and unimodular samples have modulus one") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    CHECK(std::abs(rng.unit_vector(5).norm() - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(rng.unimodular()) - 1.0) < 1e-14);
  }
}

TEST_CASE("derive_seed separates streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 100; ++s)
    for (std::uint64_t i = 0; i < 10; ++i) seen.insert(derive_seed(s, i));
  CHECK(seen.size() == 1000);
}
