#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <string_view>

#include "aslam/rng.hpp"

using namespace aslam;

TEST(Rng, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ULL, 1ULL, 42ULL})
    for (std::uint64_t trial = 0; trial < 200; ++trial)
      for (std::uint64_t s = 1; s <= 8; ++s) seen.insert(derive_seed(master, trial, static_cast<Stream>(s)));
  EXPECT_EQ(seen.size(), 3u * 200u * 8u);
  EXPECT_EQ(derive_seed(5, 6, Stream::range), derive_seed(5, 6, Stream::range));
}

TEST(Rng, UniformAndNormalMoments) {
  RandomStream r(derive_seed(3, 0, Stream::policy));
  const int n = 200000;
  double su = 0, sz = 0, szz = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sz += z;
    szz += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sz / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(szz / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(Rng, StreamsReplay) {
  RandomStream a(77), b(77);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Fnv1a, KnownVectors) {
  Fnv1a empty;
  EXPECT_EQ(empty.digest(), 0xcbf29ce484222325ULL);
  Fnv1a h;
  h.update("a", 1);
  EXPECT_EQ(h.digest(), 0xaf63dc4c8601ec8cULL);
  Fnv1a f;
  constexpr std::string_view foobar = "foobar";
  f.update(foobar.data(), foobar.size());
  EXPECT_EQ(f.digest(), 0x85944171f73967e8ULL);
}
