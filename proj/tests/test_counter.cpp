#include "doctest.h"

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "k3p/counter.hpp"
#include "naive_count.hpp"

using namespace k3p;
using k3p_test::naive_projective_count;

namespace {

const char* kFermatText =
    "4 0 0 0 : 1\n0 4 0 0 : 1\n0 0 4 0 : 1\n0 0 0 4 : 1\n";

QuarticSurface random_surface(std::mt19937& rng, int min_terms, int max_terms) {
  std::uniform_int_distribution<int> nterms(min_terms, max_terms);
  std::uniform_int_distribution<int> idx(0, kQuarticMonomialCount - 1);
  std::uniform_int_distribution<int> coeff(-9, 9);
  while (true) {
    QuarticSurface s;
    int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) s.coeffs[idx(rng)] = coeff(rng);
    bool any = false;
    for (const auto& c : s.coeffs) any = any || c != 0;
    if (!any) continue;
    return parse_surface(print_surface(s));
  }
}

}  // namespace

TEST_CASE("Fermat quartic mod 2 lies on a plane: 7 points") {
  // x^4+y^4+z^4+w^4 = (x+y+z+w)^4 in characteristic 2, so the zero set is
  // the plane x+y+z+w = 0 with #P^2(F_2) = 7 points.
  SurfaceModP s = reduce_mod_p(parse_surface(kFermatText), 2);
  CHECK(count_points(s, 1) == 7);
  CHECK(naive_projective_count(s, 1) == 7);
}

TEST_CASE("degenerate quartic x^4 counts the plane x = 0") {
  QuarticSurface s = parse_surface("4 0 0 0 : 1\n");
  for (auto [p, n] : {std::pair<uint32_t, uint32_t>{3, 1}, {5, 1}, {2, 3}, {7, 2}}) {
    SurfaceModP sp = reduce_mod_p(s, p);
    uint64_t q = 1;
    for (uint32_t i = 0; i < n; ++i) q *= p;
    CHECK(count_points(sp, n) == q * q + q + 1);
  }
}

TEST_CASE("Fermat quartic mod 5 has no F_5 points") {
  // x^4 is 0 or 1 mod 5, so the sum of four fourth powers is the number of
  // nonzero coordinates mod 5, which vanishes only at the origin.
  SurfaceModP s = reduce_mod_p(parse_surface(kFermatText), 5);
  CHECK(naive_projective_count(s, 1) == 0);
  CHECK(count_points(s, 1) == 0);
  CHECK(lefschetz_trace(5, 1, 0) == -26);
}

TEST_CASE("optimized engine matches the naive oracle on a random corpus") {
  std::mt19937 rng(160914);
  std::vector<std::pair<uint32_t, uint32_t>> cases = {
      {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6},
      {3, 1}, {3, 2}, {3, 3}, {3, 4},
      {5, 1}, {5, 2}, {7, 1}, {7, 2}, {13, 1}, {61, 1}};
  for (int trial = 0; trial < 8; ++trial) {
    QuarticSurface s = random_surface(rng, 4, 20);
    for (auto [p, n] : cases) {
      SurfaceModP sp;
      try {
        sp = reduce_mod_p(s, p);
      } catch (const std::logic_error&) {
        continue;  // surface vanished mod p (possible only before normalization)
      }
      uint64_t naive = naive_projective_count(sp, n);
      CAPTURE(p);
      CAPTURE(n);
      CAPTURE(trial);
      REQUIRE(count_points(sp, n) == naive);
      CountOptions scan;
      scan.force_scan = true;
      REQUIRE(count_points(sp, n, scan) == naive);
    }
  }
}

TEST_CASE("dense and sparse extremes agree with the oracle") {
  // all 35 coefficients nonzero, and a single off-diagonal monomial
  QuarticSurface dense;
  for (int i = 0; i < 35; ++i) dense.coeffs[i] = (i % 7) + 1;
  dense = parse_surface(print_surface(dense));
  QuarticSurface sparse = parse_surface("1 1 1 1 : 1\n");
  for (const QuarticSurface& s : {dense, sparse}) {
    for (auto [p, n] : {std::pair<uint32_t, uint32_t>{2, 6}, {3, 4}, {5, 2}}) {
      SurfaceModP sp = reduce_mod_p(s, p);
      REQUIRE(count_points(sp, n) == naive_projective_count(sp, n));
    }
  }
}

TEST_CASE("worker count does not change the result") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    QuarticSurface s = random_surface(rng, 6, 18);
    for (auto [p, n] : {std::pair<uint32_t, uint32_t>{3, 4}, {2, 6}, {5, 2}}) {
      SurfaceModP sp = reduce_mod_p(s, p);
      CountOptions one, three;
      one.workers = 1;
      three.workers = 3;
      uint64_t r1 = count_points(sp, n, one);
      uint64_t r3 = count_points(sp, n, three);
      CHECK(r1 == r3);
    }
  }
}

TEST_CASE("the four charts together scan exactly |P^3(F_q)| points") {
  std::mt19937 rng(8);
  QuarticSurface s = random_surface(rng, 10, 20);
  for (auto [p, n] : {std::pair<uint32_t, uint32_t>{2, 1}, {2, 5}, {3, 3}, {5, 2}, {7, 1}, {13, 1}}) {
    SurfaceModP sp = reduce_mod_p(s, p);
    uint64_t q = 1;
    for (uint32_t i = 0; i < n; ++i) q *= p;
    for (bool force : {false, true}) {
      uint64_t scanned = 0;
      CountOptions opt;
      opt.force_scan = force;
      opt.scanned = &scanned;
      count_points(sp, n, opt);
      CHECK(scanned == q * q * q + q * q + q + 1);
    }
  }
}

TEST_CASE("univariate root counting matches a direct scan") {
  std::mt19937 rng(777);
  for (auto [p, n] : {std::pair<uint32_t, uint32_t>{2, 6}, {2, 7}, {3, 4}, {5, 3}, {67, 1}, {127, 1}}) {
    FieldTable F(p, n);
    for (int trial = 0; trial < 60; ++trial) {
      std::array<GF, 5> c;
      for (auto& x : c) x = rng() % F.q();
      uint32_t fast = univariate_root_count(F, c, false);
      uint32_t slow = 0;
      for (GF w = 0; w < F.q(); ++w) {
        GF acc = 0;
        for (int i = 4; i >= 0; --i) acc = F.add(F.mul(acc, w), c[i]);
        if (acc == 0) ++slow;
      }
      CAPTURE(p);
      CAPTURE(n);
      REQUIRE(fast == slow);
    }
    // edge cases: zero polynomial and nonzero constants
    std::array<GF, 5> zero{};
    CHECK(univariate_root_count(F, zero) == F.q());
    std::array<GF, 5> cst{};
    cst[0] = 1;
    CHECK(univariate_root_count(F, cst) == 0);
  }
}

TEST_CASE("repeated roots are counted once by the fast path") {
  FieldTable F(5, 3);  // q = 125 >= 64 engages the gcd path
  // (T - 2)^2 (T - 3) = T^3 - 7T^2 + 16T - 12
  auto embed = [&](int64_t v) { return static_cast<GF>(((v % 5) + 5) % 5); };
  std::array<GF, 5> c = {embed(-12), embed(16), embed(-7), 1, 0};
  CHECK(univariate_root_count(F, c) == 2);  // distinct roots: 2 and 3
}

TEST_CASE("traces follow the Lefschetz formula and the Weil bound") {
  CHECK(lefschetz_trace(2, 1, 7) == 2);
  CHECK(lefschetz_trace(5, 2, 1000) == 1000 - 1 - 625);
  CHECK_THROWS_AS(lefschetz_trace(3, 1, 200), std::runtime_error);  // t = 190 > 66
  CHECK(lefschetz_trace(2, 1, 0) == -5);  // -5 is within the bound 44
}

TEST_CASE("fill_traces computes all entries") {
  PointCountRecord rec;
  rec.p = 2;
  rec.entries = {{1, 7, 0}, {2, 27, 0}};
  fill_traces(rec);
  CHECK(rec.entries[0].trace == 2);
  CHECK(rec.entries[1].trace == 27 - 1 - 16);
}

TEST_CASE("count cache stores and recalls by surface hash, p, n") {
  std::string dir = (std::filesystem::temp_directory_path() / "k3p_cache_test").string();
  std::filesystem::remove_all(dir);
  {
    CountCache cache(dir);
    CHECK_FALSE(cache.lookup("abc123", 5, 1).has_value());
    CHECK(cache.misses() == 1);
    cache.store("abc123", 5, 1, 1234);
    cache.store("abc123", 5, 2, 99999);
    auto hit = cache.lookup("abc123", 5, 1);
    REQUIRE(hit.has_value());
    CHECK(*hit == 1234);
    CHECK(cache.hits() == 1);
  }
  {
    CountCache reopened(dir);  // persisted across instances
    auto hit = reopened.lookup("abc123", 5, 2);
    REQUIRE(hit.has_value());
    CHECK(*hit == 99999);
    CHECK_FALSE(reopened.lookup("abc123", 7, 1).has_value());
    CHECK_FALSE(reopened.lookup("otherhash", 5, 1).has_value());
  }
  {
    // corrupted sidecars are tolerated and rewritten
    std::ofstream bad(dir + "/deadbeef_p3.json");
    bad << "{not json";
    bad.close();
    CountCache cache(dir);
    CHECK_FALSE(cache.lookup("deadbeef", 3, 1).has_value());
    cache.store("deadbeef", 3, 1, 42);
    CHECK(cache.lookup("deadbeef", 3, 1).value() == 42);
  }
  std::filesystem::remove_all(dir);
  CountCache disabled("");
  CHECK_FALSE(disabled.enabled());
  CHECK_FALSE(disabled.lookup("abc123", 5, 1).has_value());
}
