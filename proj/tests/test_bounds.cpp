#include "k3p/bounds.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "k3p/weil.hpp"

using namespace k3p;

namespace {

// prod over primitive m-th roots z of (1 - base * z * T), base arbitrary:
// the reversal of Phi_m with coefficient j scaled by base^j.
IPoly scaled_cyclo(uint32_t m, const BigInt& base) {
  const IPoly phi = cyclotomic(m);
  const size_t d = phi.size() - 1;
  IPoly out(d + 1);
  for (size_t j = 0; j <= d; ++j) out[j] = phi[d - j] * bigpow(base, static_cast<unsigned>(j));
  return out;
}

// A synthetic eigenvalue multiset kept as explicit factors so its m-th power
// can be expanded directly, independent of the companion-matrix route.
struct FactorList {
  uint32_t p = 0;
  std::vector<int64_t> rational;            // eigenvalue a (a = +/- p)
  std::vector<uint32_t> cyclo;              // primitive m-th roots scaled by p
  std::vector<int64_t> quad_traces;         // pairs with l + lbar = a, l*lbar = p^2
};

IPoly expand(const FactorList& f) {
  IPoly P{BigInt(1)};
  for (int64_t a : f.rational) P = ipoly_mul(P, {BigInt(1), BigInt(-a)});
  for (uint32_t m : f.cyclo) P = ipoly_mul(P, scaled_cyclo(m, BigInt(f.p)));
  for (int64_t a : f.quad_traces)
    P = ipoly_mul(P, {BigInt(1), BigInt(-a), bigpow(BigInt(f.p), 2)});
  return P;
}

// Direct expansion of the m-th power multiset, factor by factor.
IPoly expand_power(const FactorList& f, unsigned m) {
  IPoly P{BigInt(1)};
  for (int64_t a : f.rational) P = ipoly_mul(P, {BigInt(1), -bigpow(BigInt(a), m)});
  for (uint32_t m0 : f.cyclo) {
    const uint32_t g = std::gcd(m, m0);
    const uint32_t m1 = m0 / g;
    const unsigned mult = euler_phi(m0) / euler_phi(m1);
    const IPoly block = scaled_cyclo(m1, bigpow(BigInt(f.p), m));
    for (unsigned i = 0; i < mult; ++i) P = ipoly_mul(P, block);
  }
  for (int64_t a : f.quad_traces) {
    // s_j = l^j + lbar^j obeys s_j = a s_{j-1} - p^2 s_{j-2}.
    BigInt s_prev = 2, s_cur = a;
    for (unsigned j = 2; j <= m; ++j) {
      const BigInt nxt = BigInt(a) * s_cur - bigpow(BigInt(f.p), 2) * s_prev;
      s_prev = s_cur;
      s_cur = nxt;
    }
    P = ipoly_mul(P, {BigInt(1), -s_cur, bigpow(BigInt(f.p), 2 * m)});
  }
  return P;
}

}  // namespace

TEST_CASE("cyclotomic profile reads off constructed factor structure") {
  SUBCASE("all eigenvalues equal to q") {
    const auto prof = cyclotomic_profile(ipoly_pow({BigInt(1), BigInt(-5)}, 22), BigInt(5));
    REQUIRE(prof.factors.size() == 1);
    CHECK(prof.factors[0] == std::make_pair(1u, 22u));
    CHECK(prof.rho_upper == 22);
    CHECK(prof.remainder_degree == 0);
    CHECK(prof.m_lcm == 1);
  }
  SUBCASE("mixed orders with a non-Tate remainder") {
    // (1-3T)^2 (1+9T^2) (1-2T+9T^2)^9: the last factor has l/3 of irrational
    // angle, so exactly 2 + 2 eigenvalues are of Tate type.
    IPoly P = ipoly_pow({BigInt(1), BigInt(-3)}, 2);
    P = ipoly_mul(P, {BigInt(1), BigInt(0), BigInt(9)});
    P = ipoly_mul(P, ipoly_pow({BigInt(1), BigInt(-2), BigInt(9)}, 9));
    const auto prof = cyclotomic_profile(P, BigInt(3));
    REQUIRE(prof.factors.size() == 2);
    CHECK(prof.factors[0] == std::make_pair(1u, 2u));
    CHECK(prof.factors[1] == std::make_pair(4u, 1u));
    CHECK(prof.rho_upper == 4);
    CHECK(prof.remainder_degree == 18);
    CHECK(prof.m_lcm == 4);
  }
  SUBCASE("orders 1, 2, 8 combine into lcm 8") {
    IPoly P = ipoly_mul(IPoly{BigInt(1), BigInt(-7)}, IPoly{BigInt(1), BigInt(7)});
    P = ipoly_mul(P, scaled_cyclo(8, BigInt(7)));
    P = ipoly_mul(P, ipoly_pow({BigInt(1), BigInt(-3), BigInt(49)}, 8));
    const auto prof = cyclotomic_profile(P, BigInt(7));
    CHECK(prof.rho_upper == 6);
    CHECK(prof.m_lcm == 8);
    CHECK(prof.remainder_degree == 16);
  }
  SUBCASE("odd unit-circle count is a hard internal error") {
    // (1-5T)(1-T)^21: exactly one eigenvalue 5 is of Tate type.
    const IPoly P =
        ipoly_mul(IPoly{BigInt(1), BigInt(-5)}, ipoly_pow({BigInt(1), BigInt(-1)}, 21));
    CHECK_THROWS_AS(cyclotomic_profile(P, BigInt(5)), std::logic_error);
  }
  SUBCASE("base change to m_lcm collapses every order to 1") {
    IPoly P = ipoly_pow({BigInt(1), BigInt(-3)}, 2);
    P = ipoly_mul(P, {BigInt(1), BigInt(0), BigInt(9)});
    P = ipoly_mul(P, ipoly_pow({BigInt(1), BigInt(-2), BigInt(9)}, 9));
    const auto prof = cyclotomic_profile(P, BigInt(3));
    const IPoly Pm = power_char_poly(P, prof.m_lcm);
    const auto prof_m = cyclotomic_profile(Pm, bigpow(BigInt(3), prof.m_lcm));
    REQUIRE(prof_m.factors.size() == 1);
    CHECK(prof_m.factors[0] == std::make_pair(1u, 4u));
    CHECK(prof_m.rho_upper == prof.rho_upper);
    CHECK(prof_m.m_lcm == 1);
  }
  SUBCASE("input shape is validated") {
    CHECK_THROWS_AS(cyclotomic_profile({BigInt(1), BigInt(-5), BigInt(6)}, BigInt(5)),
                    std::invalid_argument);
  }
}

TEST_CASE("power char poly: hand examples and the identity case") {
  const IPoly P{BigInt(1), BigInt(-5), BigInt(6)};  // eigenvalues 2, 3
  CHECK(power_char_poly(P, 1) == P);
  CHECK(power_char_poly(P, 2) == IPoly{BigInt(1), BigInt(-13), BigInt(36)});
  CHECK(power_char_poly(P, 3) == IPoly{BigInt(1), BigInt(-35), BigInt(216)});
  CHECK_THROWS_AS(power_char_poly(P, 0), std::invalid_argument);
  CHECK_THROWS_AS(power_char_poly({BigInt(2), BigInt(1)}, 2), std::invalid_argument);
}

TEST_CASE("power char poly matches direct factor-by-factor expansion") {
  std::mt19937_64 rng(987654321);
  for (int sample = 0; sample < 12; ++sample) {
    FactorList f;
    f.p = std::vector<uint32_t>{2, 3, 5, 7}[rng() % 4];
    unsigned deg = 0;
    while (deg < 16) {
      switch (rng() % 3) {
        case 0:
          f.rational.push_back((rng() & 1u) ? int64_t(f.p) : -int64_t(f.p));
          deg += 1;
          break;
        case 1: {
          const uint32_t m0 = std::vector<uint32_t>{3, 4, 6, 8, 12}[rng() % 5];
          const unsigned phi = euler_phi(m0);
          if (deg + phi <= 22) {
            f.cyclo.push_back(m0);
            deg += phi;
          }
          break;
        }
        default: {
          const int64_t a =
              static_cast<int64_t>(rng() % (4 * f.p - 1)) - (2 * int64_t(f.p) - 1);
          f.quad_traces.push_back(a);
          deg += 2;
          break;
        }
      }
    }
    const IPoly P = expand(f);
    for (unsigned m : {2u, 3u, 4u, 6u}) {
      CAPTURE(sample);
      CAPTURE(m);
      const IPoly via_companion = power_char_poly(P, m);
      CHECK(via_companion == trimmed(expand_power(f, m)));
      // Third route: power sums of P_m are the m-strided power sums of P.
      const auto s_m = power_sums_from_coeffs(via_companion, 4);
      const auto s = power_sums_from_coeffs(P, 4 * m);
      for (unsigned j = 1; j <= 4; ++j) CHECK(s_m[j - 1] == s[m * j - 1]);
    }
  }
}

TEST_CASE("discriminant square class of the special value") {
  SUBCASE("full Tate rank leaves R = 1: class of -q") {
    const auto r64 = artin_tate_squareclass(ipoly_pow({BigInt(1), BigInt(-64)}, 22),
                                            BigInt(64), 22);
    CHECK(r64.delta == -1);  // -(2^6) is minus a square
    CHECK(r64.special == BigRat(1));
    const auto r32 = artin_tate_squareclass(ipoly_pow({BigInt(1), BigInt(-32)}, 22),
                                            BigInt(32), 22);
    CHECK(r32.delta == -2);  // -(2^5) = -2 * 4^2
  }
  SUBCASE("rank-20 toy with R = 1 - 2T + 25T^2") {
    const IPoly P = ipoly_mul(ipoly_pow({BigInt(1), BigInt(-5)}, 20),
                              IPoly{BigInt(1), BigInt(-2), BigInt(25)});
    const auto res = artin_tate_squareclass(P, BigInt(5), 20);
    CHECK(res.special == BigRat(8, 5));
    // (-1)^19 * 5 * 8/5 = -8, whose square class is -2
    CHECK(res.delta == -2);
    CHECK(res.remainder == IPoly{BigInt(1), BigInt(-2), BigInt(25)});
  }
  SUBCASE("signature sign flips with the parity of rho") {
    // same remainder, rho = 19: (+1) * 5 * 8/5 = 8 -> class 2
    const IPoly P = ipoly_mul(ipoly_pow({BigInt(1), BigInt(-5)}, 19),
                              IPoly{BigInt(1), BigInt(-2), BigInt(25)});
    CHECK(artin_tate_squareclass(P, BigInt(5), 19).delta == 2);
  }
  SUBCASE("claiming a multiplicity the polynomial lacks is an error") {
    const IPoly P = ipoly_mul(ipoly_pow({BigInt(1), BigInt(-5)}, 2),
                              IPoly{BigInt(1), BigInt(-2), BigInt(25)});
    CHECK_THROWS_AS(artin_tate_squareclass(P, BigInt(5), 3), std::runtime_error);
  }
  SUBCASE("an unremoved root at 1/q is detected") {
    const IPoly P = ipoly_mul(ipoly_pow({BigInt(1), BigInt(-5)}, 21),
                              IPoly{BigInt(1), BigInt(5)});
    CHECK_THROWS_AS(artin_tate_squareclass(P, BigInt(5), 20), std::runtime_error);
  }
}

TEST_CASE("newton polygon via lower hull, with ordinarity read off its start") {
  SUBCASE("hand examples") {
    const auto h1 = newton_polygon({BigInt(1), BigInt(-5), BigInt(6)}, 5).vertices;
    REQUIRE(h1.size() == 2);
    CHECK(h1[0] == std::make_pair(0u, int64_t{0}));
    CHECK(h1[1] == std::make_pair(2u, int64_t{0}));
    CHECK_FALSE(ordinarity_check({BigInt(1), BigInt(-5), BigInt(6)}, 5));

    const auto h2 = newton_polygon({BigInt(1), BigInt(-1), BigInt(25)}, 5).vertices;
    REQUIRE(h2.size() == 3);
    CHECK(h2[1] == std::make_pair(1u, int64_t{0}));
    CHECK(ordinarity_check({BigInt(1), BigInt(-1), BigInt(25)}, 5));
  }
  SUBCASE("all slopes 1: supersingular-type shape is not ordinary") {
    const auto h = newton_polygon(ipoly_pow({BigInt(1), BigInt(-2)}, 22), 2).vertices;
    REQUIRE(h.size() == 2);
    CHECK(h[0] == std::make_pair(0u, int64_t{0}));
    CHECK(h[1] == std::make_pair(22u, int64_t{22}));
    CHECK_FALSE(ordinarity_check(ipoly_pow({BigInt(1), BigInt(-2)}, 22), 2));
  }
  SUBCASE("zero coefficients contribute no points") {
    const auto h = newton_polygon({BigInt(1), BigInt(0), BigInt(0), BigInt(8)}, 2).vertices;
    REQUIRE(h.size() == 2);
    CHECK(h[1] == std::make_pair(3u, int64_t{3}));
  }
  SUBCASE("random polynomials against hull axioms") {
    std::mt19937_64 rng(13579);
    for (int trial = 0; trial < 200; ++trial) {
      const uint32_t p = std::vector<uint32_t>{2, 3, 5}[rng() % 3];
      IPoly c{BigInt(1)};
      const unsigned d = 2 + rng() % 16;
      for (unsigned i = 1; i <= d; ++i) {
        if (rng() % 5 == 0 && i != d) {
          c.push_back(BigInt(0));
        } else {
          const int64_t u = 1 + static_cast<int64_t>(rng() % 50);
          c.push_back(BigInt(u) * bigpow(BigInt(p), rng() % 8) *
                      ((rng() & 1u) ? 1 : -1));
        }
      }
      std::vector<std::pair<unsigned, int64_t>> pts;
      for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0)
          pts.emplace_back(static_cast<unsigned>(i),
                           static_cast<int64_t>(padic_valuation(c[i], BigInt(p))));
      const auto h = newton_polygon(c, p).vertices;
      CAPTURE(trial);
      REQUIRE(h.size() >= 2);
      CHECK(h.front() == pts.front());
      CHECK(h.back() == pts.back());
      // every vertex is an input point
      for (const auto& v : h)
        CHECK(std::find(pts.begin(), pts.end(), v) != pts.end());
      // slopes strictly increase
      for (size_t k = 2; k < h.size(); ++k) {
        const auto& a = h[k - 2];
        const auto& b = h[k - 1];
        const auto& cc = h[k];
        CHECK((b.second - a.second) * int64_t(cc.first - b.first) <
              (cc.second - b.second) * int64_t(b.first - a.first));
      }
      // every point lies on or above the hull
      for (const auto& pt : pts) {
        for (size_t k = 1; k < h.size(); ++k) {
          const auto& a = h[k - 1];
          const auto& b = h[k];
          if (pt.first < a.first || pt.first > b.first) continue;
          CHECK((pt.second - a.second) * int64_t(b.first - a.first) >=
                (b.second - a.second) * int64_t(pt.first - a.first));
        }
      }
    }
  }
}

TEST_CASE("verdict combination over primes") {
  auto ev = [](uint32_t p, std::vector<std::pair<unsigned, int64_t>> cands,
               bool ordinary = true) {
    PrimeEvidence e;
    e.p = p;
    for (const auto& [rho, delta] : cands) {
      CandidateEvidence c;
      c.rho_upper = rho;
      c.delta = delta;
      c.ordinary = ordinary;
      c.sign = 1;
      e.candidates.push_back(c);
    }
    return e;
  };

  SUBCASE("two primes at 2 with mismatched classes certify rank 1") {
    const auto v = combine_verdict(1, 1, {ev(7, {{2, 2}}), ev(11, {{2, 3}})});
    CHECK(v.rho_high == 1);
    CHECK(v.exact);
    CHECK_FALSE(v.inconsistent);
    CHECK(v.refinement.find("7") != std::string::npos);
    CHECK(v.refinement.find("11") != std::string::npos);
  }
  SUBCASE("degree-2 endomorphism drop: 4 and 4 with mismatch gives exact 2") {
    const auto v = combine_verdict(2, 2, {ev(7, {{4, -1}}), ev(11, {{4, 5}})});
    CHECK(v.rho_high == 2);
    CHECK(v.exact);
  }
  SUBCASE("a single prime leaves an open interval") {
    const auto v = combine_verdict(1, 1, {ev(7, {{2, 2}})});
    CHECK(v.rho_low == 1);
    CHECK(v.rho_high == 2);
    CHECK_FALSE(v.exact);
    CHECK(v.refinement.empty());
  }
  SUBCASE("equal classes never refine") {
    const auto v = combine_verdict(1, 1, {ev(7, {{2, 2}}), ev(11, {{2, 2}})});
    CHECK(v.rho_high == 2);
    CHECK_FALSE(v.exact);
  }
  SUBCASE("a prime with a weaker candidate cannot pin the bound") {
    // p = 7 still admits a rho-4 candidate, so rho_high = 2 via p = 11; but 7
    // is not pinned at 2 and the pair cannot refine.
    const auto v = combine_verdict(1, 1, {ev(7, {{4, 2}, {2, 2}}), ev(11, {{2, 3}})});
    CHECK(v.rho_high == 2);
    CHECK(v.refinement.empty());
  }
  SUBCASE("overlapping candidate classes block the refinement") {
    const auto v =
        combine_verdict(1, 1, {ev(7, {{2, 2}, {2, 3}}), ev(11, {{2, 3}, {2, 5}})});
    CHECK(v.rho_high == 2);
    CHECK(v.refinement.empty());
  }
  SUBCASE("disjoint multi-candidate classes do refine") {
    const auto v =
        combine_verdict(1, 1, {ev(7, {{2, 2}, {2, 3}}), ev(11, {{2, 5}, {2, -1}})});
    CHECK(v.rho_high == 1);
    CHECK(v.exact);
  }
  SUBCASE("the same prime listed twice is not a pair") {
    const auto v = combine_verdict(1, 1, {ev(7, {{2, 2}}), ev(7, {{2, 3}})});
    CHECK(v.rho_high == 2);
    CHECK(v.refinement.empty());
  }
  SUBCASE("lower bound above the evidence is reported, not silently clamped") {
    const auto v = combine_verdict(5, 1, {ev(7, {{2, 2}})});
    CHECK(v.inconsistent);
    CHECK_FALSE(v.exact);
    CHECK(!v.inconsistency.empty());
  }
  SUBCASE("no evidence keeps the trivial bound") {
    const auto v = combine_verdict(1, 1, {});
    CHECK(v.rho_high == 22);
    CHECK_FALSE(v.exact);
  }
  SUBCASE("assumption ledger reflects ordinarity") {
    const auto v1 = combine_verdict(1, 1, {ev(7, {{2, 2}})});
    bool known = false;
    for (const auto& a : v1.assumptions) known = known || a.find("ordinary") != std::string::npos;
    CHECK(known);
    const auto v2 = combine_verdict(1, 1, {ev(7, {{2, 2}}, false)});
    bool flagged = false;
    for (const auto& a : v2.assumptions)
      flagged = flagged || a.find("could not be verified") != std::string::npos;
    CHECK(flagged);
  }
  SUBCASE("monotone: extra evidence never worsens the bound") {
    std::mt19937_64 rng(24680);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<PrimeEvidence> base;
      const unsigned nprimes = 1 + rng() % 3;
      uint32_t p = 3;
      for (unsigned i = 0; i < nprimes; ++i) {
        p += 2 + 2 * (rng() % 3);
        std::vector<std::pair<unsigned, int64_t>> cands;
        const unsigned nc = 1 + rng() % 2;
        for (unsigned j = 0; j < nc; ++j)
          cands.emplace_back(2 * (1 + rng() % 4), static_cast<int64_t>(rng() % 7) - 3);
        for (auto& cd : cands)
          if (cd.second == 0) cd.second = 1;
        base.push_back(ev(p, cands));
      }
      const auto v0 = combine_verdict(1, 1, base);
      auto extended = base;
      extended.push_back(ev(101, {{2 * (1 + rng() % 4), 6}}));
      const auto v1 = combine_verdict(1, 1, extended);
      CAPTURE(trial);
      CHECK(v1.rho_high <= v0.rho_high);
    }
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(combine_verdict(0, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(combine_verdict(1, 0, {}), std::invalid_argument);
    PrimeEvidence empty;
    empty.p = 7;
    CHECK_THROWS_AS(combine_verdict(1, 1, {empty}), std::invalid_argument);
  }
}
