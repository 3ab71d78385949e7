#include "k3p/zlattice.hpp"

#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "k3p/numth.hpp"
#include "k3p/ratmat.hpp"

using namespace k3p;

namespace {

ZMat zfrom_ints(unsigned r, unsigned c, const std::vector<long>& vals) {
  ZMat m(r, c);
  for (unsigned i = 0; i < r; ++i)
    for (unsigned j = 0; j < c; ++j) m.at(i, j) = vals[i * c + j];
  return m;
}

ZMat random_zmat(std::mt19937_64& rng, unsigned r, unsigned c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  ZMat m(r, c);
  for (auto& v : m.a) v = dist(rng);
  return m;
}

bool all_zero(const ZMat& m) {
  for (const auto& v : m.a)
    if (v != 0) return false;
  return true;
}

QMat to_qmat(const ZMat& z) {
  QMat q(z.rows, z.cols);
  for (size_t i = 0; i < z.a.size(); ++i) q.a[i] = BigRat(z.a[i]);
  return q;
}

std::vector<BigInt> column_of(const ZMat& m, unsigned j) {
  std::vector<BigInt> v(m.rows);
  for (unsigned i = 0; i < m.rows; ++i) v[i] = m.at(i, j);
  return v;
}

}  // namespace

TEST_CASE("saturated kernel spans the null space with primitive columns") {
  SUBCASE("single relation with a common factor") {
    // Kernel of (2 4) is spanned by (2, -1), not (4, -2).
    const ZMat ker = saturated_kernel(zfrom_ints(1, 2, {2, 4}));
    REQUIRE(ker.cols == 1);
    CHECK(all_zero(zmat_mul(zfrom_ints(1, 2, {2, 4}), ker)));
    BigInt g = gcd(ker.at(0, 0), ker.at(1, 0));
    CHECK((g == 1 || g == -1));
  }

  SUBCASE("rank-deficient square matrix") {
    const ZMat a = zfrom_ints(2, 2, {1, 2, 2, 4});
    const ZMat ker = saturated_kernel(a);
    REQUIRE(ker.cols == 1);
    CHECK(all_zero(zmat_mul(a, ker)));
  }

  SUBCASE("full-rank matrix has trivial kernel") {
    CHECK(saturated_kernel(zfrom_ints(2, 2, {1, 0, 0, 1})).cols == 0);
  }

  SUBCASE("random matrices: dimension, exactness, saturation") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 30; ++trial) {
      const ZMat a = random_zmat(rng, 3, 6, -4, 4);
      const ZMat ker = saturated_kernel(a);
      CHECK(all_zero(zmat_mul(a, ker)));
      CHECK(ker.cols == 6 - qmat_rank(to_qmat(a)));
      CHECK(qmat_rank(to_qmat(ker)) == ker.cols);
      // Saturation: any rational kernel vector scaled primitive must already
      // lie in the integer span of the computed basis.
      const QMat qker = qmat_kernel(to_qmat(a));
      for (unsigned j = 0; j < qker.cols; ++j) {
        BigInt denom_lcm = 1;
        for (unsigned i = 0; i < qker.rows; ++i) {
          const BigInt d = denominator(qker.at(i, j));
          denom_lcm = denom_lcm / gcd(denom_lcm, d) * d;
        }
        std::vector<BigInt> w(qker.rows);
        BigInt content = 0;
        for (unsigned i = 0; i < qker.rows; ++i) {
          w[i] = numerator(qker.at(i, j) * BigRat(denom_lcm));
          content = gcd(content, w[i]);
        }
        if (content != 0)
          for (auto& x : w) x /= content;
        CHECK(lattice_contains(ker, 0, w));
      }
    }
  }
}

TEST_CASE("lattice membership handles pure spans and moduli") {
  const ZMat a = zfrom_ints(2, 2, {2, 0, 0, 3});

  SUBCASE("pure column span") {
    CHECK(lattice_contains(a, 0, {BigInt(4), BigInt(3)}));
    CHECK(lattice_contains(a, 0, {BigInt(-2), BigInt(9)}));
    CHECK_FALSE(lattice_contains(a, 0, {BigInt(2), BigInt(1)}));
    CHECK_FALSE(lattice_contains(a, 0, {BigInt(1), BigInt(0)}));
  }

  SUBCASE("span plus a modulus") {
    CHECK(lattice_contains(a, 6, {BigInt(2), BigInt(9)}));
    CHECK_FALSE(lattice_contains(a, 6, {BigInt(2), BigInt(1)}));
    CHECK_FALSE(lattice_contains(a, 6, {BigInt(2), BigInt(4)}));
    CHECK(lattice_contains(a, 6, {BigInt(8), BigInt(3)}));
    // Modulus 1 makes everything a member.
    CHECK(lattice_contains(a, 1, {BigInt(7), BigInt(-11)}));
  }

  SUBCASE("membership is invariant under adding modulus multiples") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
      const ZMat w = random_zmat(rng, 4, 2, -5, 5);
      const BigInt mod = 27;
      std::vector<BigInt> v(4);
      std::uniform_int_distribution<int> dist(-40, 40);
      for (auto& x : v) x = dist(rng);
      std::vector<BigInt> shifted = v;
      for (unsigned i = 0; i < 4; ++i) shifted[i] += mod * dist(rng);
      CHECK(lattice_contains(w, mod, v) == lattice_contains(w, mod, shifted));
    }
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(lattice_contains(a, 0, {BigInt(1)}), std::invalid_argument);
    CHECK_THROWS_AS(lattice_contains(a, -2, {BigInt(1), BigInt(1)}),
                    std::invalid_argument);
  }
}

TEST_CASE("sublattice equality modulo a prime power") {
  SUBCASE("lattices that differ only above the modulus agree") {
    const ZMat w1 = zfrom_ints(2, 1, {1, 0});
    const ZMat w2 = zfrom_ints(2, 1, {1, 9});
    CHECK(sublattice_equal_mod(w1, w2, 9));
    CHECK_FALSE(sublattice_equal_mod(w1, w2, 27));
    CHECK_FALSE(sublattice_equal_mod(w1, w2, 3 * 9 + 1));
  }

  SUBCASE("span of e1 versus span of e1 + 3*e2") {
    const ZMat w1 = zfrom_ints(3, 1, {1, 0, 0});
    const ZMat w2 = zfrom_ints(3, 1, {1, 3, 0});
    CHECK(sublattice_equal_mod(w1, w2, 3));
    CHECK_FALSE(sublattice_equal_mod(w1, w2, 9));
  }

  SUBCASE("equality is basis independent") {
    std::mt19937_64 rng(31415);
    for (int trial = 0; trial < 20; ++trial) {
      const ZMat w = random_zmat(rng, 4, 2, -6, 6);
      // Change of basis by a unimodular 2x2 matrix.
      std::uniform_int_distribution<int> dist(-3, 3);
      ZMat u(2, 2);
      const int b = dist(rng), c = dist(rng);
      u.at(0, 0) = 1;
      u.at(0, 1) = b;
      u.at(1, 0) = c;
      u.at(1, 1) = 1 + b * c;  // det = 1
      CHECK(sublattice_equal_mod(w, zmat_mul(w, u), 125));
    }
  }

  SUBCASE("different ranks modulo ell are detected") {
    const ZMat w1 = zfrom_ints(2, 2, {1, 0, 0, 1});
    const ZMat w2 = zfrom_ints(2, 1, {1, 0});
    CHECK_FALSE(sublattice_equal_mod(w1, w2, 5));
  }
}
