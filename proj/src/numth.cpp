#include "k3p/numth.hpp"

#include <stdexcept>

namespace k3p {

namespace {

BigInt mulmod(const BigInt& a, const BigInt& b, const BigInt& m) { return a * b % m; }

BigInt powmod(BigInt base, BigInt exp, const BigInt& m) {
  BigInt r = 1;
  base %= m;
  while (exp > 0) {
    if (bit_test(exp, 0)) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

bool miller_rabin(const BigInt& n, const BigInt& a) {
  if (n % a == 0) return n == a;
  BigInt d = n - 1;
  unsigned s = 0;
  while (!bit_test(d, 0)) {
    d >>= 1;
    ++s;
  }
  BigInt x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  // Witness set proven complete for n < 3.3e24; strong probable-prime beyond.
  for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!miller_rabin(n, a)) return false;
  }
  return true;
}

namespace {

BigInt brent_rho(const BigInt& n, unsigned seed) {
  // Brent's cycle variant of Pollard rho with batched gcds.
  const BigInt c = 1 + seed;
  BigInt x = 2, y = 2, d = 1, q = 1, ys = y;
  unsigned r = 1;
  const unsigned batch = 64;
  auto f = [&](const BigInt& v) { return (v * v + c) % n; };
  while (d == 1) {
    x = y;
    for (unsigned i = 0; i < r; ++i) y = f(y);
    for (unsigned k = 0; k < r && d == 1; k += batch) {
      ys = y;
      for (unsigned i = 0; i < batch && i < r - k; ++i) {
        y = f(y);
        q = mulmod(q, abs(x - y), n);
      }
      d = gcd(q, n);
    }
    r *= 2;
  }
  if (d == n) {  // backtrack one step at a time
    d = 1;
    y = ys;
    while (d == 1) {
      y = f(y);
      d = gcd(abs(x - y), n);
    }
  }
  return d;
}

void factor_into(BigInt n, std::map<BigInt, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (unsigned seed = 0;; ++seed) {
    if (seed > 64) throw std::runtime_error("factor: rho failed to split composite");
    BigInt d = brent_rho(n, seed);
    if (d > 1 && d < n) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

}  // namespace

std::map<BigInt, unsigned> factor(const BigInt& n) {
  if (n < 1) throw std::invalid_argument("factor: n must be >= 1");
  std::map<BigInt, unsigned> out;
  BigInt m = n;
  for (int p : {2, 3, 5, 7, 11, 13}) {
    while (m % p == 0) {
      ++out[p];
      m /= p;
    }
  }
  // trial divide a little further before handing to rho
  for (BigInt p = 17; p * p <= m && p < 100000; p += 2) {
    while (m % p == 0) {
      ++out[p];
      m /= p;
    }
  }
  if (m > 1) factor_into(m, out);
  return out;
}

BigInt squarefree_part(const BigRat& r) {
  if (r == 0) throw std::invalid_argument("squarefree_part: zero has no square class");
  // a/b and a*b differ by the square b^2, so factor |numerator * denominator|.
  BigInt prod = numerator(r) * denominator(r);
  int sign = prod < 0 ? -1 : 1;
  auto fac = factor(abs(prod));
  BigInt d = sign;
  for (auto& [p, e] : fac)
    if (e % 2) d *= p;
  return d;
}

uint64_t euler_phi(uint64_t m) {
  uint64_t result = m;
  for (uint64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

unsigned padic_valuation(const BigInt& n, const BigInt& p) {
  if (n == 0) throw std::invalid_argument("padic_valuation: n must be nonzero");
  BigInt m = abs(n);
  unsigned v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

}  // namespace k3p
