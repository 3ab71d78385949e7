#include "k3p/intpoly.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace k3p {

namespace {

BigInt big_gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

RPoly to_rpoly(const IPoly& f) {
  RPoly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = BigRat(f[i]);
  return r;
}

int rdegree(const RPoly& f) {
  for (size_t i = f.size(); i-- > 0;)
    if (f[i] != 0) return static_cast<int>(i);
  return -1;
}

// Remainder of a by b over Q (b nonzero), in place on a copy.
RPoly rpoly_rem(RPoly a, const RPoly& b) {
  int db = rdegree(b);
  for (int da = rdegree(a); da >= db; da = rdegree(a)) {
    BigRat q = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= q * b[i];
    a[da] = 0;  // force exact cancellation of the lead
  }
  return a;
}

// Clear denominators and divide by the content: primitive, positive lead.
IPoly rpoly_to_primitive(const RPoly& f) {
  int d = rdegree(f);
  if (d < 0) return {};
  BigInt lcm = 1;
  for (int i = 0; i <= d; ++i) {
    BigInt den = denominator(f[i]);
    lcm = lcm / big_gcd(lcm, den) * den;
  }
  IPoly g(d + 1);
  for (int i = 0; i <= d; ++i) {
    BigRat scaled = f[i] * lcm;
    g[i] = numerator(scaled);
  }
  BigInt cont = 0;
  for (const BigInt& c : g) cont = big_gcd(cont, c);
  if (g[d] < 0) cont = -cont;
  for (BigInt& c : g) c /= cont;
  return g;
}

}  // namespace

int degree(const IPoly& f) {
  for (size_t i = f.size(); i-- > 0;)
    if (f[i] != 0) return static_cast<int>(i);
  return -1;
}

IPoly trimmed(IPoly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

IPoly ipoly_add(const IPoly& a, const IPoly& b) {
  IPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return trimmed(std::move(r));
}

IPoly ipoly_sub(const IPoly& a, const IPoly& b) {
  IPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return trimmed(std::move(r));
}

IPoly ipoly_mul(const IPoly& a, const IPoly& b) {
  if (degree(a) < 0 || degree(b) < 0) return {};
  IPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return trimmed(std::move(r));
}

IPoly ipoly_pow(const IPoly& a, unsigned e) {
  IPoly r = {1};
  IPoly base = a;
  while (e > 0) {
    if (e & 1) r = ipoly_mul(r, base);
    e >>= 1;
    if (e) base = ipoly_mul(base, base);
  }
  return r;
}

IPoly ipoly_derivative(const IPoly& f) {
  if (f.size() <= 1) return {};
  IPoly r(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * BigInt(i);
  return trimmed(std::move(r));
}

BigRat ipoly_eval(const IPoly& f, const BigRat& x) {
  BigRat acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + BigRat(f[i]);
  return acc;
}

bool ipoly_eq(const IPoly& a, const IPoly& b) {
  return trimmed(a) == trimmed(b);
}

void ipoly_divmod_monic(const IPoly& num, const IPoly& den, IPoly* quot, IPoly* rem) {
  int dd = degree(den);
  if (dd < 0 || den[dd] != 1)
    throw std::invalid_argument("ipoly_divmod_monic: divisor must be monic");
  IPoly r = trimmed(num);
  int dn = degree(r);
  if (dn < dd) {
    if (quot) quot->clear();
    if (rem) *rem = std::move(r);
    return;
  }
  IPoly q(dn - dd + 1, 0);
  for (int i = dn; i >= dd; --i) {
    BigInt c = r[i];
    if (c == 0) continue;
    q[i - dd] = c;
    for (int j = 0; j <= dd; ++j) r[i - dd + j] -= c * den[j];
  }
  if (quot) *quot = trimmed(std::move(q));
  if (rem) *rem = trimmed(std::move(r));
}

bool ipoly_try_divide(const IPoly& num, const IPoly& den, IPoly* quot) {
  int dd = degree(den);
  if (dd < 0) throw std::invalid_argument("ipoly_try_divide: division by zero");
  RPoly r = to_rpoly(num);
  int dn = rdegree(r);
  if (dn < 0) {
    if (quot) quot->clear();
    return true;
  }
  if (dn < dd) return false;
  RPoly q(dn - dd + 1, BigRat(0));
  for (int i = dn; i >= dd; --i) {
    if (r[i] == 0) continue;
    BigRat c = r[i] / BigRat(den[dd]);
    q[i - dd] = c;
    for (int j = 0; j <= dd; ++j) r[i - dd + j] -= c * BigRat(den[j]);
    r[i] = 0;
  }
  if (rdegree(r) >= 0) return false;
  if (quot) {
    IPoly out(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
      if (denominator(q[i]) != 1) return false;
      out[i] = numerator(q[i]);
    }
    *quot = trimmed(std::move(out));
  }
  return true;
}

IPoly ipoly_gcd_q(const IPoly& a, const IPoly& b) {
  RPoly x = to_rpoly(trimmed(a)), y = to_rpoly(trimmed(b));
  if (rdegree(x) < rdegree(y)) std::swap(x, y);
  while (rdegree(y) >= 0) {
    RPoly r = rpoly_rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return rpoly_to_primitive(x);
}

IPoly ipoly_radical(const IPoly& f) {
  IPoly g = trimmed(f);
  if (degree(g) <= 0) return g;
  IPoly d = ipoly_gcd_q(g, ipoly_derivative(g));
  IPoly rad;
  if (!ipoly_try_divide(g, d, &rad)) {
    // gcd is primitive, so only a content mismatch can block integer division;
    // redo it over Q and re-primitivize.
    RPoly q = to_rpoly(g);
    RPoly den = to_rpoly(d);
    int dd = rdegree(den);
    int dn = rdegree(q);
    RPoly out(dn - dd + 1, BigRat(0));
    for (int i = dn; i >= dd; --i) {
      if (q[i] == 0) continue;
      BigRat c = q[i] / den[dd];
      out[i - dd] = c;
      for (int j = 0; j <= dd; ++j) q[i - dd + j] -= c * den[j];
      q[i] = 0;
    }
    rad = rpoly_to_primitive(out);
  }
  int dr = degree(rad);
  if (dr >= 0 && rad[dr] < 0)
    for (BigInt& c : rad) c = -c;
  return rad;
}

BigInt ipoly_content(const IPoly& f) {
  BigInt c = 0;
  for (const BigInt& x : f) c = big_gcd(c, x);
  return c;
}

const IPoly& cyclotomic(unsigned m) {
  static std::map<unsigned, IPoly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (m == 0) throw std::invalid_argument("cyclotomic: m must be >= 1");
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  // X^m - 1 divided by the cyclotomic polynomials of all proper divisors.
  std::function<const IPoly&(unsigned)> get = [&](unsigned k) -> const IPoly& {
    auto hit = cache.find(k);
    if (hit != cache.end()) return hit->second;
    IPoly num(k + 1, 0);
    num[0] = -1;
    num[k] = 1;
    for (unsigned d = 1; d < k; ++d) {
      if (k % d != 0) continue;
      IPoly q, r;
      ipoly_divmod_monic(num, get(d), &q, &r);
      if (degree(r) >= 0) throw std::logic_error("cyclotomic: non-exact division");
      num = std::move(q);
    }
    return cache.emplace(k, std::move(num)).first->second;
  };
  return get(m);
}

std::vector<unsigned> cyclotomic_orders(unsigned phi_bound) {
  std::vector<unsigned> out;
  // phi(m) >= sqrt(m/2), so m <= 2 phi^2 bounds the search exhaustively.
  for (unsigned m = 1; m <= 2 * phi_bound * phi_bound + 2; ++m)
    if (euler_phi(m) <= phi_bound) out.push_back(m);
  return out;
}

std::vector<BigInt> power_sums_from_coeffs(const IPoly& c, unsigned count) {
  if (c.empty() || c[0] != 1)
    throw std::invalid_argument("power_sums_from_coeffs: constant term must be 1");
  std::vector<BigInt> s(count + 1, 0);
  for (unsigned n = 1; n <= count; ++n) {
    BigInt acc = 0;
    for (unsigned i = 1; i < n && i < c.size(); ++i) acc += c[i] * s[n - i];
    if (n < c.size()) acc += BigInt(n) * c[n];
    s[n] = -acc;
  }
  return std::vector<BigInt>(s.begin() + 1, s.end());
}

std::vector<BigInt> coeffs_from_power_sums(const std::vector<BigInt>& s) {
  std::vector<BigInt> c(s.size() + 1, 0);
  c[0] = 1;
  for (size_t n = 1; n <= s.size(); ++n) {
    BigInt acc = s[n - 1];
    for (size_t i = 1; i < n; ++i) acc += c[i] * s[n - i - 1];
    if (acc % BigInt(n) != 0)
      throw std::invalid_argument(
          "coeffs_from_power_sums: power sums admit no integer polynomial "
          "(non-exact division at index " + std::to_string(n) + ")");
    c[n] = -acc / BigInt(n);
  }
  return std::vector<BigInt>(c.begin() + 1, c.end());
}

}  // namespace k3p
