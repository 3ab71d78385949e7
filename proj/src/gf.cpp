#include "k3p/gf.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "k3p/numth.hpp"

namespace k3p {

namespace {

// Dense polynomials over F_p, coefficient vectors with constant term first.
// Only used at construction time; the hot paths run on the finished tables.
using Poly = std::vector<uint32_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& mod, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (uint32_t)((c[i + j] + (uint64_t)a[i] * b[j]) % p);
  }
  // reduce by the monic mod
  size_t dm = mod.size() - 1;
  for (size_t i = c.size(); i-- > dm;) {
    uint32_t coef = c[i];
    if (coef == 0) continue;
    c[i] = 0;
    for (size_t j = 0; j < dm; ++j)
      c[i - dm + j] = (uint32_t)((c[i - dm + j] + (uint64_t)(p - mod[j]) % p * coef) % p);
  }
  c.resize(dm);
  trim(c);
  return c;
}

Poly powmod(Poly base, BigInt e, const Poly& mod, uint32_t p) {
  Poly r = {1};
  while (e > 0) {
    if (bit_test(e, 0)) r = mulmod(r, base, mod, p);
    base = mulmod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
  auto inv_mod_p = [p](uint32_t x) {
    uint64_t r = 1, b = x;
    uint32_t e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return (uint32_t)r;
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    uint32_t lead_inv = inv_mod_p(b.back());
    while (a.size() >= b.size()) {
      uint32_t coef = (uint32_t)((uint64_t)a.back() * lead_inv % p);
      size_t shift = a.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j)
        a[shift + j] = (uint32_t)((a[shift + j] + p - (uint64_t)coef * b[j] % p) % p);
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

// Degree-n f is irreducible over F_p iff it shares no factor with X^{p^k} - X
// for any k <= n/2 (that product covers all irreducibles of degree <= n/2).
bool is_irreducible(const Poly& f, uint32_t p) {
  uint32_t n = (uint32_t)f.size() - 1;
  if (n == 1) return true;
  for (uint32_t k = 1; k <= n / 2; ++k) {
    BigInt pk = 1;
    for (uint32_t i = 0; i < k; ++i) pk *= p;
    Poly xpk = powmod({0, 1}, pk, f, p);  // X^{p^k} mod f
    // xpk - X
    Poly diff = xpk;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    Poly g = poly_gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace

FieldTable::FieldTable(uint32_t p, uint32_t n, uint32_t ceiling) {
  if (!is_prime(BigInt(p))) throw std::invalid_argument("build_field: p = " + std::to_string(p) + " is not prime");
  if (n < 1) throw std::invalid_argument("build_field: n must be >= 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < n; ++i) {
    q *= p;
    if (q > ceiling)
      throw std::invalid_argument("build_field: p^n = " + std::to_string(p) + "^" + std::to_string(n) +
                                  " exceeds the field-size ceiling " + std::to_string(ceiling));
  }
  p_ = p;
  n_ = n;
  q_ = (uint32_t)q;
  qm1_ = q_ - 1;
  half_ = qm1_ / 2;

  // Smallest monic irreducible of degree n: scan lower-coefficient vectors in
  // index order (X^n, X^n + 1, X^n + 2, ..., X^n + X, ...).
  Poly mod(n + 1, 0);
  mod[n] = 1;
  for (uint32_t k = 0;; ++k) {
    if (k >= q_) throw std::logic_error("build_field: no irreducible found");  // cannot happen
    uint32_t v = k;
    for (uint32_t i = 0; i < n; ++i) {
      mod[i] = v % p;
      v /= p;
    }
    if (is_irreducible(mod, p)) break;
  }
  modulus_.assign(mod.begin(), mod.end());

  auto index_of = [&](const Poly& f) {
    uint32_t idx = 0;
    for (size_t i = f.size(); i-- > 0;) idx = idx * p + f[i];
    return idx;
  };
  auto poly_of = [&](uint32_t idx) {
    Poly f(n, 0);
    for (uint32_t i = 0; i < n; ++i) {
      f[i] = idx % p;
      idx /= p;
    }
    trim(f);
    return f;
  };

  // Smallest generator of the cyclic group: order q-1 checked on the prime
  // factors of q-1 with polynomial arithmetic (tables do not exist yet).
  auto qm1_factors = factor(BigInt(qm1_));
  GF gen = 0;
  for (uint32_t cand = 2; cand < q_; ++cand) {
    Poly cp = poly_of(cand);
    bool ok = true;
    for (auto& [r, e] : qm1_factors) {
      Poly t = powmod(cp, BigInt(qm1_) / r, mod, p);
      if (t.size() == 1 && t[0] == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen = cand;
      break;
    }
  }
  if (gen == 0 && q_ == 2) gen = 1;  // F_2: trivial group, g = 1
  if (gen == 0) throw std::logic_error("build_field: no generator found");
  gen_ = gen;

  // exp table: multiplication by the fixed generator is linear over F_p, so
  // precompute X^i * g mod m and accumulate digit vectors without reductions
  // until the final mod p (digit sums stay below n*(p-1)^2 + p).
  std::vector<Poly> gshift(n);
  {
    Poly cur = poly_of(gen);
    cur.resize(n, 0);
    for (uint32_t i = 0; i < n; ++i) {
      gshift[i] = cur;
      // cur = X * cur mod m
      Poly nxt(n + 1, 0);
      for (uint32_t j = 0; j < n; ++j) nxt[j + 1] = cur[j];
      uint32_t top = nxt[n];
      nxt.resize(n);
      if (top) {
        for (uint32_t j = 0; j < n; ++j)
          nxt[j] = (uint32_t)((nxt[j] + (uint64_t)((p - modulus_[j]) % p) * top) % p);
      }
      cur = nxt;
    }
    for (auto& s : gshift) s.resize(n, 0);
  }

  exp_.resize(2 * (size_t)qm1_);
  log_.assign(q_, kNoLog);
  std::vector<uint64_t> acc(n);
  Poly cur = {1};
  cur.resize(n, 0);
  for (uint32_t k = 0; k < qm1_; ++k) {
    uint32_t idx = index_of(cur);
    exp_[k] = idx;
    log_[idx] = k;
    std::fill(acc.begin(), acc.end(), 0);
    for (uint32_t i = 0; i < n; ++i) {
      uint32_t d = cur[i];
      if (!d) continue;
      const Poly& s = gshift[i];
      for (uint32_t j = 0; j < n; ++j) acc[j] += (uint64_t)d * s[j];
    }
    for (uint32_t j = 0; j < n; ++j) cur[j] = (uint32_t)(acc[j] % p);
  }
  if (index_of(cur) != 1) throw std::logic_error("build_field: generator order check failed");
  for (uint32_t k = 0; k < qm1_; ++k) exp_[qm1_ + k] = exp_[k];

  // Zech logarithms for odd characteristic: 1 + g^k, computed by bumping the
  // constant digit of the index.
  if (p_ != 2) {
    zech_.assign(qm1_, kNoLog);
    for (uint32_t k = 0; k < qm1_; ++k) {
      uint32_t x = exp_[k];
      uint32_t d0 = x % p;
      uint32_t y = x - d0 + (d0 + 1) % p;
      zech_[k] = y == 0 ? kNoLog : log_[y];
    }
  }

  frob_.resize(q_);
  frob_[0] = 0;
  for (uint32_t x = 1; x < q_; ++x) frob_[x] = exp_[(uint64_t)log_[x] * p % qm1_];
}

std::vector<uint32_t> FieldTable::digits(GF a) const {
  std::vector<uint32_t> d(n_);
  for (uint32_t i = 0; i < n_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

GF FieldTable::from_digits(const std::vector<uint32_t>& d) const {
  GF a = 0;
  for (size_t i = d.size(); i-- > 0;) a = a * p_ + d[i] % p_;
  return a;
}

FieldTable build_field(uint32_t p, uint32_t n, uint32_t ceiling) { return FieldTable(p, n, ceiling); }

}  // namespace k3p
