// Finite field F_{p^n} with full lookup tables.
//
// Elements are integers in [0, q): the base-p digit expansion of an index is
// the coefficient vector of the residue polynomial, constant term in the least
// significant digit.  Hence 0 is the additive and 1 the multiplicative
// identity, and the prime field F_p always occupies indices 0..p-1 — so a
// surface reduced mod p has the same coefficient indices in every extension
// table, which is what ties counts at different n to the same surface.
//
// The modulus is the lexicographically smallest monic irreducible of degree n
// (smallest index of its lower-coefficient vector), so tables are canonical.
// Multiplication runs on discrete-log/antilog tables over the smallest
// generator; addition is XOR in characteristic 2 and a Zech-logarithm lookup
// (1 + g^k = g^{zech[k]}) otherwise.
#pragma once

#include <cstdint>
#include <vector>

namespace k3p {

using GF = uint32_t;  // element index in [0, q)

class FieldTable {
 public:
  static constexpr uint32_t kDefaultCeiling = 1u << 22;
  static constexpr uint32_t kNoLog = 0xFFFFFFFFu;

  // Throws std::invalid_argument if p is not prime, n < 1, or p^n > ceiling.
  FieldTable(uint32_t p, uint32_t n, uint32_t ceiling = kDefaultCeiling);

  uint32_t p() const { return p_; }
  uint32_t n() const { return n_; }
  uint32_t q() const { return q_; }

  // Monic modulus as n+1 coefficients, constant term first; back() == 1.
  const std::vector<uint32_t>& modulus() const { return modulus_; }
  GF generator() const { return gen_; }

  GF add(GF a, GF b) const {
    if (p_ == 2) return a ^ b;
    if (a == 0) return b;
    if (b == 0) return a;
    uint32_t la = log_[a], lb = log_[b];
    // a + b = g^la * (1 + g^(lb-la))
    uint32_t d = lb >= la ? lb - la : lb + qm1_ - la;
    uint32_t z = zech_[d];
    return z == kNoLog ? 0 : exp_[la + z];
  }

  GF neg(GF a) const {
    if (p_ == 2 || a == 0) return a;
    return exp_[log_[a] + half_];
  }

  GF sub(GF a, GF b) const { return add(a, neg(b)); }

  GF mul(GF a, GF b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  // Multiplicative inverse; a must be nonzero.
  GF inv(GF a) const { return exp_[qm1_ - log_[a]]; }

  GF div(GF a, GF b) const {
    if (a == 0) return 0;
    uint32_t la = log_[a], lb = log_[b];
    return exp_[la >= lb ? la - lb : la + qm1_ - lb];
  }

  GF pow(GF a, uint64_t e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    uint64_t le = (uint64_t)log_[a] * (e % qm1_) % qm1_;
    return exp_[le];
  }

  // x -> x^p, the arithmetic Frobenius.
  GF frobenius(GF a) const { return frob_[a]; }

  // g^k for 0 <= k < q-1; exp(k + q-1) == exp(k).
  GF exp_at(uint32_t k) const { return exp_[k]; }
  uint32_t log_at(GF a) const { return log_[a]; }  // kNoLog for 0
  uint32_t qm1() const { return qm1_; }

  std::vector<uint32_t> digits(GF a) const;
  GF from_digits(const std::vector<uint32_t>& d) const;

 private:
  uint32_t p_, n_, q_, qm1_, half_;
  GF gen_;
  std::vector<uint32_t> modulus_;
  std::vector<GF> exp_;        // size 2*(q-1): doubled so log sums need no mod
  std::vector<uint32_t> log_;  // size q, log_[0] = kNoLog
  std::vector<uint32_t> zech_; // odd p only, size q-1
  std::vector<GF> frob_;       // size q
};

FieldTable build_field(uint32_t p, uint32_t n, uint32_t ceiling = FieldTable::kDefaultCeiling);

}  // namespace k3p
