// Exact polynomial arithmetic over Z and Q (dense, constant term first).
//
// Convention used throughout: a "spectral" polynomial P(T) = sum c_i T^i with
// c_0 = 1 encodes an eigenvalue multiset {l_i} via P(T) = prod (1 - l_i T).
// Power sums s_k = sum l_i^k then satisfy the Newton recursion
//   s_k + c_1 s_{k-1} + ... + c_{k-1} s_1 + k c_k = 0.
#pragma once

#include <cstdint>
#include <vector>

#include "k3p/numth.hpp"

namespace k3p {

using IPoly = std::vector<BigInt>;  // trimmed: back() != 0, or empty for zero
using RPoly = std::vector<BigRat>;

int degree(const IPoly& f);  // -1 for the zero polynomial
IPoly trimmed(IPoly f);
IPoly ipoly_add(const IPoly& a, const IPoly& b);
IPoly ipoly_sub(const IPoly& a, const IPoly& b);
IPoly ipoly_mul(const IPoly& a, const IPoly& b);
IPoly ipoly_pow(const IPoly& a, unsigned e);
IPoly ipoly_derivative(const IPoly& f);
BigRat ipoly_eval(const IPoly& f, const BigRat& x);
bool ipoly_eq(const IPoly& a, const IPoly& b);

// Division with remainder by a *monic* divisor, exact over Z.
void ipoly_divmod_monic(const IPoly& num, const IPoly& den, IPoly* quot, IPoly* rem);

// Exact division over Q of integer polynomials; returns false if the division
// leaves a remainder (quot untouched in that case).
bool ipoly_try_divide(const IPoly& num, const IPoly& den, IPoly* quot);

// gcd over Q, returned as a primitive integer polynomial with positive lead.
IPoly ipoly_gcd_q(const IPoly& a, const IPoly& b);

// Squarefree radical f / gcd(f, f'), primitive with positive lead.
IPoly ipoly_radical(const IPoly& f);

// Content (gcd of coefficients, positive; 0 for the zero polynomial).
BigInt ipoly_content(const IPoly& f);

// The m-th cyclotomic polynomial, computed by exact division of X^m - 1 and
// cached. phi-bounded enumerations use cyclotomic_orders().
const IPoly& cyclotomic(unsigned m);

// All m >= 1 with euler_phi(m) <= phi_bound, ascending.
std::vector<unsigned> cyclotomic_orders(unsigned phi_bound);

// Power sums s_1..s_count of the eigenvalue multiset of P (c = coefficients of
// P with c[0] == 1), by the forward Newton recursion.
std::vector<BigInt> power_sums_from_coeffs(const IPoly& c, unsigned count);

// Inverse direction: given s_1..s_N, produce c_1..c_N.  Throws
// std::invalid_argument naming the index if some division by k is not exact
// (the power sums then belong to no integer-coefficient polynomial).
std::vector<BigInt> coeffs_from_power_sums(const std::vector<BigInt>& s);

}  // namespace k3p
