// Small number-theoretic utilities: primality, factorization, squarefree parts.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace k3p {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Deterministic Miller-Rabin (fixed witness set, valid far beyond 2^64; for
// larger inputs the same witnesses give a strong probable-prime answer, which
// factor() double-checks by recursing on any composite that slips through).
bool is_prime(const BigInt& n);

// Full factorization via trial division + Brent-Pollard rho.
// Returns {prime -> exponent}; n must be >= 1.  factor(1) == {}.
std::map<BigInt, unsigned> factor(const BigInt& n);

// Squarefree part of a nonzero rational, sign preserved:
// the unique squarefree integer d with r = d * (square of a rational).
BigInt squarefree_part(const BigRat& r);

// Euler totient for small m.
uint64_t euler_phi(uint64_t m);

// Multiplicity of prime p in n (n != 0).
unsigned padic_valuation(const BigInt& n, const BigInt& p);

}  // namespace k3p
