// Upper bounds on the geometric Picard number from a reconstructed Frobenius
// polynomial: cyclotomic eigenvalue counting, exact base change to F_{q^m},
// the discriminant square class of the special value at 1/q, ordinarity from
// the p-adic Newton polygon, and the rule combining several primes into a
// verdict.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "k3p/intpoly.hpp"
#include "k3p/numth.hpp"

namespace k3p {

// Multiplicities of the scaled cyclotomic factors of P: factor (m, e) means
// Phi_m(T)^e divides P(T/q) (equivalently, e * phi(m) eigenvalues of the form
// q * zeta_m).  rho_upper counts them all; the rest of the 22 eigenvalues are
// never of Tate type over any extension.
struct CyclotomicProfile {
  std::vector<std::pair<uint32_t, unsigned>> factors;  // ascending m, e > 0
  unsigned rho_upper = 0;                              // sum e * phi(m)
  unsigned remainder_degree = 0;                       // 22 - rho_upper
  uint32_t m_lcm = 1;                                  // lcm of occurring m
};

// Trial-divides the unit-normalized polynomial by every Phi_m with
// phi(m) <= 22.  Throws std::logic_error when rho_upper comes out odd: the
// functional equation forces evenness, so odd means a bug upstream.
CyclotomicProfile cyclotomic_profile(const IPoly& coeffs, const BigInt& q);

// prod(1 - l_i^m T) with exact integer coefficients: companion matrix of the
// reversed monic polynomial raised to the m-th power, traces, Newton.
// Requires coeffs[0] == 1 and m >= 1.
IPoly power_char_poly(const IPoly& coeffs, unsigned m);

struct ArtinTateResult {
  BigInt delta;     // square class of (-1)^(rho-1) * q * R(1/q)
  BigRat special;   // R(1/q), exact
  IPoly remainder;  // R(T) = P_m(T) / (1 - qT)^rho
};

// Writes P_m = (1 - qT)^rho * R with R(1/q) != 0 and reduces
// (-1)^(rho-1) * q * R(1/q) to its squarefree representative.  The sign
// factor is the lattice-signature sign of a rank-rho hyperbolic-type
// intersection form, so negative classes are meaningful and kept.  Two
// independent division routes compute R and must agree.  Throws
// std::runtime_error when the division is not exact or R(1/q) = 0.
ArtinTateResult artin_tate_squareclass(const IPoly& pm, const BigInt& q, unsigned rho);

// Lower convex hull of {(i, v_p(c_i)) : c_i != 0}; vertices ascending in i.
struct NewtonPolygon {
  std::vector<std::pair<unsigned, int64_t>> vertices;
};
NewtonPolygon newton_polygon(const IPoly& coeffs, uint32_t p);

// True iff the slope-0 segment of the Newton polygon has length exactly 1.
bool ordinarity_check(const IPoly& coeffs, uint32_t p);

// Per-candidate downstream numbers a prime contributes to the verdict.
struct CandidateEvidence {
  int sign = 0;
  unsigned rho_upper = 0;
  BigInt delta;
  bool ordinary = false;
};

struct PrimeEvidence {
  uint32_t p = 0;
  std::vector<CandidateEvidence> candidates;  // all survivors, never empty
};

struct PicardVerdict {
  unsigned rho_low = 1;
  unsigned rho_high = 22;
  bool exact = false;
  bool inconsistent = false;   // lower bound exceeds the evidence's upper bound
  std::string inconsistency;   // human-readable cause when inconsistent
  std::string refinement;      // nonempty when the square-class drop applied
  std::vector<std::string> assumptions;
};

// rho_high = min over primes of (max over candidates of rho_upper).  When two
// primes attain rho_high with every candidate and their delta sets are
// disjoint, the specialization argument drops the bound once by d_low (the
// asserted lower bound on the endomorphism-field degree, default 1).
// exact iff rho_low == rho_high.  rho_low and d_low must be >= 1.
PicardVerdict combine_verdict(unsigned rho_low, unsigned d_low,
                              const std::vector<PrimeEvidence>& evidence);

}  // namespace k3p
