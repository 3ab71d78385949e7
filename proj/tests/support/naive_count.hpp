// Deliberately dumb reference counter: enumerate every point of P^3(F_q) as a
// tuple whose first nonzero coordinate is 1, evaluate the quartic monomial by
// monomial with repeated multiplication, and sum.  No charts-by-fiber trick,
// no orbit skipping, no root counting — this is the oracle the optimized
// engine must match exactly.
#pragma once

#include <array>
#include <cstdint>

#include "k3p/surface.hpp"

namespace k3p_test {

inline uint64_t naive_projective_count(const k3p::SurfaceModP& s, uint32_t n) {
  k3p::FieldTable F(s.p, n);
  const uint64_t q = F.q();
  const auto& mons = k3p::quartic_monomials();
  uint64_t total = 0;
  for (int lead = 0; lead < 4; ++lead) {
    uint64_t combos = 1;
    for (int v = lead + 1; v < 4; ++v) combos *= q;
    for (uint64_t idx = 0; idx < combos; ++idx) {
      std::array<k3p::GF, 4> pt{};
      pt[lead] = 1;
      uint64_t rest = idx;
      for (int v = 3; v > lead; --v) {
        pt[v] = static_cast<k3p::GF>(rest % q);
        rest /= q;
      }
      k3p::GF acc = 0;
      for (int i = 0; i < k3p::kQuarticMonomialCount; ++i) {
        if (s.coeffs[i] == 0) continue;
        k3p::GF term = s.coeffs[i];
        for (int v = 0; v < 4; ++v)
          for (int e = 0; e < mons[i][v]; ++e) term = F.mul(term, pt[v]);
        acc = F.add(acc, term);
      }
      if (acc == 0) ++total;
    }
  }
  return total;
}

}  // namespace k3p_test
