// Reconstruction of the degree-22 Frobenius polynomial P(T) = prod (1 - l_i T)
// on H^2 from point-count traces, the known hyperplane factor (1 - pT)^k, and
// the weight-2 functional equation c_{22-i} = sign * p^{22-2i} c_i.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3p/counter.hpp"
#include "k3p/intpoly.hpp"

namespace k3p {

// Traces are insufficient to pin the free coefficients; `required` names the
// number of traces that would suffice.
struct InsufficientTraces : std::runtime_error {
  explicit InsufficientTraces(unsigned req)
      : std::runtime_error("insufficient traces: " + std::to_string(req) +
                           " required"),
        required(req) {}
  unsigned required;
};

// Traces, imposed factors, and the functional equation cannot all hold
// (counting bug, singular reduction, or a wrong user-imposed factor).
struct ReconstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeilCandidate {
  uint32_t p = 0;
  IPoly coeffs;             // c_0..c_22, c_0 == 1
  int sign = 0;             // functional-equation sign of the full polynomial
  unsigned known_rank = 1;  // imposed multiplicity of (1 - pT)
  unsigned traces_used = 0;
};

enum class SignPolicy { kBoth, kForcePlus, kForceMinus };

struct ReconstructOutcome {
  std::vector<WeilCandidate> candidates;
  unsigned need_more_traces = 0;  // nonzero: how many traces would suffice
  std::string inconsistency;      // nonempty: no candidate can exist
};

// Newton conversion s_1..s_k -> c_1..c_k for P = prod(1 - l_i T); throws
// ReconstructionError when some c_n is non-integral.
std::vector<BigInt> newton_coefficients(const std::vector<BigInt>& traces);

// Exact series division of a coefficient prefix c_0..c_m by factor^mult
// (factor with constant term 1, e.g. {1, -p}).  full_degree is the degree of
// the complete dividend; any quotient coefficient beyond the quotient degree
// full_degree - mult*deg(factor) that is visible in the prefix must vanish,
// else the imposed factor contradicts the traces (ReconstructionError).
IPoly divide_known_factor(const IPoly& prefix, const IPoly& factor, unsigned mult,
                          unsigned full_degree);

// Completes a degree-d coefficient vector from its prefix via
// c_{d-i} = sign * q^{d-2i} c_i.  Throws InsufficientTraces when the prefix
// is shorter than the free half, ReconstructionError on a middle-coefficient
// clash (sign -1, d even) or an overlap disagreement.
IPoly complete_by_functional_equation(const IPoly& prefix, const BigInt& q, int sign,
                                      unsigned d);

// Numeric screen: all roots of prod-form P have |l_i| = p within tol.  The
// polynomial is deflated exactly (squarefree radical) before the balanced
// companion eigensolve, so multiple roots cannot poison the conditioning.
bool root_moduli_check(const IPoly& coeffs, uint32_t p, double tol = 1e-6);

// Full filter: c_0 = 1, degree 22, exact functional equation for the stored
// sign, (1 - pT) divides, every supplied trace reproduced exactly (forward
// Newton), and the root-moduli screen.  When reasons is non-null each failed
// check appends a line.
bool candidate_filter(const WeilCandidate& cand, const std::vector<BigInt>& traces,
                      std::vector<std::string>* reasons = nullptr);

// End-to-end reconstruction from a count record.  known_rank k >= 1 imposes
// (1 - pT)^k; k > 1 is a user assertion and is recorded on the candidate.
// Attempts both functional-equation signs (restricted by policy), filters,
// and returns all survivors, a NeedMoreTraces outcome, or an inconsistency.
ReconstructOutcome reconstruct(const PointCountRecord& rec, unsigned known_rank = 1,
                               SignPolicy policy = SignPolicy::kBoth);

// p^e as a BigInt (shared helper).
BigInt bigpow(const BigInt& base, unsigned e);

}  // namespace k3p
