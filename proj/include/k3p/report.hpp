// The certificate document: everything a run claims, serialized as canonical
// JSON.  Emission is deterministic (sorted keys, fixed indentation, no
// timestamps) so identical runs produce byte-identical reports; integers are
// exact, rendered as decimal strings once they leave the 64-bit range.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "k3p/counter.hpp"
#include "k3p/intpoly.hpp"

namespace k3p {

struct CandidateReport {
  IPoly coeffs;  // degree 22, constant term 1
  int sign = 0;
  unsigned rho_upper = 0;
  std::vector<std::pair<uint32_t, unsigned>> cyclotomic;  // (order m, multiplicity)
  bool ordinary = false;
  uint32_t m_lcm = 1;
  BigInt delta;  // squarefree discriminant class at rho_upper

  bool operator==(const CandidateReport&) const = default;
};

struct PrimeReport {
  uint32_t p = 0;
  std::string smoothness;           // status string from the reduction check
  std::vector<CountEntry> counts;   // ascending n
  std::vector<CandidateReport> candidates;

  bool operator==(const PrimeReport&) const = default;
};

struct ReportInputs {
  unsigned rho_low = 1;
  unsigned d_low = 1;
  std::vector<std::string> justifications;

  bool operator==(const ReportInputs&) const = default;
};

struct Report {
  std::string surface_id;
  std::string surface_hash;
  std::vector<std::string> assumptions;
  std::vector<PrimeReport> primes;
  ReportInputs inputs;
  unsigned verdict_rho_low = 1;
  unsigned verdict_rho_high = 22;
  bool verdict_exact = false;

  bool operator==(const Report&) const = default;
};

// Canonical JSON document (trailing newline included).
std::string emit_report(const Report& r);

// Inverse of emit_report; throws std::runtime_error with a path-qualified
// message on malformed documents.  parse(emit(r)) == r.
Report parse_report(const std::string& text);

}  // namespace k3p
