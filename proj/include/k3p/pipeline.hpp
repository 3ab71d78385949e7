// End-to-end orchestration: reduce a quartic at each requested prime, count
// points incrementally (cached), reconstruct Frobenius characteristic
// polynomial candidates, derive per-candidate bounds and discriminant classes,
// and combine everything with the user's geometric lower bound into a Picard
// number verdict.  Also the inverse direction: re-derive every numeric claim
// of an existing report from its stored counts.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "k3p/report.hpp"
#include "k3p/weil.hpp"

namespace k3p {

struct RunConfig {
  std::string surface_path;  // read when surface_text is empty
  std::string surface_text;  // takes precedence when nonempty
  std::vector<uint32_t> primes;
  unsigned max_ext = 5;  // count over F_{p^n} for n = 1..max_ext
  SignPolicy sign_policy = SignPolicy::kBoth;
  unsigned known_rank = 1;  // asserted multiplicity of the (1 - pT) factor
  unsigned rho_low = 1;
  std::string rho_low_justification;
  unsigned d_low = 1;
  std::string d_low_justification;
  std::string cache_dir;  // empty disables the count cache
  unsigned workers = 1;
  unsigned smooth_kmax = 4;
  bool full_counts = false;  // count to max_ext even when candidates stabilize
};

struct PipelineResult {
  Report report;
  std::vector<std::string> log;  // human-readable lines; not part of the report
};

// Validates the config (primes distinct and prime, p^max_ext within the field
// ceiling, rho_low and d_low >= 1, surface parses) and runs the pipeline.
// Throws std::invalid_argument on config errors; per-prime failures
// (certified singular reduction, insufficient traces, inconsistency) degrade
// the verdict instead of failing the run.
PipelineResult run_pipeline(const RunConfig& config);

struct VerifyIssue {
  std::string where;
  std::string message;
};

struct VerifyResult {
  bool ok = true;
  std::vector<VerifyIssue> issues;
  std::vector<std::string> log;
};

// Recomputes from the stored counts alone: traces, candidate reconstruction
// (per stored sign, with the known factor multiplicity inferred from the
// candidates themselves), cyclotomic profiles, ordinarity, base change,
// discriminant classes, and the final verdict; reports every mismatch.
VerifyResult verify_report(const Report& r);

}  // namespace k3p
