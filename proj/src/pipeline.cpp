#include "k3p/pipeline.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "k3p/bounds.hpp"
#include "k3p/surface.hpp"

namespace k3p {

namespace {

std::string smoothness_string(const SmoothnessStatus& st) {
  switch (st.kind) {
    case SmoothnessKind::kCertifiedSingular:
      return "certified_singular(degree=" +
             std::to_string(st.witness ? st.witness->extension_degree : 0) + ")";
    case SmoothnessKind::kNoSingularPointUpToDegree:
      return "no_singular_point_up_to_degree(" + std::to_string(st.degree_checked) +
             ")";
    default:
      return "unchecked";
  }
}

// Multiplicity of the factor (1 - pT).
unsigned linear_factor_multiplicity(const IPoly& f, uint32_t p) {
  const IPoly lin{BigInt(1), BigInt(-static_cast<int64_t>(p))};
  IPoly cur = f, quot;
  unsigned k = 0;
  while (ipoly_try_divide(cur, lin, &quot)) {
    cur = quot;
    ++k;
  }
  return k;
}

CandidateReport process_candidate(const WeilCandidate& wc) {
  CandidateReport c;
  c.coeffs = wc.coeffs;
  c.sign = wc.sign;
  const CyclotomicProfile prof = cyclotomic_profile(wc.coeffs, BigInt(wc.p));
  c.rho_upper = prof.rho_upper;
  c.cyclotomic = prof.factors;
  c.m_lcm = prof.m_lcm;
  c.ordinary = ordinarity_check(wc.coeffs, wc.p);
  const IPoly pm = power_char_poly(wc.coeffs, prof.m_lcm);
  BigInt qm = 1;
  for (uint32_t i = 0; i < prof.m_lcm; ++i) qm *= wc.p;
  c.delta = artin_tate_squareclass(pm, qm, prof.rho_upper).delta;
  return c;
}

bool same_candidates(const std::vector<WeilCandidate>& a,
                     const std::vector<WeilCandidate>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].sign != b[i].sign || a[i].coeffs != b[i].coeffs) return false;
  return true;
}

void validate_config(const RunConfig& config) {
  if (config.max_ext < 1)
    throw std::invalid_argument("max extension degree must be >= 1");
  if (config.rho_low < 1) throw std::invalid_argument("rho_low must be >= 1");
  if (config.rho_low > 22) throw std::invalid_argument("rho_low cannot exceed 22");
  if (config.d_low < 1) throw std::invalid_argument("d_low must be >= 1");
  if (config.known_rank < 1 || config.known_rank > 22)
    throw std::invalid_argument("known factor multiplicity must be in [1, 22]");
  if (config.workers < 1) throw std::invalid_argument("workers must be >= 1");
  std::set<uint32_t> seen;
  for (uint32_t p : config.primes) {
    if (!seen.insert(p).second)
      throw std::invalid_argument("primes must be distinct: " + std::to_string(p) +
                                  " repeats");
    if (p < 2 || !is_prime(BigInt(p)))
      throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
    // p^max_ext must stay within the field-table ceiling
    uint64_t q = 1;
    for (unsigned i = 0; i < config.max_ext; ++i) {
      q *= p;
      if (q > FieldTable::kDefaultCeiling)
        throw std::invalid_argument(
            "p^n exceeds the field ceiling at p = " + std::to_string(p) +
            ", n = " + std::to_string(i + 1) + " (ceiling 2^22)");
    }
  }
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  validate_config(config);
  const QuarticSurface surface = config.surface_text.empty()
                                     ? load_surface_file(config.surface_path)
                                     : parse_surface(config.surface_text);
  PipelineResult result;
  Report& rep = result.report;
  rep.surface_id = surface.id;
  rep.surface_hash = content_hash(surface);
  rep.inputs.rho_low = config.rho_low;
  rep.inputs.d_low = config.d_low;
  if (!config.rho_low_justification.empty())
    rep.inputs.justifications.push_back("rho_low: " + config.rho_low_justification);
  if (!config.d_low_justification.empty())
    rep.inputs.justifications.push_back("d_low: " + config.d_low_justification);

  CountCache cache(config.cache_dir);
  std::vector<PrimeEvidence> evidence;
  std::vector<std::string> prime_notes;
  std::vector<uint32_t> bounded_smooth_primes;

  for (uint32_t p : config.primes) {
    PrimeReport pr;
    pr.p = p;
    const SurfaceModP reduced = reduce_mod_p(surface, p);
    const SmoothnessStatus smooth = check_smooth(reduced, config.smooth_kmax);
    pr.smoothness = smoothness_string(smooth);
    if (smooth.kind == SmoothnessKind::kCertifiedSingular) {
      result.log.push_back("p = " + std::to_string(p) +
                           ": dropped, reduction is certified singular (" +
                           pr.smoothness + ")");
      rep.primes.push_back(std::move(pr));
      continue;
    }

    PointCountRecord record;
    record.p = p;
    record.surface_id = surface.id;
    record.surface_hash = rep.surface_hash;
    ReconstructOutcome outcome;
    std::vector<WeilCandidate> previous;
    bool have_previous = false;
    bool trace_failure = false;
    for (uint32_t n = 1; n <= config.max_ext; ++n) {
      uint64_t count = 0;
      const auto cached = cache.lookup(rep.surface_hash, p, n);
      if (cached.has_value()) {
        count = *cached;
        result.log.push_back("p = " + std::to_string(p) + ", n = " +
                             std::to_string(n) + ": cache hit, N = " +
                             std::to_string(count));
      } else {
        CountOptions opt;
        opt.workers = config.workers;
        count = count_points(reduced, n, opt);
        cache.store(rep.surface_hash, p, n, count);
        result.log.push_back("p = " + std::to_string(p) + ", n = " +
                             std::to_string(n) + ": counted, N = " +
                             std::to_string(count));
      }
      record.entries.push_back({n, count, 0});
      try {
        fill_traces(record);
      } catch (const std::runtime_error& e) {
        prime_notes.push_back("p = " + std::to_string(p) +
                              ": dropped, trace bound violated (" + e.what() +
                              "); the reduction is likely singular");
        result.log.push_back(prime_notes.back());
        trace_failure = true;
        break;
      }
      outcome = reconstruct(record, config.known_rank, config.sign_policy);
      if (config.full_counts) continue;
      if (outcome.candidates.size() == 1) {
        result.log.push_back("p = " + std::to_string(p) +
                             ": unique candidate after n = " + std::to_string(n) +
                             ", stopping early");
        break;
      }
      if (!outcome.candidates.empty() && have_previous &&
          same_candidates(outcome.candidates, previous)) {
        result.log.push_back("p = " + std::to_string(p) +
                             ": candidates stabilized after n = " +
                             std::to_string(n) + ", stopping early");
        break;
      }
      if (outcome.need_more_traces > config.max_ext) {
        result.log.push_back(
            "p = " + std::to_string(p) + ": reconstruction needs n >= " +
            std::to_string(outcome.need_more_traces) +
            " which exceeds the configured maximum, stopping");
        break;
      }
      previous = outcome.candidates;
      have_previous = true;
    }
    pr.counts = record.entries;
    if (trace_failure) {
      pr.candidates.clear();
      rep.primes.push_back(std::move(pr));
      continue;
    }
    if (!outcome.inconsistency.empty()) {
      prime_notes.push_back("p = " + std::to_string(p) +
                            ": INCONSISTENT - " + outcome.inconsistency);
      result.log.push_back(prime_notes.back());
    } else if (outcome.candidates.empty() && outcome.need_more_traces > 0) {
      prime_notes.push_back(
          "p = " + std::to_string(p) + ": no candidates, reconstruction needs n >= " +
          std::to_string(outcome.need_more_traces) +
          "; the prime contributes no upper bound");
      result.log.push_back(prime_notes.back());
    }
    PrimeEvidence ev;
    ev.p = p;
    for (const WeilCandidate& wc : outcome.candidates) {
      pr.candidates.push_back(process_candidate(wc));
      ev.candidates.push_back({pr.candidates.back().sign,
                               pr.candidates.back().rho_upper,
                               pr.candidates.back().delta,
                               pr.candidates.back().ordinary});
    }
    if (!ev.candidates.empty()) {
      evidence.push_back(std::move(ev));
      if (smooth.kind == SmoothnessKind::kNoSingularPointUpToDegree)
        bounded_smooth_primes.push_back(p);
    }
    rep.primes.push_back(std::move(pr));
  }

  const PicardVerdict verdict = combine_verdict(config.rho_low, config.d_low, evidence);
  rep.verdict_rho_low = verdict.rho_low;
  rep.verdict_rho_high = verdict.rho_high;
  rep.verdict_exact = verdict.exact;

  rep.assumptions = verdict.assumptions;
  if (!verdict.refinement.empty()) rep.assumptions.push_back(verdict.refinement);
  if (verdict.inconsistent)
    rep.assumptions.push_back("INCONSISTENT: " + verdict.inconsistency);
  if (!bounded_smooth_primes.empty()) {
    std::string used = "good reduction assumed from smooth reduction of the given model at p =";
    for (size_t i = 0; i < bounded_smooth_primes.size(); ++i)
      used += (i == 0 ? " " : ", ") + std::to_string(bounded_smooth_primes[i]);
    rep.assumptions.push_back(used);
    rep.assumptions.push_back(kSmoothnessCaveat);
  }
  if (config.known_rank > 1)
    rep.assumptions.push_back(
        "user-asserted known factor (1 - pT)^" + std::to_string(config.known_rank) +
        ": candidates are conditional on that multiplicity");
  for (const std::string& note : prime_notes) rep.assumptions.push_back(note);
  return result;
}

VerifyResult verify_report(const Report& rep) {
  VerifyResult out;
  const auto issue = [&out](const std::string& where, const std::string& message) {
    out.issues.push_back({where, message});
  };

  std::vector<PrimeEvidence> evidence;
  for (const PrimeReport& pr : rep.primes) {
    const std::string where = "p = " + std::to_string(pr.p);
    if (!is_prime(BigInt(pr.p))) {
      issue(where, "not a prime");
      continue;
    }
    bool counts_ok = true;
    for (size_t i = 0; i < pr.counts.size(); ++i) {
      const CountEntry& e = pr.counts[i];
      if (e.n != i + 1) {
        issue(where, "counts are not contiguous from n = 1");
        counts_ok = false;
        break;
      }
      try {
        const int64_t t = lefschetz_trace(pr.p, e.n, e.count);
        if (t != e.trace)
          issue(where + ", n = " + std::to_string(e.n),
                "stored trace " + std::to_string(e.trace) +
                    " but the count gives " + std::to_string(t));
      } catch (const std::runtime_error& ex) {
        issue(where + ", n = " + std::to_string(e.n), ex.what());
        counts_ok = false;
      }
    }
    if (!pr.candidates.empty()) {
      if (!counts_ok || pr.counts.empty()) {
        issue(where, "candidates present but counts unusable");
        continue;
      }
      PointCountRecord record;
      record.p = pr.p;
      record.surface_id = rep.surface_id;
      record.surface_hash = rep.surface_hash;
      record.entries = pr.counts;
      unsigned inferred = 22;
      for (const CandidateReport& c : pr.candidates)
        inferred = std::min(inferred, linear_factor_multiplicity(c.coeffs, pr.p));
      if (inferred < 1) {
        issue(where, "a candidate lacks the mandatory (1 - pT) factor");
        continue;
      }
      out.log.push_back(where + ": re-deriving with known factor multiplicity " +
                        std::to_string(inferred));
      for (int sign : {1, -1}) {
        std::vector<const CandidateReport*> stored;
        for (const CandidateReport& c : pr.candidates)
          if (c.sign == sign) stored.push_back(&c);
        if (stored.empty()) continue;
        ReconstructOutcome reout;
        try {
          reout = reconstruct(record, inferred,
                              sign > 0 ? SignPolicy::kForcePlus
                                       : SignPolicy::kForceMinus);
        } catch (const std::exception& ex) {
          issue(where, std::string("reconstruction failed: ") + ex.what());
          continue;
        }
        if (reout.candidates.size() != stored.size()) {
          issue(where, "sign " + std::to_string(sign) + ": stored " +
                           std::to_string(stored.size()) +
                           " candidate(s) but re-derivation gives " +
                           std::to_string(reout.candidates.size()));
          continue;
        }
        for (size_t i = 0; i < stored.size(); ++i)
          if (reout.candidates[i].coeffs != stored[i]->coeffs)
            issue(where, "sign " + std::to_string(sign) +
                             ": re-derived coefficients differ from the report");
      }
      for (size_t ci = 0; ci < pr.candidates.size(); ++ci) {
        const CandidateReport& c = pr.candidates[ci];
        const std::string cw =
            where + ", candidate " + std::to_string(ci) + " (sign " +
            std::to_string(c.sign) + ")";
        try {
          WeilCandidate wc;
          wc.p = pr.p;
          wc.coeffs = c.coeffs;
          wc.sign = c.sign;
          const CandidateReport fresh = process_candidate(wc);
          if (fresh.rho_upper != c.rho_upper)
            issue(cw, "rho_upper recomputes to " + std::to_string(fresh.rho_upper));
          if (fresh.cyclotomic != c.cyclotomic)
            issue(cw, "cyclotomic profile differs on recomputation");
          if (fresh.m_lcm != c.m_lcm)
            issue(cw, "m_lcm recomputes to " + std::to_string(fresh.m_lcm));
          if (fresh.ordinary != c.ordinary)
            issue(cw, "ordinarity recomputes differently");
          if (fresh.delta != c.delta)
            issue(cw, "delta recomputes to " + fresh.delta.str());
        } catch (const std::exception& ex) {
          issue(cw, std::string("recomputation failed: ") + ex.what());
        }
      }
      PrimeEvidence ev;
      ev.p = pr.p;
      for (const CandidateReport& c : pr.candidates)
        ev.candidates.push_back({c.sign, c.rho_upper, c.delta, c.ordinary});
      evidence.push_back(std::move(ev));
    }
  }
  try {
    const PicardVerdict v =
        combine_verdict(rep.inputs.rho_low, rep.inputs.d_low, evidence);
    if (v.rho_low != rep.verdict_rho_low || v.rho_high != rep.verdict_rho_high ||
        v.exact != rep.verdict_exact)
      issue("verdict", "recomputed verdict (" + std::to_string(v.rho_low) + ", " +
                           std::to_string(v.rho_high) + ", " +
                           (v.exact ? "exact" : "open") +
                           ") differs from the stored one");
  } catch (const std::exception& ex) {
    issue("verdict", std::string("recombination failed: ") + ex.what());
  }
  out.ok = out.issues.empty();
  return out;
}

}  // namespace k3p
