#include "k3p/weil.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>

namespace k3p {

BigInt bigpow(const BigInt& base, unsigned e) {
  BigInt r = 1, b = base;
  while (e != 0) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

std::vector<BigInt> newton_coefficients(const std::vector<BigInt>& traces) {
  try {
    return coeffs_from_power_sums(traces);
  } catch (const std::invalid_argument& e) {
    throw ReconstructionError(std::string("traces admit no integer polynomial: ") +
                              e.what());
  }
}

IPoly divide_known_factor(const IPoly& prefix, const IPoly& factor, unsigned mult,
                          unsigned full_degree) {
  if (prefix.empty() || prefix[0] != 1)
    throw std::invalid_argument("divide_known_factor: prefix must start with 1");
  if (factor.empty() || factor[0] != 1)
    throw std::invalid_argument("divide_known_factor: factor must have constant term 1");
  if (prefix.size() > static_cast<size_t>(full_degree) + 1)
    throw std::invalid_argument("divide_known_factor: prefix longer than full degree");
  const IPoly divisor = ipoly_pow(factor, mult);
  const int ddeg = degree(divisor);
  if (static_cast<unsigned>(ddeg) > full_degree)
    throw std::invalid_argument("divide_known_factor: factor power exceeds full degree");
  const unsigned quot_degree = full_degree - static_cast<unsigned>(ddeg);

  const size_t m = prefix.size() - 1;  // highest known index of the dividend
  std::vector<BigInt> q(m + 1);
  for (size_t i = 0; i <= m; ++i) {
    BigInt v = prefix[i];
    const size_t jmax = std::min(i, static_cast<size_t>(ddeg));
    for (size_t j = 1; j <= jmax; ++j) v -= divisor[j] * q[i - j];
    q[i] = v;
    if (i > quot_degree && v != 0)
      throw ReconstructionError(
          "imposed factor does not divide the trace polynomial (coefficient " +
          std::to_string(i) + " of the quotient is nonzero past its degree)");
  }
  q.resize(std::min(m, static_cast<size_t>(quot_degree)) + 1);
  return q;
}

IPoly complete_by_functional_equation(const IPoly& prefix, const BigInt& q, int sign,
                                      unsigned d) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("complete_by_functional_equation: sign must be +1/-1");
  if (prefix.empty() || prefix[0] != 1)
    throw std::invalid_argument("complete_by_functional_equation: prefix must start with 1");
  if (prefix.size() > static_cast<size_t>(d) + 1)
    throw std::invalid_argument("complete_by_functional_equation: prefix exceeds degree");
  if (d == 0) {
    if (sign < 0)
      throw ReconstructionError("sign -1 forces the constant coefficient to vanish");
    return {BigInt(1)};
  }
  const unsigned m = static_cast<unsigned>(prefix.size()) - 1;
  const unsigned half = d / 2;
  const unsigned needed =
      (d % 2 == 0) ? (sign > 0 ? half : half - 1) : half;
  if (m < needed) throw InsufficientTraces(needed);

  IPoly full(d + 1, BigInt(0));
  for (unsigned i = 0; i <= m; ++i) full[i] = prefix[i];
  if (d % 2 == 0 && sign < 0) {
    if (m >= half && full[half] != 0)
      throw ReconstructionError(
          "sign -1 forces the middle coefficient to vanish, but the traces give " +
          full[half].str());
    full[half] = 0;
  }
  for (unsigned i = 0; i < d - i; ++i) {
    const unsigned j = d - i;
    const BigInt v = sign * bigpow(q, d - 2 * i) * full[i];
    if (j <= m && prefix[j] != v)
      throw ReconstructionError(
          "functional equation contradicts trace coefficient " + std::to_string(j) +
          " (" + prefix[j].str() + " vs " + v.str() + ")");
    full[j] = v;
  }
  return full;
}

bool root_moduli_check(const IPoly& coeffs, uint32_t p, double tol) {
  const IPoly rad = ipoly_radical(coeffs);
  const int dr = degree(rad);
  if (dr <= 0) return dr == 0 && degree(coeffs) <= 0;

  // Roots of coeffs are 1/l; substitute T = u/p so genuine roots land on the
  // unit circle and the companion matrix stays well scaled.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dr, dr);
  const double lead = BigRat(rad[dr], bigpow(p, dr)).convert_to<double>();
  if (!std::isfinite(lead) || lead == 0.0) return false;
  for (int i = 0; i < dr; ++i) {
    const double bi = BigRat(rad[i], bigpow(p, static_cast<unsigned>(i))).convert_to<double>();
    if (!std::isfinite(bi)) return false;
    C(i, dr - 1) = -bi / lead;
    if (i + 1 < dr) C(i + 1, i) = 1.0;
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) return false;
  for (int i = 0; i < dr; ++i) {
    const double au = std::abs(es.eigenvalues()[i]);  // |u| = |p/l|, want 1
    if (!(au > 0.0) || !std::isfinite(au)) return false;
    const double lambda_abs = static_cast<double>(p) / au;
    if (std::abs(lambda_abs - static_cast<double>(p)) > tol) return false;
  }
  return true;
}

bool candidate_filter(const WeilCandidate& cand, const std::vector<BigInt>& traces,
                      std::vector<std::string>* reasons) {
  bool ok = true;
  auto fail = [&](const std::string& why) {
    ok = false;
    if (reasons != nullptr) reasons->push_back(why);
  };

  if (cand.sign != 1 && cand.sign != -1) fail("sign is not +1/-1");
  if (cand.coeffs.size() != 23 || cand.coeffs[0] != 1 || cand.coeffs[22] == 0) {
    fail("polynomial is not degree 22 with constant coefficient 1");
    return ok;  // the remaining checks assume the shape
  }
  const BigInt bp = cand.p;
  for (unsigned i = 0; i <= 11; ++i) {
    if (cand.coeffs[22 - i] != cand.sign * bigpow(bp, 22 - 2 * i) * cand.coeffs[i]) {
      fail("functional equation fails at coefficient " + std::to_string(22 - i));
      break;
    }
  }
  {
    IPoly rem = cand.coeffs;
    bool divides = true;
    for (unsigned j = 0; j < std::max(1u, cand.known_rank); ++j) {
      IPoly next;
      if (!ipoly_try_divide(rem, IPoly{BigInt(1), BigInt(-int64_t(cand.p))}, &next)) {
        divides = false;
        break;
      }
      rem = next;
    }
    if (!divides)
      fail("(1 - pT)^" + std::to_string(std::max(1u, cand.known_rank)) +
           " does not divide the candidate");
  }
  if (!traces.empty()) {
    const auto ps = power_sums_from_coeffs(cand.coeffs, static_cast<unsigned>(traces.size()));
    for (size_t i = 0; i < traces.size(); ++i) {
      if (ps[i] != traces[i]) {
        fail("trace " + std::to_string(i + 1) + " not reproduced (" + ps[i].str() +
             " vs " + traces[i].str() + ")");
        break;
      }
    }
  }
  if (!root_moduli_check(cand.coeffs, cand.p)) fail("a root modulus is off the p circle");
  return ok;
}

ReconstructOutcome reconstruct(const PointCountRecord& rec, unsigned known_rank,
                               SignPolicy policy) {
  if (known_rank < 1 || known_rank > 22)
    throw std::invalid_argument("reconstruct: known_rank must lie in [1, 22]");
  const unsigned N = static_cast<unsigned>(rec.entries.size());
  for (unsigned i = 0; i < N; ++i)
    if (rec.entries[i].n != i + 1)
      throw std::invalid_argument("reconstruct: count record must cover n = 1..N");

  ReconstructOutcome out;
  std::vector<BigInt> traces;
  traces.reserve(N);
  for (const auto& e : rec.entries) traces.emplace_back(e.trace);

  const unsigned dq = 22 - known_rank;  // degree of the unknown quotient
  const IPoly lin{BigInt(1), BigInt(-int64_t(rec.p))};

  IPoly qprefix;
  try {
    const unsigned m = std::min(N, 22u);
    std::vector<BigInt> head(traces.begin(), traces.begin() + m);
    IPoly cp{BigInt(1)};
    const auto cs = newton_coefficients(head);
    cp.insert(cp.end(), cs.begin(), cs.end());
    qprefix = divide_known_factor(cp, lin, known_rank, 22);
  } catch (const ReconstructionError& e) {
    out.inconsistency = e.what();
    return out;
  }

  unsigned short_needed = 0;  // largest trace requirement among short signs
  for (const int sign : {+1, -1}) {
    if (policy == SignPolicy::kForcePlus && sign != 1) continue;
    if (policy == SignPolicy::kForceMinus && sign != -1) continue;
    const int qsign = (known_rank % 2 == 0) ? sign : -sign;
    try {
      const IPoly qfull = complete_by_functional_equation(qprefix, BigInt(rec.p), qsign, dq);
      WeilCandidate cand;
      cand.p = rec.p;
      cand.coeffs = ipoly_mul(qfull, ipoly_pow(lin, known_rank));
      cand.sign = sign;
      cand.known_rank = known_rank;
      cand.traces_used = N;
      if (candidate_filter(cand, traces)) out.candidates.push_back(std::move(cand));
    } catch (const InsufficientTraces& e) {
      short_needed = std::max(short_needed, e.required);
    } catch (const ReconstructionError&) {
      // this sign cannot hold; the other may
    }
  }

  if (out.candidates.size() == 2 && out.candidates[0].coeffs == out.candidates[1].coeffs)
    throw std::logic_error("reconstruct: both signs produced the same polynomial");
  if (short_needed > 0) {
    // Some allowed sign could not even be attempted, so any candidates found
    // for the other sign would be a non-exhaustive answer.
    out.candidates.clear();
    out.need_more_traces = short_needed;
  } else if (out.candidates.empty()) {
    out.inconsistency =
        "no sign choice survives the functional equation and trace filters";
  }
  return out;
}

}  // namespace k3p
