#include "k3p/bounds.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "k3p/weil.hpp"

namespace k3p {

namespace {

// P(T/q) cleared of denominators: coefficient i becomes c_i * q^(d-i).  Roots
// are q/l_i, so Tate-type eigenvalues l = q*zeta become roots of unity.
IPoly unit_normalized(const IPoly& coeffs, const BigInt& q) {
  const int d = degree(coeffs);
  if (d < 0) throw std::invalid_argument("unit_normalized: zero polynomial");
  IPoly out(coeffs.size());
  for (int i = 0; i <= d; ++i)
    out[i] = coeffs[i] * bigpow(q, static_cast<unsigned>(d - i));
  return out;
}

using Mat = std::vector<BigInt>;  // dense row-major d x d

Mat mat_mul(const Mat& a, const Mat& b, int d) {
  Mat c(static_cast<size_t>(d) * d, BigInt(0));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const BigInt& aik = a[static_cast<size_t>(i) * d + k];
      if (aik == 0) continue;
      for (int j = 0; j < d; ++j)
        c[static_cast<size_t>(i) * d + j] += aik * b[static_cast<size_t>(k) * d + j];
    }
  return c;
}

}  // namespace

CyclotomicProfile cyclotomic_profile(const IPoly& coeffs, const BigInt& q) {
  if (degree(coeffs) != 22 || coeffs[0] != 1)
    throw std::invalid_argument("cyclotomic_profile: expected degree 22 with c_0 = 1");
  IPoly rem = unit_normalized(coeffs, q);

  CyclotomicProfile prof;
  uint64_t ml = 1;
  for (const uint32_t m : cyclotomic_orders(22)) {
    const IPoly phi = cyclotomic(m);
    unsigned e = 0;
    IPoly quot;
    while (ipoly_try_divide(rem, phi, &quot)) {
      rem = quot;
      ++e;
    }
    if (e > 0) {
      prof.factors.emplace_back(m, e);
      prof.rho_upper += e * static_cast<unsigned>(degree(phi));
      ml = std::lcm<uint64_t>(ml, m);
    }
  }
  prof.remainder_degree = static_cast<unsigned>(degree(rem));
  prof.m_lcm = static_cast<uint32_t>(ml);
  if (prof.rho_upper + prof.remainder_degree != 22)
    throw std::logic_error("cyclotomic_profile: degrees do not add up");
  if (prof.rho_upper % 2 != 0)
    throw std::logic_error(
        "cyclotomic_profile: odd count of unit-circle eigenvalues; the "
        "functional equation forces evenness, so upstream data is corrupt");
  return prof;
}

IPoly power_char_poly(const IPoly& coeffs, unsigned m) {
  if (coeffs.empty() || coeffs[0] != 1)
    throw std::invalid_argument("power_char_poly: constant coefficient must be 1");
  if (m == 0) throw std::invalid_argument("power_char_poly: m must be >= 1");
  if (m == 1) return trimmed(coeffs);
  const int d = degree(coeffs);
  if (d <= 0) return {BigInt(1)};

  // Companion matrix of the reversed (monic, roots l_i) polynomial.
  Mat comp(static_cast<size_t>(d) * d, BigInt(0));
  for (int i = 0; i + 1 < d; ++i) comp[static_cast<size_t>(i + 1) * d + i] = 1;
  for (int i = 0; i < d; ++i)
    comp[static_cast<size_t>(i) * d + (d - 1)] = -coeffs[static_cast<size_t>(d - i)];

  // comp^m by binary powering.
  Mat pw;
  {
    Mat base = comp;
    unsigned e = m;
    bool have = false;
    while (e != 0) {
      if (e & 1u) {
        pw = have ? mat_mul(pw, base, d) : base;
        have = true;
      }
      e >>= 1;
      if (e != 0) base = mat_mul(base, base, d);
    }
  }

  // Power sums of the l_i^m are traces of successive powers; Newton back.
  std::vector<BigInt> sums;
  sums.reserve(static_cast<size_t>(d));
  Mat acc = pw;
  for (int j = 1; j <= d; ++j) {
    BigInt tr = 0;
    for (int i = 0; i < d; ++i) tr += acc[static_cast<size_t>(i) * d + i];
    sums.push_back(tr);
    if (j < d) acc = mat_mul(acc, pw, d);
  }
  IPoly out{BigInt(1)};
  const auto cs = coeffs_from_power_sums(sums);
  out.insert(out.end(), cs.begin(), cs.end());
  return out;
}

ArtinTateResult artin_tate_squareclass(const IPoly& pm, const BigInt& q, unsigned rho) {
  if (pm.empty() || pm[0] != 1)
    throw std::invalid_argument("artin_tate_squareclass: constant coefficient must be 1");
  if (rho < 1) throw std::invalid_argument("artin_tate_squareclass: rho must be >= 1");
  const IPoly lin{BigInt(1), -q};

  // Route one: repeated exact polynomial division.
  IPoly r1 = trimmed(pm);
  for (unsigned i = 0; i < rho; ++i) {
    IPoly quot;
    if (!ipoly_try_divide(r1, lin, &quot))
      throw std::runtime_error(
          "artin_tate_squareclass: (1 - qT)^rho does not exactly divide P_m");
    r1 = quot;
  }
  // Route two: bottom-up series division with its own exactness tail check.
  IPoly r2;
  try {
    r2 = trimmed(divide_known_factor(pm, lin, rho,
                                     static_cast<unsigned>(degree(pm))));
  } catch (const ReconstructionError& e) {
    throw std::runtime_error(std::string("artin_tate_squareclass: ") + e.what());
  }
  if (r1 != r2)
    throw std::logic_error("artin_tate_squareclass: the two division routes disagree");

  // R(1/q) as an exact rational via the reversed Horner evaluation.
  const int dr = degree(r1);
  BigInt num = 0;
  for (int i = 0; i <= dr; ++i) num = num * q + r1[static_cast<size_t>(i)];
  if (num == 0)
    throw std::runtime_error(
        "artin_tate_squareclass: R(1/q) = 0, so rho understates the multiplicity");

  ArtinTateResult res;
  res.remainder = r1;
  res.special = BigRat(num, bigpow(q, static_cast<unsigned>(dr)));
  const int sgn = (rho % 2 == 0) ? -1 : 1;  // (-1)^(rho-1)
  res.delta = squarefree_part(BigRat(sgn) * BigRat(q) * res.special);
  return res;
}

NewtonPolygon newton_polygon(const IPoly& coeffs, uint32_t p) {
  if (degree(coeffs) < 0)
    throw std::invalid_argument("newton_polygon: zero polynomial");
  std::vector<std::pair<unsigned, int64_t>> pts;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0)
      pts.emplace_back(static_cast<unsigned>(i),
                       static_cast<int64_t>(padic_valuation(coeffs[i], BigInt(p))));

  NewtonPolygon poly;
  auto& h = poly.vertices;
  for (const auto& pt : pts) {
    while (h.size() >= 2) {
      const auto& a = h[h.size() - 2];
      const auto& b = h[h.size() - 1];
      // pop b unless a -> b -> pt turns strictly left (keeps the lower hull)
      const int64_t cross =
          static_cast<int64_t>(b.first - a.first) * (pt.second - a.second) -
          (b.second - a.second) * static_cast<int64_t>(pt.first - a.first);
      if (cross <= 0)
        h.pop_back();
      else
        break;
    }
    h.push_back(pt);
  }
  return poly;
}

bool ordinarity_check(const IPoly& coeffs, uint32_t p) {
  const auto h = newton_polygon(coeffs, p).vertices;
  return h.size() >= 2 && h[0] == std::make_pair(0u, int64_t{0}) &&
         h[1] == std::make_pair(1u, int64_t{0});
}

PicardVerdict combine_verdict(unsigned rho_low, unsigned d_low,
                              const std::vector<PrimeEvidence>& evidence) {
  if (rho_low < 1) throw std::invalid_argument("combine_verdict: rho_low must be >= 1");
  if (d_low < 1) throw std::invalid_argument("combine_verdict: d_low must be >= 1");
  for (const auto& ev : evidence)
    if (ev.candidates.empty())
      throw std::invalid_argument("combine_verdict: evidence for p = " +
                                  std::to_string(ev.p) + " has no candidates");

  PicardVerdict v;
  v.rho_low = rho_low;

  unsigned rho_high = 22;
  for (const auto& ev : evidence) {
    unsigned bound = 0;
    for (const auto& c : ev.candidates) bound = std::max(bound, c.rho_upper);
    rho_high = std::min(rho_high, bound);
  }

  // Two primes pinning the same bound with provably different discriminant
  // square classes cannot both specialize a rank-rho_high lattice: drop once.
  const unsigned r = rho_high;
  auto pinned_at = [&](const PrimeEvidence& ev) {
    for (const auto& c : ev.candidates)
      if (c.rho_upper != r) return false;
    return true;
  };
  bool refined = false;
  for (size_t i = 0; i < evidence.size() && !refined; ++i) {
    if (!pinned_at(evidence[i])) continue;
    for (size_t j = i + 1; j < evidence.size() && !refined; ++j) {
      if (evidence[i].p == evidence[j].p || !pinned_at(evidence[j])) continue;
      bool disjoint = true;
      for (const auto& ci : evidence[i].candidates)
        for (const auto& cj : evidence[j].candidates)
          disjoint = disjoint && ci.delta != cj.delta;
      if (disjoint) {
        rho_high = r - std::min(r, d_low);
        refined = true;
        v.refinement = "square classes at p = " + std::to_string(evidence[i].p) +
                       " and p = " + std::to_string(evidence[j].p) +
                       " are disjoint, so the bound " + std::to_string(r) +
                       " drops by " + std::to_string(d_low);
      }
    }
  }

  v.rho_high = rho_high;
  if (rho_low > rho_high || rho_high < 1) {
    v.inconsistent = true;
    v.inconsistency = "lower bound " + std::to_string(rho_low) +
                      " exceeds the evidence upper bound " + std::to_string(rho_high) +
                      "; the supplied lower bound or an assumption is wrong";
    return v;
  }
  v.exact = (rho_low == rho_high);

  if (!evidence.empty()) {
    std::string tate = "upper bounds assume the Tate conjecture at p =";
    std::string unverified;
    for (const auto& ev : evidence) {
      tate += " " + std::to_string(ev.p);
      for (const auto& c : ev.candidates)
        if (!c.ordinary) {
          unverified += unverified.empty() ? "" : ", ";
          unverified += std::to_string(ev.p);
          break;
        }
    }
    v.assumptions.push_back(tate);
    v.assumptions.push_back(
        unverified.empty()
            ? "every reduction used is ordinary, where the Tate conjecture is known"
            : "ordinarity could not be verified at p = " + unverified +
                  ", so the Tate conjecture there is a genuine assumption");
  }
  if (refined)
    v.assumptions.push_back(
        "the square-class refinement uses the discriminant formula over the "
        "two named reductions and the asserted endomorphism degree >= " +
        std::to_string(d_low));
  if (v.exact)
    v.assumptions.push_back("exactness relies on the supplied lower bound rho >= " +
                            std::to_string(rho_low));
  return v;
}

}  // namespace k3p
