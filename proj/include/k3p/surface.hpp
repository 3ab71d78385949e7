// Quartic surfaces in P^3 over Q: parsing, canonical form, reduction mod p,
// and a bounded search for singular points of the reduction.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "k3p/gf.hpp"
#include "k3p/numth.hpp"

namespace k3p {

inline constexpr int kQuarticMonomialCount = 35;

// Exponent vectors (a,b,c,d) with a+b+c+d = 4 in graded reverse lexicographic
// order with x > y > z > w.  This order is the canonical coefficient order for
// files, hashes, and reports.
const std::array<std::array<int, 4>, kQuarticMonomialCount>& quartic_monomials();

// Index of (a,b,c,d) in the canonical order; -1 if not a quartic monomial.
int monomial_index(int a, int b, int c, int d);

struct QuarticSurface {
  std::string id;
  std::array<BigInt, kQuarticMonomialCount> coeffs{};
};

// Parses the text surface format: '#' comment lines, an optional leading
// "id: <label>" line, then "a b c d : c" monomial lines in any order.
// The result is normalized: content divided out, first nonzero coefficient
// in canonical order positive.  Throws std::invalid_argument on malformed
// input, exponents not summing to 4, duplicate monomials, or the zero
// polynomial.
QuarticSurface parse_surface(const std::string& text);
QuarticSurface load_surface_file(const std::string& path);

// Canonical printer: id line (when nonempty), then nonzero monomials in
// canonical order.  parse(print(S)) == S for normalized S.
std::string print_surface(const QuarticSurface& s);

// FNV-1a 64-bit hash (hex) of the canonical monomial lines; the id label is
// excluded so renaming a surface does not invalidate cached counts.
std::string content_hash(const QuarticSurface& s);

struct SingularWitness {
  uint32_t extension_degree = 0;           // witness lives over F_{p^m}
  std::array<uint32_t, 4> point{};         // field elements in table encoding
};

enum class SmoothnessKind {
  kUnchecked,
  kCertifiedSingular,
  kNoSingularPointUpToDegree,
};

struct SmoothnessStatus {
  SmoothnessKind kind = SmoothnessKind::kUnchecked;
  uint32_t degree_checked = 0;
  std::optional<SingularWitness> witness;
};

struct SurfaceModP {
  uint32_t p = 0;
  std::array<uint32_t, kQuarticMonomialCount> coeffs{};
  SmoothnessStatus smoothness;
};

// Coefficientwise reduction into [0, p).  Rejects non-prime p; a normalized
// surface can never reduce to zero (content 1), which is asserted.
SurfaceModP reduce_mod_p(const QuarticSurface& s, uint32_t p);

// Wording carried verbatim into reports whenever smoothness was only
// established by the bounded search below.
extern const char kSmoothnessCaveat[];

// Searches for a common projective zero of f and its four partials over
// F_{p^m} for m = 1..k_max.  Enumeration stops before any extension whose
// point total would push the cumulative work past point_budget (or whose
// field exceeds the table ceiling); degree_checked reports the deepest fully
// searched extension.  A found witness certifies a singular reduction; the
// negative outcome is a bounded search, never a smoothness proof.
SmoothnessStatus check_smooth(const SurfaceModP& s, uint32_t k_max,
                              uint64_t point_budget = 100000000ull);

// Evaluation of f and its partials at a point with coordinates in the table
// encoding of F (used for witness re-verification and tests).
GF eval_surface(const SurfaceModP& s, const FieldTable& F, const std::array<GF, 4>& pt);
GF eval_partial(const SurfaceModP& s, const FieldTable& F, int var, const std::array<GF, 4>& pt);

}  // namespace k3p
