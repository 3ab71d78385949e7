#include "k3p/surface.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace k3p {

namespace {

// Graded reverse lexicographic comparison on exponent vectors of equal total
// degree: u precedes v when the last nonzero entry of u - v is negative.
bool grevlex_greater(const std::array<int, 4>& u, const std::array<int, 4>& v) {
  for (int i = 3; i >= 0; --i) {
    int d = u[i] - v[i];
    if (d != 0) return d < 0;
  }
  return false;
}

std::array<std::array<int, 4>, kQuarticMonomialCount> build_monomials() {
  std::array<std::array<int, 4>, kQuarticMonomialCount> mons;
  int k = 0;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      for (int c = 0; a + b + c <= 4; ++c)
        mons[k++] = {a, b, c, 4 - a - b - c};
  std::sort(mons.begin(), mons.end(), grevlex_greater);
  return mons;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

const std::array<std::array<int, 4>, kQuarticMonomialCount>& quartic_monomials() {
  static const auto mons = build_monomials();
  return mons;
}

int monomial_index(int a, int b, int c, int d) {
  if (a < 0 || b < 0 || c < 0 || d < 0 || a + b + c + d != 4) return -1;
  const auto& mons = quartic_monomials();
  std::array<int, 4> e = {a, b, c, d};
  for (int i = 0; i < kQuarticMonomialCount; ++i)
    if (mons[i] == e) return i;
  return -1;
}

QuarticSurface parse_surface(const std::string& text) {
  QuarticSurface s;
  std::array<bool, kQuarticMonomialCount> seen{};
  bool saw_monomial = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("id:", 0) == 0) {
      if (saw_monomial)
        throw std::invalid_argument("surface line " + std::to_string(lineno) +
                                    ": id line must precede monomial lines");
      if (!s.id.empty())
        throw std::invalid_argument("surface line " + std::to_string(lineno) +
                                    ": duplicate id line");
      s.id = trim(line.substr(3));
      continue;
    }
    std::istringstream ls(line);
    int a, b, c, d;
    std::string colon, coeff_str;
    if (!(ls >> a >> b >> c >> d >> colon) || colon != ":" || !(ls >> coeff_str))
      throw std::invalid_argument("surface line " + std::to_string(lineno) +
                                  ": expected 'a b c d : coefficient'");
    std::string extra;
    if (ls >> extra)
      throw std::invalid_argument("surface line " + std::to_string(lineno) +
                                  ": trailing tokens after coefficient");
    int idx = monomial_index(a, b, c, d);
    if (idx < 0)
      throw std::invalid_argument("surface line " + std::to_string(lineno) +
                                  ": exponents must be nonnegative and sum to 4");
    if (seen[idx])
      throw std::invalid_argument("surface line " + std::to_string(lineno) +
                                  ": duplicate monomial");
    seen[idx] = true;
    saw_monomial = true;
    try {
      s.coeffs[idx] = BigInt(coeff_str);
    } catch (const std::exception&) {
      throw std::invalid_argument("surface line " + std::to_string(lineno) +
                                  ": bad integer coefficient '" + coeff_str + "'");
    }
  }

  // Normalize: divide by the content, make the first nonzero coefficient in
  // canonical order positive.
  BigInt content = 0;
  for (const BigInt& c : s.coeffs) {
    BigInt x = c < 0 ? BigInt(-c) : c;
    while (x != 0) {
      BigInt t = content % x;
      content = x;
      x = t;
    }
  }
  if (content == 0) throw std::invalid_argument("surface is the zero polynomial");
  for (const BigInt& c : s.coeffs) {
    if (c == 0) continue;
    if (c < 0) content = -content;
    break;
  }
  for (BigInt& c : s.coeffs) c /= content;
  return s;
}

QuarticSurface load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open surface file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_surface(buf.str());
}

std::string print_surface(const QuarticSurface& s) {
  std::ostringstream out;
  if (!s.id.empty()) out << "id: " << s.id << "\n";
  const auto& mons = quartic_monomials();
  for (int i = 0; i < kQuarticMonomialCount; ++i) {
    if (s.coeffs[i] == 0) continue;
    out << mons[i][0] << " " << mons[i][1] << " " << mons[i][2] << " "
        << mons[i][3] << " : " << s.coeffs[i] << "\n";
  }
  return out.str();
}

std::string content_hash(const QuarticSurface& s) {
  QuarticSurface anon = s;
  anon.id.clear();
  std::string body = print_surface(anon);
  uint64_t h = 14695981039346656037ull;  // FNV-1a 64-bit
  for (unsigned char ch : body) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

SurfaceModP reduce_mod_p(const QuarticSurface& s, uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("reduce_mod_p: p must be prime");
  SurfaceModP r;
  r.p = p;
  bool any = false;
  for (int i = 0; i < kQuarticMonomialCount; ++i) {
    BigInt m = s.coeffs[i] % p;
    if (m < 0) m += p;
    r.coeffs[i] = m.convert_to<uint32_t>();
    any = any || r.coeffs[i] != 0;
  }
  if (!any)
    throw std::logic_error(
        "reduce_mod_p: surface vanished mod p; input was not content-normalized");
  return r;
}

const char kSmoothnessCaveat[] =
    "smoothness of the reduction was only searched over bounded-degree "
    "extensions; absence of a singular point up to the reported degree is "
    "not a smoothness proof";

namespace {

struct SparseTerm {
  std::array<int, 4> e;
  uint32_t c;
};

std::vector<SparseTerm> sparse_terms(const SurfaceModP& s) {
  std::vector<SparseTerm> t;
  const auto& mons = quartic_monomials();
  for (int i = 0; i < kQuarticMonomialCount; ++i)
    if (s.coeffs[i] != 0) t.push_back({mons[i], s.coeffs[i]});
  return t;
}

std::vector<SparseTerm> partial_terms(const std::vector<SparseTerm>& f, uint32_t p, int var) {
  std::vector<SparseTerm> t;
  for (const SparseTerm& term : f) {
    if (term.e[var] == 0) continue;
    uint32_t c = static_cast<uint32_t>(
        (static_cast<uint64_t>(term.c) * static_cast<uint32_t>(term.e[var])) % p);
    if (c == 0) continue;
    SparseTerm d = term;
    d.e[var] -= 1;
    d.c = c;
    t.push_back(d);
  }
  return t;
}

GF eval_terms(const std::vector<SparseTerm>& terms, const FieldTable& F,
              const std::array<std::array<GF, 5>, 4>& pows) {
  GF acc = 0;
  for (const SparseTerm& t : terms) {
    // Coefficients live in [0, p), which is exactly the prime-subfield
    // encoding inside any extension table.
    GF v = F.mul(F.mul(F.mul(F.mul(t.c, pows[0][t.e[0]]), pows[1][t.e[1]]), pows[2][t.e[2]]),
                 pows[3][t.e[3]]);
    acc = F.add(acc, v);
  }
  return acc;
}

std::array<std::array<GF, 5>, 4> coordinate_powers(const FieldTable& F,
                                                   const std::array<GF, 4>& pt) {
  std::array<std::array<GF, 5>, 4> pows;
  for (int v = 0; v < 4; ++v) {
    pows[v][0] = 1;
    for (int e = 1; e <= 4; ++e) pows[v][e] = F.mul(pows[v][e - 1], pt[v]);
  }
  return pows;
}

}  // namespace

GF eval_surface(const SurfaceModP& s, const FieldTable& F, const std::array<GF, 4>& pt) {
  return eval_terms(sparse_terms(s), F, coordinate_powers(F, pt));
}

GF eval_partial(const SurfaceModP& s, const FieldTable& F, int var,
                const std::array<GF, 4>& pt) {
  return eval_terms(partial_terms(sparse_terms(s), s.p, var), F, coordinate_powers(F, pt));
}

SmoothnessStatus check_smooth(const SurfaceModP& s, uint32_t k_max, uint64_t point_budget) {
  SmoothnessStatus status;
  status.kind = SmoothnessKind::kUnchecked;
  status.degree_checked = 0;

  std::vector<SparseTerm> f = sparse_terms(s);
  std::array<std::vector<SparseTerm>, 4> df;
  for (int v = 0; v < 4; ++v) df[v] = partial_terms(f, s.p, v);

  uint64_t spent = 0;
  for (uint32_t m = 1; m <= k_max; ++m) {
    // q = p^m against the table ceiling, without overflow.
    uint64_t q64 = 1;
    bool too_big = false;
    for (uint32_t i = 0; i < m; ++i) {
      q64 *= s.p;
      if (q64 > FieldTable::kDefaultCeiling) {
        too_big = true;
        break;
      }
    }
    if (too_big) break;
    uint64_t q = q64;
    uint64_t points = q * q * q + q * q + q + 1;
    if (spent + points > point_budget) break;
    spent += points;

    FieldTable F(s.p, m);
    // The four standard charts of P^3: leading coordinates pinned to
    // (1), (0,1), (0,0,1), (0,0,0,1), remaining coordinates free.
    auto scan_chart = [&](int chart) -> std::optional<std::array<GF, 4>> {
      std::array<GF, 4> pt{};
      for (int v = 0; v < chart; ++v) pt[v] = 0;
      pt[chart] = 1;
      int free_from = chart + 1;
      uint64_t combos = 1;
      for (int v = free_from; v < 4; ++v) combos *= q;
      for (uint64_t idx = 0; idx < combos; ++idx) {
        uint64_t rest = idx;
        for (int v = 3; v >= free_from; --v) {
          pt[v] = static_cast<GF>(rest % q);
          rest /= q;
        }
        auto pows = coordinate_powers(F, pt);
        if (eval_terms(f, F, pows) != 0) continue;
        bool singular = true;
        for (int v = 0; v < 4 && singular; ++v)
          singular = eval_terms(df[v], F, pows) == 0;
        if (singular) return pt;
      }
      return std::nullopt;
    };

    for (int chart = 0; chart < 4; ++chart) {
      if (auto pt = scan_chart(chart)) {
        status.kind = SmoothnessKind::kCertifiedSingular;
        status.degree_checked = m;
        status.witness = SingularWitness{m, {(*pt)[0], (*pt)[1], (*pt)[2], (*pt)[3]}};
        return status;
      }
    }
    status.kind = SmoothnessKind::kNoSingularPointUpToDegree;
    status.degree_checked = m;
  }
  return status;
}

}  // namespace k3p
