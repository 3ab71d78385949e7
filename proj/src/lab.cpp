#include "k3p/lab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace k3p {

namespace {

// ---------- rational polynomial arithmetic (dense, constant first) ----------

RPoly rtrim(RPoly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

int rdeg(const RPoly& f) { return static_cast<int>(f.size()) - 1; }

RPoly radd(const RPoly& a, const RPoly& b) {
  RPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return rtrim(std::move(out));
}

RPoly rsub(const RPoly& a, const RPoly& b) {
  RPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return rtrim(std::move(out));
}

RPoly rmul(const RPoly& a, const RPoly& b) {
  if (a.empty() || b.empty()) return {};
  RPoly out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return rtrim(std::move(out));
}

RPoly rscale(const RPoly& a, const BigRat& c) {
  if (c == 0) return {};
  RPoly out = a;
  for (auto& v : out) v *= c;
  return out;
}

// num = quot * den + rem with deg(rem) < deg(den); den nonzero.
void rdivmod(RPoly num, const RPoly& den, RPoly* quot, RPoly* rem) {
  const int dd = rdeg(den);
  RPoly q(num.size() > den.size() ? num.size() - den.size() + 1 : 1);
  while (rdeg(num) >= dd && !num.empty()) {
    const int shift = rdeg(num) - dd;
    const BigRat f = num.back() / den.back();
    q[shift] += f;
    for (int i = 0; i <= dd; ++i) num[shift + i] -= f * den[i];
    num = rtrim(std::move(num));
  }
  if (quot != nullptr) *quot = rtrim(std::move(q));
  if (rem != nullptr) *rem = std::move(num);
}

RPoly rpoly_of(const IPoly& f) {
  RPoly out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = BigRat(f[i]);
  return out;
}

// ---------- arithmetic in E = Q[x]/(g) ----------

struct FieldCtx {
  RPoly g;                    // monic, degree e
  unsigned e = 0;
  RPoly sigma;                // conjugation as a reduced polynomial in x
  std::vector<BigInt> s;      // power sums of the roots of g: s[0]=e, s[k]=tr(x^k)
};

RPoly emod(const RPoly& a, const FieldCtx& cx) {
  RPoly rem;
  rdivmod(a, cx.g, nullptr, &rem);
  return rem;
}

RPoly emul(const RPoly& a, const RPoly& b, const FieldCtx& cx) {
  return emod(rmul(a, b), cx);
}

// Evaluate polynomial a at the element s, reduced mod g (Horner).
RPoly ecompose(const RPoly& a, const RPoly& s, const FieldCtx& cx) {
  RPoly acc;
  for (size_t i = a.size(); i-- > 0;) {
    acc = emul(acc, s, cx);
    acc = radd(acc, RPoly{a[i]});
  }
  return acc;
}

RPoly esigma(const RPoly& a, const FieldCtx& cx) { return ecompose(a, cx.sigma, cx); }

// Inverse in E via the extended Euclidean algorithm; g irreducible makes every
// nonzero element invertible.
RPoly einv(const RPoly& a0, const FieldCtx& cx) {
  RPoly r0 = cx.g, r1 = rtrim(a0);
  if (r1.empty()) throw std::invalid_argument("field inverse of zero");
  RPoly t0, t1{BigRat(1)};
  while (rdeg(r1) > 0) {
    RPoly q, rem;
    rdivmod(r0, r1, &q, &rem);
    r0 = std::move(r1);
    r1 = std::move(rem);
    RPoly tn = rsub(t0, rmul(q, t1));
    t0 = std::move(t1);
    t1 = std::move(tn);
  }
  if (r1.empty()) throw std::logic_error("non-invertible element in a field model");
  return emod(rscale(t1, BigRat(1) / r1[0]), cx);
}

BigRat etrace(const RPoly& a, const FieldCtx& cx) {
  BigRat t = 0;
  for (size_t k = 0; k < a.size(); ++k) t += a[k] * BigRat(cx.s[k]);
  return t;
}

// e x e matrix of multiplication by a on E in the power basis.
QMat mult_matrix(const RPoly& a, const FieldCtx& cx) {
  QMat m(cx.e, cx.e);
  RPoly cur = emod(a, cx);
  for (unsigned j = 0; j < cx.e; ++j) {
    for (size_t i = 0; i < cur.size(); ++i) m.at(static_cast<unsigned>(i), j) = cur[i];
    cur = emul(cur, RPoly{BigRat(0), BigRat(1)}, cx);
  }
  return m;
}

// ---------- numeric root bookkeeping ----------

std::vector<std::complex<double>> numeric_roots(const IPoly& g) {
  const int d = degree(g);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) comp(i + 1, i) = 1.0;
  for (int i = 0; i < d; ++i)
    comp(i, d - 1) = -static_cast<double>(g[static_cast<size_t>(i)]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  std::vector<std::complex<double>> roots(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) roots[static_cast<size_t>(i)] = es.eigenvalues()(i);
  return roots;
}

constexpr double kRootTol = 1e-9;

// Best rational approximation by continued fractions; fails (false) when no
// fraction with denominator <= max_den comes within tol.
bool rationalize(double x, long max_den, double tol, BigRat* out) {
  if (!std::isfinite(x)) return false;
  double v = x;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(v);
    if (std::abs(fl) > 1e15) break;
    const long long a = static_cast<long long>(fl);
    const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den || q2 < 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (q1 <= 0) return false;
  const double approx = static_cast<double>(p1) / static_cast<double>(q1);
  if (std::abs(x - approx) > tol) return false;
  *out = BigRat(BigInt(p1), BigInt(q1));
  return true;
}

// ---------- irreducibility of monic integer polynomials ----------

std::vector<BigInt> positive_divisors(const BigInt& n0) {
  BigInt n = n0 < 0 ? BigInt(-n0) : n0;
  std::vector<BigInt> divs{1};
  for (const auto& [p, mult] : factor(n)) {
    const size_t base = divs.size();
    BigInt pk = 1;
    for (unsigned k = 1; k <= mult; ++k) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  return divs;
}

bool has_integer_root(const IPoly& g) {
  if (g[0] == 0) return true;  // root 0
  for (const BigInt& d : positive_divisors(g[0]))
    for (int sign : {1, -1}) {
      const BigRat x(sign * d);
      if (ipoly_eval(g, x) == 0) return true;
    }
  return false;
}

bool has_monic_quadratic_factor(const IPoly& g) {
  // Coefficients of a monic factor are bounded via the l2 norm of g
  // (Mignotte-style bound, generous for degree-2 factors).
  double norm2 = 0;
  for (const BigInt& c : g) {
    const double cd = static_cast<double>(c);
    norm2 += cd * cd;
  }
  const long bound = static_cast<long>(2.0 * std::sqrt(norm2)) + 2;
  std::vector<BigInt> consts;
  if (g[0] == 0) {
    consts.push_back(0);
  } else {
    for (const BigInt& d : positive_divisors(g[0])) {
      consts.push_back(d);
      consts.push_back(-d);
    }
  }
  for (const BigInt& q : consts) {
    if (q != 0 && (q > bound || q < -bound)) continue;
    for (long p = -bound; p <= bound; ++p) {
      const IPoly quad{q, BigInt(p), BigInt(1)};
      IPoly quot, rem;
      ipoly_divmod_monic(g, quad, &quot, &rem);
      if (rem.empty()) return true;
    }
  }
  return false;
}

// F_p[x] helpers for the modular irreducibility certificate (p small).
using FpPoly = std::vector<uint64_t>;

FpPoly fp_trim(FpPoly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, uint64_t p) {
  const size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const uint64_t lead = a.back();
    if (lead != 0) {
      const size_t shift = a.size() - 1 - dm;
      // m is monic mod p
      for (size_t i = 0; i <= dm; ++i)
        a[shift + i] = (a[shift + i] + p - lead * m[i] % p) % p;
    }
    a.pop_back();
  }
  return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  return fp_mod(std::move(out), m, p);
}

FpPoly fp_xpow(const BigInt& exp, const FpPoly& m, uint64_t p) {
  FpPoly result{1};
  FpPoly base = fp_mod({0, 1}, m, p);
  BigInt e = exp;
  while (e > 0) {
    if ((e & 1) != 0) result = fp_mulmod(result, base, m, p);
    base = fp_mulmod(base, base, m, p);
    e >>= 1;
  }
  return result;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, uint64_t p) {
  a = fp_trim(std::move(a));
  b = fp_trim(std::move(b));
  while (!b.empty()) {
    // reduce a mod b (make b monic first)
    uint64_t inv = 1, base = b.back(), e = p - 2;
    while (e > 0) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    FpPoly bm(b.size());
    for (size_t i = 0; i < b.size(); ++i) bm[i] = b[i] * inv % p;
    FpPoly rem = fp_trim(fp_mod(std::move(a), bm, p));
    a = std::move(b);
    b = std::move(rem);
  }
  return a;
}

// True when g mod p is irreducible (certifies irreducibility over Q).
bool irreducible_mod_p(const IPoly& g, uint64_t p) {
  const unsigned e = static_cast<unsigned>(degree(g));
  FpPoly gp(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    BigInt c = g[i] % BigInt(p);
    if (c < 0) c += p;
    gp[i] = static_cast<uint64_t>(c);
  }
  // need g squarefree mod p for the Frobenius test to be meaningful
  FpPoly deriv;
  for (size_t i = 1; i < gp.size(); ++i) deriv.push_back(gp[i] * (i % p) % p);
  if (fp_gcd(gp, fp_trim(deriv), p).size() != 1) return false;
  BigInt pe = 1;
  for (unsigned i = 0; i < e; ++i) pe *= p;
  FpPoly frob = fp_xpow(pe, gp, p);          // x^(p^e) mod g
  FpPoly x = fp_mod({0, 1}, gp, p);
  if (fp_trim(frob) != fp_trim(x)) return false;
  for (const auto& [q, mult] : factor(BigInt(e))) {
    const unsigned sub = e / static_cast<unsigned>(q);
    BigInt ps = 1;
    for (unsigned i = 0; i < sub; ++i) ps *= p;
    FpPoly fr = fp_xpow(ps, gp, p);
    FpPoly diff = fp_trim(fr);
    // fr - x
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    if (fp_gcd(gp, fp_trim(diff), p).size() != 1) return false;
  }
  return true;
}

void require_irreducible(const IPoly& g) {
  const int e = degree(g);
  if (e == 1) return;
  if (has_integer_root(g))
    throw std::invalid_argument("g is reducible: it has a rational root");
  if (e <= 3) return;
  if (e <= 5) {
    if (has_monic_quadratic_factor(g))
      throw std::invalid_argument("g is reducible: it has a quadratic factor");
    return;
  }
  // Degree >= 6: accept a modular certificate from a small prime.
  static const uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
                                    31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  for (uint64_t p : primes)
    if (irreducible_mod_p(g, p)) return;
  throw std::invalid_argument(
      "could not certify irreducibility of g (degree >= 6 without a modular "
      "certificate)");
}

// ---------- model context ----------

FieldCtx make_context(const EndoFieldModel& model) {
  FieldCtx cx;
  cx.g = rpoly_of(model.g);
  cx.e = static_cast<unsigned>(degree(model.g));
  // power sums of the roots of g via the reversed polynomial
  IPoly rev(model.g.size());
  for (size_t i = 0; i < model.g.size(); ++i) rev[i] = model.g[model.g.size() - 1 - i];
  rev = trimmed(std::move(rev));
  cx.s.assign(cx.e, 0);
  cx.s[0] = cx.e;
  if (cx.e >= 2) {
    const auto sums = power_sums_from_coeffs(rev, cx.e - 1);
    for (unsigned k = 1; k < cx.e; ++k) cx.s[k] = sums[k - 1];
  }
  cx.sigma = RPoly{BigRat(0), BigRat(1)};  // identity; replaced for CM models
  cx.sigma = emod(cx.sigma, cx);
  return cx;
}

RPoly solve_cm_involution(const EndoFieldModel& model, const FieldCtx& cx) {
  const unsigned e = cx.e;
  const auto roots = numeric_roots(model.g);
  Eigen::MatrixXcd vand(e, e);
  Eigen::VectorXcd rhs(e);
  for (unsigned i = 0; i < e; ++i) {
    std::complex<double> pw = 1.0;
    for (unsigned j = 0; j < e; ++j) {
      vand(i, j) = pw;
      pw *= roots[i];
    }
    rhs(i) = std::conj(roots[i]);
  }
  const Eigen::VectorXcd sol = vand.colPivHouseholderQr().solve(rhs);
  RPoly sigma(e);
  for (unsigned j = 0; j < e; ++j) {
    const std::complex<double> c = sol(j);
    if (std::abs(c.imag()) > 1e-6)
      throw std::invalid_argument("conjugation solve produced non-real coefficients");
    BigRat cj;
    if (!rationalize(c.real(), 1000000, 1e-6, &cj))
      throw std::invalid_argument("conjugation coefficients are not small rationals");
    sigma[j] = cj;
  }
  sigma = rtrim(std::move(sigma));
  // exact certification
  FieldCtx probe = cx;
  probe.sigma = sigma;
  const RPoly g_of_sigma = ecompose(rpoly_of(model.g), sigma, probe);
  if (!g_of_sigma.empty())
    throw std::invalid_argument("conjugation candidate is not a root of g");
  const RPoly twice = ecompose(sigma, sigma, probe);
  const RPoly x_red = emod(RPoly{BigRat(0), BigRat(1)}, probe);
  if (rsub(twice, x_red) != RPoly{})
    throw std::invalid_argument("conjugation candidate is not an involution");
  if (rsub(sigma, x_red) == RPoly{})
    throw std::invalid_argument("conjugation candidate is the identity (field not CM)");
  return sigma;
}

FieldCtx full_context(const EndoFieldModel& model) {
  FieldCtx cx = make_context(model);
  if (model.kind == EndoFieldModel::Kind::kCM) cx.sigma = solve_cm_involution(model, cx);
  return cx;
}

QMat trace_form_impl(const EndoFieldModel& model, const FieldCtx& cx) {
  const unsigned e = cx.e, r = model.r;
  std::vector<RPoly> xpow(e), spow(e);
  xpow[0] = RPoly{BigRat(1)};
  spow[0] = RPoly{BigRat(1)};
  for (unsigned j = 1; j < e; ++j) {
    xpow[j] = emul(xpow[j - 1], RPoly{BigRat(0), BigRat(1)}, cx);
    spow[j] = emul(spow[j - 1], cx.sigma, cx);
  }
  QMat gm(e * r, e * r);
  for (unsigned i = 0; i < r; ++i) {
    const RPoly d = emod(model.phi_diag[i], cx);
    for (unsigned j = 0; j < e; ++j)
      for (unsigned k = 0; k < e; ++k) {
        const RPoly prod = emul(emul(d, xpow[j], cx), spow[k], cx);
        gm.at(i * e + j, i * e + k) = etrace(prod, cx);
      }
  }
  return gm;
}

void basic_shape_checks(const EndoFieldModel& model) {
  if (degree(model.g) < 1)
    throw std::invalid_argument("g must have degree >= 1");
  if (model.g.back() != 1)
    throw std::invalid_argument("g must be monic");
  if (model.r < 1) throw std::invalid_argument("r must be >= 1");
  if (model.phi_diag.size() != model.r)
    throw std::invalid_argument("phi_diag must have exactly r entries");
  const unsigned e = static_cast<unsigned>(degree(model.g));
  for (const RPoly& d : model.phi_diag) {
    if (rtrim(d).empty())
      throw std::invalid_argument("phi_diag entries must be nonzero");
    if (d.size() > e && !rtrim(RPoly(d.begin() + e, d.end())).empty())
      throw std::invalid_argument("phi_diag entries must have degree < deg(g)");
  }
}

void check_kind(const EndoFieldModel& model) {
  const auto roots = numeric_roots(model.g);
  unsigned real_count = 0;
  for (const auto& z : roots)
    if (std::abs(z.imag()) < kRootTol) ++real_count;
  if (model.kind == EndoFieldModel::Kind::kTotallyReal) {
    if (real_count != roots.size())
      throw std::invalid_argument("kind is totally real but g has non-real roots");
  } else {
    if (real_count != 0)
      throw std::invalid_argument("kind is CM but g has real roots");
  }
}

// Random element of E with integer coefficients bounded by `height`.
RPoly random_element(std::mt19937_64& rng, unsigned e, int height) {
  std::uniform_int_distribution<int> dist(-height, height);
  RPoly a(e);
  for (auto& c : a) c = dist(rng);
  return rtrim(std::move(a));
}

// ---------- unimodular products for the congruence experiments ----------

struct ElementaryOp {
  unsigned i, j;
  BigInt c;
};

ZMat apply_ops(unsigned n, const std::vector<ElementaryOp>& ops, bool inverse) {
  ZMat u = zmat_identity(n);
  // E_{ij}(c) multiplies on the left: row_i += c * row_j.
  if (!inverse) {
    for (const auto& op : ops)
      for (unsigned col = 0; col < n; ++col) u.at(op.i, col) += op.c * u.at(op.j, col);
  } else {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      for (unsigned col = 0; col < n; ++col)
        u.at(it->i, col) -= it->c * u.at(it->j, col);
  }
  return u;
}

}  // namespace

// ---------- public interface ----------

RPoly conjugation_map(const EndoFieldModel& model) {
  basic_shape_checks(model);
  require_irreducible(model.g);
  check_kind(model);
  return full_context(model).sigma;
}

void validate_model(const EndoFieldModel& model) {
  basic_shape_checks(model);
  require_irreducible(model.g);
  check_kind(model);
  const FieldCtx cx = full_context(model);
  if (model.kind == EndoFieldModel::Kind::kCM) {
    for (const RPoly& d : model.phi_diag) {
      const RPoly dr = emod(d, cx);
      if (rsub(esigma(dr, cx), dr) != RPoly{})
        throw std::invalid_argument(
            "phi_diag entries must be fixed by the conjugation involution");
    }
  }
  const QMat gm = trace_form_impl(model, cx);
  for (unsigned i = 0; i < gm.rows; ++i)
    for (unsigned j = i + 1; j < gm.cols; ++j)
      if (gm.at(i, j) != gm.at(j, i))
        throw std::logic_error("trace form is not symmetric");
  if (qmat_det(gm) == 0)
    throw std::logic_error("trace form is degenerate");
  if (model.require_k3_signature) {
    const auto sig = qmat_signature(gm);
    const unsigned n = cx.e * model.r;
    if (sig.first != 2 || sig.second != n - 2)
      throw std::invalid_argument(
          "form signature is (" + std::to_string(sig.first) + ", " +
          std::to_string(sig.second) + ") but (2, " + std::to_string(n - 2) +
          ") is required");
  }
}

QMat build_trace_form(const EndoFieldModel& model) {
  validate_model(model);
  return trace_form_impl(model, full_context(model));
}

QMat field_action_matrix(const EndoFieldModel& model) {
  basic_shape_checks(model);
  const FieldCtx cx = make_context(model);
  const QMat x = mult_matrix(RPoly{BigRat(0), BigRat(1)}, cx);
  QMat out(cx.e * model.r, cx.e * model.r);
  for (unsigned i = 0; i < model.r; ++i)
    for (unsigned j = 0; j < cx.e; ++j)
      for (unsigned k = 0; k < cx.e; ++k)
        out.at(i * cx.e + j, i * cx.e + k) = x.at(j, k);
  return out;
}

CentralizerElement sample_centralizer(const EndoFieldModel& model, uint64_t seed) {
  validate_model(model);
  const FieldCtx cx = full_context(model);
  const unsigned e = cx.e, r = model.r, n = e * r;
  std::vector<RPoly> d(r), dinv(r);
  for (unsigned i = 0; i < r; ++i) {
    d[i] = emod(model.phi_diag[i], cx);
    dinv[i] = einv(d[i], cx);
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    // psi-skew-adjoint E-linear A: A_{ki} = -(d_i / d_k) sigma(A_{ik}),
    // diagonal entries anti-fixed by sigma (zero in the totally real case).
    std::vector<std::vector<RPoly>> a(r, std::vector<RPoly>(r));
    for (unsigned i = 0; i < r; ++i) {
      for (unsigned k = i + 1; k < r; ++k) {
        a[i][k] = random_element(rng, e, 10);
        a[k][i] = rscale(emul(emul(d[i], dinv[k], cx), esigma(a[i][k], cx), cx),
                         BigRat(-1));
      }
      if (model.kind == EndoFieldModel::Kind::kCM) {
        const RPoly raw = random_element(rng, e, 5);
        a[i][i] = rsub(raw, esigma(raw, cx));
      }
    }
    QMat big(n, n);
    for (unsigned i = 0; i < r; ++i)
      for (unsigned k = 0; k < r; ++k) {
        if (rtrim(a[i][k]).empty()) continue;
        const QMat blk = mult_matrix(a[i][k], cx);
        for (unsigned s1 = 0; s1 < e; ++s1)
          for (unsigned s2 = 0; s2 < e; ++s2)
            big.at(i * e + s1, k * e + s2) = blk.at(s1, s2);
      }
    const QMat id = qmat_identity(n);
    QMat inv;
    if (!qmat_inverse(qmat_sub(id, big), &inv)) continue;
    return {qmat_mul(qmat_add(id, big), inv), seed};
  }
  throw std::runtime_error(
      "sample_centralizer: 100 draws left I - A singular; the model admits no "
      "generic Cayley transform at this height");
}

unsigned eigenvalue_one_multiplicity(const QMat& h) {
  if (h.rows != h.cols)
    throw std::invalid_argument("eigenvalue_one_multiplicity: square matrix required");
  return h.rows - qmat_rank(qmat_sub(h, qmat_identity(h.rows)));
}

bool has_root_of_unity_eigenvalue(const QMat& h, uint32_t order_bound) {
  if (h.rows != h.cols)
    throw std::invalid_argument("has_root_of_unity_eigenvalue: square matrix required");
  if (order_bound < 1)
    throw std::invalid_argument("has_root_of_unity_eigenvalue: order bound must be >= 1");
  const auto cp = qmat_charpoly(h);
  BigInt denom_lcm = 1;
  for (const BigRat& c : cp) {
    const BigInt d = denominator(c);
    denom_lcm = denom_lcm / gcd(denom_lcm, d) * d;
  }
  IPoly cpi(cp.size());
  for (size_t i = 0; i < cp.size(); ++i) cpi[i] = numerator(cp[i] * BigRat(denom_lcm));
  const BigInt content = ipoly_content(cpi);
  for (auto& c : cpi) c /= content;
  for (uint32_t m = 1; m <= order_bound; ++m) {
    if (euler_phi(m) > h.rows) continue;
    IPoly quot;
    if (ipoly_try_divide(cpi, cyclotomic(m), &quot)) return true;
  }
  return false;
}

uint32_t max_cyclotomic_order(unsigned dim) {
  const auto orders = cyclotomic_orders(dim);
  return orders.empty() ? 1 : orders.back();
}

EndoFieldModel preset_model(const std::string& name) {
  EndoFieldModel m;
  m.name = name;
  if (name == "rational-21") {
    m.g = IPoly{0, 1};
    m.kind = EndoFieldModel::Kind::kTotallyReal;
    m.r = 21;
    m.phi_diag.assign(21, RPoly{BigRat(-1)});
    m.phi_diag[0] = RPoly{BigRat(1)};
    m.phi_diag[1] = RPoly{BigRat(1)};
  } else if (name == "real-quadratic-3") {
    m.g = IPoly{-2, 0, 1};
    m.kind = EndoFieldModel::Kind::kTotallyReal;
    m.r = 3;
    m.phi_diag = {RPoly{BigRat(1)}, RPoly{BigRat(-1)}, RPoly{BigRat(-1)}};
  } else if (name == "real-quartic-3") {
    m.g = IPoly{1, 0, -10, 0, 1};
    m.kind = EndoFieldModel::Kind::kTotallyReal;
    m.r = 3;
    m.phi_diag = {RPoly{BigRat(-1), BigRat(0), BigRat(1)}, RPoly{BigRat(-1)},
                  RPoly{BigRat(-1)}};
  } else if (name == "cm-quartic-2") {
    m.g = IPoly{1, 0, 0, 0, 1};
    m.kind = EndoFieldModel::Kind::kCM;
    m.r = 2;
    m.phi_diag = {RPoly{BigRat(0), BigRat(1), BigRat(0), BigRat(-1)},
                  RPoly{BigRat(-1)}};
  } else {
    throw std::invalid_argument("unknown preset model: " + name);
  }
  return m;
}

std::vector<std::string> preset_names() {
  return {"rational-21", "real-quadratic-3", "real-quartic-3", "cm-quartic-2"};
}

WitnessElement rotation_witness() {
  EndoFieldModel m;
  m.name = "rotation-witness";
  m.g = IPoly{0, 1};
  m.kind = EndoFieldModel::Kind::kTotallyReal;
  m.r = 2;
  m.phi_diag = {RPoly{BigRat(1)}, RPoly{BigRat(1)}};
  m.require_k3_signature = false;
  // Cayley transform of A = [[0, 2], [-2, 0]]: a rotation by arccos(-3/5),
  // which is an irrational angle (Niven), hence of infinite order.
  QMat h(2, 2);
  h.at(0, 0) = BigRat(-3, 5);
  h.at(0, 1) = BigRat(4, 5);
  h.at(1, 0) = BigRat(-4, 5);
  h.at(1, 1) = BigRat(-3, 5);
  return {std::move(m), std::move(h)};
}

WitnessElement cm_unit_witness() {
  EndoFieldModel m = preset_model("cm-quartic-2");
  const FieldCtx cx = full_context(m);
  // u = v / sigma(v) with v = 1 + 2 zeta: a norm-one unit of infinite order.
  const RPoly v{BigRat(1), BigRat(2)};
  const RPoly u = emul(v, einv(esigma(v, cx), cx), cx);
  const QMat blk = mult_matrix(u, cx);
  QMat h(8, 8);
  for (unsigned i = 0; i < 2; ++i)
    for (unsigned s1 = 0; s1 < 4; ++s1)
      for (unsigned s2 = 0; s2 < 4; ++s2) h.at(i * 4 + s1, i * 4 + s2) = blk.at(s1, s2);
  return {std::move(m), std::move(h)};
}

CongruenceOutcome eigenspace_congruence_test(const ZMat& g_mat, uint32_t ell,
                                             unsigned n_exp, unsigned d_exp,
                                             uint64_t seed) {
  if (g_mat.rows != g_mat.cols)
    throw std::invalid_argument("eigenspace_congruence_test: square matrix required");
  if (!is_prime(BigInt(ell)))
    throw std::invalid_argument("eigenspace_congruence_test: ell must be prime");
  if (n_exp < 1 || d_exp < 1)
    throw std::invalid_argument("eigenspace_congruence_test: exponents must be >= 1");
  const unsigned n = g_mat.rows;
  BigInt ell_n = 1, ell_d = 1;
  for (unsigned i = 0; i < n_exp; ++i) ell_n *= ell;
  for (unsigned i = 0; i < d_exp; ++i) ell_d *= ell;

  const ZMat gm_minus_i = zmat_sub(g_mat, zmat_identity(n));
  const ZMat w = saturated_kernel(gm_minus_i);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<int> small(-2, 2);
  std::uniform_int_distribution<unsigned> index(0, n - 1);
  for (int attempt = 0; attempt < 100; ++attempt) {
    // Structured congruent perturbation: gt - I = (I + ell^n E)(g - I) keeps
    // the fixed space (hence the multiplicity) whenever I + ell^n E is
    // invertible; a unimodular conjugation congruent to I then moves the
    // fixed lattice without leaving the congruence class.
    ZMat e_rand(n, n);
    for (auto& v : e_rand.a) v = entry(rng);
    QMat check(n, n);
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j)
        check.at(i, j) = BigRat((i == j ? 1 : 0) + ell_n * e_rand.at(i, j));
    if (qmat_det(check) == 0) continue;
    ZMat gt = g_mat;
    const ZMat shift = zmat_mul(e_rand, gm_minus_i);
    for (size_t i = 0; i < gt.a.size(); ++i) gt.a[i] += ell_n * shift.a[i];

    std::vector<ElementaryOp> ops;
    for (unsigned k = 0; k < 2 * n; ++k) {
      unsigned i = index(rng), j = index(rng);
      if (i == j) continue;
      const int c = small(rng);
      if (c == 0) continue;
      ops.push_back({i, j, BigInt(c) * ell_n});
    }
    const ZMat u = apply_ops(n, ops, false);
    const ZMat uinv = apply_ops(n, ops, true);
    const ZMat h = zmat_mul(u, zmat_mul(gt, uinv));
    for (size_t i = 0; i < h.a.size(); ++i)
      if ((h.a[i] - g_mat.a[i]) % ell_n != 0)
        throw std::logic_error("perturbation left the congruence class");

    const ZMat wp = saturated_kernel(zmat_sub(h, zmat_identity(n)));
    if (wp.cols != w.cols)
      throw std::logic_error("perturbation changed the fixed-space dimension");
    CongruenceOutcome out;
    out.multiplicity = w.cols;
    out.pass = sublattice_equal_mod(w, wp, ell_d);
    return out;
  }
  return {false, true, 0};
}

ZMat random_semisimple_with_unit_eigenspace(unsigned dim, unsigned mult,
                                            uint64_t seed) {
  if (mult > dim)
    throw std::invalid_argument("multiplicity cannot exceed the dimension");
  ZMat block(dim, dim);
  for (unsigned i = 0; i < mult; ++i) block.at(i, i) = 1;
  static const int squarefree[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  unsigned pos = mult, next = 0;
  if ((dim - mult) % 2 == 1) {
    block.at(pos, pos) = -1;  // eigenvalue -1, distinct from everything else
    ++pos;
  }
  while (pos < dim) {
    // companion of x^2 - a: eigenvalues +-sqrt(a), never 1, distinct per block
    block.at(pos, pos + 1) = squarefree[next++ % 10];
    block.at(pos + 1, pos) = 1;
    pos += 2;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(-2, 2);
  std::uniform_int_distribution<unsigned> index(0, dim - 1);
  std::vector<ElementaryOp> ops;
  for (unsigned k = 0; k < 3 * dim; ++k) {
    unsigned i = index(rng), j = index(rng);
    if (i == j) continue;
    const int c = small(rng);
    if (c == 0) continue;
    ops.push_back({i, j, BigInt(c)});
  }
  const ZMat u = apply_ops(dim, ops, false);
  const ZMat uinv = apply_ops(dim, ops, true);
  return zmat_mul(u, zmat_mul(block, uinv));
}

}  // namespace k3p
