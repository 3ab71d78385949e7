#include "k3p/counter.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace k3p {

namespace {

// Euclidean gcd degree of f (monic-izable, degree d >= 1) and s, both degree
// <= 4, over the table field.  Coefficient vectors are degree-5 arrays.
int small_gcd_degree(const FieldTable& F, std::array<GF, 5> a, int da,
                     std::array<GF, 5> b, int db) {
  if (da < db) {
    std::swap(a, b);
    std::swap(da, db);
  }
  while (db >= 0) {
    // a mod b
    GF lead_inv = F.inv(b[db]);
    for (int i = da; i >= db; --i) {
      GF c = F.mul(a[i], lead_inv);
      if (c != 0)
        for (int j = 0; j <= db; ++j)
          a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]));
      a[i] = 0;
    }
    int dr = -1;
    for (int i = db - 1; i >= 0; --i)
      if (a[i] != 0) {
        dr = i;
        break;
      }
    std::swap(a, b);
    da = db;
    db = dr;
  }
  return da;
}

}  // namespace

uint32_t univariate_root_count(const FieldTable& F, const std::array<GF, 5>& c,
                               bool force_scan) {
  int d = -1;
  for (int i = 4; i >= 0; --i)
    if (c[i] != 0) {
      d = i;
      break;
    }
  if (d < 0) return F.q();  // identically zero: every value is a root
  if (d == 0) return 0;
  if (d == 1) return 1;

  if (force_scan || F.q() < 64) {
    uint32_t roots = 0;
    for (GF w = 0; w < F.q(); ++w) {
      GF acc = c[d];
      for (int i = d - 1; i >= 0; --i) acc = F.add(F.mul(acc, w), c[i]);
      if (acc == 0) ++roots;
    }
    return roots;
  }

  // Distinct roots = deg gcd(f, T^q - T).  T^q mod f is computed by iterating
  // the p-power Frobenius: with r = T^{p^k} mod f,
  //   T^{p^{k+1}} = sum_i frob(r_i) (T^p)^i mod f,
  // so only T^p mod f (square-and-multiply) and its first d powers are needed.
  const uint32_t p = F.p();
  const uint32_t n = F.n();
  std::array<GF, 5> f = c;
  GF lead_inv = F.inv(f[d]);
  for (int i = 0; i <= d; ++i) f[i] = F.mul(f[i], lead_inv);

  auto mulmod = [&](const std::array<GF, 4>& a, const std::array<GF, 4>& b) {
    std::array<GF, 7> prod{};
    for (int i = 0; i < d; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < d; ++j) prod[i + j] = F.add(prod[i + j], F.mul(a[i], b[j]));
    }
    for (int i = 2 * d - 2; i >= d; --i) {
      GF t = prod[i];
      if (t == 0) continue;
      for (int j = 0; j < d; ++j) prod[i - d + j] = F.sub(prod[i - d + j], F.mul(t, f[j]));
    }
    std::array<GF, 4> out{};
    for (int i = 0; i < d; ++i) out[i] = prod[i];
    return out;
  };

  std::array<GF, 4> tp = {1, 0, 0, 0};  // becomes T^p mod f
  {
    std::array<GF, 4> base{};
    base[1] = 1;  // T itself (d >= 2 here)
    uint32_t e = p;
    while (e > 0) {
      if (e & 1) tp = mulmod(tp, base);
      e >>= 1;
      if (e) base = mulmod(base, base);
    }
  }
  std::array<std::array<GF, 4>, 4> tp_pow;  // (T^p)^i mod f for i < d
  tp_pow[0] = {1, 0, 0, 0};
  for (int i = 1; i < d; ++i) tp_pow[i] = mulmod(tp_pow[i - 1], tp);

  std::array<GF, 4> r = tp;
  for (uint32_t step = 1; step < n; ++step) {
    std::array<GF, 4> next{};
    for (int i = 0; i < d; ++i) {
      GF a = F.frobenius(r[i]);
      if (a == 0) continue;
      for (int k = 0; k < d; ++k) next[k] = F.add(next[k], F.mul(a, tp_pow[i][k]));
    }
    r = next;
  }

  std::array<GF, 5> s{};
  for (int i = 0; i < d; ++i) s[i] = r[i];
  s[1] = F.sub(s[1], 1);  // T^q - T
  int ds = -1;
  for (int i = 4; i >= 0; --i)
    if (s[i] != 0) {
      ds = i;
      break;
    }
  if (ds < 0) return d;  // f divides T^q - T: d distinct roots
  std::array<GF, 5> f5{};
  for (int i = 0; i <= d; ++i) f5[i] = f[i];
  return static_cast<uint32_t>(small_gcd_degree(F, f5, d, s, ds));
}

namespace {

struct ChartTerm {
  int b, c;    // exponents of the two free prefix coordinates
  uint32_t coeff;
};

// Buckets the surface terms by the exponent of the fiber coordinate w for the
// chart with the first `fixed` coordinates pinned to (0,..,0,1).
std::array<std::vector<ChartTerm>, 5> bucket_terms(const SurfaceModP& s, int fixed) {
  std::array<std::vector<ChartTerm>, 5> buckets;
  const auto& mons = quartic_monomials();
  for (int i = 0; i < kQuarticMonomialCount; ++i) {
    if (s.coeffs[i] == 0) continue;
    const auto& e = mons[i];
    bool in_chart = true;
    for (int v = 0; v + 1 < fixed; ++v) in_chart = in_chart && e[v] == 0;
    if (!in_chart) continue;
    // coordinate fixed-1 is pinned to 1, so its exponent drops out
    int b = fixed <= 1 ? e[1] : 0;
    int c = fixed <= 2 ? e[2] : 0;
    buckets[e[3]].push_back({b, c, s.coeffs[i]});
  }
  return buckets;
}

struct SliceResult {
  uint64_t total = 0;
  uint64_t scanned = 0;
};

// Chart x = 1: prefixes (y, z) in [lo, hi) x F_q, fiber coordinate w.
SliceResult count_big_chart_slice(const FieldTable& F,
                                  const std::array<std::vector<ChartTerm>, 5>& buckets,
                                  GF lo, GF hi, bool force_scan) {
  SliceResult res;
  const uint64_t q = F.q();
  std::array<GF, 5> ypow, zpow;
  for (GF y = lo; y < hi; ++y) {
    ypow[0] = 1;
    for (int e = 1; e <= 4; ++e) ypow[e] = F.mul(ypow[e - 1], y);
    for (GF z = 0; z < q; ++z) {
      uint64_t orbit = 1;
      if (!force_scan) {
        // Keep (y, z) only if it is the lexicographically least element of
        // its Frobenius orbit; weight by the orbit length.  Coefficients lie
        // in F_p, so conjugate prefixes have equal fiber counts.
        GF fy = F.frobenius(y), fz = F.frobenius(z);
        bool rep = true;
        while (fy != y || fz != z) {
          if (fy < y || (fy == y && fz < z)) {
            rep = false;
            break;
          }
          ++orbit;
          fy = F.frobenius(fy);
          fz = F.frobenius(fz);
        }
        if (!rep) continue;
      }
      zpow[0] = 1;
      for (int e = 1; e <= 4; ++e) zpow[e] = F.mul(zpow[e - 1], z);
      std::array<GF, 5> a{};
      for (int dd = 0; dd <= 4; ++dd) {
        GF acc = 0;
        for (const ChartTerm& t : buckets[dd])
          acc = F.add(acc, F.mul(t.coeff, F.mul(ypow[t.b], zpow[t.c])));
        a[dd] = acc;
      }
      res.total += orbit * univariate_root_count(F, a, force_scan);
      res.scanned += orbit * q;
    }
  }
  return res;
}

}  // namespace

uint64_t count_points(const SurfaceModP& s, uint32_t n, const CountOptions& opt) {
  FieldTable F(s.p, n);
  const uint64_t q = F.q();
  uint64_t total = 0, scanned = 0;

  // Chart x = 1.
  auto buckets1 = bucket_terms(s, 1);
  unsigned workers = opt.workers == 0 ? std::thread::hardware_concurrency() : opt.workers;
  if (workers <= 1 || q < 512) {
    SliceResult r = count_big_chart_slice(F, buckets1, 0, static_cast<GF>(q), opt.force_scan);
    total += r.total;
    scanned += r.scanned;
  } else {
    std::vector<SliceResult> results(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      GF lo = static_cast<GF>(q * w / workers);
      GF hi = static_cast<GF>(q * (w + 1) / workers);
      threads.emplace_back([&, w, lo, hi]() {
        results[w] = count_big_chart_slice(F, buckets1, lo, hi, opt.force_scan);
      });
    }
    for (auto& t : threads) t.join();
    for (const SliceResult& r : results) {
      total += r.total;
      scanned += r.scanned;
    }
  }

  // Chart x = 0, y = 1: prefix z, fiber w.
  {
    auto buckets = bucket_terms(s, 2);
    std::array<GF, 5> zpow;
    for (GF z = 0; z < q; ++z) {
      uint64_t orbit = 1;
      if (!opt.force_scan) {
        GF fz = F.frobenius(z);
        bool rep = true;
        while (fz != z) {
          if (fz < z) {
            rep = false;
            break;
          }
          ++orbit;
          fz = F.frobenius(fz);
        }
        if (!rep) continue;
      }
      zpow[0] = 1;
      for (int e = 1; e <= 4; ++e) zpow[e] = F.mul(zpow[e - 1], z);
      std::array<GF, 5> a{};
      for (int dd = 0; dd <= 4; ++dd) {
        GF acc = 0;
        for (const ChartTerm& t : buckets[dd]) acc = F.add(acc, F.mul(t.coeff, zpow[t.c]));
        a[dd] = acc;
      }
      total += orbit * univariate_root_count(F, a, opt.force_scan);
      scanned += orbit * q;
    }
  }

  // Chart x = y = 0, z = 1: a single univariate in w.
  {
    auto buckets = bucket_terms(s, 3);
    std::array<GF, 5> a{};
    for (int dd = 0; dd <= 4; ++dd) {
      GF acc = 0;
      for (const ChartTerm& t : buckets[dd]) acc = F.add(acc, t.coeff);
      a[dd] = acc;
    }
    total += univariate_root_count(F, a, opt.force_scan);
    scanned += q;
  }

  // Chart x = y = z = 0, w = 1: the single point (0:0:0:1).
  {
    int idx = monomial_index(0, 0, 0, 4);
    if (s.coeffs[idx] == 0) total += 1;
    scanned += 1;
  }

  if (opt.scanned) *opt.scanned = scanned;
  return total;
}

int64_t lefschetz_trace(uint32_t p, uint32_t n, uint64_t count) {
  int64_t pn = 1;
  for (uint32_t i = 0; i < n; ++i) pn *= p;
  int64_t q2 = pn * pn;
  int64_t t = static_cast<int64_t>(count) - 1 - q2;
  if (t > 22 * pn || t < -22 * pn)
    throw std::runtime_error("Weil bound violated at n=" + std::to_string(n) +
                             ": |t_n| = " + std::to_string(t < 0 ? -t : t) +
                             " exceeds 22 p^n = " + std::to_string(22 * pn) +
                             " (counting bug or singular reduction)");
  return t;
}

void fill_traces(PointCountRecord& rec) {
  for (CountEntry& e : rec.entries) e.trace = lefschetz_trace(rec.p, e.n, e.count);
}

CountCache::CountCache(std::string dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string CountCache::path_for(const std::string& hash, uint32_t p) const {
  return dir_ + "/" + hash + "_p" + std::to_string(p) + ".json";
}

std::optional<uint64_t> CountCache::lookup(const std::string& hash, uint32_t p,
                                           uint32_t n) {
  if (dir_.empty()) return std::nullopt;
  std::ifstream in(path_for(hash, p));
  if (in) {
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      auto key = std::to_string(n);
      if (j.contains("counts") && j["counts"].contains(key)) {
        ++hits_;
        return j["counts"][key].get<uint64_t>();
      }
    } catch (const std::exception&) {
      // unreadable sidecar: treat as absent, it will be rewritten on store
    }
  }
  ++misses_;
  return std::nullopt;
}

void CountCache::store(const std::string& hash, uint32_t p, uint32_t n, uint64_t count) {
  if (dir_.empty()) return;
  nlohmann::json j;
  {
    std::ifstream in(path_for(hash, p));
    if (in) {
      try {
        j = nlohmann::json::parse(in);
      } catch (const std::exception&) {
        j = nlohmann::json::object();
      }
    }
  }
  j["surface"] = hash;
  j["p"] = p;
  if (!j.contains("counts")) j["counts"] = nlohmann::json::object();
  j["counts"][std::to_string(n)] = count;
  std::string tmp = path_for(hash, p) + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path_for(hash, p));
}

}  // namespace k3p
