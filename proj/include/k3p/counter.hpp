// Exact point counts N_n = #X(F_{p^n}) for a quartic surface in P^3, and the
// derived traces t_n = N_n - 1 - p^{2n} with the 22 p^n Weil-bound guard.
//
// The chart decomposition fixes the enumeration: points with x = 1; x = 0,
// y = 1; x = y = 0, z = 1; and x = y = z = 0, w = 1.  Within the big chart the
// surface is viewed, for each prefix (y, z), as a univariate quartic in w
// whose roots over F_q are counted exactly.  Because the coefficients live in
// the prime field, Frobenius permutes prefixes without changing their fiber
// count, so only the lexicographically least prefix of each Frobenius orbit
// is evaluated and its count is weighted by the orbit size.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "k3p/surface.hpp"

namespace k3p {

struct CountEntry {
  uint32_t n = 0;
  uint64_t count = 0;   // N_n
  int64_t trace = 0;    // t_n, filled by fill_traces

  bool operator==(const CountEntry&) const = default;
};

struct PointCountRecord {
  uint32_t p = 0;
  std::string surface_id;
  std::string surface_hash;
  std::vector<CountEntry> entries;  // ascending n
};

struct CountOptions {
  unsigned workers = 1;         // slice parallelism over the y coordinate
  bool force_scan = false;      // disable the orbit/root-counting fast path
  uint64_t* scanned = nullptr;  // optional: projective points accounted for
};

// Exact projective point count of {f = 0} over F_{p^n}.  Deterministic and
// independent of worker count.  Throws if p^n exceeds the field ceiling.
uint64_t count_points(const SurfaceModP& s, uint32_t n, const CountOptions& opt = {});

// t_n = N_n - 1 - p^{2n}; throws std::runtime_error naming n when the Weil
// bound |t_n| <= 22 p^n fails (counting bug or singular reduction).
int64_t lefschetz_trace(uint32_t p, uint32_t n, uint64_t count);

// Recomputes every trace in the record from its count, enforcing the bound.
void fill_traces(PointCountRecord& rec);

// Exact roots in F_q of a degree <= 4 univariate with coefficients c[0..4]
// (constant first) over the table field: gcd(f, T^q - T) degree for q >= 64,
// direct scan below.  Exposed for tests.
uint32_t univariate_root_count(const FieldTable& F, const std::array<GF, 5>& c,
                               bool force_scan = false);

// JSON sidecar cache of counts keyed by (surface content hash, p, n).
// An empty directory disables caching.  Writes are flushed per store.
class CountCache {
 public:
  explicit CountCache(std::string dir);
  std::optional<uint64_t> lookup(const std::string& hash, uint32_t p, uint32_t n);
  void store(const std::string& hash, uint32_t p, uint32_t n, uint64_t count);
  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }
  bool enabled() const { return !dir_.empty(); }

 private:
  std::string path_for(const std::string& hash, uint32_t p) const;
  std::string dir_;
  uint64_t hits_ = 0;
  uint64_t misses_ = 0;
};

}  // namespace k3p
