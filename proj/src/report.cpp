#include "k3p/report.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace k3p {

namespace {

using nlohmann::json;

// Exact integers: JSON numbers while they fit in 64 bits, decimal strings
// beyond that.
json big_to_json(const BigInt& v) {
  static const BigInt lo = std::numeric_limits<int64_t>::min();
  static const BigInt hi = std::numeric_limits<int64_t>::max();
  if (v >= lo && v <= hi) return json(static_cast<int64_t>(v));
  return json(v.str());
}

BigInt big_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return BigInt(j.get<int64_t>());
  if (j.is_number_unsigned()) return BigInt(j.get<uint64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
      throw std::runtime_error(where + ": malformed integer string");
    }
  }
  throw std::runtime_error(where + ": expected an integer or integer string");
}

const json& field(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw std::runtime_error(where + ": missing key '" + key + "'");
  return *it;
}

template <typename T>
T scalar(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  try {
    return v.get<T>();
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": key '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string emit_report(const Report& r) {
  json doc;
  doc["surface"] = {{"id", r.surface_id}, {"hash", r.surface_hash}};
  doc["assumptions"] = r.assumptions;
  json primes = json::array();
  for (const PrimeReport& pr : r.primes) {
    json jp;
    jp["p"] = pr.p;
    jp["smoothness"] = pr.smoothness;
    json counts = json::array();
    for (const CountEntry& e : pr.counts)
      counts.push_back(json::array({e.n, e.count, e.trace}));
    jp["counts"] = std::move(counts);
    json cands = json::array();
    for (const CandidateReport& c : pr.candidates) {
      json jc;
      json coeffs = json::array();
      for (const BigInt& v : c.coeffs) coeffs.push_back(big_to_json(v));
      jc["coeffs"] = std::move(coeffs);
      jc["sign"] = c.sign;
      jc["rho_upper"] = c.rho_upper;
      json cyc = json::array();
      for (const auto& [m, mult] : c.cyclotomic) cyc.push_back(json::array({m, mult}));
      jc["cyclotomic"] = std::move(cyc);
      jc["ordinary"] = c.ordinary;
      jc["m_lcm"] = c.m_lcm;
      jc["delta"] = big_to_json(c.delta);
      cands.push_back(std::move(jc));
    }
    jp["candidates"] = std::move(cands);
    primes.push_back(std::move(jp));
  }
  doc["primes"] = std::move(primes);
  doc["inputs"] = {{"rho_low", r.inputs.rho_low},
                   {"d_low", r.inputs.d_low},
                   {"justifications", r.inputs.justifications}};
  doc["verdict"] = {{"rho_low", r.verdict_rho_low},
                    {"rho_high", r.verdict_rho_high},
                    {"exact", r.verdict_exact}};
  return doc.dump(2) + "\n";
}

Report parse_report(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
  }
  Report r;
  const json& surf = field(doc, "surface", "report");
  r.surface_id = scalar<std::string>(surf, "id", "surface");
  r.surface_hash = scalar<std::string>(surf, "hash", "surface");
  for (const json& a : field(doc, "assumptions", "report"))
    r.assumptions.push_back(a.get<std::string>());
  for (const json& jp : field(doc, "primes", "report")) {
    PrimeReport pr;
    pr.p = scalar<uint32_t>(jp, "p", "prime");
    pr.smoothness = scalar<std::string>(jp, "smoothness", "prime");
    const std::string pw = "prime " + std::to_string(pr.p);
    for (const json& je : field(jp, "counts", pw)) {
      if (!je.is_array() || je.size() != 3)
        throw std::runtime_error(pw + ": counts entries must be [n, N, t] triples");
      CountEntry e;
      e.n = je[0].get<uint32_t>();
      e.count = je[1].get<uint64_t>();
      e.trace = je[2].get<int64_t>();
      pr.counts.push_back(e);
    }
    for (const json& jc : field(jp, "candidates", pw)) {
      CandidateReport c;
      for (const json& v : field(jc, "coeffs", pw + " candidate"))
        c.coeffs.push_back(big_from_json(v, pw + " coeffs"));
      c.sign = scalar<int>(jc, "sign", pw + " candidate");
      c.rho_upper = scalar<unsigned>(jc, "rho_upper", pw + " candidate");
      for (const json& f : field(jc, "cyclotomic", pw + " candidate")) {
        if (!f.is_array() || f.size() != 2)
          throw std::runtime_error(pw + ": cyclotomic entries must be [m, mult] pairs");
        c.cyclotomic.emplace_back(f[0].get<uint32_t>(), f[1].get<unsigned>());
      }
      c.ordinary = scalar<bool>(jc, "ordinary", pw + " candidate");
      c.m_lcm = scalar<uint32_t>(jc, "m_lcm", pw + " candidate");
      c.delta = big_from_json(field(jc, "delta", pw + " candidate"), pw + " delta");
      pr.candidates.push_back(std::move(c));
    }
    r.primes.push_back(std::move(pr));
  }
  const json& in = field(doc, "inputs", "report");
  r.inputs.rho_low = scalar<unsigned>(in, "rho_low", "inputs");
  r.inputs.d_low = scalar<unsigned>(in, "d_low", "inputs");
  for (const json& s : field(in, "justifications", "inputs"))
    r.inputs.justifications.push_back(s.get<std::string>());
  const json& v = field(doc, "verdict", "report");
  r.verdict_rho_low = scalar<unsigned>(v, "rho_low", "verdict");
  r.verdict_rho_high = scalar<unsigned>(v, "rho_high", "verdict");
  r.verdict_exact = scalar<bool>(v, "exact", "verdict");
  return r;
}

}  // namespace k3p
