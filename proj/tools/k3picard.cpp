// k3picard: bound and certify the geometric Picard number of a quartic K3
// surface over Q by reduction modulo primes.
//
// Subcommands:
//   count    point counts and traces per prime (no early exit)
//   weil     counts plus reconstructed characteristic-polynomial candidates
//   bound    per-candidate invariants: rho_upper, cyclotomic profile,
//            ordinarity, discriminant square class
//   verdict  inputs, assumptions, and the combined verdict only
//   run      the full certificate report
//   verify   re-derive every claim of an existing report from its counts
//   lab      orthogonal-group simulations: multiplicity histograms for the
//            centralizer presets, the two infinite-order witnesses, and a
//            congruence-test experiment
//
// JSON goes to stdout (or --out); progress and summaries go to stderr, so
// stdout is byte-deterministic for a fixed config and cache state.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "k3p/lab.hpp"
#include "k3p/pipeline.hpp"

namespace {

using k3p::RunConfig;
using nlohmann::json;

struct CommonArgs {
  std::string surface;
  std::vector<uint32_t> primes;
  unsigned max_ext = 5;
  std::string sign = "both";
  unsigned known_rank = 1;
  unsigned rho_lower = 1;
  std::string rho_note;
  unsigned d_lower = 1;
  std::string d_note;
  std::string out;
  std::string cache;
  unsigned workers = 1;
};

void add_common_flags(CLI::App* cmd, CommonArgs* a, bool needs_primes) {
  cmd->add_option("--surface", a->surface, "surface text file")->required();
  auto* primes = cmd->add_option("--prime,-p", a->primes,
                                 "prime of good reduction (repeatable)");
  if (needs_primes) primes->required();
  cmd->add_option("--max-ext", a->max_ext,
                  "count over F_{p^n} for n = 1..max-ext (default 5)");
  cmd->add_option("--sign", a->sign,
                  "functional-equation sign policy: both | plus | minus")
      ->check(CLI::IsMember({"both", "plus", "minus", "+", "-"}));
  cmd->add_option("--known-rank", a->known_rank,
                  "asserted multiplicity of the (1 - pT) factor; values > 1 "
                  "are a user assertion recorded in the report");
  cmd->add_option("--rho-lower", a->rho_lower,
                  "geometric lower bound on the Picard number (default 1)");
  cmd->add_option("--rho-note", a->rho_note, "justification for --rho-lower");
  cmd->add_option("--d-lower", a->d_lower,
                  "lower bound on the endomorphism-field degree (default 1)");
  cmd->add_option("--d-note", a->d_note, "justification for --d-lower");
  cmd->add_option("--out,-o", a->out, "write JSON here instead of stdout");
  cmd->add_option("--cache", a->cache,
                  "count-cache directory (env K3PICARD_CACHE; empty disables)");
  cmd->add_option("--workers", a->workers, "counting threads per prime");
}

RunConfig to_config(const CommonArgs& a) {
  RunConfig cfg;
  cfg.surface_path = a.surface;
  cfg.primes = a.primes;
  cfg.max_ext = a.max_ext;
  if (a.sign == "plus" || a.sign == "+")
    cfg.sign_policy = k3p::SignPolicy::kForcePlus;
  else if (a.sign == "minus" || a.sign == "-")
    cfg.sign_policy = k3p::SignPolicy::kForceMinus;
  cfg.known_rank = a.known_rank;
  cfg.rho_low = a.rho_lower;
  cfg.rho_low_justification = a.rho_note;
  cfg.d_low = a.d_lower;
  cfg.d_low_justification = a.d_note;
  cfg.cache_dir = [&] {
    if (!a.cache.empty()) return a.cache;
    const char* env = std::getenv("K3PICARD_CACHE");
    return std::string(env ? env : "");
  }();
  cfg.workers = a.workers;
  return cfg;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  std::cerr << "wrote " << out_path << "\n";
}

k3p::PipelineResult run_with_log(const RunConfig& cfg) {
  k3p::PipelineResult res = k3p::run_pipeline(cfg);
  for (const std::string& line : res.log) std::cerr << line << "\n";
  return res;
}

// Projections of the full report for the stagewise subcommands: reuse the
// canonical emitter, then drop the keys later stages own.
std::string project_report(const k3p::Report& rep, const std::string& stage) {
  json doc = json::parse(k3p::emit_report(rep));
  if (stage == "count" || stage == "weil") {
    for (json& jp : doc["primes"]) {
      if (stage == "count") {
        jp.erase("candidates");
        continue;
      }
      for (json& jc : jp["candidates"]) {
        json slim;
        slim["coeffs"] = jc["coeffs"];
        slim["sign"] = jc["sign"];
        jc = std::move(slim);
      }
    }
  }
  if (stage != "verdict") {
    doc.erase("assumptions");
    doc.erase("inputs");
    doc.erase("verdict");
  } else {
    for (json& jp : doc["primes"]) {
      jp.erase("counts");
      jp.erase("candidates");
    }
  }
  return doc.dump(2) + "\n";
}

void print_summary(const k3p::Report& rep) {
  std::cerr << "verdict: " << rep.verdict_rho_low << " <= rho <= "
            << rep.verdict_rho_high
            << (rep.verdict_exact ? "  (exact)" : "  (open)") << "\n";
  for (const auto& pr : rep.primes)
    std::cerr << "  p = " << pr.p << ": " << pr.smoothness << ", "
              << pr.counts.size() << " count(s), " << pr.candidates.size()
              << " candidate(s)\n";
}

int cmd_verify(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "error: cannot read " << report_path << "\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const k3p::Report rep = k3p::parse_report(buf.str());
  const k3p::VerifyResult v = k3p::verify_report(rep);
  for (const std::string& line : v.log) std::cerr << line << "\n";
  json doc;
  doc["ok"] = v.ok;
  json issues = json::array();
  for (const auto& issue : v.issues)
    issues.push_back({{"where", issue.where}, {"message", issue.message}});
  doc["issues"] = std::move(issues);
  std::cout << doc.dump(2) << "\n";
  return v.ok ? 0 : 1;
}

struct LabArgs {
  std::vector<std::string> presets;
  unsigned samples = 25;
  uint64_t seed = 1;
  unsigned order_bound = 0;  // 0: the dimension-derived default
  unsigned congruence_matrices = 3;
  std::string out;
};

json lab_preset_block(const std::string& name, unsigned samples, uint64_t seed) {
  const k3p::EndoFieldModel model = k3p::preset_model(name);
  const unsigned e = static_cast<unsigned>(model.g.size()) - 1;
  const unsigned dim = (e == 0 ? 1 : e) * model.r;
  json block;
  block["preset"] = name;
  block["field_degree"] = (e == 0 ? 1 : e);
  block["rank"] = model.r;
  block["dimension"] = dim;
  block["base_seed"] = seed;
  block["samples"] = samples;
  std::map<unsigned, unsigned> hist;
  unsigned min_mult = dim + 1;
  uint64_t min_seed = seed;
  for (unsigned i = 0; i < samples; ++i) {
    const auto el = k3p::sample_centralizer(model, seed + i);
    const unsigned mult = k3p::eigenvalue_one_multiplicity(el.h);
    ++hist[mult];
    if (mult < min_mult) {
      min_mult = mult;
      min_seed = seed + i;
    }
  }
  json jh = json::array();
  for (const auto& [mult, count] : hist) jh.push_back(json::array({mult, count}));
  block["multiplicity_histogram"] = std::move(jh);
  block["min_multiplicity"] = min_mult;
  block["min_multiplicity_seed"] = min_seed;
  return block;
}

json lab_witness_block(const std::string& name, const k3p::WitnessElement& w,
                       unsigned order_bound) {
  const unsigned e = static_cast<unsigned>(w.model.g.size()) - 1;
  const unsigned dim = (e == 0 ? 1 : e) * w.model.r;
  const unsigned bound =
      order_bound ? order_bound : k3p::max_cyclotomic_order(dim);
  json block;
  block["witness"] = name;
  block["dimension"] = dim;
  block["eigenvalue_one_multiplicity"] = k3p::eigenvalue_one_multiplicity(w.h);
  block["order_bound"] = bound;
  block["has_root_of_unity_eigenvalue"] =
      k3p::has_root_of_unity_eigenvalue(w.h, bound);
  return block;
}

int cmd_lab(const LabArgs& a) {
  json doc;
  doc["seed"] = a.seed;
  std::vector<std::string> names = a.presets;
  if (names.empty()) names = k3p::preset_names();
  json presets = json::array();
  for (const std::string& name : names)
    presets.push_back(lab_preset_block(name, a.samples, a.seed));
  doc["presets"] = std::move(presets);
  json witnesses = json::array();
  witnesses.push_back(
      lab_witness_block("plane-rotation", k3p::rotation_witness(), a.order_bound));
  witnesses.push_back(
      lab_witness_block("cm-unit", k3p::cm_unit_witness(), a.order_bound));
  doc["witnesses"] = std::move(witnesses);

  // Structured congruence experiment: for each random matrix with a
  // 2-dimensional fixed space, find the smallest modulus exponent N <= 12
  // whose perturbation family keeps the fixed lattice mod 3^2.
  json cong = json::array();
  for (unsigned i = 0; i < a.congruence_matrices; ++i) {
    const uint64_t seed = a.seed + 1000 + i;
    const k3p::ZMat g = k3p::random_semisimple_with_unit_eigenspace(6, 2, seed);
    json jc;
    jc["seed"] = seed;
    jc["dimension"] = 6;
    unsigned first_pass = 0;
    for (unsigned n_exp = 1; n_exp <= 12 && first_pass == 0; ++n_exp) {
      bool all_pass = true;
      for (unsigned trial = 0; trial < 10 && all_pass; ++trial) {
        const auto outcome =
            k3p::eigenspace_congruence_test(g, 3, n_exp, 2, seed + 37 * trial);
        if (outcome.inconclusive || !outcome.pass) all_pass = false;
      }
      if (all_pass) first_pass = n_exp;
    }
    jc["ell"] = 3;
    jc["depth"] = 2;
    jc["first_passing_exponent"] = first_pass;  // 0: none <= 12
    cong.push_back(std::move(jc));
  }
  doc["congruence"] = std::move(cong);
  write_output(a.out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bounds and certifies the geometric Picard number of a quartic K3 "
      "surface over Q via reduction modulo primes"};
  app.require_subcommand(1);

  CommonArgs stage_args;
  CLI::App* c_count = app.add_subcommand("count", "point counts and traces");
  CLI::App* c_weil =
      app.add_subcommand("weil", "counts plus polynomial candidates");
  CLI::App* c_bound =
      app.add_subcommand("bound", "per-candidate Picard-bound invariants");
  CLI::App* c_verdict =
      app.add_subcommand("verdict", "combined verdict and assumptions");
  CLI::App* c_run = app.add_subcommand("run", "full certificate report");
  for (CLI::App* cmd : {c_count, c_weil, c_bound, c_verdict, c_run})
    add_common_flags(cmd, &stage_args, true);

  std::string report_path;
  CLI::App* c_verify =
      app.add_subcommand("verify", "re-derive an existing report's claims");
  c_verify->add_option("report", report_path, "report JSON file")->required();

  LabArgs lab_args;
  CLI::App* c_lab =
      app.add_subcommand("lab", "orthogonal-group simulation experiments");
  c_lab->add_option("--preset", lab_args.presets,
                    "centralizer preset (repeatable; default: all)");
  c_lab->add_option("--samples", lab_args.samples, "samples per preset");
  c_lab->add_option("--seed", lab_args.seed, "base seed");
  c_lab->add_option("--order-bound", lab_args.order_bound,
                    "root-of-unity scan bound (default: from dimension)");
  c_lab->add_option("--congruence-matrices", lab_args.congruence_matrices,
                    "matrices in the congruence experiment");
  c_lab->add_option("--out,-o", lab_args.out, "write JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_verify->parsed()) return cmd_verify(report_path);
    if (c_lab->parsed()) return cmd_lab(lab_args);
    RunConfig cfg = to_config(stage_args);
    const std::string stage = app.get_subcommands().front()->get_name();
    cfg.full_counts = (stage == "count");
    const k3p::PipelineResult res = run_with_log(cfg);
    const std::string text = (stage == "run")
                                 ? k3p::emit_report(res.report)
                                 : project_report(res.report, stage);
    write_output(stage_args.out, text);
    if (stage == "run" || stage == "verdict") print_summary(res.report);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
