// Single entry point for generation, reductions, verification and the saddle solver.
// Exit codes: 0 all checks passed, 1 contract violation, 2 input error.

#include "qcwb/clause_poly.hpp"
#include "qcwb/circuit.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/generators.hpp"
#include "qcwb/isolation.hpp"
#include "qcwb/pipeline.hpp"
#include "qcwb/poly_io.hpp"
#include "qcwb/saddle.hpp"
#include "qcwb/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

using namespace qcwb;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kViolation = 1, kInputError = 2;

struct Globals {
  std::uint64_t seed = 1;
  unsigned budget = kDefaultEnumerationBudget;
  std::string out;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(g.out, text);
  }
}

json matrix_json(const CMat& m) { return json::parse(observable_to_json(m)); }

int cmd_gen(const Globals& g, const std::string& profile, const GenParams& p) {
  const auto inst = gen_instance(profile, p, g.seed);
  if (const auto* m = std::get_if<MtpInstance>(&inst)) {
    emit(g, write_mtp(*m));
  } else {
    const auto& f = std::get<CnfFormula>(inst);
    if (g.out.empty()) emit(g, to_dimacs(f));
    else save_cnf(g.out, f);
  }
  return kOk;
}

int cmd_mtp2sat(const Globals& g, const std::string& in) {
  SatStats stats;
  const auto f = mtp_to_sat(load_mtp(in), &stats);
  if (g.out.empty()) emit(g, to_dimacs(f));
  else save_cnf(g.out, f);
  return kOk;
}

int cmd_isolate(const Globals& g, const std::string& in, const std::string& map) {
  const auto fs = isolate(load_cnf(in, map), g.seed);
  if (g.out.empty()) {
    std::string text;
    for (std::size_t k = 0; k < fs.size(); ++k) text += "c hash rows " + std::to_string(k + 1) + "\n" + to_dimacs(fs[k]);
    emit(g, text);
  } else {
    for (std::size_t k = 0; k < fs.size(); ++k) save_cnf(g.out + ".k" + std::to_string(k + 1) + ".cnf", fs[k]);
  }
  return kOk;
}

int cmd_cnf2mtp(const Globals& g, const std::string& in, const std::string& map, unsigned width, bool reduce) {
  auto f = load_cnf(in, map);
  if (reduce) f = width_reduce(f, width);
  emit(g, write_mtp(cnf_to_mtp(f, width)));
  return kOk;
}

int cmd_verify(const Globals& g, const std::string& in, const std::string& fail, bool table) {
  const auto inst = load_mtp(in);
  const auto spec = build_verifier(inst, parse_rational(fail));
  ContractOptions co;
  co.budget = g.budget;
  co.table = table;
  const auto rep = check_pcp_contract(spec, inst, co);
  json j{{"promise", to_string(rep.promise)},
         {"holds", rep.holds},
         {"repetitions", spec.repetitions},
         {"completeness", to_string(spec.completeness)},
         {"soundness", to_string(spec.soundness)},
         {"max_other_acceptance", rep.max_other_acceptance},
         {"proofs_covered", rep.proofs_covered}};
  if (!rep.violation.empty()) j["violation"] = rep.violation;
  json w = json::array();
  for (std::size_t i = 0; i < rep.witnesses.size(); ++i)
    w.push_back({{"proof", rep.witnesses[i].str()}, {"acceptance", rep.witness_acceptance[i]}});
  j["witnesses"] = w;
  if (table) {
    json t = json::array();
    for (const auto& row : rep.table)
      t.push_back({{"proof", row.proof.str()}, {"value", to_string(row.value)}, {"acceptance", row.acceptance}});
    j["table"] = t;
  }
  emit(g, j.dump() + "\n");
  return rep.holds ? kOk : kViolation;
}

int cmd_simulate(const Globals& g, const std::string& in, const std::string& proof, std::uint64_t trials,
                 const std::string& fail) {
  const auto inst = load_mtp(in);
  const auto spec = build_verifier(inst, parse_rational(fail));
  const auto y = Assignment::from_string(proof);
  if (y.size() != inst.poly().num_vars()) throw InputError("proof length does not match the instance");
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < trials; ++t) accepted += run_verifier(spec, y, derive_seed(g.seed, 0x73696d, t)).accept;
  const double rate = trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0;
  const double p = acceptance_probability(spec, y);
  const double sigma = trials ? std::sqrt(p * (1 - p) / static_cast<double>(trials)) : 0.0;
  json j{{"proof", y.str()},     {"trials", trials},         {"accepted", accepted},
         {"rate", rate},         {"acceptance", p},          {"sigma", sigma},
         {"repetitions", spec.repetitions}, {"within_3_sigma", std::abs(rate - p) <= 3 * sigma + 1e-12}};
  emit(g, j.dump() + "\n");
  return kOk;
}

int cmd_saddle(const Globals& g, const std::string& obs, const std::string& set_a, const std::string& set_b,
               double tol) {
  const CMat R = observable_from_json(read_text_file(obs));
  SaddleOptions o;
  o.tol = tol;
  o.seed = g.seed;
  const auto r = solve_reduced(R, parse_set_spec(set_a), parse_set_spec(set_b), o);
  json j{{"value_lower", r.value_lower}, {"value_upper", r.value_upper},
         {"certificate", to_string(r.certificate)}, {"converged", r.converged},
         {"iterations", r.iterations}, {"rho", matrix_json(r.rho)},
         {"sigma", matrix_json(r.sigma)}};
  if (!r.note.empty()) j["note"] = r.note;
  emit(g, j.dump() + "\n");
  return r.value_lower <= r.value_upper + 1e-8 ? kOk : kViolation;
}

int cmd_pipeline(const Globals& g, const std::string& in, std::uint64_t seeds) {
  const auto inst = load_mtp(in);
  PipelineOptions o;
  o.budget = g.budget;
  std::vector<std::uint64_t> ss;
  for (std::uint64_t s = 0; s < seeds; ++s) ss.push_back(g.seed + s);
  const auto reports = pipeline_sweep(inst, ss, o);
  std::string text;
  bool exact = true;
  for (const auto& r : reports) {
    for (const auto& line : r.lines()) text += line + "\n";
    exact = exact && r.exactness_failures.empty();
    if (r.mtp_witnesses == 0 && !r.all_stages_no) exact = false;
  }
  emit(g, text);
  return exact ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reductions, verifier simulation and saddle-point solver"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--budget", g.budget, "Enumeration budget in bits")->capture_default_str();
  app.add_option("--out", g.out, "Output path (stdout when omitted)");

  std::string profile = "planted";
  GenParams gp;
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--profile", profile, "random-poly | planted | planted-no | kcnf")->capture_default_str();
  gen->add_option("--vars", gp.num_vars)->capture_default_str();
  gen->add_option("--degree", gp.degree)->capture_default_str();
  gen->add_option("--terms", gp.terms)->capture_default_str();
  gen->add_option("--coeff-bits", gp.coeff_bits)->capture_default_str();
  gen->add_option("--width", gp.clause_width)->capture_default_str();
  gen->add_option("--density", gp.density)->capture_default_str();
  gen->add_option("--zeros", gp.zeros)->capture_default_str();

  std::string in, map;
  unsigned width = 3;
  auto* reduce = app.add_subcommand("reduce", "Run one reduction stage");
  reduce->require_subcommand(1);
  auto* mtp2sat = reduce->add_subcommand("mtp2sat", "MTP instance to CNF");
  mtp2sat->add_option("--in", in)->required();
  auto* iso = reduce->add_subcommand("isolate", "Hash-constrained formulas for k = 1..n+1");
  iso->add_option("--in", in)->required();
  iso->add_option("--map", map, "Variable role map (defaults to <in>.map.json when present)");
  auto* c2m = reduce->add_subcommand("cnf2mtp", "CNF to MTP by clause arithmetization");
  c2m->add_option("--in", in)->required();
  c2m->add_option("--map", map);
  c2m->add_option("--max-width", width)->capture_default_str();
  bool reduce_width = false;
  c2m->add_flag("--reduce-width", reduce_width, "Split wider clauses with fresh auxiliaries first");

  std::string fail = "1/3";
  bool table = false;
  auto* verify = app.add_subcommand("verify", "Exact verifier contract check");
  verify->add_option("--instance", in)->required();
  verify->add_option("--fail-budget", fail)->capture_default_str();
  verify->add_flag("--table", table, "Include the acceptance table");

  std::string proof;
  std::uint64_t trials = 1000;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo runs of the verifier on one proof");
  sim->add_option("--instance", in)->required();
  sim->add_option("--proof", proof, "Bit string y_1..y_N")->required();
  sim->add_option("--trials", trials)->capture_default_str();
  sim->add_option("--fail-budget", fail)->capture_default_str();

  std::string obs, set_a = "full:2", set_b = "full:2";
  double tol = 1e-7;
  auto* saddle = app.add_subcommand("saddle", "Bilinear saddle value over constrained state sets");
  saddle->add_option("--observable", obs, "JSON observable")->required();
  saddle->add_option("--set-a", set_a, "full:d | sep:d1xd2 | ent:d1xd2:b")->capture_default_str();
  saddle->add_option("--set-b", set_b)->capture_default_str();
  saddle->add_option("--tol", tol)->capture_default_str();

  std::uint64_t seeds = 1;
  auto* pipe = app.add_subcommand("pipeline", "Full reduction chain with per-stage bookkeeping");
  pipe->add_option("--instance", in)->required();
  pipe->add_option("--seeds", seeds, "Consecutive seeds starting at --seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*gen) return cmd_gen(g, profile, gp);
    if (*mtp2sat) return cmd_mtp2sat(g, in);
    if (*iso) return cmd_isolate(g, in, map);
    if (*c2m) return cmd_cnf2mtp(g, in, map, width, reduce_width);
    if (*verify) return cmd_verify(g, in, fail, table);
    if (*sim) return cmd_simulate(g, in, proof, trials, fail);
    if (*saddle) return cmd_saddle(g, obs, set_a, set_b, tol);
    if (*pipe) return cmd_pipeline(g, in, seeds);
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kViolation;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
