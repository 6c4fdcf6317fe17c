#include "qcwb/pipeline.hpp"

#include "qcwb/circuit.hpp"
#include "qcwb/clause_poly.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/isolation.hpp"

#include <json.hpp>

#include <algorithm>
#include <exception>

namespace qcwb {

namespace {

const char* method_name(ContractReport::Method m) {
  return m == ContractReport::Method::Exhaustive ? "exhaustive" : "certified";
}

Assignment from_values(const std::vector<std::uint8_t>& v) {
  Assignment a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a.set(static_cast<std::uint32_t>(i + 1), v[i] != 0);
  return a;
}

void run_contract(KRecord& rec, const MtpInstance& mtp, const std::vector<Assignment>& witnesses,
                  bool witnesses_complete, const PipelineOptions& opts) {
  rec.mtp_witnesses = witnesses.size();
  rec.unique_mtp_class = witnesses.empty() ? PromiseClass::No
                         : witnesses.size() == 1 ? PromiseClass::UniqueYes
                                                 : PromiseClass::MultiYes;
  if (rec.unique_mtp_class == PromiseClass::MultiYes) {
    rec.violation = "instance has " + std::to_string(witnesses.size()) + " witnesses";
    return;
  }
  if (mtp.poly().total_weight() == 0 && witnesses.empty()) {
    // P has no monomials to sample, so the verifier that always rejects meets the contract.
    rec.contract_evaluated = true;
    rec.contract_holds = true;
    rec.method = ContractReport::Method::Certified;
    rec.note = "zero polynomial: rejected without sampling";
    return;
  }
  VerifierSpec spec;
  try {
    spec = build_verifier(mtp, opts.fail_budget, opts.verifier);
  } catch (const InputError& e) {
    rec.violation = e.what();
    return;
  }
  rec.repetitions = spec.repetitions;
  rec.total_weight = spec.total_weight;
  ContractReport cr;
  if (rec.proof_bits <= opts.exhaustive_proof_bits) {
    ContractOptions co;
    co.budget = opts.exhaustive_proof_bits;
    cr = check_pcp_contract(spec, mtp, co);
    if (witnesses_complete && cr.witnesses != witnesses)
      rec.exactness_failures.push_back("clause-poly witnesses differ from formula models");
  } else {
    if (!witnesses_complete) {
      rec.violation = "witness list incomplete; certified check impossible";
      return;
    }
    cr = check_pcp_contract_certified(spec, mtp, witnesses);
  }
  rec.contract_evaluated = true;
  rec.method = cr.method;
  rec.contract_holds = cr.holds;
  rec.violation = cr.violation;
  rec.witness_acceptance = cr.witness_acceptance.empty() ? 0.0 : cr.witness_acceptance.front();
  rec.max_other_acceptance = cr.max_other_acceptance;
}

}  // namespace

SatStage prepare_sat_stage(const MtpInstance& inst, const PipelineOptions& opts) {
  auto decided = brute_force_decide(inst, opts.budget);
  CnfFormula f = mtp_to_sat(inst);
  ModelCount mc = count_models(f, opts.budget);
  return SatStage{inst, std::move(decided.witnesses), std::move(f), std::move(mc)};
}

PipelineReport pipeline(const MtpInstance& inst, std::uint64_t seed, const PipelineOptions& opts) {
  return pipeline(prepare_sat_stage(inst, opts), seed, opts);
}

PipelineReport pipeline(const SatStage& stage, std::uint64_t seed, const PipelineOptions& opts) {
  PipelineReport r;
  r.seed = seed;
  r.mtp_vars = stage.instance.poly().num_vars();
  r.mtp_witnesses = stage.mtp_witnesses.size();
  r.sat_vars = stage.formula.num_vars();
  r.sat_clauses = stage.formula.clauses().size();
  r.sat_models = stage.models.total;
  r.sat_projections = stage.models.projections.size();
  if (stage.models.projections != stage.mtp_witnesses)
    r.exactness_failures.push_back("sat: projections differ from MTP witnesses");
  if (stage.models.total > 0 && stage.models.max_extensions != 1)
    r.exactness_failures.push_back("sat: auxiliaries not determined by originals");

  bool all_no = r.mtp_witnesses == 0 && r.sat_models == 0;
  const auto formulas = isolate(stage.formula, seed);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    KRecord rec;
    rec.k = static_cast<unsigned>(i + 1);
    const auto& fk = formulas[i];
    rec.isolated_vars = fk.num_vars();
    const auto mk = count_models(fk, opts.budget);
    rec.isolated_witnesses = mk.projections.size();
    rec.isolated_models = mk.total;
    const CnfFormula reduced = width_reduce(fk, 3);
    rec.reduced_vars = reduced.num_vars();
    const auto mr = count_models(reduced, opts.budget, opts.max_full_models);
    rec.reduced_models = mr.total;
    if (mr.total != mk.total || mr.projections != mk.projections)
      rec.exactness_failures.push_back("width_reduce changed the model set");
    for (const auto& y : mk.projections)
      if (!std::binary_search(stage.mtp_witnesses.begin(), stage.mtp_witnesses.end(), y))
        rec.exactness_failures.push_back("isolated witness " + y.str() + " is not an MTP witness");

    const MtpInstance mtp = cnf_to_mtp(reduced, 3);
    rec.proof_bits = mtp.poly().num_vars();
    rec.clauses = reduced.clauses().size();
    std::vector<Assignment> witnesses;
    for (const auto& m : mr.models) witnesses.push_back(from_values(m));
    std::sort(witnesses.begin(), witnesses.end());
    for (const auto& w : witnesses)
      if (!mtp.is_witness(w)) rec.exactness_failures.push_back("model of formula_k misses P = 1");
    run_contract(rec, mtp, witnesses, mr.models_complete, opts);
    if (rec.isolated_witnesses == 1) rec.surviving = mk.projections.front();
    rec.success = rec.isolated_witnesses == 1 && rec.contract_holds;
    if (rec.success && !r.success_k) r.success_k = rec.k;
    all_no = all_no && rec.isolated_models == 0 && rec.reduced_models == 0 &&
             rec.mtp_witnesses == 0 && rec.unique_mtp_class == PromiseClass::No &&
             rec.contract_evaluated && rec.contract_holds;
    for (const auto& e : rec.exactness_failures)
      r.exactness_failures.push_back("k=" + std::to_string(rec.k) + ": " + e);
    r.ks.push_back(std::move(rec));
  }
  r.all_stages_no = all_no;
  return r;
}

std::vector<PipelineReport> pipeline_sweep(const MtpInstance& inst,
                                           const std::vector<std::uint64_t>& seeds,
                                           const PipelineOptions& opts) {
  const SatStage stage = prepare_sat_stage(inst, opts);
  std::vector<PipelineReport> out(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    try {
      out[i] = pipeline(stage, seeds[i], opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<std::string> PipelineReport::lines() const {
  std::vector<std::string> out;
  auto emit = [&](nlohmann::json j) { out.push_back(j.dump()); };
  emit({{"seed", seed}, {"stage", "mtp"}, {"vars", mtp_vars}, {"witnesses", mtp_witnesses}});
  emit({{"seed", seed}, {"stage", "sat"}, {"vars", sat_vars}, {"clauses", sat_clauses},
        {"models", sat_models.str()}, {"projections", sat_projections}});
  for (const auto& k : ks) {
    emit({{"seed", seed}, {"stage", "isolate"}, {"k", k.k}, {"vars", k.isolated_vars},
          {"witnesses", k.isolated_witnesses}, {"models", k.isolated_models.str()}});
    emit({{"seed", seed}, {"stage", "width_reduce"}, {"k", k.k}, {"vars", k.reduced_vars},
          {"models", k.reduced_models.str()}});
    emit({{"seed", seed}, {"stage", "unique_mtp"}, {"k", k.k}, {"proof_bits", k.proof_bits},
          {"clauses", k.clauses}, {"witnesses", k.mtp_witnesses},
          {"class", to_string(k.unique_mtp_class)}});
    nlohmann::json v{{"seed", seed}, {"stage", "verifier"}, {"k", k.k},
                     {"evaluated", k.contract_evaluated}, {"holds", k.contract_holds},
                     {"success", k.success}};
    if (k.contract_evaluated) {
      v["T"] = k.repetitions;
      v["B"] = to_string(k.total_weight);
      v["method"] = method_name(k.method);
      v["witness_acceptance"] = k.witness_acceptance;
      v["max_other_acceptance"] = k.max_other_acceptance;
    }
    if (!k.violation.empty()) v["violation"] = k.violation;
    if (!k.note.empty()) v["note"] = k.note;
    if (k.surviving) v["surviving"] = k.surviving->str();
    emit(v);
  }
  nlohmann::json s{{"seed", seed}, {"stage", "summary"}, {"all_stages_no", all_stages_no},
                   {"exactness_failures", exactness_failures}};
  s["success_k"] = success_k ? nlohmann::json(*success_k) : nlohmann::json(nullptr);
  emit(s);
  return out;
}

}  // namespace qcwb
