#pragma once

#include "qcwb/cnf.hpp"
#include "qcwb/model_count.hpp"
#include "qcwb/poly.hpp"
#include "qcwb/verifier.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcwb {

struct PipelineOptions {
  Rational fail_budget = Rational(BigInt(1), BigInt(3));
  unsigned budget = kDefaultEnumerationBudget;  // MTP and projection enumeration
  unsigned exhaustive_proof_bits = 16;          // larger UniqueMTP instances use the certified check
  std::size_t max_full_models = 4096;
  VerifierOptions verifier;
};

// Chain after mtp_to_sat, for one k.
struct KRecord {
  unsigned k = 0;
  std::uint32_t isolated_vars = 0;
  std::size_t isolated_witnesses = 0;  // distinct original projections of formula_k
  BigInt isolated_models;
  std::uint32_t reduced_vars = 0;
  BigInt reduced_models;
  std::uint32_t proof_bits = 0;  // variables of the UniqueMTP instance
  std::size_t clauses = 0;
  std::size_t mtp_witnesses = 0;
  PromiseClass unique_mtp_class = PromiseClass::No;
  std::uint64_t repetitions = 0;
  Rational total_weight;
  ContractReport::Method method = ContractReport::Method::Certified;
  bool contract_evaluated = false;
  bool contract_holds = false;
  double witness_acceptance = 0;
  double max_other_acceptance = 0;
  std::string violation;
  std::string note;
  bool success = false;  // unique projection and passing contract
  std::optional<Assignment> surviving;  // projection onto the MTP variables
  std::vector<std::string> exactness_failures;
};

struct PipelineReport {
  std::uint64_t seed = 0;
  std::uint32_t mtp_vars = 0;
  std::size_t mtp_witnesses = 0;
  std::uint32_t sat_vars = 0;  // N'
  std::size_t sat_clauses = 0;
  BigInt sat_models;
  std::size_t sat_projections = 0;
  std::vector<KRecord> ks;
  std::optional<unsigned> success_k;
  bool all_stages_no = false;  // meaningful when the input is a NO instance
  std::vector<std::string> exactness_failures;

  // One JSON object per line, rationals as "num/den".
  std::vector<std::string> lines() const;
};

// Stages computed once per instance.
struct SatStage {
  MtpInstance instance;
  std::vector<Assignment> mtp_witnesses;
  CnfFormula formula;
  ModelCount models;
};
SatStage prepare_sat_stage(const MtpInstance& inst, const PipelineOptions& opts = {});

PipelineReport pipeline(const MtpInstance& inst, std::uint64_t seed,
                        const PipelineOptions& opts = {});
PipelineReport pipeline(const SatStage& stage, std::uint64_t seed,
                        const PipelineOptions& opts = {});
// Seeds fan out in parallel; reports come back in seed order.
std::vector<PipelineReport> pipeline_sweep(const MtpInstance& inst,
                                           const std::vector<std::uint64_t>& seeds,
                                           const PipelineOptions& opts = {});

}  // namespace qcwb
