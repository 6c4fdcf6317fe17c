#pragma once

#include "qcwb/kernels.hpp"
#include "qcwb/poly.hpp"
#include "qcwb/rational.hpp"
#include "qcwb/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcwb {

// Where the estimate is cut. Midpoint accepts iff P^ >= a - gap/2; Literal
// accepts iff P^ >= a.
enum class DecisionRule { Midpoint, Literal };
// Literal: T = ceil(2 ln(2/eps) / gap^2). Hoeffding: T = ceil(8 B^2 ln(2/eps) / gap^2),
// which bounds both error sides by eps/2 for the midpoint cut.
enum class RepetitionRule { Literal, Hoeffding };

struct VerifierOptions {
  DecisionRule decision = DecisionRule::Midpoint;
  RepetitionRule repetition = RepetitionRule::Hoeffding;
  std::optional<std::uint64_t> repetitions;  // explicit override
};

struct VerifierSpec {
  struct Monomial {
    VarSet vars;
    std::int64_t weight = 0;  // |v_S| at scale D
    int sign = 1;
  };
  std::vector<Monomial> monomials;
  std::vector<std::int64_t> cumulative;  // inclusive prefix sums of weight
  std::int64_t scaled_weight = 0;        // sum of weights = D * B
  std::int64_t denominator = 1;
  Rational total_weight;  // B
  Rational threshold;     // a
  Rational gap;           // delta_D
  Rational fail_budget;
  DecisionRule decision = DecisionRule::Midpoint;
  RepetitionRule repetition = RepetitionRule::Hoeffding;
  Rational decision_cut;           // accept iff P^ >= decision_cut
  std::int64_t min_accept_sum = 0; // same test on S = sum of round values
  std::uint64_t repetitions = 0;   // T
  Rational completeness_raw, soundness_raw;  // (a +- gap) / B
  Rational completeness, soundness;          // clamped to [0, 1]
  unsigned query_bound = 0;
  std::uint32_t proof_length = 0;
};

std::uint64_t literal_repetitions(const Rational& gap, const Rational& fail_budget);
std::uint64_t hoeffding_repetitions(const Rational& total_weight, const Rational& gap,
                                    const Rational& fail_budget);

VerifierSpec build_verifier(const MtpInstance& inst, const Rational& fail_budget,
                            const VerifierOptions& opts = {});

// One round: draws monomial j with probability |v_j| / (D B) and returns
// sign_j * prod_{i in S_j} y_i. Adds the number of proof bits read to *queries.
int sample_round(const VerifierSpec& spec, const Assignment& y, Rng& rng,
                 unsigned* queries = nullptr);

struct RunResult {
  bool accept = false;
  std::int64_t sum = 0;      // S
  Rational estimate;         // (B / T) S
  unsigned max_queries = 0;  // most bits read in any round
};
RunResult run_verifier(const VerifierSpec& spec, const Assignment& y, std::uint64_t seed);

// Per-round law: +1 with W+/W, -1 with W-/W, 0 otherwise.
struct RoundLaw {
  std::int64_t pos = 0, neg = 0, total = 0;
};
RoundLaw round_law(const VerifierSpec& spec, const Assignment& y);

// Exact rational Pr[S >= min_accept_sum]; T <= max_repetitions.
Rational acceptance_probability_exact(const VerifierSpec& spec, const Assignment& y,
                                      std::uint64_t max_repetitions = 2000);
Rational acceptance_probability_exact(const RoundLaw& law, std::uint64_t T,
                                      std::int64_t min_sum, std::uint64_t max_repetitions = 2000);
// Double-precision binomial mixture; any T.
double acceptance_probability(const VerifierSpec& spec, const Assignment& y);
double acceptance_probability(const RoundLaw& law, std::uint64_t T, std::int64_t min_sum);

struct ProofRow {
  Assignment proof;
  Rational value;  // P(y)
  bool witness = false;
  double acceptance = 0;
};

struct ContractReport {
  enum class Method { Exhaustive, Certified };
  Method method = Method::Exhaustive;
  PromiseClass promise = PromiseClass::No;
  bool holds = false;
  std::string violation;
  double accept_level = 2.0 / 3.0;  // 1 - fail_budget
  double reject_level = 1.0 / 3.0;  // fail_budget
  std::vector<Assignment> witnesses;
  std::vector<double> witness_acceptance;
  std::vector<Assignment> accepted;  // exhaustive: proofs at or above accept_level
  double max_other_acceptance = 0;   // exhaustive: exact; certified: tail bound
  std::uint64_t proofs_covered = 0;
  std::size_t laws_evaluated = 0;
  std::vector<ProofRow> table;  // filled on request
};

struct ContractOptions {
  unsigned budget = kDefaultEnumerationBudget;
  bool table = false;
  bool parallel = true;
};

// Evaluates every proof y in {0,1}^N. Acceptance is monotone in (W+, -W-),
// so non-witnesses are reduced to the Pareto frontier of their masses.
ContractReport check_pcp_contract(const VerifierSpec& spec, const MtpInstance& inst,
                                  const ContractOptions& opts = {});

// For instances too large to enumerate: the caller supplies the complete
// witness list (e.g. from exact model counting). Witnesses are evaluated
// exactly; every non-witness has P <= a - gap, so its acceptance is bounded
// by the Hoeffding tail exp(-2T (cut - a + gap)^2 / (2B)^2).
ContractReport check_pcp_contract_certified(const VerifierSpec& spec, const MtpInstance& inst,
                                            const std::vector<Assignment>& witnesses);

double nonwitness_tail_bound(const VerifierSpec& spec);

}  // namespace qcwb
