#pragma once

#include "qcwb/cnf.hpp"
#include "qcwb/poly.hpp"
#include "qcwb/rational.hpp"

#include <cstdint>
#include <vector>

namespace qcwb {

struct ModelCount {
  BigInt total;                         // full models, auxiliaries included
  std::vector<Assignment> projections;  // distinct projections onto originals, lexicographic
  BigInt max_extensions;                // most models sharing one projection
  // Full models (value[v-1]), filled only when requested and total <= the limit.
  std::vector<std::vector<std::uint8_t>> models;
  bool models_complete = false;
};

// Exact enumeration by DPLL with unit propagation, branching on originals
// first. Throws ResourceError when more than 2^projection_budget distinct
// projections would have to be listed.
ModelCount count_models(const CnfFormula& f, unsigned projection_budget = kDefaultEnumerationBudget,
                        std::size_t max_full_models = 0);
// Same result; the first originals are split into independent subproblems.
ModelCount count_models_parallel(const CnfFormula& f,
                                 unsigned projection_budget = kDefaultEnumerationBudget);

// Plain truth-table count over all 2^V assignments (V <= 30).
ModelCount count_models_truth_table(const CnfFormula& f);

}  // namespace qcwb
