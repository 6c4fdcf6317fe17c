#pragma once

#include "qcwb/cnf.hpp"
#include "qcwb/model_count.hpp"
#include "qcwb/poly.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qcwb {

// One parity constraint XOR_{i in subset} x_i = parity over original indices.
struct HashRow {
  std::vector<std::uint32_t> subset;  // original indices, ascending
  bool parity = false;
  bool operator==(const HashRow&) const = default;
};

// Rows of h(x) = Ax xor b; the constraint is h(x) = 0, i.e. Ax = b.
struct HashConstraint {
  std::vector<HashRow> rows;
  bool operator==(const HashConstraint&) const = default;
};

// (N+1) x N matrix A and vector b drawn once per seed; prefixes give formula_k.
HashConstraint draw_hash(std::uint32_t num_original, std::uint32_t rows, std::uint64_t seed);
// h(x) = Ax xor b for an assignment of the originals.
std::vector<bool> hash_value(const HashConstraint& h, const Assignment& x);

// Conjoins the parity rows, encoded as chains of XOR gates over fresh auxiliaries.
CnfFormula conjoin_hash(const CnfFormula& f, const HashConstraint& h);

// formula_k for k = 1..N+1, using the first k rows of draw_hash(N, N+1, seed).
std::vector<CnfFormula> isolate(const CnfFormula& f, std::uint64_t seed);

// Smallest k whose formula_k has exactly one original-projection witness.
std::optional<unsigned> isolation_success(const CnfFormula& f, std::uint64_t seed,
                                          unsigned budget = kDefaultEnumerationBudget);

}  // namespace qcwb
