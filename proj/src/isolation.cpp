#include "qcwb/isolation.hpp"

#include "qcwb/circuit.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/rng.hpp"

namespace qcwb {

HashConstraint draw_hash(std::uint32_t num_original, std::uint32_t rows, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x6861736800ULL));
  HashConstraint h;
  for (std::uint32_t r = 0; r < rows; ++r) {
    HashRow row;
    for (std::uint32_t i = 1; i <= num_original; ++i)
      if (rng.bit()) row.subset.push_back(i);
    row.parity = rng.bit();
    h.rows.push_back(std::move(row));
  }
  return h;
}

std::vector<bool> hash_value(const HashConstraint& h, const Assignment& x) {
  std::vector<bool> out;
  for (const auto& row : h.rows) {
    bool acc = row.parity;
    for (auto i : row.subset) acc ^= x.get(i);
    out.push_back(acc);
  }
  return out;
}

CnfFormula conjoin_hash(const CnfFormula& f, const HashConstraint& h) {
  const auto originals = f.original_vars();
  std::vector<std::uint32_t> var_of(originals.size() + 1, 0);
  for (auto v : originals) {
    const auto idx = f.role(v).index;
    if (idx < 1 || idx > originals.size())
      throw InputError("original indices must be 1..N for hashing");
    var_of[idx] = v;
  }
  CircuitBuilder b(f);
  for (const auto& row : h.rows) {
    for (auto i : row.subset)
      if (i < 1 || i >= var_of.size()) throw InputError("hash row references unknown original");
    const auto L = row.subset.size();
    if (L == 0) {
      if (row.parity) b.add_clause({});
      continue;
    }
    Signal acc = b.var(var_of[row.subset[0]]);
    for (std::size_t j = 1; j + 1 < L; ++j) acc = b.xor_gate(acc, b.var(var_of[row.subset[j]]));
    if (L == 1) {
      b.require(row.parity ? acc : !acc);
      continue;
    }
    const Lit a = acc.lit();
    const Lit last = static_cast<Lit>(var_of[row.subset[L - 1]]);
    if (row.parity) {
      b.add_clause({a, last});
      b.add_clause({-a, -last});
    } else {
      b.add_clause({-a, last});
      b.add_clause({a, -last});
    }
  }
  return b.take();
}

std::vector<CnfFormula> isolate(const CnfFormula& f, std::uint64_t seed) {
  const auto n = f.num_original();
  const auto full = draw_hash(n, n + 1, seed);
  std::vector<CnfFormula> out;
  for (std::uint32_t k = 1; k <= n + 1; ++k) {
    HashConstraint prefix;
    prefix.rows.assign(full.rows.begin(), full.rows.begin() + k);
    out.push_back(conjoin_hash(f, prefix));
  }
  return out;
}

std::optional<unsigned> isolation_success(const CnfFormula& f, std::uint64_t seed,
                                          unsigned budget) {
  const auto formulas = isolate(f, seed);
  for (std::size_t k = 0; k < formulas.size(); ++k) {
    const auto mc = count_models(formulas[k], budget);
    if (mc.projections.size() == 1) return static_cast<unsigned>(k + 1);
    if (mc.projections.empty()) break;  // later prefixes only remove witnesses
  }
  return std::nullopt;
}

}  // namespace qcwb
