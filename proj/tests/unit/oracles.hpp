#pragma once

// Reference computations written independently of the library internals.

#include "qcwb/cnf.hpp"
#include "qcwb/poly.hpp"

#include <cstdint>
#include <cstdlib>
#include <set>
#include <vector>

namespace oracle {

inline std::vector<std::uint8_t> bits_of(std::uint64_t x, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (x >> i) & 1U;
  return v;
}

// D * P(y) by direct summation over terms.
inline std::int64_t scaled_value(const qcwb::MultilinearPoly& p, const std::vector<std::uint8_t>& y) {
  std::int64_t s = 0;
  for (const auto& t : p.terms()) {
    std::int64_t prod = 1;
    for (auto v : t.vars) prod *= y[v - 1];
    s += t.coeff * prod;
  }
  return s;
}

inline bool clause_sat(const qcwb::Clause& c, const std::vector<std::uint8_t>& x) {
  for (auto l : c)
    if ((x[std::abs(l) - 1] != 0) == (l > 0)) return true;
  return false;
}

inline bool formula_sat(const qcwb::CnfFormula& f, const std::vector<std::uint8_t>& x) {
  for (const auto& c : f.clauses())
    if (!clause_sat(c, x)) return false;
  return true;
}

struct Count {
  std::uint64_t models = 0;
  std::set<std::vector<std::uint8_t>> projections;  // in original-index order
};

// Truth table over every variable of f (auxiliaries included).
inline Count brute_count(const qcwb::CnfFormula& f) {
  Count c;
  const auto nv = f.num_vars();
  const auto orig = f.original_vars();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << nv); ++x) {
    auto v = bits_of(x, nv);
    if (!formula_sat(f, v)) continue;
    ++c.models;
    std::vector<std::uint8_t> proj;
    for (auto o : orig) proj.push_back(v[o - 1]);
    c.projections.insert(proj);
  }
  return c;
}

}  // namespace oracle
