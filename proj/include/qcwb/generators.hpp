#pragma once

#include "qcwb/cnf.hpp"
#include "qcwb/poly.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace qcwb {

struct GenParams {
  std::uint32_t num_vars = 6;
  std::uint32_t degree = 3;       // random-poly: max monomial size
  std::uint32_t terms = 6;        // random-poly: number of monomials
  unsigned coeff_bits = 3;        // random-poly: |coeff| < 2^coeff_bits
  std::uint32_t clause_width = 3; // kcnf
  double density = 4.0;           // kcnf: clauses per variable
  std::uint32_t zeros = 1;        // planted: positions fixed to 0
};

// Shifted so min P = 0 and scaled by D = 2^ceil(log2(max - min)); the
// threshold sits on the 1/D grid, on an attained value about half the time.
MtpInstance gen_random_poly(const GenParams& p, std::uint64_t seed);
// prod_{i: y*_i=1} y_i prod_{i: y*_i=0} (1 - y_i), a = 1: the unique witness is y*.
MtpInstance gen_planted(const GenParams& p, std::uint64_t seed);
// The planted product halved with a = 1, gap 1/2: no witnesses.
MtpInstance gen_planted_no(const GenParams& p, std::uint64_t seed);
// Uniform k-CNF with round(density * N) clauses over distinct variables.
CnfFormula gen_kcnf(const GenParams& p, std::uint64_t seed);

using Generated = std::variant<MtpInstance, CnfFormula>;
// Profiles: random-poly, planted, planted-no, kcnf.
Generated gen_instance(const std::string& profile, const GenParams& p, std::uint64_t seed);

}  // namespace qcwb
