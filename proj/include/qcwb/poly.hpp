#pragma once

#include "qcwb/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qcwb {

// Sorted, 1-based variable indices of a monomial.
using VarSet = std::vector<std::uint32_t>;

inline constexpr unsigned kDefaultEnumerationBudget = 24;

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n) : bits_(n, 0) {}

  // Bit (i-1) of mask holds y_i.
  static Assignment from_mask(std::size_t n, std::uint64_t mask);
  // Character i of text is y_{i+1}; accepts '0'/'1' only.
  static Assignment from_string(const std::string& text);

  std::size_t size() const { return bits_.size(); }
  bool get(std::uint32_t var) const { return bits_.at(var - 1) != 0; }
  void set(std::uint32_t var, bool value) { bits_.at(var - 1) = value ? 1 : 0; }
  std::uint64_t mask() const;
  std::string str() const;

  auto operator<=>(const Assignment&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct Term {
  VarSet vars;
  std::int64_t coeff = 0;
  bool operator==(const Term&) const = default;
};

// P(y) = (sum_S v_S prod_{i in S} y_i) / D with integer v_S and D >= 1.
// D = 2^scale_bits in the dyadic case.
class MultilinearPoly {
 public:
  MultilinearPoly(std::uint32_t num_vars, std::uint32_t degree_bound, std::int64_t denominator,
                  std::vector<Term> terms);
  static MultilinearPoly dyadic(std::uint32_t num_vars, std::uint32_t degree_bound,
                                unsigned scale_bits, std::vector<Term> terms);

  std::uint32_t num_vars() const { return num_vars_; }
  std::uint32_t degree_bound() const { return degree_bound_; }
  std::int64_t denominator() const { return denominator_; }
  unsigned scale_bits() const;
  bool is_dyadic() const;
  const std::vector<Term>& terms() const { return terms_; }

  // Bit length of the largest |v_S|.
  unsigned coeff_bits() const;
  // sum_S |v_S|.
  std::int64_t total_weight() const { return total_weight_; }
  std::uint32_t actual_degree() const;

  std::int64_t evaluate_scaled(const Assignment& y) const;
  Rational evaluate(const Assignment& y) const;

  bool operator==(const MultilinearPoly&) const = default;

 private:
  std::uint32_t num_vars_;
  std::uint32_t degree_bound_;
  std::int64_t denominator_;
  std::vector<Term> terms_;
  std::int64_t total_weight_ = 0;
};

// Accumulates coefficients by monomial; zero sums are dropped on build.
class PolyBuilder {
 public:
  void add(VarSet vars, std::int64_t coeff);
  MultilinearPoly build(std::uint32_t num_vars, std::uint32_t degree_bound,
                        std::int64_t denominator) const;

 private:
  std::map<VarSet, __int128> acc_;
};

enum class PromiseClass { UniqueYes, MultiYes, No };
std::string to_string(PromiseClass c);

class MtpInstance {
 public:
  MtpInstance(MultilinearPoly poly, Rational threshold, Rational gap);

  const MultilinearPoly& poly() const { return poly_; }
  const Rational& threshold() const { return threshold_; }
  const Rational& gap() const { return gap_; }
  BigInt value_set_size() const;
  // Smallest integer t with P(y) >= a  <=>  D * P(y) >= t.
  std::int64_t scaled_threshold() const { return scaled_threshold_; }
  bool is_witness(const Assignment& y) const {
    return poly_.evaluate_scaled(y) >= scaled_threshold_;
  }

  bool operator==(const MtpInstance&) const = default;

 private:
  MultilinearPoly poly_;
  Rational threshold_;
  Rational gap_;
  std::int64_t scaled_threshold_;
};

struct DecideResult {
  bool satisfiable = false;
  std::vector<Assignment> witnesses;  // lexicographic in (y_1, ..., y_N)
};

DecideResult brute_force_decide(const MtpInstance& inst,
                                unsigned budget = kDefaultEnumerationBudget);
DecideResult brute_force_decide_serial(const MtpInstance& inst,
                                       unsigned budget = kDefaultEnumerationBudget);
PromiseClass classify_promise(const MtpInstance& inst, unsigned budget = kDefaultEnumerationBudget);

// Throws ContractError unless a <= 1 and every P(y) lies in [0, 1] on the gap grid.
void check_unit_range(const MtpInstance& inst, unsigned budget = kDefaultEnumerationBudget);

}  // namespace qcwb
