#include "qcwb/poly.hpp"

#include "qcwb/errors.hpp"
#include "qcwb/kernels.hpp"

#include <algorithm>
#include <cstdlib>

namespace qcwb {

namespace {

constexpr std::int64_t kWeightLimit = std::int64_t{1} << 62;

void require_budget(std::uint32_t n, unsigned budget) {
  if (budget > 40) throw InputError("enumeration budget above 40 variables");
  if (n > budget)
    throw ResourceError("enumeration over " + std::to_string(n) + " variables exceeds budget " +
                        std::to_string(budget));
}

std::vector<Assignment> to_sorted_assignments(const std::vector<std::uint64_t>& masks,
                                              std::size_t n) {
  std::vector<Assignment> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(Assignment::from_mask(n, m));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Assignment Assignment::from_mask(std::size_t n, std::uint64_t mask) {
  Assignment a(n);
  for (std::size_t i = 0; i < n; ++i) a.bits_[i] = (mask >> i) & 1U;
  return a;
}

Assignment Assignment::from_string(const std::string& text) {
  Assignment a(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw InputError("assignment must be a 0/1 string");
    a.bits_[i] = text[i] == '1';
  }
  return a;
}

std::uint64_t Assignment::mask() const {
  if (bits_.size() > 64) throw InputError("assignment longer than 64 bits");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) m |= std::uint64_t{1} << i;
  return m;
}

std::string Assignment::str() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

MultilinearPoly::MultilinearPoly(std::uint32_t num_vars, std::uint32_t degree_bound,
                                 std::int64_t denominator, std::vector<Term> terms)
    : num_vars_(num_vars), degree_bound_(degree_bound), denominator_(denominator) {
  if (denominator_ < 1) throw InputError("denominator must be positive");
  for (auto& t : terms) {
    std::sort(t.vars.begin(), t.vars.end());
    if (std::adjacent_find(t.vars.begin(), t.vars.end()) != t.vars.end())
      throw InputError("repeated variable inside a monomial");
    if (!t.vars.empty() && (t.vars.front() < 1 || t.vars.back() > num_vars_))
      throw InputError("monomial variable out of range");
    if (t.vars.size() > degree_bound_) throw InputError("monomial exceeds degree bound");
    if (t.coeff == 0) throw InputError("zero coefficient stored");
    if (t.coeff == INT64_MIN) throw InputError("coefficient out of range");
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.vars < b.vars; });
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i].vars == terms[i - 1].vars) throw InputError("duplicate monomial key");
  for (const auto& t : terms) {
    std::int64_t mag = std::llabs(t.coeff);
    if (mag > kWeightLimit - total_weight_) throw InputError("coefficient mass exceeds 2^62");
    total_weight_ += mag;
  }
  terms_ = std::move(terms);
}

MultilinearPoly MultilinearPoly::dyadic(std::uint32_t num_vars, std::uint32_t degree_bound,
                                        unsigned scale_bits, std::vector<Term> terms) {
  if (scale_bits > 62) throw InputError("scale_bits above 62");
  return MultilinearPoly(num_vars, degree_bound, std::int64_t{1} << scale_bits, std::move(terms));
}

unsigned MultilinearPoly::scale_bits() const { return ceil_log2(BigInt(denominator_)); }

bool MultilinearPoly::is_dyadic() const { return is_power_of_two(BigInt(denominator_)); }

unsigned MultilinearPoly::coeff_bits() const {
  unsigned k = 0;
  for (const auto& t : terms_) {
    auto mag = static_cast<std::uint64_t>(std::llabs(t.coeff));
    unsigned b = 0;
    while (mag) {
      ++b;
      mag >>= 1;
    }
    k = std::max(k, b);
  }
  return k;
}

std::uint32_t MultilinearPoly::actual_degree() const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max<std::uint32_t>(d, t.vars.size());
  return d;
}

std::int64_t MultilinearPoly::evaluate_scaled(const Assignment& y) const {
  if (y.size() != num_vars_) throw InputError("assignment length does not match num_vars");
  std::int64_t s = 0;
  for (const auto& t : terms_) {
    bool on = true;
    for (auto v : t.vars)
      if (!y.get(v)) {
        on = false;
        break;
      }
    if (on) s += t.coeff;
  }
  return s;
}

Rational MultilinearPoly::evaluate(const Assignment& y) const {
  return Rational(BigInt(evaluate_scaled(y)), BigInt(denominator_));
}

void PolyBuilder::add(VarSet vars, std::int64_t coeff) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  acc_[std::move(vars)] += coeff;
}

MultilinearPoly PolyBuilder::build(std::uint32_t num_vars, std::uint32_t degree_bound,
                                   std::int64_t denominator) const {
  std::vector<Term> terms;
  for (const auto& [vars, c] : acc_) {
    if (c == 0) continue;
    if (c > INT64_MAX || c < -INT64_MAX) throw InputError("accumulated coefficient overflow");
    terms.push_back({vars, static_cast<std::int64_t>(c)});
  }
  return MultilinearPoly(num_vars, degree_bound, denominator, std::move(terms));
}

std::string to_string(PromiseClass c) {
  switch (c) {
    case PromiseClass::UniqueYes: return "UNIQUE_YES";
    case PromiseClass::MultiYes: return "MULTI_YES";
    case PromiseClass::No: return "NO";
  }
  return "?";
}

MtpInstance::MtpInstance(MultilinearPoly poly, Rational threshold, Rational gap)
    : poly_(std::move(poly)), threshold_(std::move(threshold)), gap_(std::move(gap)) {
  if (gap_ <= 0) throw InputError("gap must be positive");
  if (threshold_ < 0) throw InputError("threshold must be nonnegative");
  Rational steps = threshold_ / gap_;
  if (denominator_of(steps) != 1) throw InputError("threshold is not a multiple of the gap");
  scaled_threshold_ = to_int64(ceil_of(threshold_ * poly_.denominator()));
}

BigInt MtpInstance::value_set_size() const { return floor_of(Rational(1) / gap_) + 1; }

DecideResult brute_force_decide(const MtpInstance& inst, unsigned budget) {
  const auto n = inst.poly().num_vars();
  require_budget(n, budget);
  auto mp = kernels::MaskPoly::from(inst.poly());
  auto masks = kernels::witness_masks_parallel(mp, n, inst.scaled_threshold());
  DecideResult r;
  r.witnesses = to_sorted_assignments(masks, n);
  r.satisfiable = !r.witnesses.empty();
  return r;
}

DecideResult brute_force_decide_serial(const MtpInstance& inst, unsigned budget) {
  const auto n = inst.poly().num_vars();
  require_budget(n, budget);
  auto mp = kernels::MaskPoly::from(inst.poly());
  auto masks = kernels::witness_masks_serial(mp, n, inst.scaled_threshold());
  DecideResult r;
  r.witnesses = to_sorted_assignments(masks, n);
  r.satisfiable = !r.witnesses.empty();
  return r;
}

PromiseClass classify_promise(const MtpInstance& inst, unsigned budget) {
  auto r = brute_force_decide(inst, budget);
  if (r.witnesses.empty()) return PromiseClass::No;
  return r.witnesses.size() == 1 ? PromiseClass::UniqueYes : PromiseClass::MultiYes;
}

void check_unit_range(const MtpInstance& inst, unsigned budget) {
  if (inst.threshold() > 1) throw ContractError("threshold above 1");
  const auto n = inst.poly().num_vars();
  require_budget(n, budget);
  auto mp = kernels::MaskPoly::from(inst.poly());
  const std::int64_t D = inst.poly().denominator();
  Rational step = inst.gap() * D;  // grid spacing at scale D
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
    std::int64_t v = mp.eval(y);
    if (v < 0 || v > D)
      throw ContractError("P(" + Assignment::from_mask(n, y).str() + ") outside [0,1]");
    if (denominator_of(Rational(v) / step) != 1)
      throw ContractError("P(" + Assignment::from_mask(n, y).str() + ") off the gap grid");
  }
}

}  // namespace qcwb
