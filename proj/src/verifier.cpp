#include "qcwb/verifier.hpp"

#include "qcwb/errors.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <math.h>

#include <cmath>
#include <cstdlib>
#include <map>

namespace qcwb {

namespace {

std::uint64_t ceil_repetitions(long double x) {
  if (!(x < 1e15L)) throw ResourceError("repetition count too large");
  const long double c = std::ceil(x);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c));
}

long double log_two_over(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw InputError("fail budget must lie in (0, 1)");
  return std::log(2.0L / eps.convert_to<long double>());
}

Rational clamp01(const Rational& q) {
  if (q < 0) return Rational(0);
  if (q > 1) return Rational(1);
  return q;
}

}  // namespace

std::uint64_t literal_repetitions(const Rational& gap, const Rational& fail_budget) {
  const long double inv_gap_sq = (Rational(1) / (gap * gap)).convert_to<long double>();
  return ceil_repetitions(2.0L * log_two_over(fail_budget) * inv_gap_sq);
}

std::uint64_t hoeffding_repetitions(const Rational& total_weight, const Rational& gap,
                                    const Rational& fail_budget) {
  const long double ratio =
      (total_weight * total_weight / (gap * gap)).convert_to<long double>();
  return ceil_repetitions(8.0L * log_two_over(fail_budget) * ratio);
}

VerifierSpec build_verifier(const MtpInstance& inst, const Rational& fail_budget,
                            const VerifierOptions& opts) {
  const auto& p = inst.poly();
  if (p.total_weight() == 0) throw InputError("degenerate instance: zero polynomial (B = 0)");
  VerifierSpec s;
  std::int64_t acc = 0;
  for (const auto& t : p.terms()) {
    VerifierSpec::Monomial m{t.vars, std::llabs(t.coeff), t.coeff > 0 ? 1 : -1};
    acc += m.weight;
    s.cumulative.push_back(acc);
    s.query_bound = std::max<unsigned>(s.query_bound, static_cast<unsigned>(t.vars.size()));
    s.monomials.push_back(std::move(m));
  }
  s.scaled_weight = acc;
  s.denominator = p.denominator();
  s.total_weight = Rational(BigInt(acc), BigInt(p.denominator()));
  s.threshold = inst.threshold();
  s.gap = inst.gap();
  s.fail_budget = fail_budget;
  s.decision = opts.decision;
  s.repetition = opts.repetition;
  s.decision_cut = opts.decision == DecisionRule::Midpoint ? s.threshold - s.gap / 2 : s.threshold;
  const std::uint64_t t_literal = literal_repetitions(s.gap, fail_budget);
  if (opts.repetitions) {
    s.repetitions = *opts.repetitions;
    if (s.repetitions == 0) throw InputError("repetitions must be positive");
  } else if (opts.repetition == RepetitionRule::Literal) {
    s.repetitions = t_literal;
  } else {
    s.repetitions = std::max(t_literal, hoeffding_repetitions(s.total_weight, s.gap, fail_budget));
  }
  const Rational T(BigInt(s.repetitions));
  s.min_accept_sum = to_int64(ceil_of(s.decision_cut * T / s.total_weight));
  s.completeness_raw = (s.threshold + s.gap) / s.total_weight;
  s.soundness_raw = (s.threshold - s.gap) / s.total_weight;
  s.completeness = clamp01(s.completeness_raw);
  s.soundness = clamp01(s.soundness_raw);
  s.proof_length = p.num_vars();
  return s;
}

int sample_round(const VerifierSpec& spec, const Assignment& y, Rng& rng, unsigned* queries) {
  const auto u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.scaled_weight)));
  const auto it = std::upper_bound(spec.cumulative.begin(), spec.cumulative.end(), u);
  const auto& m = spec.monomials[static_cast<std::size_t>(it - spec.cumulative.begin())];
  unsigned read = 0;
  int on = 1;
  for (auto v : m.vars) {
    ++read;
    if (!y.get(v)) {
      on = 0;
      break;
    }
  }
  if (queries) *queries += read;
  return m.sign * on;
}

RunResult run_verifier(const VerifierSpec& spec, const Assignment& y, std::uint64_t seed) {
  if (y.size() != spec.proof_length) throw InputError("proof length mismatch");
  Rng rng(derive_seed(seed, 0x7665726966ULL));
  RunResult r;
  for (std::uint64_t t = 0; t < spec.repetitions; ++t) {
    unsigned q = 0;
    r.sum += sample_round(spec, y, rng, &q);
    r.max_queries = std::max(r.max_queries, q);
  }
  r.estimate = spec.total_weight * Rational(BigInt(r.sum), BigInt(spec.repetitions));
  r.accept = r.sum >= spec.min_accept_sum;
  return r;
}

RoundLaw round_law(const VerifierSpec& spec, const Assignment& y) {
  if (y.size() != spec.proof_length) throw InputError("proof length mismatch");
  RoundLaw law;
  law.total = spec.scaled_weight;
  for (const auto& m : spec.monomials) {
    bool on = true;
    for (auto v : m.vars)
      if (!y.get(v)) {
        on = false;
        break;
      }
    if (!on) continue;
    (m.sign > 0 ? law.pos : law.neg) += m.weight;
  }
  return law;
}

Rational acceptance_probability_exact(const RoundLaw& law, std::uint64_t T, std::int64_t min_sum,
                                      std::uint64_t max_repetitions) {
  if (T > max_repetitions) throw ResourceError("T too large for the exact oracle");
  const std::int64_t Ti = static_cast<std::int64_t>(T);
  if (min_sum <= -Ti) return Rational(1);
  if (min_sum > Ti) return Rational(0);
  const BigInt wp(law.pos), wn(law.neg), w0(law.total - law.pos - law.neg);
  // dist[s + T] = weighted count of paths with sum s.
  std::vector<BigInt> dist(2 * T + 1), next(2 * T + 1);
  dist[T] = 1;
  for (std::uint64_t t = 0; t < T; ++t) {
    const std::int64_t lo = Ti - static_cast<std::int64_t>(t), hi = Ti + static_cast<std::int64_t>(t);
    for (std::int64_t i = lo - 1; i <= hi + 1; ++i) next[i] = 0;
    for (std::int64_t i = lo; i <= hi; ++i) {
      const BigInt& d = dist[i];
      if (d == 0) continue;
      next[i + 1] += d * wp;
      next[i - 1] += d * wn;
      next[i] += d * w0;
    }
    std::swap(dist, next);
  }
  BigInt num = 0;
  for (std::int64_t s = min_sum; s <= Ti; ++s) num += dist[s + Ti];
  BigInt den = 1;
  for (std::uint64_t t = 0; t < T; ++t) den *= BigInt(law.total);
  return Rational(num, den);
}

Rational acceptance_probability_exact(const VerifierSpec& spec, const Assignment& y,
                                      std::uint64_t max_repetitions) {
  return acceptance_probability_exact(round_law(spec, y), spec.repetitions, spec.min_accept_sum,
                                      max_repetitions);
}

double acceptance_probability(const RoundLaw& law, std::uint64_t T, std::int64_t min_sum) {
  using boost::math::binomial_distribution;
  const auto Ti = static_cast<std::int64_t>(T);
  if (min_sum <= -Ti) return 1.0;
  if (min_sum > Ti) return 0.0;
  const double W = static_cast<double>(law.total);
  // Pr[Bin(n, q) >= x]
  auto upper_tail = [](std::int64_t n, double q, std::int64_t x) {
    if (x <= 0) return 1.0;
    if (x > n) return 0.0;
    if (q <= 0) return 0.0;
    if (q >= 1) return 1.0;
    binomial_distribution<double> b(static_cast<double>(n), q);
    return boost::math::cdf(boost::math::complement(b, static_cast<double>(x - 1)));
  };
  if (law.neg == 0) return upper_tail(Ti, law.pos / W, min_sum);
  if (law.neg == law.total) return -Ti >= min_sum ? 1.0 : 0.0;
  const double pn = law.neg / W;
  const double q = static_cast<double>(law.pos) / static_cast<double>(law.total - law.neg);
  const double mean = T * pn, sd = std::sqrt(T * pn * (1 - pn));
  const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(mean - 12 * sd - 8)));
  const auto hi = std::min<std::int64_t>(Ti, static_cast<std::int64_t>(std::ceil(mean + 12 * sd + 8)));

  auto lg = [](double v) {
    int sign;
    return ::lgamma_r(v, &sign);
  };
  auto log_choose = [&](std::int64_t n, std::int64_t x) {
    return lg(static_cast<double>(n + 1)) - lg(static_cast<double>(x + 1)) -
           lg(static_cast<double>(n - x + 1));
  };
  const bool q_interior = q > 0 && q < 1;
  const double lq = q_interior ? std::log(q) : 0, l1q = q_interior ? std::log1p(-q) : 0;
  // Bin(n, q) pmf at x.
  auto pmf = [&](std::int64_t n, std::int64_t x) {
    if (x < 0 || x > n) return 0.0;
    return std::exp(log_choose(n, x) + x * lq + (n - x) * l1q);
  };
  const double lpn = std::log(pn), l1pn = std::log1p(-pn);

  // g(k) = Pr[Bin(T-k, q) >= min_sum + k]; stepped by
  // g(k+1) = g(k) - q Pr[Bin(n-1) = x-1] - Pr[Bin(n-1) = x], re-anchored every 16 steps.
  double acc = 0, g = 0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const std::int64_t n = Ti - k, x = min_sum + k;
    if (x > n) break;  // stays infeasible for larger k
    if (!q_interior || (k - lo) % 16 == 0) g = upper_tail(n, q, x);
    const double w = std::exp(log_choose(Ti, k) + k * lpn + (Ti - k) * l1pn);
    acc += w * g;
    if (q_interior && n >= 1) g = std::max(0.0, g - q * pmf(n - 1, x - 1) - pmf(n - 1, x));
  }
  return std::clamp(acc, 0.0, 1.0);
}

double acceptance_probability(const VerifierSpec& spec, const Assignment& y) {
  return acceptance_probability(round_law(spec, y), spec.repetitions, spec.min_accept_sum);
}

namespace {

void finish_verdict(ContractReport& r, std::size_t accepted_nonwitness) {
  const auto nw = r.witnesses.size();
  r.promise = nw == 0 ? PromiseClass::No : (nw == 1 ? PromiseClass::UniqueYes : PromiseClass::MultiYes);
  std::string why;
  if (r.promise == PromiseClass::MultiYes) {
    why = "instance has " + std::to_string(nw) + " witnesses; uniqueness promise broken";
  } else {
    for (std::size_t i = 0; i < nw; ++i)
      if (r.witness_acceptance[i] < r.accept_level)
        why = "witness " + r.witnesses[i].str() + " accepted with probability " +
              std::to_string(r.witness_acceptance[i]) + " below completeness level";
    if (why.empty() && r.max_other_acceptance > r.reject_level)
      why = "a non-witness is accepted with probability " + std::to_string(r.max_other_acceptance) +
            " above soundness level";
    if (why.empty() && accepted_nonwitness > 0) why = "a non-witness reaches the completeness level";
  }
  r.violation = why;
  r.holds = why.empty();
}

}  // namespace

ContractReport check_pcp_contract(const VerifierSpec& spec, const MtpInstance& inst,
                                  const ContractOptions& opts) {
  const auto n = inst.poly().num_vars();
  if (n != spec.proof_length) throw InputError("spec and instance disagree on proof length");
  if (n > opts.budget || n > 40)
    throw ResourceError("proof enumeration over " + std::to_string(n) + " bits exceeds budget");
  ContractReport r;
  r.method = ContractReport::Method::Exhaustive;
  r.reject_level = spec.fail_budget.convert_to<double>();
  r.accept_level = 1.0 - r.reject_level;
  r.proofs_covered = std::uint64_t{1} << n;

  const auto mp = kernels::MaskPoly::from(inst.poly());
  const auto t = inst.scaled_threshold();
  const auto profile = opts.parallel ? kernels::mass_profile_parallel(mp, n, t)
                                     : kernels::mass_profile_serial(mp, n, t);
  auto law_of = [&](const kernels::SignedMass& m) { return RoundLaw{m.pos, m.neg, spec.scaled_weight}; };
  auto accept = [&](const kernels::SignedMass& m) {
    return acceptance_probability(law_of(m), spec.repetitions, spec.min_accept_sum);
  };

  std::vector<std::pair<Assignment, double>> wit;
  for (const auto& [y, m] : profile.witnesses) wit.push_back({Assignment::from_mask(n, y), accept(m)});
  std::sort(wit.begin(), wit.end());
  std::size_t accepted_nonwitness = 0;
  for (const auto& [y, a] : wit) {
    r.witnesses.push_back(y);
    r.witness_acceptance.push_back(a);
    if (a >= r.accept_level) r.accepted.push_back(y);
  }
  r.laws_evaluated = profile.witnesses.size();

  // Frontier: ascending W-, strictly increasing W+.
  std::vector<kernels::SignedMass> others = profile.others;
  std::sort(others.begin(), others.end(), [](const auto& a, const auto& b) {
    return a.neg != b.neg ? a.neg < b.neg : a.pos > b.pos;
  });
  std::int64_t best_pos = -1;
  for (const auto& m : others) {
    if (m.pos <= best_pos) continue;
    best_pos = m.pos;
    const double a = accept(m);
    ++r.laws_evaluated;
    r.max_other_acceptance = std::max(r.max_other_acceptance, a);
    if (a >= r.accept_level) ++accepted_nonwitness;
  }

  if (opts.table) {
    if (n > 16) throw ResourceError("acceptance table limited to 16 proof bits");
    std::map<kernels::SignedMass, double> memo;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
      const auto m = kernels::signed_mass(mp, y);
      auto it = memo.find(m);
      if (it == memo.end()) it = memo.emplace(m, accept(m)).first;
      ProofRow row;
      row.proof = Assignment::from_mask(n, y);
      row.value = Rational(BigInt(m.pos - m.neg), BigInt(inst.poly().denominator()));
      row.witness = m.pos - m.neg >= t;
      row.acceptance = it->second;
      if (!row.witness && row.acceptance >= r.accept_level)
        r.accepted.push_back(row.proof);
      r.table.push_back(std::move(row));
    }
    std::sort(r.table.begin(), r.table.end(),
              [](const ProofRow& a, const ProofRow& b) { return a.proof < b.proof; });
    std::sort(r.accepted.begin(), r.accepted.end());
  }
  finish_verdict(r, accepted_nonwitness);
  return r;
}

double nonwitness_tail_bound(const VerifierSpec& spec) {
  // Non-witnesses satisfy P <= a - gap; rounds contribute B v in [-B, B].
  const Rational margin = spec.decision_cut - (spec.threshold - spec.gap);
  if (margin <= 0) return 1.0;
  const long double m = margin.convert_to<long double>();
  const long double B = spec.total_weight.convert_to<long double>();
  const long double T = static_cast<long double>(spec.repetitions);
  return static_cast<double>(std::exp(-2.0L * T * m * m / (4.0L * B * B)));
}

ContractReport check_pcp_contract_certified(const VerifierSpec& spec, const MtpInstance& inst,
                                            const std::vector<Assignment>& witnesses) {
  if (inst.poly().num_vars() != spec.proof_length)
    throw InputError("spec and instance disagree on proof length");
  ContractReport r;
  r.method = ContractReport::Method::Certified;
  r.reject_level = spec.fail_budget.convert_to<double>();
  r.accept_level = 1.0 - r.reject_level;
  r.witnesses = witnesses;
  std::sort(r.witnesses.begin(), r.witnesses.end());
  for (const auto& y : r.witnesses) {
    if (!inst.is_witness(y)) throw ContractError("supplied witness " + y.str() + " fails P >= a");
    const double a = acceptance_probability(spec, y);
    r.witness_acceptance.push_back(a);
    if (a >= r.accept_level) r.accepted.push_back(y);
  }
  r.laws_evaluated = r.witnesses.size();
  r.max_other_acceptance = nonwitness_tail_bound(spec);
  finish_verdict(r, 0);
  return r;
}

}  // namespace qcwb
