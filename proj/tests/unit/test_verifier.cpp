#include "oracles.hpp"

#include "qcwb/clause_poly.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/generators.hpp"
#include "qcwb/isolation.hpp"
#include "qcwb/model_count.hpp"
#include "qcwb/verifier.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace qcwb;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

MtpInstance inst_of(std::uint32_t n, std::int64_t D, std::vector<Term> terms, Rational a, Rational gap) {
  return MtpInstance(MultilinearPoly(n, n, D, std::move(terms)), std::move(a), std::move(gap));
}

// Pr[sum of T fair +-1 steps >= s] by counting paths with C(T, k).
Rational fair_walk_tail(std::uint64_t T, std::int64_t s) {
  BigInt num = 0, c = 1;
  for (std::uint64_t k = 0; k <= T; ++k) {
    if (2 * static_cast<std::int64_t>(k) - static_cast<std::int64_t>(T) >= s) num += c;
    c = c * BigInt(T - k) / BigInt(k + 1);
  }
  BigInt den = 1;
  for (std::uint64_t i = 0; i < T; ++i) den *= 2;
  return Rational(num, den);
}

// Single-ancilla interference circuit on 1 + n qubits: H, controlled phase
// (-1)^{prod y_S} on |y>, H; returns Pr[ancilla = 0].
double hadamard_test(const VarSet& S, std::uint64_t y, unsigned n) {
  const std::size_t dim = std::size_t{2} << n;
  std::vector<std::complex<double>> psi(dim, 0.0);
  psi[y << 1] = 1.0;  // ancilla is bit 0
  const double r = 1 / std::sqrt(2.0);
  auto had = [&] {
    for (std::size_t i = 0; i < dim; i += 2) {
      const auto a = psi[i], b = psi[i + 1];
      psi[i] = r * (a + b);
      psi[i + 1] = r * (a - b);
    }
  };
  had();
  for (std::size_t i = 1; i < dim; i += 2) {
    bool on = true;
    for (auto v : S) on = on && ((i >> v) & 1U);
    if (on) psi[i] *= std::polar(1.0, M_PI);
  }
  had();
  double p0 = 0;
  for (std::size_t i = 0; i < dim; i += 2) p0 += std::norm(psi[i]);
  return p0;
}

}  // namespace

TEST_SUITE("verifier") {
  TEST_CASE("build examples") {
    const auto I = inst_of(2, 1, {{{1, 2}, 1}}, q(1), q(1, 2));
    const auto s = build_verifier(I, q(1, 3));
    CHECK(s.total_weight == 1);
    CHECK(s.completeness_raw == q(3, 2));
    CHECK(s.completeness == 1);
    CHECK(s.soundness == q(1, 2));
    CHECK(s.soundness_raw == q(1, 2));
    CHECK(s.query_bound == 2);

    const auto pm = inst_of(2, 4, {{{1}, 3}, {{2}, -3}}, q(0), q(1, 4));
    CHECK(build_verifier(pm, q(1, 3)).total_weight == q(3, 2));

    CHECK_THROWS_AS(build_verifier(inst_of(2, 1, {}, q(0), q(1)), q(1, 3)), InputError);
    CHECK_THROWS_AS(build_verifier(I, q(0)), InputError);
    CHECK_THROWS_AS(build_verifier(I, q(1)), InputError);
  }

  TEST_CASE("c - s = 2 gap / B on clause polynomials") {
    GenParams gp;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      gp.num_vars = 5;
      gp.density = 1 + seed;
      const auto I = cnf_to_mtp(gen_kcnf(gp, seed));
      const auto s = build_verifier(I, q(1, 3));
      CHECK(s.completeness_raw - s.soundness_raw == 2 * I.gap() / s.total_weight);
      Rational B = 0;
      for (const auto& t : I.poly().terms()) B += q(std::llabs(t.coeff), I.poly().denominator());
      CHECK(s.total_weight == B);
    }
  }

  TEST_CASE("repetition rules") {
    // 2 ln 6 * 16 = 57.33
    CHECK(literal_repetitions(q(1, 4), q(1, 3)) == 58);
    // 8 ln 6 * 4 * 16 = 917.4
    CHECK(hoeffding_repetitions(q(2), q(1, 4), q(1, 3)) == 918);
    const auto I = inst_of(1, 1, {{{1}, 1}}, q(1), q(1));
    VerifierOptions lit;
    lit.repetition = RepetitionRule::Literal;
    lit.decision = DecisionRule::Literal;
    const auto s = build_verifier(I, q(1, 3), lit);
    CHECK(s.repetitions == literal_repetitions(q(1), q(1, 3)));
    CHECK(s.decision_cut == 1);
    CHECK(s.min_accept_sum == static_cast<std::int64_t>(s.repetitions));
    VerifierOptions fixed;
    fixed.repetitions = 7;
    CHECK(build_verifier(I, q(1, 3), fixed).repetitions == 7);
    fixed.repetitions = 0;
    CHECK_THROWS_AS(build_verifier(I, q(1, 3), fixed), InputError);
  }

  TEST_CASE("deterministic rounds") {
    const auto I = inst_of(3, 1, {{{1, 3}, 1}}, q(1), q(1));
    const auto s = build_verifier(I, q(1, 3));
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      unsigned qs = 0;
      CHECK(sample_round(s, Assignment::from_string("101"), rng, &qs) == 1);
      CHECK(qs == 2);
      qs = 0;
      CHECK(sample_round(s, Assignment::from_string("001"), rng, &qs) == 0);
      CHECK(qs == 1);
      CHECK(sample_round(s, Assignment::from_string("100"), rng) == 0);
    }
    const auto one = build_verifier(inst_of(1, 1, {{{1}, 1}}, q(1), q(1)), q(1, 3));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto acc = run_verifier(one, Assignment::from_string("1"), seed);
      CHECK(acc.accept);
      CHECK(acc.estimate == 1);
      CHECK(acc.max_queries == 1);
      const auto rej = run_verifier(one, Assignment::from_string("0"), seed);
      CHECK_FALSE(rej.accept);
      CHECK(rej.estimate == 0);
    }
    CHECK(acceptance_probability_exact(one, Assignment::from_string("1")) == 1);
    CHECK(acceptance_probability_exact(one, Assignment::from_string("0")) == 0);
    CHECK_THROWS_AS(run_verifier(one, Assignment::from_string("10"), 0), InputError);
  }

  TEST_CASE("unbiased round law") {
    // Every y: sum over monomials of P(j) * value_j * B == P(y).
    GenParams gp;
    gp.num_vars = 5;
    gp.terms = 8;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto I = gen_random_poly(gp, seed);
      const auto s = build_verifier(I, q(1, 3));
      for (std::uint64_t x = 0; x < 32; ++x) {
        const auto y = Assignment::from_mask(5, x);
        Rational e = 0;
        for (const auto& m : s.monomials) {
          bool on = true;
          for (auto v : m.vars) on = on && y.get(v);
          if (on) e += q(m.sign * m.weight, s.scaled_weight);
        }
        CHECK(e * s.total_weight == I.poly().evaluate(y));
        const auto law = round_law(s, y);
        CHECK(q(law.pos - law.neg, s.scaled_weight) * s.total_weight == I.poly().evaluate(y));
      }
    }
  }

  TEST_CASE("two equal-weight monomials: empirical mean of B v") {
    const auto I = inst_of(2, 2, {{{1}, 1}, {{2}, 1}}, q(1), q(1, 2));
    const auto s = build_verifier(I, q(1, 3));
    Rng rng(11);
    const auto y = Assignment::from_string("10");
    int sum = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) sum += sample_round(s, y, rng);
    // P(y) = 1/2 = B * E[v] with B = 1; sd of mean = 1/(2 sqrt n)
    CHECK(std::abs(static_cast<double>(sum) / n - 0.5) < 4 * 0.5 / std::sqrt(n));
  }

  TEST_CASE("exact oracle against fair-walk binomial sums") {
    for (std::uint64_t T : {2u, 10u, 40u, 101u})
      for (std::int64_t s : {-3, 0, 1, 4, 9}) {
        const RoundLaw law{5, 5, 10};
        CHECK(acceptance_probability_exact(law, T, s) == fair_walk_tail(T, s));
        CHECK(acceptance_probability(law, T, s) ==
              doctest::Approx(to_double(fair_walk_tail(T, s))).epsilon(1e-9));
      }
    CHECK_THROWS_AS(acceptance_probability_exact(RoundLaw{1, 1, 2}, 3000, 0), ResourceError);
  }

  TEST_CASE("double evaluator matches exact oracle") {
    const std::vector<RoundLaw> laws{{3, 2, 7}, {1, 0, 5}, {0, 4, 9}, {6, 1, 7}, {2, 2, 4}, {0, 0, 3}, {5, 0, 5}};
    for (const auto& law : laws)
      for (std::uint64_t T : {1u, 17u, 200u, 900u})
        for (double frac : {-0.5, 0.0, 0.1, 0.3, 0.6}) {
          const auto ms = static_cast<std::int64_t>(std::floor(frac * T));
          const double exact = to_double(acceptance_probability_exact(law, T, ms));
          CHECK(acceptance_probability(law, T, ms) == doctest::Approx(exact).epsilon(1e-9).scale(1));
        }
  }

  TEST_CASE("acceptance is monotone in both masses") {
    const std::uint64_t T = 300;
    const std::int64_t ms = 40;
    for (std::int64_t neg = 0; neg <= 6; ++neg)
      for (std::int64_t pos = 0; pos + neg <= 12; ++pos) {
        const double a = acceptance_probability(RoundLaw{pos, neg, 12}, T, ms);
        if (pos + neg + 1 <= 12) CHECK(acceptance_probability(RoundLaw{pos + 1, neg, 12}, T, ms) >= a - 1e-12);
        if (neg > 0) CHECK(acceptance_probability(RoundLaw{pos, neg - 1, 12}, T, ms) >= a - 1e-12);
      }
  }

  TEST_CASE("Monte Carlo acceptance within 3 sigma of the exact value") {
    // Mixed signs: P = (2 y1 + y2 - y1 y2) / 2, a = 1, gap = 1/2, B = 2.
    const auto I = inst_of(2, 2, {{{1}, 2}, {{1, 2}, -1}, {{2}, 1}}, q(1), q(1, 2));
    VerifierOptions o;
    o.repetitions = 25;
    const auto s = build_verifier(I, q(1, 3), o);
    const auto y = Assignment::from_string("10");
    const double p = to_double(acceptance_probability_exact(s, y));
    CHECK(p > 0.05);
    CHECK(p < 0.95);
    const int runs = 100000;
    int acc = 0;
    for (int seed = 0; seed < runs; ++seed) acc += run_verifier(s, y, seed).accept;
    const double sigma = std::sqrt(p * (1 - p) / runs);
    CHECK(std::abs(static_cast<double>(acc) / runs - p) < 3 * sigma);
  }

  TEST_CASE("query bound holds on every run") {
    GenParams gp;
    gp.num_vars = 7;
    gp.degree = 3;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto I = gen_random_poly(gp, seed);
      VerifierOptions o;
      o.repetitions = 200;
      const auto s = build_verifier(I, q(1, 3), o);
      for (std::uint64_t x = 0; x < 128; x += 9)
        CHECK(run_verifier(s, Assignment::from_mask(7, x), seed).max_queries <= s.query_bound);
      CHECK(s.query_bound <= 3);
    }
  }

  TEST_CASE("statevector interference agrees with the outcome model") {
    for (unsigned n = 1; n <= 5; ++n)
      for (std::uint64_t mask = 1; mask < (1ULL << n); mask += 3) {
        VarSet S;
        for (unsigned i = 0; i < n; ++i)
          if ((mask >> i) & 1U) S.push_back(i + 1);
        for (int sign : {1, -1}) {
          const auto I = inst_of(n, 1, {{S, sign}}, q(0), q(1));
          const auto s = build_verifier(I, q(1, 3));
          Rng rng(1);
          for (std::uint64_t y = 0; y < (1ULL << n); ++y) {
            // the ancilla register is shifted by one bit
            const double p0 = hadamard_test(S, y, n);
            CHECK((p0 < 1e-12 || p0 > 1 - 1e-12));
            const int v = sample_round(s, Assignment::from_mask(n, y), rng);
            CHECK(static_cast<double>(v) == doctest::Approx(sign * (1 - p0)));
          }
        }
      }
  }

  TEST_CASE("contract on isolated, NO and multi-witness instances") {
    // Isolated: unique model of a small formula
    GenParams gp;
    gp.num_vars = 4;
    gp.density = 1.5;
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60 && checked < 3; ++seed) {
      const auto f = gen_kcnf(gp, seed);
      for (const auto& g : isolate(f, seed)) {
        if (count_models(g).total != 1 || g.num_vars() > 12) continue;
        const auto I = cnf_to_mtp(width_reduce(g, 3));
        const auto s = build_verifier(I, q(1, 3));
        const auto r = check_pcp_contract(s, I);
        CHECK(r.holds);
        CHECK(r.promise == PromiseClass::UniqueYes);
        CHECK(r.witness_acceptance.at(0) >= 2.0 / 3);
        CHECK(r.max_other_acceptance <= 1.0 / 3);
        ++checked;
        break;
      }
    }
    CHECK(checked >= 2);

    CnfFormula contra(1);
    contra.add_clause({1});
    contra.add_clause({-1});
    const auto N = cnf_to_mtp(contra);
    const auto rn = check_pcp_contract(build_verifier(N, q(1, 3)), N, {24, true, false});
    CHECK(rn.holds);
    CHECK(rn.promise == PromiseClass::No);
    CHECK(rn.table.size() == 2);
    for (const auto& row : rn.table) CHECK(row.acceptance <= 1.0 / 3);

    CnfFormula multi(2);
    multi.add_clause({1, 2});
    const auto M = cnf_to_mtp(multi);
    const auto rm = check_pcp_contract(build_verifier(M, q(1, 3)), M);
    CHECK_FALSE(rm.holds);
    CHECK(rm.promise == PromiseClass::MultiYes);
    CHECK(!rm.violation.empty());
  }

  TEST_CASE("exhaustive and certified checks agree") {
    const auto I = gen_planted({.num_vars = 4}, 3);
    const auto s = build_verifier(I, q(1, 3));
    const auto ex = check_pcp_contract(s, I);
    const auto ce = check_pcp_contract_certified(s, I, ex.witnesses);
    CHECK(ex.holds);
    CHECK(ce.holds);
    CHECK(ex.max_other_acceptance <= ce.max_other_acceptance + 1e-12);
    CHECK(ex.witness_acceptance == ce.witness_acceptance);
    CHECK_THROWS_AS(check_pcp_contract_certified(s, I, {Assignment::from_mask(4, ~ex.witnesses[0].mask() & 15)}),
                    ContractError);
    const auto serial = check_pcp_contract(s, I, {24, false, false});
    CHECK(serial.max_other_acceptance == ex.max_other_acceptance);
  }

  TEST_CASE("literal decision and repetition rules break completeness when B > 1") {
    // Recorded deviation: a witness sits exactly at the cut, so it passes only about half the time.
    // P = (1 - y1)(1 - y2)(1 - y3): unique witness 000, B = 8.
    const auto I = inst_of(3, 1,
                           {{{}, 1}, {{1}, -1}, {{1, 2}, 1}, {{1, 2, 3}, -1}, {{1, 3}, 1},
                            {{2}, -1}, {{2, 3}, 1}, {{3}, -1}},
                           q(1), q(1));
    VerifierOptions lit;
    lit.decision = DecisionRule::Literal;
    lit.repetition = RepetitionRule::Literal;
    const auto s = build_verifier(I, q(1, 3), lit);
    REQUIRE(s.total_weight > 1);
    const auto r = check_pcp_contract(s, I);
    CHECK(r.witness_acceptance.at(0) < 2.0 / 3);
    CHECK_FALSE(r.holds);
    CHECK(check_pcp_contract(build_verifier(I, q(1, 3)), I).holds);
  }
}
