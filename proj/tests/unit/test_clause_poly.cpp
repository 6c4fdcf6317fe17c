#include "oracles.hpp"

#include "qcwb/clause_poly.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/generators.hpp"
#include "qcwb/isolation.hpp"
#include "qcwb/model_count.hpp"

#include <doctest.h>

using namespace qcwb;

TEST_SUITE("clause_poly") {
  TEST_CASE("contradiction gives a NO instance at value 1/2") {
    CnfFormula f(1);
    f.add_clause({1});
    f.add_clause({-1});
    const auto I = cnf_to_mtp(f);
    CHECK(I.threshold() == 1);
    CHECK(I.gap() == make_rational(1, 2));
    for (std::uint64_t x = 0; x < 2; ++x) CHECK(I.poly().evaluate(Assignment::from_mask(1, x)) == make_rational(1, 2));
    CHECK(classify_promise(I) == PromiseClass::No);
  }

  TEST_CASE("single clause x1 or x2") {
    CnfFormula f(2);
    f.add_clause({1, 2});
    const auto I = cnf_to_mtp(f);
    const std::vector<Term> expect{{{1}, 1}, {{1, 2}, -1}, {{2}, 1}};
    CHECK(I.poly().terms() == expect);
    const auto w = brute_force_decide(I).witnesses;
    REQUIRE(w.size() == 3);
    CHECK(w[0].str() == "01");
    CHECK(w[1].str() == "10");
    CHECK(w[2].str() == "11");
  }

  TEST_CASE("P * m counts satisfied clauses") {
    GenParams gp;
    for (std::uint32_t n : {3u, 6u, 9u})
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        gp.num_vars = n;
        gp.density = 1.0 + seed % 5;
        gp.clause_width = 1 + seed % 3;
        const auto f = gen_kcnf(gp, seed);
        const auto I = cnf_to_mtp(f);
        const auto m = static_cast<std::int64_t>(f.clauses().size());
        CHECK(I.poly().denominator() == std::max<std::int64_t>(m, 1));
        CHECK(I.poly().actual_degree() <= 3);
        for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
          const auto v = oracle::bits_of(x, n);
          std::int64_t sat = 0;
          for (const auto& c : f.clauses()) sat += oracle::clause_sat(c, v);
          CHECK(oracle::scaled_value(I.poly(), v) == sat);
        }
        check_unit_range(I);
      }
  }

  TEST_CASE("tautologies, repeated literals and empty clauses") {
    CnfFormula f(2);
    f.add_clause({1, -1});
    f.add_clause({2, 2});
    f.add_clause({});
    const auto I = cnf_to_mtp(f);
    for (std::uint64_t x = 0; x < 4; ++x) {
      const auto v = oracle::bits_of(x, 2);
      CHECK(oracle::scaled_value(I.poly(), v) == 1 + v[1]);
    }
    const auto E = cnf_to_mtp(CnfFormula(4));
    CHECK(E.threshold() == 1);
    CHECK(classify_promise(E) == PromiseClass::MultiYes);
    CnfFormula wide(4);
    wide.add_clause({1, 2, 3, 4});
    CHECK_THROWS_AS(cnf_to_mtp(wide, 3), InputError);
  }

  TEST_CASE("isolated unique formula stays UNIQUE_YES") {
    GenParams gp;
    gp.num_vars = 5;
    gp.density = 1.5;
    int seen = 0;
    for (std::uint64_t s = 0; s < 40 && seen < 5; ++s) {
      const auto f = gen_kcnf(gp, s);
      for (const auto& g : isolate(f, s)) {
        if (count_models(g).total != 1 || g.num_vars() > 16) continue;
        const auto I = cnf_to_mtp(width_reduce(g, 3));
        CHECK(classify_promise(I) == PromiseClass::UniqueYes);
        ++seen;
        break;
      }
    }
    CHECK(seen >= 3);
  }

  TEST_CASE("width_reduce") {
    GenParams gp;
    gp.num_vars = 6;
    gp.density = 2;
    const auto narrow = gen_kcnf(gp, 1);
    CHECK(width_reduce(narrow, 3) == narrow);
    CHECK_THROWS_AS(width_reduce(narrow, 2), InputError);

    CnfFormula five(5);
    five.add_clause({1, -2, 3, 4, -5});
    const auto r = width_reduce(five, 4);
    CHECK(r.num_aux() == 1);
    CHECK(r.max_width() <= 4);
    const auto a = oracle::brute_count(five), b = oracle::brute_count(r);
    CHECK(a.projections == b.projections);
    CHECK(a.models == b.models);

    for (std::uint64_t s = 0; s < 10; ++s) {
      gp.num_vars = 8;
      gp.clause_width = 6 + s % 3;
      gp.density = 0.5 + 0.25 * (s % 4);
      const auto f = gen_kcnf(gp, s);
      const auto g = width_reduce(f, 3);
      CHECK(g.max_width() <= 3);
      const auto cf = count_models(f), cg = count_models(g);
      CHECK(cf.projections == cg.projections);
      CHECK(cf.total == cg.total);
    }
    CnfFormula unsat(5);
    unsat.add_clause({1, 2, 3, 4, 5});
    for (int v = 1; v <= 5; ++v) unsat.add_clause({-v});
    CHECK(count_models(width_reduce(unsat, 3)).total == 0);
  }
}
