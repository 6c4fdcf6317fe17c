#include "qcwb/generators.hpp"
#include "qcwb/pipeline.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace qcwb;

namespace {

PipelineOptions small_opts() {
  PipelineOptions o;
  o.exhaustive_proof_bits = 12;
  return o;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("NO instance stays NO at every stage") {
    const auto I = gen_planted_no({.num_vars = 3}, 2);
    const auto r = pipeline(I, 9, small_opts());
    CHECK(r.mtp_witnesses == 0);
    CHECK(r.sat_models == 0);
    CHECK(r.all_stages_no);
    CHECK_FALSE(r.success_k);
    CHECK(r.exactness_failures.empty());
    for (const auto& k : r.ks) {
      CHECK(k.isolated_witnesses == 0);
      CHECK(k.unique_mtp_class == PromiseClass::No);
      CHECK_FALSE(k.surviving);
    }
  }

  TEST_CASE("YES instance: surviving witness is the MTP witness") {
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const auto I = gen_planted({.num_vars = 2}, seed);
      const auto stage = prepare_sat_stage(I, small_opts());
      REQUIRE(stage.mtp_witnesses.size() == 1);
      const auto r = pipeline(stage, seed, small_opts());
      CHECK(r.exactness_failures.empty());
      CHECK(r.sat_projections == 1);
      CHECK(r.ks.size() == r.mtp_vars + 1);
      if (!r.success_k) continue;
      ++successes;
      const auto& k = r.ks.at(*r.success_k - 1);
      CHECK(k.k == *r.success_k);
      REQUIRE(k.surviving);
      CHECK(*k.surviving == stage.mtp_witnesses[0]);
      CHECK(k.unique_mtp_class == PromiseClass::UniqueYes);
      CHECK(k.contract_holds);
    }
    CHECK(successes > 0);
  }

  TEST_CASE("random instances keep every exactness check") {
    GenParams gp;
    gp.num_vars = 4;
    gp.terms = 4;
    gp.coeff_bits = 2;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto I = gen_random_poly(gp, seed);
      const auto r = pipeline(I, seed, small_opts());
      CHECK(r.exactness_failures.empty());
      CHECK(r.sat_projections == r.mtp_witnesses);
      for (const auto& k : r.ks) CHECK(k.exactness_failures.empty());
    }
  }

  TEST_CASE("JSON lines and determinism") {
    const auto I = gen_planted({.num_vars = 2}, 4);
    const auto a = pipeline(I, 17, small_opts()), b = pipeline(I, 17, small_opts());
    CHECK(a.lines() == b.lines());
    const auto lines = a.lines();
    REQUIRE(lines.size() >= 3);
    std::set<std::string> stages;
    for (const auto& l : lines) {
      const auto j = nlohmann::json::parse(l);
      stages.insert(j.at("stage").get<std::string>());
    }
    for (const char* s : {"mtp", "sat", "isolate", "summary"}) CHECK(stages.count(s) == 1);
    const auto sweep = pipeline_sweep(I, {17, 18}, small_opts());
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0].lines() == lines);
    CHECK(sweep[1].seed == 18);
  }
}
