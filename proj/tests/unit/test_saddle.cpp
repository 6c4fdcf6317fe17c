#include "qcwb/collapse.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/nested.hpp"
#include "qcwb/saddle.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace qcwb;

namespace {

CVec bloch(double theta, double phi) {
  CVec v(2);
  v(0) = std::cos(theta / 2);
  v(1) = std::polar(std::sin(theta / 2), phi);
  return v;
}

// max over a grid of pure rho of min over a grid of pure sigma, 10^4 points per side.
double bloch_grid_maxmin(const CMat& R) {
  constexpr int n = 100;
  std::vector<CMat> grid;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      grid.push_back(projector(bloch(std::numbers::pi * i / (n - 1), 2 * std::numbers::pi * j / n)));
  double best = -1;
  for (const auto& rho : grid) {
    const CMat M = reduce_to_second(R, rho, 2, 2);
    double worst = 2;
    for (const auto& s : grid) worst = std::min(worst, (M * s).trace().real());
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace

TEST_SUITE("saddle") {
  TEST_CASE("identity observable has value 1") {
    const auto r = solve_level2(CMat::Identity(4, 4), 2, 2);
    CHECK(r.maxmin == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.minmax == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("projector on |00> has value 0, matching a Bloch grid") {
    CMat R = CMat::Zero(4, 4);
    R(0, 0) = 1;
    const auto r = solve_level2(R, 2, 2);
    CHECK(std::abs(r.maxmin) <= 1e-8);
    CHECK(std::abs(r.minmax) <= 1e-8);
    CHECK(std::abs(bloch_grid_maxmin(R) - r.maxmin) <= 1e-8);
    // The min player answers with |1><1|.
    CHECK(r.sigma(1, 1).real() == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("Sion swap on random 2x2 and 3x3 observables") {
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
      const int d = t < 7 ? 2 : 3;
      const CMat R = random_observable(d * d, rng);
      const auto r = solve_level2(R, d, d);
      CHECK(r.converged);
      CHECK(std::abs(r.maxmin - r.minmax) <= 1e-6);
      CHECK(r.value_lower <= r.value_upper + 1e-8);
    }
  }

  TEST_CASE("subgradient ascent agrees and stays below the certified upper value") {
    Rng rng(23);
    for (int t = 0; t < 3; ++t) {
      const CMat R = random_observable(4, rng);
      const auto ipm = solve_level2(R, 2, 2);
      const auto sg = solve_level2_subgradient(R, 2, 2, 4000);
      CHECK(sg.value <= ipm.value_upper + 1e-9);
      CHECK(sg.value >= ipm.value_lower - 2e-3);
    }
  }

  TEST_CASE("reduced program with full sets equals level 2") {
    Rng rng(25);
    const CMat R = random_observable(6, rng);
    const auto a = solve_level2(R, 3, 2);
    const auto b = solve_reduced(R, FeasibleSetSpec::full({3}), FeasibleSetSpec::full({2}));
    CHECK(std::abs(a.maxmin - b.value_lower) <= 1e-6);
    CHECK(std::abs(a.minmax - b.value_upper) <= 1e-6);
    CHECK(b.certificate == Certificate::ExactSdp);
  }

  TEST_CASE("separable 2x2 player: see-saw and PPT brackets close") {
    Rng rng(27);
    for (int t = 0; t < 3; ++t) {
      const CMat R = random_observable(8, rng);
      const auto r = solve_reduced(R, FeasibleSetSpec::separable({2, 2}), FeasibleSetSpec::full({2}));
      CHECK(r.value_lower <= r.value_upper + 1e-8);
      CHECK(r.value_upper - r.value_lower <= 1e-3);
      CHECK(r.certificate == Certificate::PptRelaxation);
      const auto rb = solve_reduced(swap_registers(R, 4, 2), FeasibleSetSpec::full({2}), FeasibleSetSpec::separable({2, 2}));
      CHECK(rb.value_lower <= rb.value_upper + 1e-8);
      CHECK(rb.value_upper - rb.value_lower <= 1e-3);
    }
  }

  TEST_CASE("non-binding bound equals the full-set value") {
    Rng rng(29);
    const CMat R = random_observable(8, rng);
    const auto full = solve_reduced(R, FeasibleSetSpec::full({4}), FeasibleSetSpec::full({2}));
    const auto ent = solve_reduced(R, FeasibleSetSpec::ent_bounded({2, 2}, std::log(2.0)), FeasibleSetSpec::full({2}));
    CHECK(std::abs(full.value_lower - ent.value_lower) <= 1e-6);
    CHECK(std::abs(full.value_upper - ent.value_upper) <= 1e-6);
    CHECK_FALSE(ent.note.empty());
  }

  TEST_CASE("value is monotone in the entanglement bound") {
    Rng rng(31);
    const CMat R = random_observable(8, rng);
    SaddleOptions o;
    o.max_rounds = 8;
    double prev_lower = -1, prev_upper = -1;
    for (double b : {0.0, 0.15, 0.35, 0.55, std::log(2.0)}) {
      const auto r = solve_reduced(R, FeasibleSetSpec::ent_bounded({2, 2}, b), FeasibleSetSpec::full({2}), o);
      CHECK(r.value_lower <= r.value_upper + 1e-8);
      CHECK(r.value_lower >= prev_lower - 1e-7);
      CHECK(r.value_upper >= prev_upper - 1e-7);
      prev_lower = r.value_lower;
      prev_upper = r.value_upper;
    }
  }

  TEST_CASE("set spec parsing and validation") {
    const auto s = parse_set_spec("ent:2x3:0.35");
    CHECK(s.kind == FeasibleSetSpec::Kind::EntBounded);
    CHECK(s.rest() == 2);
    CHECK(s.last() == 3);
    CHECK(s.bound == doctest::Approx(0.35));
    CHECK(parse_set_spec("sep:2x2").product_forcing());
    CHECK(parse_set_spec("ent:2x2:0").product_forcing());
    CHECK(parse_set_spec("full:4").dim() == 4);
    CHECK_THROWS_AS(parse_set_spec("ent:2x2:-1"), InputError);
    CHECK_THROWS_AS(parse_set_spec("sep:4"), InputError);
    CHECK_THROWS_AS(parse_set_spec("cube:2"), InputError);
    CHECK_THROWS_AS(parse_set_spec("full:2y2"), InputError);
    CHECK_THROWS_AS(FeasibleSetSpec::consistent(CMat::Identity(3, 3) / 3.0, {2, 2}).validate(), InputError);
  }

  TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(solve_reduced(CMat::Identity(4, 4), FeasibleSetSpec::full({3}), FeasibleSetSpec::full({2})),
                    InputError);
  }

  TEST_CASE("observable JSON round trip") {
    Rng rng(33);
    const CMat R = random_observable(3, rng);
    const CMat back = observable_from_json(observable_to_json(R));
    CHECK((R - back).norm() < 1e-15);
    CHECK_THROWS_AS(observable_from_json("{\"dim\": 2, \"entries\": []}"), InputError);
    CHECK_THROWS_AS(observable_from_json("not json"), InputError);
  }

  TEST_CASE("payoff is the bilinear form") {
    Rng rng(35);
    const CMat R = random_observable(4, rng);
    const CMat a = random_state(2, rng), b = random_state(2, rng);
    CHECK(payoff(R, a, b) == doctest::Approx((reduce_to_second(R, a, 2, 2) * b).trace().real()).epsilon(1e-12));
  }
}

TEST_SUITE("nested") {
  NestedOptions fast(int points) {
    NestedOptions o;
    o.net_points = points;
    return o;
  }

  TEST_CASE("identity observable gives 1") {
    const auto r = solve_nested_level3(CMat::Identity(8, 8), {2, 2, 2}, 10.0, fast(20));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("non-binding bound agrees with the reduced full-set value") {
    Rng rng(41);
    const CMat R = random_observable(8, rng);
    const auto n = solve_nested_level3(R, {2, 2, 2}, 1.0, fast(200));
    const auto red = solve_reduced(R, FeasibleSetSpec::ent_bounded({2, 2}, 1.0), FeasibleSetSpec::full({2}));
    CHECK(n.value <= red.value_upper + 1e-8);
    CHECK(std::abs(n.value - red.value_lower) <= 2e-3);
    CHECK(n.consistency_residual <= 1e-9);
    CHECK(n.inner_exact);
  }

  TEST_CASE("zero bound agrees with the separable reduced value") {
    Rng rng(43);
    const CMat R = random_observable(8, rng);
    const auto n = solve_nested_level3(R, {2, 2, 2}, 0.0, fast(200));
    const auto red = solve_reduced(R, FeasibleSetSpec::separable({2, 2}), FeasibleSetSpec::full({2}));
    CHECK(n.value <= red.value_upper + 1e-8);
    CHECK(std::abs(n.value - red.value_lower) <= 2e-3);
    CHECK(n.consistency_residual <= 1e-9);
  }

  TEST_CASE("net value tightens with resolution") {
    Rng rng(45);
    const CMat R = random_observable(8, rng);
    NestedOptions a = fast(50), b = fast(400);
    a.refine_starts = b.refine_starts = 0;
    const auto ra = solve_nested_level3(R, {2, 2, 2}, 0.3, a);
    const auto rb = solve_nested_level3(R, {2, 2, 2}, 0.3, b);
    CHECK(rb.net_value >= ra.net_value);
  }

  TEST_CASE("budget and dimension limits") {
    NestedOptions o = fast(10);
    o.max_net_points = 5;
    CHECK_THROWS_AS(solve_nested_level3(CMat::Identity(8, 8), {2, 2, 2}, 1.0, o), ResourceError);
    CHECK_THROWS_AS(solve_nested_level3(CMat::Identity(16, 16), {4, 2, 2}, 1.0, fast(10)), InputError);
    CHECK_THROWS_AS(solve_nested_level3(CMat::Identity(8, 8), {2, 2, 2}, -1.0, fast(10)), InputError);
  }
}

TEST_SUITE("collapse") {
  TEST_CASE("level shapes") {
    CHECK(level_shape(3).k == 1);
    CHECK(level_shape(3).l == 0);
    CHECK(level_shape(4).k == 1);
    CHECK(level_shape(4).l == 1);
    CHECK(level_shape(5).k == 2);
    CHECK(level_shape(5).l == 1);
    CHECK(level_shape(6).k == 2);
    CHECK(level_shape(6).l == 2);
    CHECK(level_shape(7).k == 3);
    CHECK(level_shape(7).l == 2);
  }

  TEST_CASE("level 6 with constant bounds has the level-4 structure") {
    const std::vector<double> b(4, 0.3), d(4, 0.2);
    const auto rep = check_collapse_structure(6, b, d, {2, 2, 2}, {2, 2, 2});
    CHECK(rep.status == CollapseStatus::Equal);
    CHECK(rep.level4.set_a.registers == std::vector<int>{4, 2});
    CHECK(rep.program.set_a.registers == std::vector<int>{2, 2, 2});
  }

  TEST_CASE("level 5 numerically equals level 4") {
    Rng rng(51);
    std::vector<CMat> obs;
    for (int i = 0; i < 2; ++i) obs.push_back(random_observable(16, rng));
    const std::vector<double> b(4, 0.0), d(4, 1.5);
    const auto rep = check_collapse_structure(5, b, d, {2, 1, 2}, {2, 2}, obs);
    CHECK(rep.status == CollapseStatus::Equal);
    REQUIRE(rep.lower_deltas.size() == 2);
    for (double x : rep.lower_deltas) CHECK(x <= 1e-6);
    for (double x : rep.upper_deltas) CHECK(x <= 1e-6);
  }

  TEST_CASE("varying bounds are not covered") {
    const auto rep = check_collapse_structure(6, {0.1, 0.2, 0.3}, {0.1, 0.1, 0.1}, {2, 2, 2}, {2, 2, 2});
    CHECK(rep.status == CollapseStatus::NotApplicable);
    CHECK_THROWS_AS(check_collapse_structure(3, {0.1}, {0.1}, {2, 2}, {2, 2}), InputError);
  }
}
