#include "oracles.hpp"

#include "qcwb/circuit.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/generators.hpp"

#include <doctest.h>

#include <functional>
#include <map>

using namespace qcwb;

namespace {

// Every input assignment over originals 1..n must have exactly one satisfying
// extension, on which `out` evaluates to expect(inputs).
void check_function(const CnfFormula& f, unsigned n,
                    const std::function<std::int64_t(const std::vector<std::uint8_t>&)>& out,
                    const std::function<std::int64_t(std::uint64_t)>& expect) {
  const auto nv = f.num_vars();
  REQUIRE(nv <= 22);
  std::map<std::uint64_t, int> extensions;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << nv); ++x) {
    auto v = oracle::bits_of(x, nv);
    if (!oracle::formula_sat(f, v)) continue;
    const std::uint64_t in = x & ((std::uint64_t{1} << n) - 1);
    ++extensions[in];
    CHECK(out(v) == expect(in));
  }
  CHECK(extensions.size() == (std::size_t{1} << n));
  for (const auto& [in, c] : extensions) CHECK(c == 1);
}

std::int64_t signed_of(std::uint64_t bits, unsigned w) {
  std::int64_t v = static_cast<std::int64_t>(bits & ((1ULL << w) - 1));
  return (bits >> (w - 1)) & 1U ? v - (std::int64_t{1} << w) : v;
}

WireBundle input_bundle(unsigned first_var, unsigned w, bool sgn) {
  WireBundle b;
  b.is_signed = sgn;
  for (unsigned i = 0; i < w; ++i) b.bits.push_back(Signal::literal(static_cast<Lit>(first_var + i)));
  return b;
}

}  // namespace

TEST_SUITE("circuit") {
  TEST_CASE("encode_monomial") {
    CircuitBuilder b{CnfFormula(3)};
    const auto g = encode_monomial(b, {1, 2});
    const auto f = b.formula();
    REQUIRE(f.clauses().size() == 3);
    const Lit gl = g.lit();
    CHECK(f.clauses()[0] == Clause{-gl, 1});
    CHECK(f.clauses()[1] == Clause{-gl, 2});
    CHECK(f.clauses()[2] == Clause{gl, -1, -2});

    CircuitBuilder u{CnfFormula(3)};
    CHECK(encode_monomial(u, {3}) == Signal::literal(3));
    CHECK(u.formula().clauses().empty());
    CHECK(encode_monomial(u, {}) == Signal::constant(true));

    CircuitBuilder t{CnfFormula(3)};
    const auto g3 = encode_monomial(t, {1, 2, 3});
    CHECK(t.formula().clauses().size() == 4);
    CHECK(t.formula().num_aux() == 1);
    check_function(
        t.formula(), 3, [&](const auto& v) { return g3.eval(v) ? 1 : 0; },
        [](std::uint64_t in) { return in == 7 ? 1 : 0; });
  }

  TEST_CASE("scale_by_constant") {
    const Signal g = Signal::literal(1);
    auto one = scale_by_constant(g, 1, 1);
    CHECK(one.width() == 1);
    CHECK(one.bits[0] == g);
    auto five = scale_by_constant(g, 5, 3);
    CHECK(five.bits == std::vector<Signal>{g, Signal::constant(false), g});
    auto m3 = scale_by_constant(g, -3, 4);
    CHECK(m3.is_signed);
    CHECK(bundle_value(m3, {1}) == -3);
    CHECK(bundle_value(m3, {0}) == 0);
    CHECK_THROWS_AS(scale_by_constant(g, 8, 3), InputError);
    CHECK_THROWS_AS(scale_by_constant(g, -5, 3), InputError);
  }

  TEST_CASE("add_bundles on constants and identities") {
    CircuitBuilder b{CnfFormula(3)};
    WireBundle one{{Signal::constant(true)}, false}, zero{{Signal::constant(false)}, false};
    auto s = add_bundles(b, one, zero);
    CHECK(bundle_value(s, {0, 0, 0}) == 1);
    CHECK(s.width() == 2);
    auto x = input_bundle(1, 3, false);
    auto id = add_bundles(b, x, WireBundle{{Signal::constant(false)}, false});
    check_function(
        b.formula(), 3, [&](const auto& v) { return bundle_value(id, v); },
        [](std::uint64_t in) { return static_cast<std::int64_t>(in); });
  }

  TEST_CASE("add_bundles: exhaustive 3-bit sums") {
    for (bool sa : {false, true})
      for (bool sb : {false, true}) {
        CircuitBuilder b{CnfFormula(6)};
        auto x = input_bundle(1, 3, sa), y = input_bundle(4, 3, sb);
        auto s = add_bundles(b, x, y);
        check_function(
            b.formula(), 6, [&](const auto& v) { return bundle_value(s, v); },
            [&](std::uint64_t in) {
              const std::int64_t a = sa ? signed_of(in, 3) : static_cast<std::int64_t>(in & 7);
              const std::int64_t c = sb ? signed_of(in >> 3, 3) : static_cast<std::int64_t>((in >> 3) & 7);
              return a + c;
            });
      }
  }

  TEST_CASE("compare_geq") {
    CircuitBuilder b{CnfFormula(3)};
    CHECK(compare_geq(b, input_bundle(1, 2, false), 0) == Signal::constant(true));
    CHECK(compare_geq(b, input_bundle(1, 2, false), 4) == Signal::constant(false));
    for (bool sgn : {false, true})
      for (std::int64_t t = -5; t <= 9; ++t) {
        CircuitBuilder c{CnfFormula(3)};
        const auto out = compare_geq(c, input_bundle(1, 3, sgn), t);
        check_function(
            c.formula(), 3, [&](const auto& v) { return out.eval(v) ? 1 : 0; },
            [&](std::uint64_t in) {
              const std::int64_t val = sgn ? signed_of(in, 3) : static_cast<std::int64_t>(in);
              return val >= t ? 1 : 0;
            });
      }
  }

  TEST_CASE("mtp_to_sat examples") {
    MtpInstance prod(MultilinearPoly(2, 2, 1, {{{1, 2}, 1}}), 1, 1);
    auto c = oracle::brute_count(mtp_to_sat(prod));
    CHECK(c.models == 1);
    CHECK(c.projections == std::set<std::vector<std::uint8_t>>{{1, 1}});

    MtpInstance unreachable(MultilinearPoly(1, 1, 1, {{{1}, 1}}), 2, 1);
    const auto f = mtp_to_sat(unreachable);
    CHECK(f.has_empty_clause());
    CHECK(oracle::brute_count(f).models == 0);

    MtpInstance half(MultilinearPoly(2, 1, 2, {{{1}, 1}, {{2}, 1}}), make_rational(1, 2),
                     make_rational(1, 2));
    auto h = oracle::brute_count(mtp_to_sat(half));
    CHECK(h.models == 3);
    CHECK(h.projections == std::set<std::vector<std::uint8_t>>{{0, 1}, {1, 0}, {1, 1}});
  }

  TEST_CASE("mtp_to_sat preserves witness counts with unique extensions") {
    GenParams gp;
    gp.num_vars = 4;
    gp.terms = 4;
    gp.coeff_bits = 2;
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      const auto I = gen_random_poly(gp, seed);
      const auto f = mtp_to_sat(I);
      if (f.num_vars() > 22) continue;
      ++checked;
      const auto c = oracle::brute_count(f);
      const auto w = brute_force_decide(I).witnesses;
      CHECK(c.models == w.size());
      CHECK(c.projections.size() == w.size());
      for (const auto& y : w) {
        std::vector<std::uint8_t> bits;
        for (std::uint32_t i = 1; i <= 4; ++i) bits.push_back(y.get(i));
        CHECK(c.projections.count(bits) == 1);
      }
      CHECK(to_dimacs(mtp_to_sat(I)) == to_dimacs(f));
    }
    CHECK(checked >= 20);
  }

  TEST_CASE("DIMACS and variable map round trip") {
    GenParams gp;
    gp.num_vars = 5;
    const auto f = mtp_to_sat(gen_random_poly(gp, 11));
    const auto g = parse_dimacs(to_dimacs(f), write_var_map(f));
    CHECK(g == f);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), InputError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), InputError);
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), InputError);
  }
}
