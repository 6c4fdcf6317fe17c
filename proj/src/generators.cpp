#include "qcwb/generators.hpp"

#include "qcwb/errors.hpp"
#include "qcwb/kernels.hpp"
#include "qcwb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qcwb {

namespace {

std::vector<std::uint32_t> sample_distinct(Rng& rng, std::uint32_t n, std::uint32_t k) {
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i + 1;
  for (std::uint32_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

MultilinearPoly planted_product(const GenParams& p, Rng& rng, std::int64_t denominator) {
  const auto n = p.num_vars;
  if (n == 0 || p.zeros > n) throw InputError("planted profile needs 1 <= N and zeros <= N");
  const auto zero_pos = sample_distinct(rng, n, p.zeros);
  std::vector<std::uint32_t> ones;
  for (std::uint32_t i = 1; i <= n; ++i)
    if (!std::binary_search(zero_pos.begin(), zero_pos.end(), i)) ones.push_back(i);
  PolyBuilder pb;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << zero_pos.size()); ++s) {
    VarSet vars = ones;
    int sign = 1;
    for (std::size_t i = 0; i < zero_pos.size(); ++i)
      if ((s >> i) & 1U) {
        vars.push_back(zero_pos[i]);
        sign = -sign;
      }
    pb.add(std::move(vars), sign);
  }
  return pb.build(n, n, denominator);
}

}  // namespace

MtpInstance gen_random_poly(const GenParams& p, std::uint64_t seed) {
  const auto n = p.num_vars;
  if (n == 0 || n > 20) throw InputError("random-poly needs 1 <= N <= 20");
  if (p.coeff_bits == 0 || p.coeff_bits > 20) throw InputError("coeff_bits must be in [1, 20]");
  const auto d = std::min(p.degree, n);
  Rng rng(derive_seed(seed, 0x706f6c79ULL));
  std::set<VarSet> seen;
  PolyBuilder pb;
  const std::int64_t cmax = (std::int64_t{1} << p.coeff_bits) - 1;
  for (std::uint32_t t = 0; t < p.terms; ++t) {
    const auto size = static_cast<std::uint32_t>(1 + rng.below(std::max<std::uint32_t>(d, 1)));
    auto vars = sample_distinct(rng, n, std::min(size, n));
    if (!seen.insert(vars).second) continue;
    std::int64_t c = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cmax)));
    if (rng.bit()) c = -c;
    pb.add(std::move(vars), c);
  }
  auto raw = pb.build(n, std::max<std::uint32_t>(d, 1), 1);
  const auto mp = kernels::MaskPoly::from(raw);
  std::int64_t lo = INT64_MAX, hi = INT64_MIN;
  std::vector<std::int64_t> values;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
    const auto v = mp.eval(y);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    values.push_back(v);
  }
  const unsigned l = hi > lo ? ceil_log2(BigInt(hi - lo)) : 0;
  const std::int64_t D = std::int64_t{1} << l;
  PolyBuilder shifted;
  for (const auto& t : raw.terms()) shifted.add(t.vars, t.coeff);
  if (lo != 0) shifted.add({}, -lo);
  auto poly = shifted.build(n, raw.degree_bound(), D);
  std::int64_t a;
  const std::int64_t span = hi - lo;
  if (rng.bit() || span == D) {
    a = values[rng.below(values.size())] - lo;  // attained value
  } else {
    a = span + 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(D - span)));
  }
  return MtpInstance(std::move(poly), Rational(BigInt(a), BigInt(D)), Rational(BigInt(1), BigInt(D)));
}

MtpInstance gen_planted(const GenParams& p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x706c616e74ULL));
  return MtpInstance(planted_product(p, rng, 1), Rational(1), Rational(1));
}

MtpInstance gen_planted_no(const GenParams& p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x706c616e74ULL));
  return MtpInstance(planted_product(p, rng, 2), Rational(1), Rational(BigInt(1), BigInt(2)));
}

CnfFormula gen_kcnf(const GenParams& p, std::uint64_t seed) {
  const auto n = p.num_vars;
  if (p.clause_width == 0 || p.clause_width > n) throw InputError("clause width must be in [1, N]");
  if (!(p.density >= 0)) throw InputError("density must be nonnegative");
  Rng rng(derive_seed(seed, 0x636e66ULL));
  const auto m = static_cast<std::uint64_t>(std::llround(p.density * n));
  CnfFormula f(n);
  for (std::uint64_t j = 0; j < m; ++j) {
    Clause c;
    for (auto v : sample_distinct(rng, n, p.clause_width))
      c.push_back(rng.bit() ? static_cast<Lit>(v) : -static_cast<Lit>(v));
    f.add_clause(std::move(c));
  }
  return f;
}

Generated gen_instance(const std::string& profile, const GenParams& p, std::uint64_t seed) {
  if (profile == "random-poly") return gen_random_poly(p, seed);
  if (profile == "planted") return gen_planted(p, seed);
  if (profile == "planted-no") return gen_planted_no(p, seed);
  if (profile == "kcnf") return gen_kcnf(p, seed);
  throw InputError("unknown profile '" + profile + "'");
}

}  // namespace qcwb
