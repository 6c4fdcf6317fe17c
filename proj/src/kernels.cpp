#include "qcwb/kernels.hpp"

#include "qcwb/errors.hpp"

#include <algorithm>

namespace qcwb::kernels {

namespace {

// Low bits enumerated inside one block.
unsigned block_bits(unsigned n) { return std::min(n, 14u); }

void compact(std::vector<SignedMass>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct BlockResult {
  std::vector<std::pair<std::uint64_t, SignedMass>> witnesses;
  std::vector<SignedMass> others;
};

void record(BlockResult& out, std::uint64_t y, SignedMass m, std::int64_t t) {
  if (m.pos - m.neg >= t) {
    out.witnesses.push_back({y, m});
  } else {
    out.others.push_back(m);
    if (out.others.size() > (1u << 16)) compact(out.others);
  }
}

MassProfile merge(std::vector<BlockResult>& blocks) {
  MassProfile p;
  for (auto& b : blocks) {
    std::sort(b.witnesses.begin(), b.witnesses.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    p.witnesses.insert(p.witnesses.end(), b.witnesses.begin(), b.witnesses.end());
    p.others.insert(p.others.end(), b.others.begin(), b.others.end());
    compact(p.others);
  }
  return p;
}

void require_width(unsigned n) {
  if (n > 40) throw ResourceError("mask enumeration above 40 variables");
}

}  // namespace

MaskPoly MaskPoly::from(const MultilinearPoly& p) {
  if (p.num_vars() > 63) throw InputError("mask polynomial needs at most 63 variables");
  MaskPoly m;
  for (const auto& t : p.terms()) {
    std::uint64_t mask = 0;
    for (auto v : t.vars) mask |= std::uint64_t{1} << (v - 1);
    m.masks.push_back(mask);
    m.coeffs.push_back(t.coeff);
  }
  return m;
}

std::vector<std::uint64_t> witness_masks_serial(const MaskPoly& p, unsigned n, std::int64_t t) {
  require_width(n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y)
    if (p.eval(y) >= t) out.push_back(y);
  return out;
}

std::vector<std::uint64_t> witness_masks_parallel(const MaskPoly& p, unsigned n, std::int64_t t) {
  require_width(n);
  const unsigned lo = block_bits(n);
  const std::int64_t nblocks = std::int64_t{1} << (n - lo);
  std::vector<std::vector<std::uint64_t>> parts(nblocks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::uint64_t base = static_cast<std::uint64_t>(b) << lo;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << lo); ++i)
      if (p.eval(base | i) >= t) parts[b].push_back(base | i);
  }
  std::vector<std::uint64_t> out;
  for (auto& v : parts) out.insert(out.end(), v.begin(), v.end());
  return out;
}

SignedMass signed_mass(const MaskPoly& p, std::uint64_t y) {
  SignedMass m;
  for (std::size_t i = 0; i < p.masks.size(); ++i)
    if ((p.masks[i] & y) == p.masks[i]) {
      if (p.coeffs[i] > 0)
        m.pos += p.coeffs[i];
      else
        m.neg -= p.coeffs[i];
    }
  return m;
}

MassProfile mass_profile_serial(const MaskPoly& p, unsigned n, std::int64_t t) {
  require_width(n);
  std::vector<BlockResult> one(1);
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) record(one[0], y, signed_mass(p, y), t);
  return merge(one);
}

MassProfile mass_profile_parallel(const MaskPoly& p, unsigned n, std::int64_t t) {
  require_width(n);
  const unsigned lo = block_bits(n);
  const std::int64_t nblocks = std::int64_t{1} << (n - lo);
  // Monomials touching each low bit.
  std::vector<std::vector<std::size_t>> touching(lo);
  for (std::size_t i = 0; i < p.masks.size(); ++i)
    for (unsigned j = 0; j < lo; ++j)
      if ((p.masks[i] >> j) & 1U) touching[j].push_back(i);

  std::vector<BlockResult> blocks(nblocks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    std::uint64_t y = static_cast<std::uint64_t>(b) << lo;
    SignedMass m = signed_mass(p, y);
    record(blocks[b], y, m, t);
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << lo); ++i) {
      const unsigned j = static_cast<unsigned>(__builtin_ctzll(i));
      const std::uint64_t flipped = y ^ (std::uint64_t{1} << j);
      for (auto k : touching[j]) {
        const auto mk = p.masks[k];
        const bool was = (mk & y) == mk;
        const bool now = (mk & flipped) == mk;
        if (was == now) continue;
        const std::int64_t c = p.coeffs[k];
        const std::int64_t sgn = now ? 1 : -1;
        if (c > 0)
          m.pos += sgn * c;
        else
          m.neg -= sgn * c;
      }
      y = flipped;
      record(blocks[b], y, m, t);
    }
  }
  return merge(blocks);
}

}  // namespace qcwb::kernels
