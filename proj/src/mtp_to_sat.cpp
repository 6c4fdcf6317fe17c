#include "qcwb/circuit.hpp"

#include <cstdlib>

namespace qcwb {

namespace {

unsigned bit_length(std::uint64_t v) {
  unsigned b = 0;
  while (v) {
    ++b;
    v >>= 1;
  }
  return b;
}

}  // namespace

CnfFormula mtp_to_sat(const MtpInstance& inst, SatStats* stats) {
  const auto& p = inst.poly();
  CircuitBuilder b{CnfFormula(p.num_vars())};
  std::vector<WireBundle> level;
  for (const auto& t : p.terms()) {
    const Signal g = encode_monomial(b, t.vars);
    const auto mag = static_cast<std::uint64_t>(std::llabs(t.coeff));
    const unsigned width = bit_length(mag) + (t.coeff < 0 ? 1 : 0);
    level.push_back(scale_by_constant(g, t.coeff, width));
  }
  while (level.size() > 1) {
    std::vector<WireBundle> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(add_bundles(b, level[i], level[i + 1]));
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  WireBundle sum = level.empty() ? WireBundle{} : level[0];
  if (stats) {
    stats->sum_width = static_cast<unsigned>(sum.width());
    stats->sum_signed = sum.is_signed;
  }
  b.require(compare_geq(b, sum, inst.scaled_threshold()));
  return b.take();
}

}  // namespace qcwb
