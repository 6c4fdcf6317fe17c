#include "qcwb/collapse.hpp"

#include "qcwb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace qcwb {

LevelShape level_shape(int level) {
  if (level < 2) throw InputError("reduced programs start at level 2");
  const int j = level - 2;
  if (j % 2 == 0) return {j / 2, j / 2};
  const int k = (j + 1) / 2;
  return {k, k - 1};
}

FeasibleSetSpec level_set(int m, const std::vector<int>& regs, const std::vector<double>& c) {
  if (static_cast<int>(regs.size()) < m + 1) throw InputError("not enough registers for the level");
  if (m == 0) return FeasibleSetSpec::full({regs[0]});
  if (static_cast<int>(c.size()) < m + 1) throw InputError("not enough entanglement bounds for the level");
  return FeasibleSetSpec::ent_bounded(std::vector<int>(regs.begin(), regs.begin() + m + 1), c[m]);
}

ReducedProgram reduced_program(int level, const std::vector<int>& a_regs, const std::vector<int>& b_regs,
                               const std::vector<double>& b, const std::vector<double>& d) {
  const auto s = level_shape(level);
  return {level, level_set(s.k, a_regs, b), level_set(s.l, b_regs, d)};
}

FeasibleSetSpec grouped(const FeasibleSetSpec& s) {
  FeasibleSetSpec g = s;
  if (s.registers.size() > 2) g.registers = {s.rest(), s.last()};
  return g;
}

const char* to_string(CollapseStatus s) {
  switch (s) {
    case CollapseStatus::Equal: return "EQUAL";
    case CollapseStatus::Different: return "DIFFERENT";
    case CollapseStatus::NotApplicable: return "NOT_APPLICABLE";
  }
  return "?";
}

namespace {

bool constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

std::vector<int> grouped_regs(const std::vector<int>& regs, int m) {
  if (m == 0) return {regs[0]};
  return {std::accumulate(regs.begin(), regs.begin() + m, 1, std::multiplies<>()), regs[m]};
}

}  // namespace

CollapseReport check_collapse_structure(int level, const std::vector<double>& b, const std::vector<double>& d,
                                        const std::vector<int>& a_regs, const std::vector<int>& b_regs,
                                        const std::vector<CMat>& observables, const SaddleOptions& opts) {
  if (level < 4) throw InputError("collapse check needs level >= 4");
  if (b.empty() || d.empty()) throw InputError("entanglement bounds must be given");
  CollapseReport rep;
  const auto shape = level_shape(level);
  rep.program = reduced_program(level, a_regs, b_regs, b, d);
  if (!constant(b) || !constant(d)) {
    rep.status = CollapseStatus::NotApplicable;
    rep.reason = "entanglement bounds vary between rounds";
    return rep;
  }
  // Constant bounds: fill the level-4 bound vectors from the common value.
  const std::vector<double> b4(2, b.front()), d4(2, d.front());
  rep.level4 = reduced_program(4, grouped_regs(a_regs, shape.k), grouped_regs(b_regs, std::max(shape.l, 1)), b4, d4);
  if (shape.l == 0) {
    rep.status = CollapseStatus::Different;
    rep.reason = "min player has a single register";
    return rep;
  }
  const bool same = grouped(rep.program.set_a) == rep.level4.set_a && grouped(rep.program.set_b) == rep.level4.set_b;
  rep.status = same ? CollapseStatus::Equal : CollapseStatus::Different;
  if (!same) rep.reason = "grouped feasible sets differ from level 4";

  for (const auto& R : observables) {
    const auto vi = solve_reduced(R, rep.program.set_a, rep.program.set_b, opts);
    const auto v4 = solve_reduced(R, rep.level4.set_a, rep.level4.set_b, opts);
    rep.lower_deltas.push_back(std::abs(vi.value_lower - v4.value_lower));
    rep.upper_deltas.push_back(std::abs(vi.value_upper - v4.value_upper));
    if (rep.lower_deltas.back() > 1e-6 || rep.upper_deltas.back() > 1e-6) {
      rep.status = CollapseStatus::Different;
      rep.reason = "numerical values differ";
    }
  }
  return rep;
}

}  // namespace qcwb
