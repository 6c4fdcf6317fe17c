#pragma once

// Reduced two-round programs for higher levels of the bounded-entanglement
// hierarchy and the check that every level above four has the shape of
// level four once the earlier registers are grouped.

#include "qcwb/saddle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcwb {

// Level i reduces to max over T(k, b) and min over T(l, d) with
//   i - 2 even: k = l = (i - 2) / 2,  i - 2 odd: k = (i - 1) / 2, l = k - 1.
struct LevelShape {
  int k = 0, l = 0;
};
LevelShape level_shape(int level);

// T(m): states on registers 1..m+1 whose entanglement between register m+1
// and the rest is at most c[m] (c is 0-based, so c[m] bounds register m+1).
// T(0) is every state on register 1.
FeasibleSetSpec level_set(int m, const std::vector<int>& regs, const std::vector<double>& c);

struct ReducedProgram {
  int level = 0;
  FeasibleSetSpec set_a, set_b;
};
ReducedProgram reduced_program(int level, const std::vector<int>& a_regs, const std::vector<int>& b_regs,
                               const std::vector<double>& b, const std::vector<double>& d);

// Groups all but the last register of each side into one.
FeasibleSetSpec grouped(const FeasibleSetSpec& s);

enum class CollapseStatus { Equal, Different, NotApplicable };
const char* to_string(CollapseStatus s);

struct CollapseReport {
  CollapseStatus status = CollapseStatus::NotApplicable;
  ReducedProgram program, level4;
  std::string reason;
  // Filled when observables are supplied: |value(level i) - value(level 4)|
  // for the lower and the upper bracket.
  std::vector<double> lower_deltas, upper_deltas;
};

// a_regs, b_regs: register dimensions per prover (at least k + 1 and l + 1
// entries). The level-4 program acts on the grouped registers.
CollapseReport check_collapse_structure(int level, const std::vector<double>& b, const std::vector<double>& d,
                                        const std::vector<int>& a_regs, const std::vector<int>& b_regs,
                                        const std::vector<CMat>& observables = {},
                                        const SaddleOptions& opts = {});

}  // namespace qcwb
