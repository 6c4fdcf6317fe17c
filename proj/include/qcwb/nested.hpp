#pragma once

// Literal three-quantifier evaluation
//   max_{rho1} min_{sigma1} max_{rho2 in S(rho1)} Tr(R (rho2 (x) sigma1))
// where S(rho1) holds the extensions of rho1 to A1 A2 with entanglement
// between A1 and A2 at most b2. R acts on (A1 A2) (x) B1.

#include "qcwb/quantum.hpp"
#include "qcwb/sdp.hpp"

#include <cstdint>

namespace qcwb {

struct NestedDims {
  int a1 = 2, a2 = 2, b1 = 2;
};

struct NestedOptions {
  int net_points = 1000;
  std::uint64_t seed = 1;
  int refine_starts = 3;         // best net points polished by compass search
  int refine_polls = 40;  // compass polls per start, each 2 * 2 a1^2 evaluations
  int max_net_points = 20000;    // ResourceError beyond this
  sdp::Options sdp;
};

struct NestedResult {
  double value = 0;      // best certified inner value (a lower bound on the program)
  double net_value = 0;  // best value on the raw net, before refinement
  CMat rho1, rho2, sigma1;
  double consistency_residual = 0;  // || Tr_A2 rho2 - rho1 ||_max
  int evaluations = 0;
  // False when S(rho1) had to be replaced by its PPT relaxation outside
  // 2 x 2 and 2 x 3, so value is no longer a guaranteed lower bound.
  bool inner_exact = true;
};

// Inner value F(rho1) = max_{rho2 in S(rho1)} lambda_min(Tr_{A1A2}(R (rho2 (x) I))).
struct InnerValue {
  double value = 0;
  CMat rho2, sigma1;
};
InnerValue nested_inner(const CMat& R, const NestedDims& dims, const CMat& rho1, double b2,
                        const sdp::Options& opts = {});

NestedResult solve_nested_level3(const CMat& R, const NestedDims& dims, double b2, const NestedOptions& opts = {});

}  // namespace qcwb
