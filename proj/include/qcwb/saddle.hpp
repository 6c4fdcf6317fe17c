#pragma once

#include "qcwb/bilinear.hpp"
#include "qcwb/quantum.hpp"
#include "qcwb/ree.hpp"
#include "qcwb/sdp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qcwb {

// Feasible set of one prover. Entanglement is measured between the last
// register and the rest.
struct FeasibleSetSpec {
  enum class Kind { Full, Separable, EntBounded, Consistent };
  Kind kind = Kind::Full;
  std::vector<int> registers{1};
  double bound = 0;  // nats; EntBounded only
  CMat parent;       // Consistent only: state on every register but the last

  static FeasibleSetSpec full(std::vector<int> regs);
  static FeasibleSetSpec separable(std::vector<int> regs);
  static FeasibleSetSpec ent_bounded(std::vector<int> regs, double b);
  static FeasibleSetSpec consistent(const CMat& parent, std::vector<int> regs);

  int dim() const;
  int rest() const;  // product of all but the last register
  int last() const;
  void validate() const;
  // Bound at or above ln min(rest, last): the constraint cannot bind.
  bool nonbinding() const;
  // Separable, or EntBounded with bound 0.
  bool product_forcing() const;
  bool operator==(const FeasibleSetSpec& o) const;
};

const char* to_string(FeasibleSetSpec::Kind k);
std::string to_string(const FeasibleSetSpec& s);
// "full:4", "sep:2x2", "ent:2x2:0.35". Consistent sets need a parent state
// and are built in code.
FeasibleSetSpec parse_set_spec(const std::string& text);

enum class Certificate { ExactSdp, PptRelaxation, SeesawBound };
const char* to_string(Certificate c);

struct SaddleResult {
  double value_lower = 0, value_upper = 0;
  double maxmin = 0, minmax = 0;  // solve_level2: both quantifier orders
  CMat rho, sigma;                // strategies certifying value_lower and value_upper
  int iterations = 0;
  Certificate certificate = Certificate::ExactSdp;
  bool converged = false;
  std::string note;
};

struct SaddleOptions {
  sdp::Options sdp;
  double tol = 1e-7;     // bracket width target
  int max_rounds = 150;  // atom generation rounds
  std::uint64_t seed = 1;
  double ree_margin = 1e-6;
  ReeOptions ree;
};

// max_rho min_sigma Tr(R (rho (x) sigma)) over all states, computed as
// max_rho lambda_min(Tr_A(R (rho (x) I))) and, separately, the min-max order.
SaddleResult solve_level2(const CMat& R, int dA, int dB, const SaddleOptions& opts = {});

// Cross-check: projected spectral supergradient ascent with iterate averaging.
struct SubgradientResult {
  double value = 0;  // lambda_min at the averaged iterate (a lower bound)
  CMat rho;
  int iterations = 0;
};
SubgradientResult solve_level2_subgradient(const CMat& R, int dA, int dB, int iterations = 4000);

// Two-round reduced program over setA x setB with [lower, upper] brackets.
SaddleResult solve_reduced(const CMat& R, const FeasibleSetSpec& setA, const FeasibleSetSpec& setB,
                           const SaddleOptions& opts = {});

// Exact value of Tr(R (rho (x) sigma)).
double payoff(const CMat& R, const CMat& rho, const CMat& sigma);

// JSON: {"dim": n, "entries": [[re, im], ...]} row-major.
std::string observable_to_json(const CMat& m);
CMat observable_from_json(const std::string& text);

}  // namespace qcwb
