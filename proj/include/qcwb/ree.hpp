#pragma once

#include "qcwb/quantum.hpp"

#include <cstdint>

namespace qcwb {

struct ReeOptions {
  int components = 0;  // product terms in the separable ansatz; 0 picks min(16, (dA dB)^2)
  int starts = 4;      // random starts besides the deterministic candidates
  std::uint64_t seed = 1;
  int max_iterations = 400;
};

enum class ReeCertificate { ExactZero, UpperBound };
const char* to_string(ReeCertificate c);

struct ReeResult {
  double value = 0;  // S(rho || sigma) for the separable sigma found
  CMat sigma;        // explicit mixture of product states
  ReeCertificate certificate = ReeCertificate::UpperBound;
  bool ppt = false;
  int evaluations = 0;
};

bool is_ppt(const CMat& rho, int dA, int dB, double tol = kPsdTol);

// Upper bound on the relative entropy of entanglement across A | B by
// minimizing S(rho || sigma) over mixtures of product states (L-BFGS,
// multi-start).
ReeResult ree_upper(const CMat& rho, int dA, int dB, const ReeOptions& opts = {});

// Largest entanglement any state on dA (x) dB can carry: ln min(dA, dB).
double max_entanglement(int dA, int dB);

}  // namespace qcwb
