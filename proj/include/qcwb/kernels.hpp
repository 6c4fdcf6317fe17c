#pragma once

// Exhaustive enumeration kernels. Each parallel kernel has a serial twin
// used as the reference in tests and benchmarks.

#include "qcwb/poly.hpp"

#include <cstdint>
#include <vector>

namespace qcwb::kernels {

// Polynomial with monomials packed as bit masks (bit i-1 = y_i); N <= 63.
struct MaskPoly {
  std::vector<std::uint64_t> masks;
  std::vector<std::int64_t> coeffs;

  static MaskPoly from(const MultilinearPoly& p);
  std::int64_t eval(std::uint64_t y) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < masks.size(); ++i)
      if ((masks[i] & y) == masks[i]) s += coeffs[i];
    return s;
  }
};

// All masks y in [0, 2^n) with eval(y) >= t, ascending.
std::vector<std::uint64_t> witness_masks_serial(const MaskPoly& p, unsigned n, std::int64_t t);
std::vector<std::uint64_t> witness_masks_parallel(const MaskPoly& p, unsigned n, std::int64_t t);

// Split of the on-mass of P into positive and negative parts.
struct SignedMass {
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  auto operator<=>(const SignedMass&) const = default;
};

struct MassProfile {
  // Witnesses (W+ - W- >= t) with their masses, ascending in y.
  std::vector<std::pair<std::uint64_t, SignedMass>> witnesses;
  // Distinct masses of non-witnesses, ascending.
  std::vector<SignedMass> others;
  bool operator==(const MassProfile&) const = default;
};

// Direct evaluation of every y.
MassProfile mass_profile_serial(const MaskPoly& p, unsigned n, std::int64_t t);
// Gray-code incremental updates over independent blocks of y.
MassProfile mass_profile_parallel(const MaskPoly& p, unsigned n, std::int64_t t);

// Signed masses of a single assignment.
SignedMass signed_mass(const MaskPoly& p, std::uint64_t y);

}  // namespace qcwb::kernels
