#pragma once

#include <cstdint>
#include <random>

namespace qcwb {

// Portable across standard libraries: only raw engine output is consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  // Uniform in [0, n); n >= 1.
  std::uint64_t below(std::uint64_t n);
  bool bit() { return (eng_() >> 63) != 0; }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

// Independent stream seed for (seed, tag, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0);

}  // namespace qcwb
