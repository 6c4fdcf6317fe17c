#include "qcwb/rng.hpp"

namespace qcwb {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // 2^64 mod n values at the top are rejected.
  const std::uint64_t rem = (UINT64_MAX % n + 1) % n;
  std::uint64_t x;
  do {
    x = eng_();
  } while (rem != 0 && x >= 0 - rem);
  return x % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return splitmix(splitmix(splitmix(seed) ^ tag) + index);
}

}  // namespace qcwb
