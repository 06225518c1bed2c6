#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "equal/matrix_core.hpp"

namespace equal {

// Deterministic generator: mt19937_64 stream with explicit uniform/normal
// transforms so output does not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller, one spare cached.
  double normal();

  // Uniform integer in [0, bound).
  std::uint64_t next_index(std::uint64_t bound) { return gen_() % bound; }

  // Fisher-Yates permutation of 0..n-1.
  std::vector<Index> permutation(Index n);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream-split seed derivation (splitmix64 of seed xor stream constant).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace equal
