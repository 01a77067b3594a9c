// rand.hpp -- deterministic randomness streams
//
// Every stochastic operation in the library consumes an explicitly passed
// RandomStream. Streams are derived from a 64-bit master seed through
// SHA-256(master || label || index), so trial i of experiment "foo" always
// sees the same bits regardless of scheduling or thread count.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "prslab/sha256.hpp"

namespace prslab {

class RandomStream {
 public:
  explicit RandomStream(const Digest& seed);
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53 bits of precision.
  double uniform();

  // Standard normal via Box-Muller; avoids the implementation-defined
  // std::normal_distribution so streams are portable.
  double gaussian();

  // n uniform bits, n in [0, 64].
  std::uint64_t bits(int n);

  bool bernoulli(double p) { return uniform() < p; }

  // Index into [0, n) proportional to the given nonnegative weights; the
  // caller guarantees they sum to ~1. Falls back to the last index on
  // rounding shortfall.
  std::size_t discrete(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream derivation: SHA-256(be64(master) || label || be64(index)).
RandomStream derive_stream(std::uint64_t master, std::string_view label,
                           std::uint64_t index);

}  // namespace prslab
