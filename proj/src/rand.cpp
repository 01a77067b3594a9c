#include "prslab/rand.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace prslab {

namespace {

std::mt19937_64 engine_from_digest(const Digest& d) {
  std::seed_seq seq(d.begin(), d.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(const Digest& seed)
    : engine_(engine_from_digest(seed)) {}

RandomStream::RandomStream(std::uint64_t seed)
    : engine_(engine_from_digest(sha256(be64(seed)))) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t RandomStream::bits(int n) {
  if (n <= 0) return 0;
  if (n >= 64) return next_u64();
  return next_u64() >> (64 - n);
}

std::size_t RandomStream::discrete(const std::vector<double>& weights) {
  double u = uniform();
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.empty() ? 0 : weights.size() - 1;
}

RandomStream derive_stream(std::uint64_t master, std::string_view label,
                           std::uint64_t index) {
  std::vector<std::uint8_t> material;
  material.reserve(16 + label.size());
  const auto m = be64(master);
  material.insert(material.end(), m.begin(), m.end());
  material.insert(material.end(), label.begin(), label.end());
  const auto i = be64(index);
  material.insert(material.end(), i.begin(), i.end());
  return RandomStream(sha256(material));
}

}  // namespace prslab
