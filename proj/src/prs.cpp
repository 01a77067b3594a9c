#include "prslab/prs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prslab/haar.hpp"
#include "prslab/parallel.hpp"
#include "prslab/qops.hpp"
#include "prslab/sha256.hpp"

namespace prslab {

std::string to_string(PrsKind kind) {
  switch (kind) {
    case PrsKind::kBinaryPhase: return "binary_phase";
    case PrsKind::kIdealHaar: return "ideal_haar";
    case PrsKind::kShiftedBasis: return "shifted_basis";
  }
  return "unknown";
}

PrsKind prs_kind_from_string(const std::string& name) {
  if (name == "binary_phase") return PrsKind::kBinaryPhase;
  if (name == "ideal_haar") return PrsKind::kIdealHaar;
  if (name == "shifted_basis") return PrsKind::kShiftedBasis;
  throw std::invalid_argument("unknown PRS kind: " + name);
}

PrsKey PrsKey::from_uint(std::uint64_t value, int key_bits) {
  if (key_bits < 1 || key_bits > 64) {
    throw std::invalid_argument("key_bits must be in [1, 64] for from_uint");
  }
  if (key_bits < 64) {
    value &= (std::uint64_t{1} << key_bits) - 1;
  }
  const int nbytes = (key_bits + 7) / 8;
  PrsKey key;
  key.key_bits = key_bits;
  key.bytes.resize(static_cast<std::size_t>(nbytes));
  for (int i = nbytes - 1; i >= 0; --i) {
    key.bytes[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(value & 0xff);
    value >>= 8;
  }
  return key;
}

PrsKey PrsKey::random(int key_bits, RandomStream& rng) {
  if (key_bits < 1) {
    throw std::invalid_argument("key_bits must be positive");
  }
  PrsKey key;
  key.key_bits = key_bits;
  const int nbytes = (key_bits + 7) / 8;
  key.bytes.resize(static_cast<std::size_t>(nbytes));
  for (auto& b : key.bytes) {
    b = static_cast<std::uint8_t>(rng.bits(8));
  }
  const int spare = nbytes * 8 - key_bits;
  if (spare > 0) {
    key.bytes[0] &= static_cast<std::uint8_t>(0xff >> spare);
  }
  return key;
}

PrsKey PrsKey::from_hex(const std::string& hex, int key_bits) {
  const int nbytes = (key_bits + 7) / 8;
  if (hex.size() != static_cast<std::size_t>(2 * nbytes)) {
    throw std::invalid_argument("hex key has the wrong length");
  }
  PrsKey key;
  key.key_bits = key_bits;
  key.bytes.resize(static_cast<std::size_t>(nbytes));
  for (int i = 0; i < nbytes; ++i) {
    const std::string byte_str = hex.substr(static_cast<std::size_t>(2 * i), 2);
    key.bytes[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(std::stoul(byte_str, nullptr, 16));
  }
  return key;
}

std::uint64_t PrsKey::as_uint() const {
  std::uint64_t value = 0;
  for (std::uint8_t b : bytes) {
    value = (value << 8) | b;
  }
  return value;
}

std::string PrsKey::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

namespace {

// f_k(x) = least significant bit of SHA-256(key || be64(x)), reading the
// digest as a big-endian integer.
int binary_phase_bit(const PrsKey& key, std::uint64_t x) {
  std::vector<std::uint8_t> material(key.bytes);
  const auto xb = be64(x);
  material.insert(material.end(), xb.begin(), xb.end());
  const Digest digest = sha256(material);
  return digest[31] & 1;
}

StateVector eval_binary_phase(const PrsSpec& spec, const PrsKey& key) {
  const std::int64_t dim = dim_of_qubits(spec.output_qubits);
  const double mag = 1.0 / std::sqrt(static_cast<double>(dim));
  Vec amps(dim);
  for (std::int64_t x = 0; x < dim; ++x) {
    const int bit = binary_phase_bit(key, static_cast<std::uint64_t>(x));
    amps(x) = bit ? -mag : mag;
  }
  return StateVector(spec.output_qubits, std::move(amps));
}

StateVector eval_ideal_haar(const PrsSpec& spec, const PrsKey& key) {
  RandomStream stream{sha256(key.bytes)};
  return haar_state(spec.output_qubits, stream);
}

StateVector eval_shifted_basis(const PrsSpec& spec, const PrsKey& key) {
  const int p = spec.prefix_bits;
  const int rest = spec.output_qubits - p;
  const std::int64_t block = dim_of_qubits(rest);
  const std::int64_t prefixes = dim_of_qubits(p);
  const double amp = 1.0 / std::sqrt(static_cast<double>(prefixes));
  Vec amps = Vec::Zero(block * prefixes);
  const std::uint64_t k = key.as_uint();
  for (std::int64_t x = 0; x < prefixes; ++x) {
    const std::int64_t target = static_cast<std::int64_t>(
        (k + static_cast<std::uint64_t>(x)) %
        static_cast<std::uint64_t>(block));
    amps(x * block + target) = amp;
  }
  return StateVector(spec.output_qubits, std::move(amps));
}

void check_spec(const PrsSpec& spec, const PrsKey& key) {
  if (spec.output_qubits < 1) {
    throw std::invalid_argument("PRS output length must be at least 1 qubit");
  }
  check_qubit_cap(spec.output_qubits, "prs_eval");
  if (key.key_bits != spec.key_bits) {
    throw std::invalid_argument("key length does not match the spec");
  }
  if (spec.prefix_bits < 0 || spec.prefix_bits >= spec.output_qubits) {
    throw std::invalid_argument("prefix_bits out of range");
  }
  if (spec.kind != PrsKind::kShiftedBasis && spec.prefix_bits != 0) {
    throw std::invalid_argument("prefix_bits is only valid for shifted_basis");
  }
}

}  // namespace

StateVector prs_eval(const PrsSpec& spec, const PrsKey& key) {
  check_spec(spec, key);
  switch (spec.kind) {
    case PrsKind::kBinaryPhase: return eval_binary_phase(spec, key);
    case PrsKind::kIdealHaar: return eval_ideal_haar(spec, key);
    case PrsKind::kShiftedBasis: return eval_shifted_basis(spec, key);
  }
  throw std::invalid_argument("unknown PRS kind");
}

std::vector<PrsKey> enumerate_keys(int key_bits) {
  if (key_bits < 1 || key_bits > 20) {
    throw EnumerationLimitError("key enumeration supports 1..20 bits");
  }
  const std::uint64_t count = std::uint64_t{1} << key_bits;
  std::vector<PrsKey> keys;
  keys.reserve(count);
  for (std::uint64_t v = 0; v < count; ++v) {
    keys.push_back(PrsKey::from_uint(v, key_bits));
  }
  return keys;
}

Estimate distinguishing_advantage(
    const std::function<DensityMatrix(RandomStream&)>& sample_real,
    const std::function<DensityMatrix(RandomStream&)>& sample_ideal,
    const Distinguisher& distinguisher, std::int64_t trials, RandomStream& rng,
    int threads) {
  if (trials <= 0) {
    throw std::invalid_argument("distinguishing game: trials must be positive");
  }
  const std::uint64_t master = rng.next_u64();
  struct Pair {
    int real;
    int ideal;
  };
  const auto outcomes = parallel_map<Pair>(trials, threads, [&](std::int64_t i) {
    RandomStream real_rng = derive_stream(master, "game-real", static_cast<std::uint64_t>(i));
    RandomStream ideal_rng = derive_stream(master, "game-ideal", static_cast<std::uint64_t>(i));
    const DensityMatrix real_state = sample_real(real_rng);
    const DensityMatrix ideal_state = sample_ideal(ideal_rng);
    return Pair{distinguisher(real_state, real_rng) ? 1 : 0,
                distinguisher(ideal_state, ideal_rng) ? 1 : 0};
  });

  std::int64_t real_ones = 0;
  std::int64_t ideal_ones = 0;
  for (const auto& o : outcomes) {
    real_ones += o.real;
    ideal_ones += o.ideal;
  }
  const double n = static_cast<double>(trials);
  const double p_real = static_cast<double>(real_ones) / n;
  const double p_ideal = static_cast<double>(ideal_ones) / n;
  Estimate est;
  est.value = std::abs(p_real - p_ideal);
  est.std_error = std::sqrt(p_real * (1.0 - p_real) / n +
                            p_ideal * (1.0 - p_ideal) / n);
  est.trials = trials;
  return est;
}

Estimate prs_game(const PrsSpec& spec, int t, const Distinguisher& distinguisher,
                  std::int64_t trials, RandomStream& rng, int threads) {
  if (t < 1) {
    throw std::invalid_argument("prs_game: need at least one copy");
  }
  check_qubit_cap(t * spec.output_qubits, "prs_game");
  const auto copies = [t](const StateVector& psi) {
    const DensityMatrix one = psi.to_density();
    std::vector<DensityMatrix> parts(static_cast<std::size_t>(t), one);
    return tensor(std::span<const DensityMatrix>(parts));
  };
  const auto sample_real = [&spec, copies](RandomStream& r) {
    return copies(prs_eval(spec, PrsKey::random(spec.key_bits, r)));
  };
  const auto sample_ideal = [&spec, copies](RandomStream& r) {
    return copies(haar_state(spec.output_qubits, r));
  };
  return distinguishing_advantage(sample_real, sample_ideal, distinguisher,
                                  trials, rng, threads);
}

}  // namespace prslab
