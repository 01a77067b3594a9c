// prs.hpp -- keyed pseudorandom-state generators and distinguishing games
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "prslab/common.hpp"
#include "prslab/rand.hpp"
#include "prslab/state_vector.hpp"

namespace prslab {

// Available instantiations:
//   kBinaryPhase  -- uniform-magnitude amplitudes with SHA-256-derived signs,
//                    |psi_k> = 2^{-n/2} sum_x (-1)^{f_k(x)} |x>.
//   kIdealHaar    -- a Haar sample drawn from a stream seeded with
//                    SHA-256(key); an idealized reference generator.
//   kShiftedBasis -- |(k + x) mod 2^{n'}> on the trailing qubits under a
//                    uniform superposition over `prefix_bits` leading qubits;
//                    a structured reference family with exactly uniform
//                    prefix probabilities and mutually orthogonal residuals.
enum class PrsKind { kBinaryPhase, kIdealHaar, kShiftedBasis };

std::string to_string(PrsKind kind);
PrsKind prs_kind_from_string(const std::string& name);

struct PrsKey {
  std::vector<std::uint8_t> bytes;  // big-endian, ceil(key_bits/8) long
  int key_bits = 0;

  static PrsKey from_uint(std::uint64_t value, int key_bits);
  static PrsKey random(int key_bits, RandomStream& rng);
  static PrsKey from_hex(const std::string& hex, int key_bits);

  std::uint64_t as_uint() const;  // low 64 bits
  std::string hex() const;        // lowercase

  bool operator==(const PrsKey& other) const = default;
};

struct PrsSpec {
  PrsKind kind = PrsKind::kBinaryPhase;
  int output_qubits = 1;
  int key_bits = 1;
  // Only meaningful for kShiftedBasis: number of leading qubits put in
  // uniform superposition.
  int prefix_bits = 0;
};

// Deterministic in (spec, key).
StateVector prs_eval(const PrsSpec& spec, const PrsKey& key);

// All 2^key_bits keys, for exact key-space averages. Guarded at 2^20.
std::vector<PrsKey> enumerate_keys(int key_bits);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

// A distinguisher sees a density matrix and flips its own coins.
using Distinguisher = std::function<int(const DensityMatrix&, RandomStream&)>;

// Generic two-ensemble distinguishing game: |Pr[D(real)=1] - Pr[D(ideal)=1]|
// estimated over `trials` fresh samples per ensemble.
Estimate distinguishing_advantage(
    const std::function<DensityMatrix(RandomStream&)>& sample_real,
    const std::function<DensityMatrix(RandomStream&)>& sample_ideal,
    const Distinguisher& distinguisher, std::int64_t trials, RandomStream& rng,
    int threads = 1);

// The PRS game: t same-key copies versus t copies of one Haar state.
Estimate prs_game(const PrsSpec& spec, int t, const Distinguisher& distinguisher,
                  std::int64_t trials, RandomStream& rng, int threads = 1);

}  // namespace prslab
