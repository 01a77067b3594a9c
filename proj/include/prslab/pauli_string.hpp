// pauli_string.hpp -- m-qubit Pauli operators as (X-mask, Z-mask) bit pairs
//
// Phase convention: P = tensor_i X^{x_i} Z^{z_i}, with no i-factors for the
// XZ case. All uses here (conjugation as a channel, twirling, squared
// overlaps, rotated subspaces) are insensitive to the global phase.
// Conjugation is therefore implemented as rho -> P rho P^dagger, which equals
// the Hermitian-Pauli sandwich for every phase choice.
#pragma once

#include <cstdint>
#include <string>

#include "prslab/common.hpp"
#include "prslab/rand.hpp"
#include "prslab/state_vector.hpp"

namespace prslab {

class PauliString {
 public:
  // Mask bit j addresses basis-index bit j, i.e. qubit (m-1-j). Viewed as an
  // integer the mask reads as the qubit-0-first bit string.
  PauliString(int num_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  static PauliString identity(int num_qubits) {
    return PauliString(num_qubits, 0, 0);
  }
  static PauliString sample(int num_qubits, RandomStream& rng);
  // Index enumerates the 4^m strings as (x_mask << m) | z_mask.
  static PauliString from_index(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }

  // P|psi>
  Vec apply(const Vec& amps) const;
  StateVector apply(const StateVector& psi) const;

  // P rho P^dagger
  Mat conjugate(const Mat& rho) const;
  DensityMatrix conjugate(const DensityMatrix& rho) const;

  // Dense matrix form, mostly for cross-checks.
  Mat matrix() const;

  // Sub-Pauli on qubits [start, start + len).
  PauliString subrange(int start_qubit, int len) const;
  // Concatenation: this acts on the leading qubits, other on the trailing.
  PauliString tensor_with(const PauliString& other) const;

  // Lowercase hex of the two masks, "x:...,z:..." with 2m bits total.
  std::string hex() const;

  bool operator==(const PauliString& other) const = default;

 private:
  int num_qubits_;
  std::uint64_t x_mask_;
  std::uint64_t z_mask_;
};

}  // namespace prslab
