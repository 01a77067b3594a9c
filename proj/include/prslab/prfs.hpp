// prfs.hpp -- pseudorandom function-like state generators
//
// The main construction post-selects a d-bit prefix of a (d+n)-qubit PRS
// output: measure the prefix, keep the residual when it matches the input x,
// retry up to T = 2^d * lambda times, and emit a recognizable abort when
// every attempt misses.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prslab/prs.hpp"
#include "prslab/state_vector.hpp"

namespace prslab {

// eta |psi><psi| + (1 - eta) |bot><bot| with a fixed (n+1)-qubit abort state
// |bot> = |1 0...0> (flag qubit leads). psi content is unspecified when
// eta == 0.
struct AbortableState {
  double eta = 0.0;
  StateVector psi;

  AbortableState(double eta_weight, StateVector state);
  static AbortableState abort(int output_qubits);

  int output_qubits() const { return psi.num_qubits(); }

  // Flagged (n+1)-qubit density form: non-abort branch |0>|psi>, abort
  // branch |bot>.
  DensityMatrix densify() const;
  // Flagged (n+1)-qubit pure non-abort embedding |0>|psi> of the payload.
  StateVector embed_non_abort() const;
};

// Checks that a flagged density matrix is exactly of recognizable-abort form
// by rank and support inspection (at most two eigenvalues above tol; each
// eigenvector either |bot> or inside the flag-0 sector).
bool is_recognizable_abort_form(const DensityMatrix& flagged,
                                double tol = kHermitianTol);

struct PrfsSpec {
  PrsSpec base;          // on d + n qubits
  int input_bits = 0;    // d
  int output_qubits = 1; // n
  std::int64_t repetitions = 1;  // T

  // Standard shape: base PRS on d+n qubits, T = 2^d * lambda. For
  // kShiftedBasis the base prefix split follows d.
  static PrfsSpec make(PrsKind kind, int lambda, int d, int n);
};

// Post-selection bookkeeping shared by the exact evaluator: branch
// probability p_x and residual from the base state, eta = 1 - (1 - p_x)^T.
AbortableState postselect_abortable(const StateVector& base, int d,
                                    std::uint64_t x, std::int64_t repetitions);

// Exact output of the construction for (key, x); deterministic.
AbortableState prfs_eval_exact(const PrfsSpec& spec, const PrsKey& key,
                               std::uint64_t x);

// Faithful simulation of the repetition loop: up to T independent prefix
// measurements; nullopt on abort.
std::optional<StateVector> prfs_eval_sampled(const PrfsSpec& spec,
                                             const PrsKey& key,
                                             std::uint64_t x,
                                             RandomStream& rng);

// The trivial key-chop construction: evaluate the base PRS on the x'th
// lambda-bit key block.
StateVector prfs_trivial(const PrsSpec& base,
                         const std::vector<PrsKey>& key_blocks,
                         std::uint64_t x);

// PRFS distinguishing game. Real world: t flagged copies of G(k, x_i) for
// each of the s distinct inputs under one fresh key. Ideal world: t flagged
// copies each of s independent Haar states.
Estimate prfs_game(const PrfsSpec& spec,
                   const std::vector<std::uint64_t>& inputs, int t,
                   const Distinguisher& distinguisher, std::int64_t trials,
                   RandomStream& rng, int threads = 1);

struct OrthogonalityStats {
  double mean_cross = 0.0;   // E_k Tr(G(k,x) G(k,y)) over flagged outputs
  double mean_purity = 0.0;  // E_k Tr(G(k,x)^2)
};

OrthogonalityStats orthogonality_stats(const PrfsSpec& spec, std::uint64_t x,
                                       std::uint64_t y,
                                       const std::vector<PrsKey>& keys);

}  // namespace prslab
