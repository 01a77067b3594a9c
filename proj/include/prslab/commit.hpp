// commit.hpp -- statistically binding commitments from PRFS
//
// Commit phase: the receiver samples a uniformly random Pauli P on the
// m = 2^d * n payload qubits; the committer sends every PRFS output for its
// key, with per-block payloads conjugated by P when committing to 1. Reveal
// sends (k, b); the receiver undoes P^b and runs the product tester. The
// extractor POVM projects onto the span of honest commitment vectors and its
// P-rotation.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "prslab/pauli_string.hpp"
#include "prslab/prfs.hpp"
#include "prslab/tester.hpp"

namespace prslab {

struct CommitmentParams {
  int lambda = 1;
  int d = 0;
  int n = 1;

  int num_blocks() const { return 1 << d; }
  // Payload qubits addressed by the Pauli challenge.
  int m() const { return num_blocks() * n; }
  // Wire size of the commitment: every block carries its abort flag.
  int flagged_qubits() const { return num_blocks() * (n + 1); }
  // Whether the paper's concrete binding bound (10 / 2^lambda) applies.
  bool binding_bound_regime() const { return m() >= 7 * lambda; }
};

// Uniform over all 4^m Pauli strings via independent mask bits.
PauliString sample_challenge(const CommitmentParams& params, RandomStream& rng);

// The challenge lifted to the flagged wire: identity on every flag qubit,
// the corresponding n-qubit sub-Pauli on each payload.
PauliString lift_to_flagged(const PauliString& payload_pauli, int d, int n);

// Flagged commitment state for (key, b) under challenge P.
DensityMatrix commit_state(const CommitmentParams& params, const PrfsSpec& spec,
                           const PrsKey& key, int b, const PauliString& p);

// Receiver's reveal check: conjugate by P^b, then run the product tester for
// every block input x. Exact acceptance probability.
TestOutcome reveal_verify(const CommitmentParams& params, const PrfsSpec& spec,
                          const PauliString& p, const DensityMatrix& commitment,
                          const PrsKey& key, int b);

struct ExtractorPovm {
  Mat pi0;         // projector onto span{ (x)_x |psi_{k,x}> }
  Mat pi1;         // P pi0 P
  Mat lambda0;     // pi0 / p
  Mat lambda1;     // pi1 / p
  Mat lambda_bot;  // I - lambda0 - lambda1
  double p = 1.0;  // ||pi0 + pi1||
  int rank = 0;    // dim(T_0)
};

// Dense extractor POVM on the m-qubit payload space, orthonormalizing the
// key-span with singular-value cutoff kRankCutoff.
ExtractorPovm build_extractor(const CommitmentParams& params,
                              const PrfsSpec& spec, const PauliString& p,
                              const std::vector<PrsKey>& keys);

// One classical opening the committer may announce: a bit with its key, or
// an abort (bit = -1), chosen with the given probability.
struct Opening {
  PrsKey key;
  int bit = 0;
  double prob = 1.0;
};

// Ensemble-of-pure-states form of the committer's joint state on
// X (x) Y_flagged; weights sum to 1.
struct StrategyState {
  int x_dim = 1;
  std::vector<std::pair<double, Vec>> components;
};

struct CommitterStrategy {
  int x_dim = 1;
  std::function<StrategyState(const PauliString& p)> make_state;
  std::vector<Opening> openings;

  static CommitterStrategy honest(const CommitmentParams& params,
                                  const PrfsSpec& spec, const PrsKey& key,
                                  int bit);
  // The superposition attack: commit to b under k1 and 1-b under k2 in
  // superposition, opening each with probability 1/2.
  static CommitterStrategy key_superposition(const CommitmentParams& params,
                                             const PrfsSpec& spec,
                                             const PrsKey& k1, const PrsKey& k2,
                                             int bit);
};

struct PauliSelection {
  bool enumerate = false;
  std::int64_t sample_count = 0;
  std::vector<PauliString> explicit_paulis;  // used when nonempty

  static PauliSelection all() { return {true, 0, {}}; }
  static PauliSelection sample(std::int64_t count) {
    return {false, count, {}};
  }
  static PauliSelection fixed(std::vector<PauliString> paulis) {
    return {false, 0, std::move(paulis)};
  }
};

struct BindingResult {
  double td_real_ideal = 0.0;
  double mu_mean = 0.0;  // E_{P, opening} Tr(N_E sigma), the extraction error
  // Largest violation of the per-instance proof-chain inequality
  //   TD^b + TD^bot + mu <= (1 - 1/p) Tr(tau_real^b) + 2 mu;
  // nonpositive when the algebra holds.
  double max_chain_gap = 0.0;
  double p_mean = 1.0;
  double p_max = 1.0;
  std::int64_t pauli_count = 0;
  // Classical-quantum validity of the averaged output states: both traces
  // are 1 and every decision block is PSD.
  double real_trace = 0.0;
  double ideal_trace = 0.0;
  double min_block_eigenvalue = 0.0;
};

BindingResult binding_experiment(const CommitmentParams& params,
                                 const PrfsSpec& spec,
                                 const CommitterStrategy& strategy,
                                 const std::vector<PrsKey>& keyspace,
                                 const PauliSelection& paulis,
                                 RandomStream& rng);

// TD between the key-averaged commitments to 0 and to 1 under one challenge.
double hiding_distance(const CommitmentParams& params, const PrfsSpec& spec,
                       const std::vector<PrsKey>& keys, const PauliString& p);

struct PovmClosenessStats {
  std::int64_t samples = 0;
  int rank = 0;
  double p_mean = 1.0;
  double p_max = 1.0;
  double overlap_mean = 0.0;  // mean Tr(pi0 pi1)
  // Fraction of challenges with p >= 1 + 3 * 2^{-(m - 4 lambda)/3}.
  double tail_fraction = 0.0;
  // Largest p - (1 + 3 sqrt(Tr(pi0 pi1))) over the samples; nonpositive when
  // the per-instance bound holds.
  double max_bound_gap = 0.0;
};

PovmClosenessStats povm_closeness_stats(const CommitmentParams& params,
                                        const PrfsSpec& spec,
                                        const std::vector<PrsKey>& keys,
                                        const PauliSelection& paulis,
                                        RandomStream& rng);

}  // namespace prslab
