// qops.hpp -- exact linear-algebra primitives on states and density matrices
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prslab/common.hpp"
#include "prslab/pauli_string.hpp"
#include "prslab/rand.hpp"
#include "prslab/state_vector.hpp"

namespace prslab {

// Kronecker products in left-to-right order; qubit 0 of the first part is the
// most significant index bit of the result.
StateVector tensor(std::span<const StateVector> parts);
DensityMatrix tensor(std::span<const DensityMatrix> parts);
StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state on the kept qubits, in the order given.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

struct Branch {
  std::uint64_t outcome;  // d-bit measurement result on the leading qubits
  double probability;
  StateVector residual;   // normalized state on the trailing qubits
};

// Computational-basis decomposition over the first `prefix_qubits` qubits.
// Branches with probability below kBranchCutoff are omitted.
std::vector<Branch> branch_decompose(const StateVector& state,
                                     int prefix_qubits);

// All 2^d prefix probabilities, including zeros.
std::vector<double> prefix_probabilities(const StateVector& state,
                                         int prefix_qubits);

// TD(a, b) = 1/2 ||a - b||_1.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Mat& a, const Mat& b);

// Largest eigenvalue magnitude of a Hermitian matrix (checked within
// kHermitianTol).
double operator_norm(const Mat& h);

// Acceptance probability 1/2 + 1/2 Tr(a b) of the SWAP test.
double swap_test_accept_prob(const DensityMatrix& a, const DensityMatrix& b);
// One Bernoulli sample of the above.
bool swap_test_sample(const DensityMatrix& a, const DensityMatrix& b,
                      RandomStream& rng);

// SWAP-test acceptance on a joint state of two n-qubit blocks (which may be
// correlated): 1/2 + 1/2 Tr(S rho).
double swap_test_accept_prob_joint(const DensityMatrix& rho_two_blocks);

// (1/4^m) sum_P P rho P over the full m-qubit Pauli group; m <= 6.
DensityMatrix pauli_twirl_exact(const DensityMatrix& rho);

// Exact mean over the full Pauli group of |<psi|P|phi>|^2; m <= 6.
double pauli_overlap_mean(const StateVector& psi, const StateVector& phi);

// The unitary swapping two n-qubit blocks.
Mat swap_operator(int block_qubits);

}  // namespace prslab
