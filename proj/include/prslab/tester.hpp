// tester.hpp -- generator-output tester channels
//
// The tester for a generator with output rho is the two-outcome measurement
// {M1 = rho^2, M0 = I - M1} applied to the tested register Q of a joint
// state on E (x) Q. For a recognizable-abort generator the accept operator
// becomes eta^2 |psi><psi|, preceded by a projection off the abort flag when
// the input carries one.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prslab/prfs.hpp"
#include "prslab/state_vector.hpp"

namespace prslab {

struct TestOutcome {
  double p_accept = 0.0;
  DensityMatrix post_accept;  // subnormalized state on E, trace p_accept
  DensityMatrix post_reject;  // subnormalized state on E, trace 1 - p_accept
};

// Accept branch Tr_Q((I_E (x) M) sigma) and its complement for an arbitrary
// PSD accept operator M <= I on the trailing `target_qubits` of `joint`.
TestOutcome apply_test_operator(const Mat& accept_op, const DensityMatrix& joint,
                                int env_qubits);

// Generic circuit-output tester for a generator whose output is `target`.
TestOutcome test_channel(const DensityMatrix& target,
                         const DensityMatrix& joint, int env_qubits);

// Accept operator of the PRFS tester: eta^2 |psi><psi| on n qubits, or the
// flag-aware lift |0><0| (x) eta^2 |psi><psi| on n+1 qubits.
Mat prfs_accept_operator(double eta, const StateVector& psi, bool flagged);

// PRFS tester for input x under the given key. The tested register (the
// trailing qubits of `joint` after `env_qubits`) may have n or n+1 qubits;
// flagged inputs are first projected onto the non-abort sector.
TestOutcome test_prfs(const PrfsSpec& spec, const PrsKey& key, std::uint64_t x,
                      const DensityMatrix& joint, int env_qubits);

struct PrfsInstance {
  PrfsSpec spec;
  PrsKey key;
  std::uint64_t input = 0;
};

// Product tester: accepts iff every per-block tester accepts. Blocks carry
// the abort flag iff `flagged_blocks`.
TestOutcome test_product(std::span<const PrfsInstance> instances,
                         const DensityMatrix& joint, int env_qubits,
                         bool flagged_blocks);

struct SelfTestStats {
  double accept_match = 0.0;     // E_k Pr[Test(k,x, G(k,x)) accepts]
  double accept_mismatch = 0.0;  // E_k Pr[Test(k,x, G(k,y)) accepts]
};

SelfTestStats self_test_stats(const PrfsSpec& spec, std::uint64_t x,
                              std::uint64_t y, const std::vector<PrsKey>& keys);

}  // namespace prslab
