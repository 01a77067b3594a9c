// cpamac.hpp -- CPA-secure bit encryption and MACs on top of PRFS
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "prslab/prfs.hpp"
#include "prslab/tester.hpp"

namespace prslab {

struct CpaCiphertext {
  std::uint64_t r = 0;  // (d-1)-bit randomizer
  AbortableState payload;
};

// r uniform over d-1 bits; payload = G(k, r || b) with the same index-then-bit
// packing as the one-time pad.
CpaCiphertext cpa_encrypt(const PrfsSpec& spec, const PrsKey& key, int bit,
                          RandomStream& rng);

// Exact tester decision against (r, 0), thresholded at 1/2; deterministic.
int cpa_decrypt(const PrfsSpec& spec, const PrsKey& key,
                const CpaCiphertext& ct);
// One Bernoulli draw of the tester instead of the threshold.
int cpa_decrypt_sampled(const PrfsSpec& spec, const PrsKey& key,
                        const CpaCiphertext& ct, RandomStream& rng);

// Tester acceptance probability of the ciphertext against (r, 0).
double cpa_accept_prob(const PrfsSpec& spec, const PrsKey& key,
                       const CpaCiphertext& ct);

struct CpaQuery {
  int b0 = 0;
  int b1 = 0;
};

// The adversary sees the challenge ciphertexts (it knows its own queries) and
// guesses the challenger's bit z.
using CpaAdversary = std::function<int(const std::vector<CpaCiphertext>&,
                                       RandomStream&)>;

struct CpaGameResult {
  Estimate advantage;  // win rate - 1/2
  // Per-trial r values, exposed so freshness can be audited.
  std::vector<std::vector<std::uint64_t>> r_log;
};

CpaGameResult cpa_game(const PrfsSpec& spec,
                       const std::vector<CpaQuery>& queries,
                       const CpaAdversary& adversary, std::int64_t trials,
                       RandomStream& rng, int threads = 1);

struct MacTag {
  AbortableState payload;
  int msg_len = 0;
};

// Message bits, big-endian, padded with trailing zeroes to d input bits.
std::uint64_t mac_input_encoding(std::uint64_t msg, int msg_len, int d);

MacTag mac_sign(const PrfsSpec& spec, const PrsKey& key, std::uint64_t msg,
                int msg_len);
TestOutcome mac_verify(const PrfsSpec& spec, const PrsKey& key,
                       std::uint64_t msg, int msg_len, const MacTag& tag);

// Forger's view for one key: the target message and the signed samples.
struct MacForgerView {
  std::uint64_t target = 0;
  int msg_len = 0;
  std::span<const std::uint64_t> msgs;
  std::span<const MacTag> tags;
};

// Returns the forged n-qubit payload state.
using MacForger = std::function<DensityMatrix(const MacForgerView&)>;

// E_k[ eta^2 <psi_{k,m*}| sigma* |psi_{k,m*}> ] over the keyset: the exact
// acceptance probability of the forger's output on the target message.
double mac_forgery_stats(const PrfsSpec& spec, const std::vector<PrsKey>& keys,
                         const std::vector<std::uint64_t>& msgs, int msg_len,
                         std::uint64_t target, const MacForger& forger);

}  // namespace prslab
