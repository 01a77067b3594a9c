// otp.hpp -- quantum pseudo one-time pad
//
// Encrypts ell classical bits as a product of per-bit PRFS states on inputs
// (i, x_i); decryption tests every block against (i, 0) and decodes 1 on
// rejection.
#pragma once

#include <cstdint>
#include <vector>

#include "prslab/prfs.hpp"

namespace prslab {

struct OtpCiphertext {
  std::vector<AbortableState> blocks;
  int msg_len = 0;
};

// Input packing for block i (1-based) carrying bit b: the index i mod 2^(d-1)
// in big-endian d-1 bits, then b as the least significant input bit.
std::uint64_t otp_input_encoding(int i, int bit, int d);

// Exact-mode encryption: block i is the exact PRFS output on (i, x_i).
OtpCiphertext otp_encrypt(const PrfsSpec& spec, const PrsKey& key,
                          const std::vector<int>& msg);

// Sampled-mode encryption: each block runs the measurement loop, so eta is 0
// or 1 per block.
OtpCiphertext otp_encrypt_sampled(const PrfsSpec& spec, const PrsKey& key,
                                  const std::vector<int>& msg,
                                  RandomStream& rng);

// Exact-mode decryption: decode 0 iff the block tester accepts with
// probability above 1/2. Deterministic.
std::vector<int> otp_decrypt(const PrfsSpec& spec, const PrsKey& key,
                             const OtpCiphertext& ct);

// Sampled-mode decryption: per block, one Bernoulli draw of the tester.
std::vector<int> otp_decrypt_sampled(const PrfsSpec& spec, const PrsKey& key,
                                     const OtpCiphertext& ct,
                                     RandomStream& rng);

// Trace distance between the key-averaged flagged ciphertext of `msg` and
// the product of flagged maximally mixed payloads -- the t = 1 security
// statistic, computed exactly over the given keyset.
double otp_single_copy_report(const PrfsSpec& spec,
                              const std::vector<PrsKey>& keys,
                              const std::vector<int>& msg);

}  // namespace prslab
