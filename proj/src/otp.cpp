#include "prslab/otp.hpp"

#include <stdexcept>

#include "prslab/qops.hpp"
#include "prslab/tester.hpp"

namespace prslab {

std::uint64_t otp_input_encoding(int i, int bit, int d) {
  if (d < 1) {
    throw std::invalid_argument("otp encoding: d must be at least 1");
  }
  if (i < 1 || bit < 0 || bit > 1) {
    throw std::invalid_argument("otp encoding: bad block index or bit");
  }
  const std::uint64_t index_space = std::uint64_t{1} << (d - 1);
  if (static_cast<std::uint64_t>(i) > index_space) {
    throw std::invalid_argument("otp encoding: block index beyond 2^(d-1)");
  }
  const std::uint64_t wrapped = static_cast<std::uint64_t>(i) % index_space;
  return (wrapped << 1) | static_cast<std::uint64_t>(bit);
}

namespace {

void check_otp_args(const PrfsSpec& spec, const std::vector<int>& msg) {
  const int d = spec.input_bits;
  if (d < 1) {
    throw std::invalid_argument("otp: PRFS input length must be at least 1");
  }
  if (msg.empty()) {
    throw std::invalid_argument("otp: empty message");
  }
  const std::uint64_t capacity = std::uint64_t{1} << (d - 1);
  if (msg.size() > capacity) {
    throw std::invalid_argument("otp: message longer than 2^(d-1) blocks");
  }
  for (int b : msg) {
    if (b != 0 && b != 1) {
      throw std::invalid_argument("otp: message entries must be bits");
    }
  }
}

}  // namespace

OtpCiphertext otp_encrypt(const PrfsSpec& spec, const PrsKey& key,
                          const std::vector<int>& msg) {
  check_otp_args(spec, msg);
  OtpCiphertext ct;
  ct.msg_len = static_cast<int>(msg.size());
  ct.blocks.reserve(msg.size());
  for (std::size_t i = 0; i < msg.size(); ++i) {
    const std::uint64_t x =
        otp_input_encoding(static_cast<int>(i) + 1, msg[i], spec.input_bits);
    ct.blocks.push_back(prfs_eval_exact(spec, key, x));
  }
  return ct;
}

OtpCiphertext otp_encrypt_sampled(const PrfsSpec& spec, const PrsKey& key,
                                  const std::vector<int>& msg,
                                  RandomStream& rng) {
  check_otp_args(spec, msg);
  OtpCiphertext ct;
  ct.msg_len = static_cast<int>(msg.size());
  ct.blocks.reserve(msg.size());
  for (std::size_t i = 0; i < msg.size(); ++i) {
    const std::uint64_t x =
        otp_input_encoding(static_cast<int>(i) + 1, msg[i], spec.input_bits);
    auto sampled = prfs_eval_sampled(spec, key, x, rng);
    if (sampled.has_value()) {
      ct.blocks.emplace_back(1.0, std::move(*sampled));
    } else {
      ct.blocks.push_back(AbortableState::abort(spec.output_qubits));
    }
  }
  return ct;
}

namespace {

double block_accept_prob(const PrfsSpec& spec, const PrsKey& key, int i,
                         const AbortableState& block) {
  const std::uint64_t zero_input = otp_input_encoding(i, 0, spec.input_bits);
  return test_prfs(spec, key, zero_input, block.densify(), 0).p_accept;
}

}  // namespace

std::vector<int> otp_decrypt(const PrfsSpec& spec, const PrsKey& key,
                             const OtpCiphertext& ct) {
  if (ct.blocks.size() != static_cast<std::size_t>(ct.msg_len)) {
    throw std::invalid_argument("otp: malformed ciphertext");
  }
  std::vector<int> msg(ct.blocks.size());
  for (std::size_t i = 0; i < ct.blocks.size(); ++i) {
    const double p =
        block_accept_prob(spec, key, static_cast<int>(i) + 1, ct.blocks[i]);
    msg[i] = (p > 0.5) ? 0 : 1;
  }
  return msg;
}

std::vector<int> otp_decrypt_sampled(const PrfsSpec& spec, const PrsKey& key,
                                     const OtpCiphertext& ct,
                                     RandomStream& rng) {
  if (ct.blocks.size() != static_cast<std::size_t>(ct.msg_len)) {
    throw std::invalid_argument("otp: malformed ciphertext");
  }
  std::vector<int> msg(ct.blocks.size());
  for (std::size_t i = 0; i < ct.blocks.size(); ++i) {
    const double p =
        block_accept_prob(spec, key, static_cast<int>(i) + 1, ct.blocks[i]);
    msg[i] = rng.bernoulli(p) ? 0 : 1;
  }
  return msg;
}

double otp_single_copy_report(const PrfsSpec& spec,
                              const std::vector<PrsKey>& keys,
                              const std::vector<int>& msg) {
  check_otp_args(spec, msg);
  if (keys.empty()) {
    throw std::invalid_argument("otp report: empty keyset");
  }
  const int block_qubits = spec.output_qubits + 1;
  const int total = static_cast<int>(msg.size()) * block_qubits;
  check_qubit_cap(total, "otp_single_copy_report");

  const std::int64_t dim = dim_of_qubits(total);
  Mat avg = Mat::Zero(dim, dim);
  for (const auto& key : keys) {
    const OtpCiphertext ct = otp_encrypt(spec, key, msg);
    std::vector<DensityMatrix> blocks;
    blocks.reserve(ct.blocks.size());
    for (const auto& b : ct.blocks) {
      blocks.push_back(b.densify());
    }
    avg += tensor(std::span<const DensityMatrix>(blocks)).mat();
  }
  avg /= static_cast<double>(keys.size());

  // Flagged maximally mixed block: |0><0| on the flag, I/2^n on the payload.
  Mat ideal_block = Mat::Zero(dim_of_qubits(block_qubits),
                              dim_of_qubits(block_qubits));
  const std::int64_t payload_dim = dim_of_qubits(spec.output_qubits);
  ideal_block.topLeftCorner(payload_dim, payload_dim) =
      Mat::Identity(payload_dim, payload_dim) /
      static_cast<double>(payload_dim);
  std::vector<DensityMatrix> ideal_blocks(
      msg.size(), DensityMatrix(block_qubits, ideal_block));
  const Mat ideal = tensor(std::span<const DensityMatrix>(ideal_blocks)).mat();
  return trace_distance(avg, ideal);
}

}  // namespace prslab
