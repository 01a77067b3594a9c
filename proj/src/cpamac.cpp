#include "prslab/cpamac.hpp"

#include <cmath>
#include <stdexcept>

#include "prslab/parallel.hpp"
#include "prslab/qops.hpp"

namespace prslab {

CpaCiphertext cpa_encrypt(const PrfsSpec& spec, const PrsKey& key, int bit,
                          RandomStream& rng) {
  if (spec.input_bits < 2) {
    throw std::invalid_argument("cpa: PRFS input length must be at least 2");
  }
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("cpa: message must be a bit");
  }
  const std::uint64_t r = rng.bits(spec.input_bits - 1);
  const std::uint64_t x = (r << 1) | static_cast<std::uint64_t>(bit);
  return CpaCiphertext{r, prfs_eval_exact(spec, key, x)};
}

double cpa_accept_prob(const PrfsSpec& spec, const PrsKey& key,
                       const CpaCiphertext& ct) {
  const std::uint64_t zero_input = ct.r << 1;
  return test_prfs(spec, key, zero_input, ct.payload.densify(), 0).p_accept;
}

int cpa_decrypt(const PrfsSpec& spec, const PrsKey& key,
                const CpaCiphertext& ct) {
  return cpa_accept_prob(spec, key, ct) > 0.5 ? 0 : 1;
}

int cpa_decrypt_sampled(const PrfsSpec& spec, const PrsKey& key,
                        const CpaCiphertext& ct, RandomStream& rng) {
  return rng.bernoulli(cpa_accept_prob(spec, key, ct)) ? 0 : 1;
}

CpaGameResult cpa_game(const PrfsSpec& spec,
                       const std::vector<CpaQuery>& queries,
                       const CpaAdversary& adversary, std::int64_t trials,
                       RandomStream& rng, int threads) {
  if (queries.empty()) {
    throw std::invalid_argument("cpa_game: no queries");
  }
  if (trials <= 0) {
    throw std::invalid_argument("cpa_game: trials must be positive");
  }
  for (const auto& q : queries) {
    if ((q.b0 | q.b1) > 1 || (q.b0 & ~1) || (q.b1 & ~1)) {
      throw std::invalid_argument("cpa_game: queries must be bit pairs");
    }
  }
  const std::uint64_t master = rng.next_u64();

  struct TrialResult {
    int win;
    std::vector<std::uint64_t> rs;
  };
  const auto results = parallel_map<TrialResult>(trials, threads, [&](std::int64_t i) {
    RandomStream trial = derive_stream(master, "cpa-game", static_cast<std::uint64_t>(i));
    const PrsKey key = PrsKey::random(spec.base.key_bits, trial);
    const int z = static_cast<int>(trial.bits(1));
    std::vector<CpaCiphertext> cts;
    std::vector<std::uint64_t> rs;
    cts.reserve(queries.size());
    rs.reserve(queries.size());
    for (const auto& q : queries) {
      const int b = (z == 0) ? q.b0 : q.b1;
      cts.push_back(cpa_encrypt(spec, key, b, trial));
      rs.push_back(cts.back().r);
    }
    const int guess = adversary(cts, trial) ? 1 : 0;
    return TrialResult{guess == z ? 1 : 0, std::move(rs)};
  });

  std::int64_t wins = 0;
  CpaGameResult out;
  out.r_log.reserve(results.size());
  for (const auto& r : results) {
    wins += r.win;
    out.r_log.push_back(r.rs);
  }
  const double n = static_cast<double>(trials);
  const double rate = static_cast<double>(wins) / n;
  out.advantage.value = rate - 0.5;
  out.advantage.std_error = std::sqrt(rate * (1.0 - rate) / n);
  out.advantage.trials = trials;
  return out;
}

std::uint64_t mac_input_encoding(std::uint64_t msg, int msg_len, int d) {
  if (msg_len < 1 || msg_len > d) {
    throw std::invalid_argument("mac: message length must be in [1, d]");
  }
  if (msg_len < 64 && msg >= (std::uint64_t{1} << msg_len)) {
    throw std::invalid_argument("mac: message does not fit its length");
  }
  return msg << (d - msg_len);  // trailing-zero padding
}

MacTag mac_sign(const PrfsSpec& spec, const PrsKey& key, std::uint64_t msg,
                int msg_len) {
  const std::uint64_t x = mac_input_encoding(msg, msg_len, spec.input_bits);
  return MacTag{prfs_eval_exact(spec, key, x), msg_len};
}

TestOutcome mac_verify(const PrfsSpec& spec, const PrsKey& key,
                       std::uint64_t msg, int msg_len, const MacTag& tag) {
  const std::uint64_t x = mac_input_encoding(msg, msg_len, spec.input_bits);
  return test_prfs(spec, key, x, tag.payload.densify(), 0);
}

double mac_forgery_stats(const PrfsSpec& spec, const std::vector<PrsKey>& keys,
                         const std::vector<std::uint64_t>& msgs, int msg_len,
                         std::uint64_t target, const MacForger& forger) {
  if (keys.empty()) {
    throw std::invalid_argument("mac_forgery_stats: empty keyset");
  }
  for (std::uint64_t m : msgs) {
    if (m == target) {
      throw std::invalid_argument("mac_forgery_stats: target collides with a query");
    }
  }
  const std::uint64_t x_target =
      mac_input_encoding(target, msg_len, spec.input_bits);
  double accept = 0.0;
  for (const auto& key : keys) {
    std::vector<MacTag> tags;
    tags.reserve(msgs.size());
    for (std::uint64_t m : msgs) {
      tags.push_back(mac_sign(spec, key, m, msg_len));
    }
    MacForgerView view;
    view.target = target;
    view.msg_len = msg_len;
    view.msgs = msgs;
    view.tags = tags;
    const DensityMatrix forged = forger(view);
    if (forged.num_qubits() != spec.output_qubits) {
      throw std::invalid_argument("mac_forgery_stats: forged state has wrong size");
    }
    const AbortableState out = prfs_eval_exact(spec, key, x_target);
    if (out.eta <= 0.0) continue;
    const double overlap =
        (out.psi.amps().adjoint() * forged.mat() * out.psi.amps())
            .value()
            .real();
    accept += out.eta * out.eta * overlap;
  }
  return accept / static_cast<double>(keys.size());
}

}  // namespace prslab
