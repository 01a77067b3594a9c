#include <doctest.h>

#include <cmath>

#include "prslab/cpamac.hpp"
#include "prslab/haar.hpp"
#include "prslab/prfs.hpp"
#include "prslab/qops.hpp"

using namespace prslab;

TEST_SUITE("cpamac") {

TEST_CASE("encryption is deterministic given the randomizer") {
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kBinaryPhase, 4, 3, 4);
  const PrsKey key = PrsKey::from_uint(5, 4);
  RandomStream a(1), b(1);
  const CpaCiphertext ca = cpa_encrypt(spec, key, 1, a);
  const CpaCiphertext cb = cpa_encrypt(spec, key, 1, b);
  CHECK(ca.r == cb.r);
  CHECK(ca.payload.psi.amps() == cb.payload.psi.amps());

  // Same bit, same key: equal payloads iff equal randomizer.
  RandomStream rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const CpaCiphertext c1 = cpa_encrypt(spec, key, 0, rng);
    const CpaCiphertext c2 = cpa_encrypt(spec, key, 0, rng);
    const bool same_payload =
        (c1.payload.psi.amps() - c2.payload.psi.amps()).norm() < 1e-12;
    CHECK(same_payload == (c1.r == c2.r));
  }
}

TEST_CASE("randomizer collisions follow the birthday statistics") {
  // t = 8 draws from 2^(d-1) = 2048 values; the union bound gives
  // Pr[collision] <= t^2 / 2^(d-1), and the exact birthday product is
  // matched within 3 standard errors.
  const int t = 8;
  const int d = 12;
  const double space = 2048.0;
  double exact_no_collision = 1.0;
  for (int i = 0; i < t; ++i) {
    exact_no_collision *= (space - i) / space;
  }
  const double exact_collision = 1.0 - exact_no_collision;

  const PrfsSpec spec = PrfsSpec::make(PrsKind::kShiftedBasis, 4, d, 2);
  const PrsKey key = PrsKey::from_uint(3, 4);
  int collisions = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    RandomStream rng = derive_stream(7, "cpa-collision", static_cast<std::uint64_t>(i));
    std::vector<std::uint64_t> seen;
    bool hit = false;
    for (int q = 0; q < t; ++q) {
      const CpaCiphertext ct = cpa_encrypt(spec, key, 0, rng);
      for (std::uint64_t r : seen) {
        if (r == ct.r) hit = true;
      }
      seen.push_back(ct.r);
    }
    if (hit) ++collisions;
  }
  const double freq = static_cast<double>(collisions) / trials;
  const double se =
      std::sqrt(exact_collision * (1.0 - exact_collision) / trials);
  CHECK(std::abs(freq - exact_collision) <= 3.0 * se);
  CHECK(freq <= t * t / space);
}

TEST_CASE("roundtrip on the orthogonal reference family") {
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kShiftedBasis, 64, 3, 5);
  const PrsKey key = PrsKey::from_uint(21, 64);
  RandomStream rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    for (int bit = 0; bit < 2; ++bit) {
      const CpaCiphertext ct = cpa_encrypt(spec, key, bit, rng);
      CHECK(cpa_decrypt(spec, key, ct) == bit);
    }
  }
}

TEST_CASE("roundtrip accuracy over enumerated keys for both instantiations") {
  // Exact-mode decryption is deterministic per (key, r, b); the error rate
  // is an exact average over keys x randomizers x bits.
  for (const PrsKind kind : {PrsKind::kBinaryPhase, PrsKind::kIdealHaar}) {
    const PrfsSpec spec = PrfsSpec::make(kind, 6, 2, 5);
    const auto keys = enumerate_keys(6);
    std::int64_t good = 0, total = 0;
    for (const auto& key : keys) {
      for (std::uint64_t r = 0; r < 2; ++r) {
        for (int bit = 0; bit < 2; ++bit) {
          const std::uint64_t x = (r << 1) | static_cast<std::uint64_t>(bit);
          const CpaCiphertext ct{r, prfs_eval_exact(spec, key, x)};
          good += (cpa_decrypt(spec, key, ct) == bit) ? 1 : 0;
          ++total;
        }
      }
    }
    const double rate = static_cast<double>(good) / static_cast<double>(total);
    CHECK(rate >= 1.0 - std::pow(2.0, -5) - 0.03);
  }
}

TEST_CASE("a maximally mixed payload decodes to 1 almost always") {
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kShiftedBasis, 64, 3, 4);
  const PrsKey key = PrsKey::from_uint(9, 64);
  // Acceptance on (r, 0) of the mixed payload is exactly eta^2 2^-n.
  const AbortableState ref = prfs_eval_exact(spec, key, 0b000);
  const double p = test_prfs(spec, key, 0b000,
                             DensityMatrix::maximally_mixed(4), 0)
                       .p_accept;
  CHECK(p == doctest::Approx(ref.eta * ref.eta * std::pow(2.0, -4))
                 .epsilon(1e-12));
  CHECK(p < 0.5);  // so the threshold decoder reports 1
}

TEST_CASE("constant and r-only adversaries have no advantage") {
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kBinaryPhase, 4, 3, 3);
  const std::vector<CpaQuery> queries = {{0, 1}, {0, 1}};
  RandomStream rng(4);
  const CpaGameResult constant = cpa_game(
      spec, queries,
      [](const std::vector<CpaCiphertext>&, RandomStream&) { return 0; }, 2000,
      rng);
  CHECK(std::abs(constant.advantage.value) <=
        3.0 * std::max(constant.advantage.std_error, 1e-6));

  RandomStream rng2(5);
  const CpaGameResult read_r = cpa_game(
      spec, queries,
      [](const std::vector<CpaCiphertext>& cts, RandomStream&) {
        return static_cast<int>(cts.front().r & 1);
      },
      2000, rng2);
  CHECK(std::abs(read_r.advantage.value) <= 3.0 * read_r.advantage.std_error);
}

TEST_CASE("exhaustive key testing wins the game at toy sizes") {
  // Oracle first: enumerate every (key, z, randomizer pair) and compute the
  // adversary's exact win rate; the Monte Carlo game must then agree.
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kBinaryPhase, 4, 2, 4);
  const std::vector<CpaQuery> queries = {{0, 1}, {0, 1}};
  const auto keys = enumerate_keys(4);

  // For each candidate key, test every ciphertext against the input the
  // hypothesis z predicts; the true (key, z) pair matches all of them.
  const auto adversary = [&](const std::vector<CpaCiphertext>& cts,
                             RandomStream&) {
    double best[2] = {0.0, 0.0};
    for (const auto& candidate : keys) {
      double like[2] = {1.0, 1.0};
      for (std::size_t i = 0; i < cts.size(); ++i) {
        for (int z = 0; z < 2; ++z) {
          const int b = (z == 0) ? queries[i].b0 : queries[i].b1;
          const std::uint64_t x =
              (cts[i].r << 1) | static_cast<std::uint64_t>(b);
          like[z] *=
              test_prfs(spec, candidate, x, cts[i].payload.densify(), 0)
                  .p_accept;
        }
      }
      best[0] = std::max(best[0], like[0]);
      best[1] = std::max(best[1], like[1]);
    }
    return best[1] > best[0] ? 1 : 0;
  };

  double exact_win = 0.0;
  RandomStream dummy(0);
  for (const auto& key : keys) {
    for (int z = 0; z < 2; ++z) {
      for (std::uint64_t r1 = 0; r1 < 2; ++r1) {
        for (std::uint64_t r2 = 0; r2 < 2; ++r2) {
          std::vector<CpaCiphertext> cts;
          const int b1 = (z == 0) ? queries[0].b0 : queries[0].b1;
          const int b2 = (z == 0) ? queries[1].b0 : queries[1].b1;
          cts.push_back({r1, prfs_eval_exact(
                                 spec, key,
                                 (r1 << 1) | static_cast<std::uint64_t>(b1))});
          cts.push_back({r2, prfs_eval_exact(
                                 spec, key,
                                 (r2 << 1) | static_cast<std::uint64_t>(b2))});
          exact_win += (adversary(cts, dummy) == z) ? 1.0 : 0.0;
        }
      }
    }
  }
  exact_win /= static_cast<double>(keys.size() * 2 * 4);
  CHECK(exact_win - 0.5 > 0.1);  // the attack genuinely works at lambda = 4

  RandomStream rng(6);
  const CpaGameResult game = cpa_game(spec, queries, adversary, 1500, rng);
  CHECK(std::abs(game.advantage.value - (exact_win - 0.5)) <=
        3.0 * game.advantage.std_error);
}

TEST_CASE("mac padding packs message bits high") {
  CHECK(mac_input_encoding(0b101, 3, 5) == 0b10100);
  CHECK(mac_input_encoding(1, 1, 4) == 0b1000);
  CHECK_THROWS_AS(mac_input_encoding(0b11, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(mac_input_encoding(1, 5, 4), std::invalid_argument);
}

TEST_CASE("sign/verify accepts with eta cubed") {
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kIdealHaar, 5, 3, 4);
  const PrsKey key = PrsKey::from_uint(11, 5);
  const MacTag tag = mac_sign(spec, key, 0b10, 2);
  const double eta =
      prfs_eval_exact(spec, key, mac_input_encoding(0b10, 2, 3)).eta;
  CHECK(mac_verify(spec, key, 0b10, 2, tag).p_accept ==
        doctest::Approx(eta * eta * eta).epsilon(1e-12));

  // On the exact-eta family, verification is perfect.
  const PrfsSpec perfect = PrfsSpec::make(PrsKind::kShiftedBasis, 64, 3, 4);
  const PrsKey k2 = PrsKey::from_uint(3, 64);
  const MacTag t2 = mac_sign(perfect, k2, 0b01, 2);
  CHECK(mac_verify(perfect, k2, 0b01, 2, t2).p_accept ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verifying a tag for a different message fails at the overlap rate") {
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kIdealHaar, 6, 3, 5);
  const auto keys = enumerate_keys(6);
  double mean = 0.0;
  for (const auto& key : keys) {
    const MacTag tag = mac_sign(spec, key, 0b01, 2);
    mean += mac_verify(spec, key, 0b10, 2, tag).p_accept;
  }
  mean /= static_cast<double>(keys.size());
  CHECK(mean <= std::pow(2.0, -5) + 0.03);
}

TEST_CASE("forgery statistics") {
  const PrfsSpec spec = PrfsSpec::make(PrsKind::kIdealHaar, 6, 3, 5);
  const auto keys = enumerate_keys(6);
  const std::vector<std::uint64_t> msgs = {0b00, 0b01};
  const std::uint64_t target = 0b11;

  // A fresh Haar state verifies at the Haar-average rate 2^-n.
  RandomStream rng(8);
  const double haar_rate = mac_forgery_stats(
      spec, keys, msgs, 2, target,
      [&](const MacForgerView&) { return haar_state(5, rng).to_density(); });
  CHECK(std::abs(haar_rate - std::pow(2.0, -5)) <= 0.02);

  // Replaying a signed tag verifies at the cross-overlap rate.
  const double replay_rate = mac_forgery_stats(
      spec, keys, msgs, 2, target, [](const MacForgerView& view) {
        return view.tags.front().payload.psi.to_density();
      });
  const PrfsSpec ospec = spec;
  const OrthogonalityStats cross = orthogonality_stats(
      ospec, mac_input_encoding(0b00, 2, 3), mac_input_encoding(0b11, 2, 3),
      keys);
  CHECK(std::abs(replay_rate - cross.mean_cross) <= 0.02);

  // A forger that somehow knows the key wins outright.
  const PrfsSpec perfect = PrfsSpec::make(PrsKind::kShiftedBasis, 64, 3, 5);
  const PrsKey known = PrsKey::from_uint(17, 64);
  const double cheat = mac_forgery_stats(
      perfect, {known}, msgs, 2, target, [&](const MacForgerView&) {
        return prfs_eval_exact(perfect, known,
                               mac_input_encoding(target, 2, 3))
            .psi.to_density();
      });
  CHECK(cheat == doctest::Approx(1.0).epsilon(1e-12));

  // A maximally mixed forgery verifies at exactly eta^2 2^-n per key.
  double expected = 0.0;
  for (const auto& key : keys) {
    const double eta =
        prfs_eval_exact(spec, key, mac_input_encoding(target, 2, 3)).eta;
    expected += eta * eta * std::pow(2.0, -5);
  }
  expected /= static_cast<double>(keys.size());
  const double mixed_rate = mac_forgery_stats(
      spec, keys, msgs, 2, target, [](const MacForgerView&) {
        return DensityMatrix::maximally_mixed(5);
      });
  CHECK(mixed_rate == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(
      mac_forgery_stats(spec, keys, {target}, 2, target,
                        [](const MacForgerView&) {
                          return DensityMatrix::maximally_mixed(5);
                        }),
      std::invalid_argument);
}

}  // TEST_SUITE
