// prslab -- experiment runner and protocol utilities
//
// Experiments:  prslab <experiment> --config cfg.json [--seed U64]
//               [--out report.json] [--threads N]
// Utilities:    prslab otp encrypt|decrypt|roundtrip ...
//               prslab commit run ...
//               prslab cpa game ...
//               prslab mac sign|verify|forge ...
// Exit code 0 iff every declared threshold passed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "prslab/experiments.hpp"
#include "prslab/json_io.hpp"
#include "prslab/otp.hpp"
#include "prslab/cpamac.hpp"
#include "prslab/report.hpp"

namespace {

using prslab::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  json j;
  in >> j;
  return j;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw std::runtime_error("cannot write " + out_path);
  }
  out << j.dump(2) << "\n";
}

struct ExperimentOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  int threads = 1;
};

int run_named_experiment(const std::string& name,
                         const ExperimentOptions& options) {
  prslab::ExperimentConfig config;
  if (!options.config_path.empty()) {
    const json j = load_json(options.config_path);
    config = prslab::ExperimentConfig::from_json(j);
    if (config.experiment != name && !config.experiment.empty()) {
      throw std::runtime_error("config is for experiment '" +
                               config.experiment + "'");
    }
  }
  config.experiment = name;
  if (options.seed.has_value()) config.seed = *options.seed;
  config.threads = options.threads;

  const prslab::ExperimentReport report = prslab::run_experiment(config);
  emit(report.to_json(), options.out_path);
  return report.all_passed() ? 0 : 1;
}

prslab::PrfsSpec spec_from_flags(const std::string& kind, int lambda, int d,
                                 int n) {
  return prslab::PrfsSpec::make(prslab::prs_kind_from_string(kind), lambda, d,
                                n);
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::runtime_error("message must be a 0/1 string");
    }
    bits.push_back(c - '0');
  }
  return bits;
}

std::string render_bits(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudorandom-state cryptography laboratory"};
  app.require_subcommand(1);

  int exit_code = 0;

  // --- experiments -------------------------------------------------------
  auto options = std::make_shared<ExperimentOptions>();
  auto seed_slot = std::make_shared<std::uint64_t>(0);
  for (const std::string& name : prslab::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", options->config_path, "experiment config JSON");
    sub->add_option("--seed", *seed_slot, "override the seed");
    sub->add_option("--out", options->out_path, "write the report here");
    sub->add_option("--threads", options->threads, "worker threads");
    sub->callback([name, options, seed_slot, sub, &exit_code] {
      if (sub->count("--seed") > 0) options->seed = *seed_slot;
      exit_code = run_named_experiment(name, *options);
    });
  }

  // --- otp ----------------------------------------------------------------
  auto otp = app.add_subcommand("otp", "quantum pseudo one-time pad");
  otp->require_subcommand(1);
  struct OtpFlags {
    std::string kind = "binary_phase";
    int lambda = 16, d = 4, n = 6;
    std::string key_hex, msg, in_path, out_path, mode = "exact";
    std::uint64_t seed = 0;
  };
  auto of = std::make_shared<OtpFlags>();
  const auto add_otp_common = [&](CLI::App* sub, bool needs_key) {
    sub->add_option("--kind", of->kind, "binary_phase|ideal_haar|shifted_basis");
    sub->add_option("--lambda", of->lambda, "key bits");
    sub->add_option("--d", of->d, "PRFS input bits");
    sub->add_option("--n", of->n, "PRFS output qubits");
    auto* key = sub->add_option("--key", of->key_hex, "key as lowercase hex");
    if (needs_key) key->required();
    sub->add_option("--seed", of->seed, "seed for sampled mode");
    sub->add_option("--mode", of->mode, "exact|sampled");
    sub->add_option("--out", of->out_path, "output JSON path");
  };

  auto otp_enc = otp->add_subcommand("encrypt", "encrypt a bit string");
  add_otp_common(otp_enc, true);
  otp_enc->add_option("--msg", of->msg, "plaintext bits")->required();
  otp_enc->callback([of] {
    const auto spec = spec_from_flags(of->kind, of->lambda, of->d, of->n);
    const auto key = prslab::PrsKey::from_hex(of->key_hex, of->lambda);
    const auto msg = parse_bits(of->msg);
    prslab::OtpCiphertext ct;
    if (of->mode == "sampled") {
      prslab::RandomStream rng = prslab::derive_stream(of->seed, "otp-cli", 0);
      ct = prslab::otp_encrypt_sampled(spec, key, msg, rng);
    } else {
      ct = prslab::otp_encrypt(spec, key, msg);
    }
    emit(prslab::ciphertext_to_json(ct), of->out_path);
  });

  auto otp_dec = otp->add_subcommand("decrypt", "decrypt a ciphertext file");
  add_otp_common(otp_dec, true);
  otp_dec->add_option("--in", of->in_path, "ciphertext JSON")->required();
  otp_dec->callback([of] {
    const auto spec = spec_from_flags(of->kind, of->lambda, of->d, of->n);
    const auto key = prslab::PrsKey::from_hex(of->key_hex, of->lambda);
    const auto ct = prslab::ciphertext_from_json(load_json(of->in_path));
    std::vector<int> msg;
    if (of->mode == "sampled") {
      prslab::RandomStream rng = prslab::derive_stream(of->seed, "otp-cli", 1);
      msg = prslab::otp_decrypt_sampled(spec, key, ct, rng);
    } else {
      msg = prslab::otp_decrypt(spec, key, ct);
    }
    emit(json{{"msg", render_bits(msg)}}, of->out_path);
  });

  auto otp_round = otp->add_subcommand("roundtrip", "encrypt then decrypt");
  add_otp_common(otp_round, false);
  otp_round->add_option("--msg", of->msg, "plaintext bits")->required();
  otp_round->callback([of, &exit_code] {
    const auto spec = spec_from_flags(of->kind, of->lambda, of->d, of->n);
    prslab::RandomStream rng = prslab::derive_stream(of->seed, "otp-cli", 2);
    const auto key = of->key_hex.empty()
                         ? prslab::PrsKey::random(of->lambda, rng)
                         : prslab::PrsKey::from_hex(of->key_hex, of->lambda);
    const auto msg = parse_bits(of->msg);
    std::vector<int> decoded;
    if (of->mode == "sampled") {
      const auto ct = prslab::otp_encrypt_sampled(spec, key, msg, rng);
      decoded = prslab::otp_decrypt_sampled(spec, key, ct, rng);
    } else {
      const auto ct = prslab::otp_encrypt(spec, key, msg);
      decoded = prslab::otp_decrypt(spec, key, ct);
    }
    const bool ok = decoded == msg;
    emit(json{{"key", key.hex()},
              {"msg", of->msg},
              {"decoded", render_bits(decoded)},
              {"roundtrip_ok", ok}},
         of->out_path);
    exit_code = ok ? 0 : 1;
  });

  // --- commit -------------------------------------------------------------
  auto commit = app.add_subcommand("commit", "commitment protocol");
  commit->require_subcommand(1);
  struct CommitFlags {
    std::string kind = "ideal_haar";
    int lambda = 2, d = 1, n = 3;
    std::string strategy = "honest";
    std::string paulis = "sample:100";
    std::uint64_t seed = 0;
    std::string out_path;
    int threads = 1;
  };
  auto cf = std::make_shared<CommitFlags>();
  auto commit_run = commit->add_subcommand("run", "run commit/reveal or binding");
  commit_run->add_option("--kind", cf->kind, "PRFS base kind");
  commit_run->add_option("--lambda", cf->lambda, "key bits");
  commit_run->add_option("--d", cf->d, "PRFS input bits");
  commit_run->add_option("--n", cf->n, "PRFS output qubits");
  commit_run->add_option("--strategy", cf->strategy,
                         "honest | honest:<keyhex>:<bit> | sup:<k1>,<k2>,<bit>");
  commit_run->add_option("--paulis", cf->paulis, "enumerate | sample:N");
  commit_run->add_option("--seed", cf->seed, "seed");
  commit_run->add_option("--out", cf->out_path, "report path");
  commit_run->add_option("--threads", cf->threads, "worker threads");
  commit_run->callback([cf, &exit_code] {
    prslab::ExperimentConfig config;
    config.experiment = "commit-run";
    config.params = {{"kind", cf->kind}, {"lambda", cf->lambda},
                     {"d", cf->d},       {"n", cf->n},
                     {"strategy", cf->strategy}, {"paulis", cf->paulis}};
    config.seed = cf->seed;
    config.threads = cf->threads;
    const auto report = prslab::run_experiment(config);
    emit(report.to_json(), cf->out_path);
    exit_code = report.all_passed() ? 0 : 1;
  });

  // --- cpa ------------------------------------------------------------------
  auto cpa = app.add_subcommand("cpa", "CPA-secure bit encryption");
  cpa->require_subcommand(1);
  struct CpaFlags {
    std::string kind = "binary_phase";
    int lambda = 4, d = 4, n = 4, t = 2, trials = 2000;
    std::string adversary = "constant";
    std::uint64_t seed = 0;
    std::string out_path;
    int threads = 1;
  };
  auto gf = std::make_shared<CpaFlags>();
  auto cpa_game_cmd = cpa->add_subcommand("game", "run the CPA game");
  cpa_game_cmd->add_option("--kind", gf->kind, "PRFS base kind");
  cpa_game_cmd->add_option("--lambda", gf->lambda, "key bits");
  cpa_game_cmd->add_option("--d", gf->d, "PRFS input bits");
  cpa_game_cmd->add_option("--n", gf->n, "PRFS output qubits");
  cpa_game_cmd->add_option("--t", gf->t, "queries per trial");
  cpa_game_cmd->add_option("--trials", gf->trials, "game trials");
  cpa_game_cmd->add_option("--adversary", gf->adversary,
                           "constant|read_r|key_recovery");
  cpa_game_cmd->add_option("--seed", gf->seed, "seed");
  cpa_game_cmd->add_option("--out", gf->out_path, "report path");
  cpa_game_cmd->add_option("--threads", gf->threads, "worker threads");
  cpa_game_cmd->callback([gf, &exit_code] {
    prslab::ExperimentConfig config;
    config.experiment = "cpa-game";
    config.params = {{"kind", gf->kind},   {"lambda", gf->lambda},
                     {"d", gf->d},         {"n", gf->n},
                     {"t", gf->t},         {"trials", gf->trials},
                     {"adversary", gf->adversary}};
    config.seed = gf->seed;
    config.threads = gf->threads;
    const auto report = prslab::run_experiment(config);
    emit(report.to_json(), gf->out_path);
    exit_code = report.all_passed() ? 0 : 1;
  });

  // --- mac ------------------------------------------------------------------
  auto mac = app.add_subcommand("mac", "message authentication codes");
  mac->require_subcommand(1);
  struct MacFlags {
    std::string kind = "binary_phase";
    int lambda = 8, d = 4, n = 5, msg_len = 4;
    std::uint64_t msg = 0;
    std::string key_hex, in_path, out_path;
    std::string forger = "haar";
    int keys = 64;
    std::uint64_t target = 1;
    std::uint64_t seed = 0;
  };
  auto mf = std::make_shared<MacFlags>();
  const auto add_mac_common = [&](CLI::App* sub) {
    sub->add_option("--kind", mf->kind, "PRFS base kind");
    sub->add_option("--lambda", mf->lambda, "key bits");
    sub->add_option("--d", mf->d, "PRFS input bits");
    sub->add_option("--n", mf->n, "PRFS output qubits");
    sub->add_option("--msg-len", mf->msg_len, "message bits");
    sub->add_option("--out", mf->out_path, "output path");
  };

  auto mac_sign_cmd = mac->add_subcommand("sign", "sign a message");
  add_mac_common(mac_sign_cmd);
  mac_sign_cmd->add_option("--key", mf->key_hex, "key hex")->required();
  mac_sign_cmd->add_option("--msg", mf->msg, "message value")->required();
  mac_sign_cmd->callback([mf] {
    const auto spec = spec_from_flags(mf->kind, mf->lambda, mf->d, mf->n);
    const auto key = prslab::PrsKey::from_hex(mf->key_hex, mf->lambda);
    const auto tag = prslab::mac_sign(spec, key, mf->msg, mf->msg_len);
    emit(json{{"msg", mf->msg},
              {"msg_len", mf->msg_len},
              {"tag", prslab::abortable_to_json(tag.payload)}},
         mf->out_path);
  });

  auto mac_verify_cmd = mac->add_subcommand("verify", "verify a tag file");
  add_mac_common(mac_verify_cmd);
  mac_verify_cmd->add_option("--key", mf->key_hex, "key hex")->required();
  mac_verify_cmd->add_option("--msg", mf->msg, "message value")->required();
  mac_verify_cmd->add_option("--in", mf->in_path, "tag JSON")->required();
  mac_verify_cmd->callback([mf, &exit_code] {
    const auto spec = spec_from_flags(mf->kind, mf->lambda, mf->d, mf->n);
    const auto key = prslab::PrsKey::from_hex(mf->key_hex, mf->lambda);
    const json j = load_json(mf->in_path);
    const prslab::MacTag tag{prslab::abortable_from_json(j.at("tag")),
                             mf->msg_len};
    const auto outcome =
        prslab::mac_verify(spec, key, mf->msg, mf->msg_len, tag);
    emit(json{{"accept_prob", outcome.p_accept}}, mf->out_path);
    exit_code = outcome.p_accept > 0.5 ? 0 : 1;
  });

  auto mac_forge_cmd = mac->add_subcommand("forge", "run the forgery statistic");
  add_mac_common(mac_forge_cmd);
  mac_forge_cmd->add_option("--target", mf->target, "forgery target message");
  mac_forge_cmd->add_option("--forger", mf->forger, "haar|replay_first");
  mac_forge_cmd->add_option("--keys", mf->keys, "random keyset size");
  mac_forge_cmd->add_option("--seed", mf->seed, "seed");
  mac_forge_cmd->callback([mf, &exit_code] {
    prslab::ExperimentConfig config;
    config.experiment = "mac-forgery";
    config.params = {{"kind", mf->kind},     {"lambda", mf->lambda},
                     {"d", mf->d},           {"n", mf->n},
                     {"msgs", json::array({0})}, {"msg_len", mf->msg_len},
                     {"target", mf->target}, {"forger", mf->forger},
                     {"keys", mf->keys}};
    config.seed = mf->seed;
    const auto report = prslab::run_experiment(config);
    emit(report.to_json(), mf->out_path);
    exit_code = report.all_passed() ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
