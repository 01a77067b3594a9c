#include "prslab/commit.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prslab/qops.hpp"

namespace prslab {

namespace {

void check_params(const CommitmentParams& params, const PrfsSpec& spec) {
  if (params.lambda != spec.base.key_bits || params.d != spec.input_bits ||
      params.n != spec.output_qubits) {
    throw std::invalid_argument("commitment params do not match the PRFS spec");
  }
}

struct KeyData {
  double eta = 1.0;             // product of per-block etas
  Vec flagged;                  // (x)_x |0>|psi_{k,x}>, flagged wire
  Vec payload;                  // (x)_x |psi_{k,x}>, payload-only
  std::vector<AbortableState> blocks;
  bool pure_span_member = true;  // false when some eta vanished
};

KeyData eval_key(const CommitmentParams& params, const PrfsSpec& spec,
                 const PrsKey& key) {
  KeyData data;
  Vec flagged = Vec::Ones(1);
  Vec payload = Vec::Ones(1);
  for (int x = 0; x < params.num_blocks(); ++x) {
    AbortableState out =
        prfs_eval_exact(spec, key, static_cast<std::uint64_t>(x));
    data.eta *= out.eta;
    if (out.eta <= 0.0) {
      data.pure_span_member = false;
    } else {
      const Vec flag_block = out.embed_non_abort().amps();
      Vec next_f(flagged.size() * flag_block.size());
      for (std::int64_t i = 0; i < flagged.size(); ++i) {
        next_f.segment(i * flag_block.size(), flag_block.size()) =
            flagged(i) * flag_block;
      }
      flagged = std::move(next_f);
      const Vec& pay_block = out.psi.amps();
      Vec next_p(payload.size() * pay_block.size());
      for (std::int64_t i = 0; i < payload.size(); ++i) {
        next_p.segment(i * pay_block.size(), pay_block.size()) =
            payload(i) * pay_block;
      }
      payload = std::move(next_p);
    }
    data.blocks.push_back(std::move(out));
  }
  if (data.pure_span_member) {
    data.flagged = std::move(flagged);
    data.payload = std::move(payload);
  }
  return data;
}

// Orthonormal basis of the span of the given vectors, singular values below
// kRankCutoff dropped.
Mat orthonormal_span(const std::vector<const Vec*>& vectors, std::int64_t dim) {
  if (vectors.empty()) {
    return Mat::Zero(dim, 0);
  }
  Mat stacked(dim, static_cast<std::int64_t>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    stacked.col(static_cast<std::int64_t>(j)) = *vectors[j];
  }
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU);
  std::int64_t rank = 0;
  for (std::int64_t i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > kRankCutoff) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

// Nonzero part of ||pi0 + pi1|| from the Gram block [[I, C], [C^t, I]]:
// p = 1 + sigma_max(U0^dag U1).
double povm_norm_from_bases(const Mat& u0, const Mat& u1, double* overlap) {
  const Mat c = u0.adjoint() * u1;
  if (overlap != nullptr) {
    *overlap = c.squaredNorm();  // Tr(pi0 pi1) = ||U0^dag U1||_F^2
  }
  if (c.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(c);
  return 1.0 + svd.singularValues().maxCoeff();
}

}  // namespace

PauliString sample_challenge(const CommitmentParams& params,
                             RandomStream& rng) {
  check_qubit_cap(params.m(), "sample_challenge");
  return PauliString::sample(params.m(), rng);
}

PauliString lift_to_flagged(const PauliString& payload_pauli, int d, int n) {
  const int blocks = 1 << d;
  if (payload_pauli.num_qubits() != blocks * n) {
    throw std::invalid_argument("lift_to_flagged: Pauli size mismatch");
  }
  PauliString lifted(0, 0, 0);
  for (int x = 0; x < blocks; ++x) {
    lifted = lifted.tensor_with(PauliString::identity(1))
                 .tensor_with(payload_pauli.subrange(x * n, n));
  }
  return lifted;
}

DensityMatrix commit_state(const CommitmentParams& params, const PrfsSpec& spec,
                           const PrsKey& key, int b, const PauliString& p) {
  check_params(params, spec);
  if (p.num_qubits() != params.m()) {
    throw std::invalid_argument("commit: challenge must act on m qubits");
  }
  if (b != 0 && b != 1) {
    throw std::invalid_argument("commit: bit must be 0 or 1");
  }
  check_qubit_cap(params.flagged_qubits(), "commit_state");
  std::vector<DensityMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(params.num_blocks()));
  for (int x = 0; x < params.num_blocks(); ++x) {
    DensityMatrix block =
        prfs_eval_exact(spec, key, static_cast<std::uint64_t>(x)).densify();
    if (b == 1) {
      const PauliString block_pauli =
          PauliString::identity(1).tensor_with(p.subrange(x * params.n, params.n));
      block = block_pauli.conjugate(block);
    }
    blocks.push_back(std::move(block));
  }
  return tensor(std::span<const DensityMatrix>(blocks));
}

TestOutcome reveal_verify(const CommitmentParams& params, const PrfsSpec& spec,
                          const PauliString& p, const DensityMatrix& commitment,
                          const PrsKey& key, int b) {
  check_params(params, spec);
  if (commitment.num_qubits() != params.flagged_qubits()) {
    throw std::invalid_argument("reveal: commitment has the wrong size");
  }
  DensityMatrix unmasked = commitment;
  if (b == 1) {
    unmasked = lift_to_flagged(p, params.d, params.n).conjugate(unmasked);
  }
  std::vector<PrfsInstance> instances;
  instances.reserve(static_cast<std::size_t>(params.num_blocks()));
  for (int x = 0; x < params.num_blocks(); ++x) {
    instances.push_back(PrfsInstance{spec, key, static_cast<std::uint64_t>(x)});
  }
  return test_product(std::span<const PrfsInstance>(instances), unmasked, 0,
                      /*flagged_blocks=*/true);
}

ExtractorPovm build_extractor(const CommitmentParams& params,
                              const PrfsSpec& spec, const PauliString& p,
                              const std::vector<PrsKey>& keys) {
  check_params(params, spec);
  if (keys.size() > 4096) {
    throw EnumerationLimitError("build_extractor: keyspace beyond 2^12");
  }
  check_qubit_cap(params.m(), "build_extractor");
  if (keys.empty()) {
    throw std::invalid_argument("build_extractor: empty keyspace");
  }

  const std::int64_t dim = dim_of_qubits(params.m());
  std::vector<KeyData> data;
  data.reserve(keys.size());
  std::vector<const Vec*> payload_vectors;
  for (const auto& key : keys) {
    data.push_back(eval_key(params, spec, key));
    if (data.back().pure_span_member) {
      payload_vectors.push_back(&data.back().payload);
    }
  }
  const Mat u0 = orthonormal_span(payload_vectors, dim);
  Mat u1(dim, u0.cols());
  for (std::int64_t j = 0; j < u0.cols(); ++j) {
    u1.col(j) = p.apply(Vec(u0.col(j)));
  }

  ExtractorPovm povm;
  povm.rank = static_cast<int>(u0.cols());
  povm.pi0 = u0 * u0.adjoint();
  povm.pi1 = u1 * u1.adjoint();
  povm.p = operator_norm(povm.pi0 + povm.pi1);
  povm.lambda0 = povm.pi0 / povm.p;
  povm.lambda1 = povm.pi1 / povm.p;
  povm.lambda_bot =
      Mat::Identity(dim, dim) - povm.lambda0 - povm.lambda1;
  return povm;
}

CommitterStrategy CommitterStrategy::honest(const CommitmentParams& params,
                                            const PrfsSpec& spec,
                                            const PrsKey& key, int bit) {
  CommitterStrategy strategy;
  strategy.x_dim = 1;
  strategy.openings = {Opening{key, bit, 1.0}};
  strategy.make_state = [params, spec, key, bit](const PauliString& p) {
    StrategyState state;
    state.x_dim = 1;
    const int blocks = params.num_blocks();
    // Per-block branch vectors on the flagged wire.
    std::vector<std::vector<std::pair<double, Vec>>> per_block;
    per_block.reserve(static_cast<std::size_t>(blocks));
    for (int x = 0; x < blocks; ++x) {
      const AbortableState out =
          prfs_eval_exact(spec, key, static_cast<std::uint64_t>(x));
      std::vector<std::pair<double, Vec>> options;
      if (out.eta > 0.0) {
        options.emplace_back(out.eta, out.embed_non_abort().amps());
      }
      if (out.eta < 1.0) {
        Vec bot = Vec::Zero(dim_of_qubits(spec.output_qubits + 1));
        bot(dim_of_qubits(spec.output_qubits)) = 1.0;
        options.emplace_back(1.0 - out.eta, std::move(bot));
      }
      per_block.push_back(std::move(options));
    }
    // Expand the product of per-block mixtures into pure components.
    std::vector<std::pair<double, Vec>> acc = {{1.0, Vec::Ones(1)}};
    for (const auto& options : per_block) {
      std::vector<std::pair<double, Vec>> next;
      next.reserve(acc.size() * options.size());
      for (const auto& [w0, v0] : acc) {
        for (const auto& [w1, v1] : options) {
          Vec joined(v0.size() * v1.size());
          for (std::int64_t i = 0; i < v0.size(); ++i) {
            joined.segment(i * v1.size(), v1.size()) = v0(i) * v1;
          }
          next.emplace_back(w0 * w1, std::move(joined));
        }
      }
      acc = std::move(next);
    }
    if (bit == 1) {
      const PauliString lifted = lift_to_flagged(p, params.d, params.n);
      for (auto& [w, v] : acc) {
        v = lifted.apply(v);
      }
    }
    state.components = std::move(acc);
    return state;
  };
  return strategy;
}

CommitterStrategy CommitterStrategy::key_superposition(
    const CommitmentParams& params, const PrfsSpec& spec, const PrsKey& k1,
    const PrsKey& k2, int bit) {
  CommitterStrategy strategy;
  strategy.x_dim = 2;
  strategy.openings = {Opening{k1, bit, 0.5}, Opening{k2, 1 - bit, 0.5}};
  strategy.make_state = [params, spec, k1, k2, bit](const PauliString& p) {
    const auto d1 = eval_key(params, spec, k1);
    const auto d2 = eval_key(params, spec, k2);
    if (!d1.pure_span_member || !d2.pure_span_member) {
      throw std::invalid_argument(
          "key_superposition needs keys with nonvanishing eta");
    }
    const PauliString lifted = lift_to_flagged(p, params.d, params.n);
    const Vec v1 = (bit == 1) ? lifted.apply(d1.flagged) : d1.flagged;
    const Vec v2 = (bit == 0) ? lifted.apply(d2.flagged) : d2.flagged;
    const std::int64_t dy = v1.size();
    Vec joint = Vec::Zero(2 * dy);
    joint.head(dy) = v1;
    joint.tail(dy) = v2;
    joint /= joint.norm();
    StrategyState state;
    state.x_dim = 2;
    state.components = {{1.0, std::move(joint)}};
    return state;
  };
  return strategy;
}

namespace {

// Tr_Y((I_X (x) |v><v|) sigma) for an ensemble of pure components on X (x) Y.
Mat contract_rank1(const StrategyState& sigma, const Vec& v) {
  const std::int64_t dx = sigma.x_dim;
  const std::int64_t dy = v.size();
  Mat out = Mat::Zero(dx, dx);
  Vec g(dx);
  for (const auto& [w, chi] : sigma.components) {
    for (std::int64_t a = 0; a < dx; ++a) {
      g(a) = v.dot(chi.segment(a * dy, dy));  // <v, chi_a>
    }
    out += w * (g * g.adjoint());
  }
  return out;
}

Mat trace_out_y(const StrategyState& sigma, std::int64_t dy) {
  const std::int64_t dx = sigma.x_dim;
  Mat out = Mat::Zero(dx, dx);
  for (const auto& [w, chi] : sigma.components) {
    for (std::int64_t a = 0; a < dx; ++a) {
      for (std::int64_t b = 0; b < dx; ++b) {
        out(a, b) += w * chi.segment(b * dy, dy).dot(chi.segment(a * dy, dy));
      }
    }
  }
  return out;
}

double trace_norm(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (h + h.adjoint()),
                                            Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

struct PauliIterator {
  // The full group, a fixed list, or a number of fresh samples.
  std::int64_t count;
  bool enumerate;
  int m;
  const std::vector<PauliString>* fixed = nullptr;

  PauliString get(std::int64_t i, RandomStream& rng) const {
    if (fixed != nullptr) {
      return (*fixed)[static_cast<std::size_t>(i)];
    }
    if (enumerate) {
      return PauliString::from_index(m, static_cast<std::uint64_t>(i));
    }
    return PauliString::sample(m, rng);
  }
};

PauliIterator make_pauli_iterator(const CommitmentParams& params,
                                  const PauliSelection& selection) {
  PauliIterator it;
  it.m = params.m();
  it.enumerate = selection.enumerate;
  if (!selection.explicit_paulis.empty()) {
    for (const auto& p : selection.explicit_paulis) {
      if (p.num_qubits() != params.m()) {
        throw std::invalid_argument("explicit Pauli has the wrong size");
      }
    }
    it.enumerate = false;
    it.fixed = &selection.explicit_paulis;
    it.count = static_cast<std::int64_t>(selection.explicit_paulis.size());
  } else if (selection.enumerate) {
    if (params.m() > 8) {
      throw EnumerationLimitError(
          "Pauli enumeration supports m <= 8 (4^m challenges)");
    }
    it.count = std::int64_t{1} << (2 * params.m());
  } else {
    if (selection.sample_count < 1) {
      throw std::invalid_argument("Pauli sampling needs a positive count");
    }
    it.count = selection.sample_count;
  }
  return it;
}

}  // namespace

BindingResult binding_experiment(const CommitmentParams& params,
                                 const PrfsSpec& spec,
                                 const CommitterStrategy& strategy,
                                 const std::vector<PrsKey>& keyspace,
                                 const PauliSelection& paulis,
                                 RandomStream& rng) {
  check_params(params, spec);
  if (keyspace.size() > 4096) {
    throw EnumerationLimitError("binding_experiment: keyspace beyond 2^12");
  }
  check_qubit_cap(params.flagged_qubits(), "binding_experiment");
  if (keyspace.empty()) {
    throw std::invalid_argument("binding_experiment: empty keyspace");
  }

  const std::int64_t dy = dim_of_qubits(params.flagged_qubits());
  // Key span (flagged wire) and per-opening data; independent of P.
  std::vector<KeyData> key_data;
  key_data.reserve(keyspace.size());
  std::vector<const Vec*> span_vectors;
  for (const auto& key : keyspace) {
    key_data.push_back(eval_key(params, spec, key));
    if (key_data.back().pure_span_member) {
      span_vectors.push_back(&key_data.back().flagged);
    }
  }
  const Mat u0 = orthonormal_span(span_vectors, dy);

  const auto find_key_data = [&](const PrsKey& key) -> const KeyData& {
    for (std::size_t i = 0; i < keyspace.size(); ++i) {
      if (keyspace[i] == key) return key_data[i];
    }
    throw std::invalid_argument("binding: opening key is outside the keyspace");
  };

  const PauliIterator it = make_pauli_iterator(params, paulis);
  const int dx = strategy.x_dim;
  // Decision register blocks: 0, 1, abort, extraction-error.
  std::vector<Mat> real_blocks(4, Mat::Zero(dx, dx));
  std::vector<Mat> ideal_blocks(4, Mat::Zero(dx, dx));
  constexpr int kAbort = 2;
  constexpr int kExtractErr = 3;

  BindingResult result;
  result.pauli_count = it.count;
  double mu_sum = 0.0;
  double p_sum = 0.0;
  double chain_gap = -1.0;

  for (std::int64_t pi = 0; pi < it.count; ++pi) {
    const PauliString challenge = it.get(pi, rng);
    const PauliString lifted = lift_to_flagged(challenge, params.d, params.n);
    Mat u1(u0.rows(), u0.cols());
    for (std::int64_t j = 0; j < u0.cols(); ++j) {
      u1.col(j) = lifted.apply(Vec(u0.col(j)));
    }
    const double p = povm_norm_from_bases(u0, u1, nullptr);
    p_sum += p;
    result.p_max = std::max(result.p_max, p);

    const StrategyState sigma = strategy.make_state(challenge);
    if (sigma.x_dim != dx) {
      throw std::invalid_argument("binding: strategy state has wrong X size");
    }
    const Mat sigma_x = trace_out_y(sigma, dy);

    for (const auto& opening : strategy.openings) {
      if (opening.bit < 0) {
        // Committer abort: both experiments output (sigma_X, bot).
        real_blocks[kAbort] += opening.prob * sigma_x / static_cast<double>(it.count);
        ideal_blocks[kAbort] += opening.prob * sigma_x / static_cast<double>(it.count);
        continue;
      }
      const KeyData& kd = find_key_data(opening.key);
      const double scale = opening.prob / static_cast<double>(it.count);
      if (!kd.pure_span_member) {
        // M0 vanishes: the receiver always rejects this opening.
        real_blocks[kAbort] += scale * sigma_x;
        ideal_blocks[kAbort] += scale * sigma_x;
        continue;
      }
      const double eta2 = kd.eta * kd.eta;
      const int b = opening.bit;
      const Vec w = (b == 1) ? lifted.apply(kd.flagged) : kd.flagged;
      const Mat& ub = (b == 1) ? u1 : u0;
      const Mat& uo = (b == 1) ? u0 : u1;
      const Vec vb = ub * (ub.adjoint() * w);  // Pi_b w (absorption: = w)
      const Vec ve = uo * (uo.adjoint() * w);  // Pi_{1-b} w

      const Mat tau_real_b = eta2 * contract_rank1(sigma, w);
      const Mat tau_ideal_b = (eta2 / p) * contract_rank1(sigma, vb);
      const Mat tau_err = (eta2 / p) * contract_rank1(sigma, ve);
      const Mat tau_real_bot = sigma_x - tau_real_b;
      const Mat tau_ideal_bot = sigma_x - tau_ideal_b - tau_err;

      real_blocks[b] += scale * tau_real_b;
      real_blocks[kAbort] += scale * tau_real_bot;
      ideal_blocks[b] += scale * tau_ideal_b;
      ideal_blocks[kAbort] += scale * tau_ideal_bot;
      ideal_blocks[kExtractErr] += scale * tau_err;

      const double mu_inst = tau_err.trace().real();
      mu_sum += opening.prob * mu_inst / static_cast<double>(it.count);

      const double td_b = 0.5 * trace_norm(tau_real_b - tau_ideal_b);
      const double td_bot = 0.5 * trace_norm(tau_real_bot - tau_ideal_bot);
      const double lhs = td_b + td_bot + mu_inst;
      const double rhs =
          (1.0 - 1.0 / p) * tau_real_b.trace().real() + 2.0 * mu_inst;
      chain_gap = std::max(chain_gap, lhs - rhs);
    }
  }

  double td = 0.0;
  double min_eig = 0.0;
  for (int dec = 0; dec < 4; ++dec) {
    td += 0.5 * trace_norm(real_blocks[dec] - ideal_blocks[dec]);
    result.real_trace += real_blocks[dec].trace().real();
    result.ideal_trace += ideal_blocks[dec].trace().real();
    for (const auto* blocks : {&real_blocks, &ideal_blocks}) {
      Eigen::SelfAdjointEigenSolver<Mat> eig((*blocks)[dec],
                                             Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
    }
  }
  result.td_real_ideal = td;
  result.mu_mean = mu_sum;
  result.max_chain_gap = chain_gap;
  result.p_mean = p_sum / static_cast<double>(it.count);
  result.min_block_eigenvalue = min_eig;
  return result;
}

double hiding_distance(const CommitmentParams& params, const PrfsSpec& spec,
                       const std::vector<PrsKey>& keys, const PauliString& p) {
  check_params(params, spec);
  if (keys.empty()) {
    throw std::invalid_argument("hiding_distance: empty keyspace");
  }
  const std::int64_t dim = dim_of_qubits(params.flagged_qubits());
  Mat avg0 = Mat::Zero(dim, dim);
  Mat avg1 = Mat::Zero(dim, dim);
  for (const auto& key : keys) {
    avg0 += commit_state(params, spec, key, 0, p).mat();
    avg1 += commit_state(params, spec, key, 1, p).mat();
  }
  avg0 /= static_cast<double>(keys.size());
  avg1 /= static_cast<double>(keys.size());
  return trace_distance(avg0, avg1);
}

PovmClosenessStats povm_closeness_stats(const CommitmentParams& params,
                                        const PrfsSpec& spec,
                                        const std::vector<PrsKey>& keys,
                                        const PauliSelection& paulis,
                                        RandomStream& rng) {
  check_params(params, spec);
  check_qubit_cap(params.m(), "povm_closeness_stats");
  if (keys.empty()) {
    throw std::invalid_argument("povm_closeness_stats: empty keyspace");
  }
  const std::int64_t dim = dim_of_qubits(params.m());
  std::vector<KeyData> data;
  data.reserve(keys.size());
  std::vector<const Vec*> payload_vectors;
  for (const auto& key : keys) {
    data.push_back(eval_key(params, spec, key));
    if (data.back().pure_span_member) {
      payload_vectors.push_back(&data.back().payload);
    }
  }
  const Mat u0 = orthonormal_span(payload_vectors, dim);

  const PauliIterator it = make_pauli_iterator(params, paulis);
  PovmClosenessStats stats;
  stats.samples = it.count;
  stats.rank = static_cast<int>(u0.cols());
  const double tail_threshold =
      1.0 + 3.0 * std::pow(2.0, -(params.m() - 4.0 * params.lambda) / 3.0);
  double p_sum = 0.0;
  double overlap_sum = 0.0;
  std::int64_t tail = 0;
  double max_gap = -1.0;
  for (std::int64_t pi = 0; pi < it.count; ++pi) {
    const PauliString challenge = it.get(pi, rng);
    Mat u1(u0.rows(), u0.cols());
    for (std::int64_t j = 0; j < u0.cols(); ++j) {
      u1.col(j) = challenge.apply(Vec(u0.col(j)));
    }
    double overlap = 0.0;
    const double p = povm_norm_from_bases(u0, u1, &overlap);
    p_sum += p;
    overlap_sum += overlap;
    stats.p_max = std::max(stats.p_max, p);
    if (p >= tail_threshold) ++tail;
    max_gap = std::max(max_gap, p - (1.0 + 3.0 * std::sqrt(overlap)));
  }
  stats.p_mean = p_sum / static_cast<double>(it.count);
  stats.overlap_mean = overlap_sum / static_cast<double>(it.count);
  stats.tail_fraction =
      static_cast<double>(tail) / static_cast<double>(it.count);
  stats.max_bound_gap = max_gap;
  return stats;
}

}  // namespace prslab
