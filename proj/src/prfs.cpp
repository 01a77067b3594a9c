#include "prslab/prfs.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prslab/haar.hpp"
#include "prslab/parallel.hpp"
#include "prslab/qops.hpp"

namespace prslab {

AbortableState::AbortableState(double eta_weight, StateVector state)
    : eta(eta_weight), psi(std::move(state)) {
  if (eta < 0.0 || eta > 1.0) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }
  if (eta > 0.0 && std::abs(psi.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("non-abort branch must be a unit vector");
  }
}

AbortableState AbortableState::abort(int output_qubits) {
  return AbortableState(0.0, StateVector::zero(output_qubits));
}

StateVector AbortableState::embed_non_abort() const {
  const std::int64_t dim = psi.dim();
  Vec amps = Vec::Zero(2 * dim);
  amps.head(dim) = psi.amps();
  return StateVector(psi.num_qubits() + 1, std::move(amps));
}

DensityMatrix AbortableState::densify() const {
  const std::int64_t dim = psi.dim();
  Mat out = Mat::Zero(2 * dim, 2 * dim);
  if (eta > 0.0) {
    out.topLeftCorner(dim, dim) = eta * psi.amps() * psi.amps().adjoint();
  }
  out(dim, dim) += 1.0 - eta;  // |bot> = |1 0...0> at index 2^n
  return DensityMatrix(psi.num_qubits() + 1, std::move(out));
}

bool is_recognizable_abort_form(const DensityMatrix& flagged, double tol) {
  const std::int64_t dim = flagged.dim();
  const std::int64_t half = dim / 2;
  const Mat& m = flagged.mat();
  // No coherence between the flag sectors.
  if (m.topRightCorner(half, half).cwiseAbs().maxCoeff() > tol) return false;
  // Flag-1 sector carries only the abort state |1 0...0>.
  Mat bot_block = m.bottomRightCorner(half, half);
  const double bot_weight = bot_block(0, 0).real();
  bot_block(0, 0) = 0.0;
  if (bot_block.cwiseAbs().maxCoeff() > tol) return false;
  if (bot_weight < -tol) return false;
  // Flag-0 sector is (at most) one pure state: PSD with rank <= 1.
  const Mat top = m.topLeftCorner(half, half);
  Eigen::SelfAdjointEigenSolver<Mat> solver(top, Eigen::EigenvaluesOnly);
  const auto& eigs = solver.eigenvalues();
  if (eigs.minCoeff() < -tol) return false;
  double second = 0.0;
  if (half > 1) second = eigs(half - 2);
  if (second > tol) return false;
  return std::abs(eigs(half - 1) + bot_weight - 1.0) <= tol;
}

PrfsSpec PrfsSpec::make(PrsKind kind, int lambda, int d, int n) {
  if (d < 0 || n < 1 || lambda < 1) {
    throw std::invalid_argument("PrfsSpec: need d >= 0, n >= 1, lambda >= 1");
  }
  PrfsSpec spec;
  spec.base.kind = kind;
  spec.base.output_qubits = d + n;
  spec.base.key_bits = lambda;
  spec.base.prefix_bits = (kind == PrsKind::kShiftedBasis) ? d : 0;
  spec.input_bits = d;
  spec.output_qubits = n;
  spec.repetitions = (std::int64_t{1} << d) * lambda;
  return spec;
}

AbortableState postselect_abortable(const StateVector& base, int d,
                                    std::uint64_t x,
                                    std::int64_t repetitions) {
  if (d > base.num_qubits()) {
    throw std::invalid_argument("postselect: prefix longer than the state");
  }
  if (x >= static_cast<std::uint64_t>(dim_of_qubits(d))) {
    throw std::invalid_argument("postselect: outcome out of range");
  }
  const int n = base.num_qubits() - d;
  const std::int64_t block = dim_of_qubits(n);
  const Vec seg =
      base.amps().segment(static_cast<std::int64_t>(x) * block, block);
  const double p = seg.squaredNorm();
  if (p < kBranchCutoff) {
    return AbortableState::abort(n);
  }
  const double eta =
      1.0 - std::pow(1.0 - p, static_cast<double>(repetitions));
  return AbortableState(eta, StateVector(n, seg / std::sqrt(p)));
}

namespace {

void check_prfs_spec(const PrfsSpec& spec) {
  if (spec.base.output_qubits != spec.input_bits + spec.output_qubits) {
    throw std::invalid_argument("PRFS base must act on d + n qubits");
  }
  if (spec.repetitions < 1) {
    throw std::invalid_argument("PRFS needs at least one repetition");
  }
}

}  // namespace

AbortableState prfs_eval_exact(const PrfsSpec& spec, const PrsKey& key,
                               std::uint64_t x) {
  check_prfs_spec(spec);
  const StateVector base = prs_eval(spec.base, key);
  return postselect_abortable(base, spec.input_bits, x, spec.repetitions);
}

std::optional<StateVector> prfs_eval_sampled(const PrfsSpec& spec,
                                             const PrsKey& key,
                                             std::uint64_t x,
                                             RandomStream& rng) {
  check_prfs_spec(spec);
  if (x >= static_cast<std::uint64_t>(dim_of_qubits(spec.input_bits))) {
    throw std::invalid_argument("prfs input out of range");
  }
  // Each loop iteration regenerates the same pure base state, so one
  // evaluation feeds all T measurement draws.
  const StateVector base = prs_eval(spec.base, key);
  const auto probs = prefix_probabilities(base, spec.input_bits);
  for (std::int64_t attempt = 0; attempt < spec.repetitions; ++attempt) {
    if (rng.discrete(probs) == x) {
      return postselect_abortable(base, spec.input_bits, x, 1).psi;
    }
  }
  return std::nullopt;
}

StateVector prfs_trivial(const PrsSpec& base,
                         const std::vector<PrsKey>& key_blocks,
                         std::uint64_t x) {
  if (x >= key_blocks.size()) {
    throw std::invalid_argument("prfs_trivial: input beyond the block count");
  }
  const auto count = key_blocks.size();
  if (count == 0 || (count & (count - 1)) != 0) {
    throw std::invalid_argument("prfs_trivial: block count must be 2^d");
  }
  return prs_eval(base, key_blocks[static_cast<std::size_t>(x)]);
}

Estimate prfs_game(const PrfsSpec& spec,
                   const std::vector<std::uint64_t>& inputs, int t,
                   const Distinguisher& distinguisher, std::int64_t trials,
                   RandomStream& rng, int threads) {
  check_prfs_spec(spec);
  if (inputs.empty() || t < 1) {
    throw std::invalid_argument("prfs_game: need inputs and t >= 1");
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = i + 1; j < inputs.size(); ++j) {
      if (inputs[i] == inputs[j]) {
        throw std::invalid_argument("prfs_game: inputs must be distinct");
      }
    }
  }
  const int s = static_cast<int>(inputs.size());
  const int flagged = spec.output_qubits + 1;
  check_qubit_cap(s * t * flagged, "prfs_game");

  const auto copies_of = [t](std::vector<DensityMatrix> blocks) {
    std::vector<DensityMatrix> parts;
    parts.reserve(blocks.size() * static_cast<std::size_t>(t));
    for (const auto& b : blocks) {
      for (int c = 0; c < t; ++c) parts.push_back(b);
    }
    return tensor(std::span<const DensityMatrix>(parts));
  };

  const auto sample_real = [&](RandomStream& r) {
    const PrsKey key = PrsKey::random(spec.base.key_bits, r);
    std::vector<DensityMatrix> blocks;
    blocks.reserve(inputs.size());
    for (std::uint64_t x : inputs) {
      blocks.push_back(prfs_eval_exact(spec, key, x).densify());
    }
    return copies_of(std::move(blocks));
  };
  const auto sample_ideal = [&](RandomStream& r) {
    std::vector<DensityMatrix> blocks;
    blocks.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const AbortableState ideal(1.0, haar_state(spec.output_qubits, r));
      blocks.push_back(ideal.densify());
    }
    return copies_of(std::move(blocks));
  };
  return distinguishing_advantage(sample_real, sample_ideal, distinguisher,
                                  trials, rng, threads);
}

OrthogonalityStats orthogonality_stats(const PrfsSpec& spec, std::uint64_t x,
                                       std::uint64_t y,
                                       const std::vector<PrsKey>& keys) {
  check_prfs_spec(spec);
  if (x == y) {
    throw std::invalid_argument("orthogonality_stats: inputs must differ");
  }
  if (keys.empty()) {
    throw std::invalid_argument("orthogonality_stats: empty keyset");
  }
  double cross = 0.0;
  double purity = 0.0;
  for (const auto& key : keys) {
    const DensityMatrix gx = prfs_eval_exact(spec, key, x).densify();
    const DensityMatrix gy = prfs_eval_exact(spec, key, y).densify();
    cross += (gx.mat() * gy.mat()).trace().real();
    purity += gx.purity();
  }
  const double count = static_cast<double>(keys.size());
  return OrthogonalityStats{cross / count, purity / count};
}

}  // namespace prslab
