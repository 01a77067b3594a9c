#include "prslab/haar.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prslab/parallel.hpp"
#include "prslab/qops.hpp"

namespace prslab {

namespace {
// Fixed accumulation chunking keeps floating-point reduction order
// independent of the thread count.
constexpr std::int64_t kChunk = 128;
}  // namespace

StateVector haar_state(int num_qubits, RandomStream& rng) {
  check_qubit_cap(num_qubits, "haar_state");
  const std::int64_t dim = dim_of_qubits(num_qubits);
  Vec amps(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    amps(i) = cplx(rng.gaussian(), rng.gaussian());
  }
  amps /= amps.norm();
  return StateVector(num_qubits, std::move(amps));
}

Mat haar_unitary(std::int64_t dim, RandomStream& rng) {
  if (dim < 1) {
    throw std::invalid_argument("haar_unitary: dimension must be positive");
  }
  if (dim > dim_of_qubits(qubit_cap())) {
    throw DimensionLimitError("haar_unitary: dimension exceeds 2^cap");
  }
  Mat g(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) {
    for (std::int64_t i = 0; i < dim; ++i) {
      g(i, j) = cplx(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase correction makes the distribution exactly Haar rather than merely
  // unitary.
  for (std::int64_t j = 0; j < dim; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : cplx(1.0, 0.0);
  }
  return q;
}

ConcentrationReport prefix_concentration(int d, int n, double delta,
                                         std::int64_t trials,
                                         RandomStream& rng, int threads) {
  if (d < 0 || n < 0) {
    throw std::invalid_argument("prefix_concentration: negative register size");
  }
  check_qubit_cap(d + n, "prefix_concentration");
  if (delta <= 0.0) {
    throw std::invalid_argument("prefix_concentration: delta must be positive");
  }
  if (trials <= 0) {
    throw std::invalid_argument("prefix_concentration: trials must be positive");
  }
  const double target = std::pow(2.0, -d);
  const std::uint64_t master = rng.next_u64();

  struct TrialStat {
    double max_dev;
  };
  const auto stats = parallel_map<TrialStat>(trials, threads, [&](std::int64_t i) {
    RandomStream trial = derive_stream(master, "prefix-concentration", static_cast<std::uint64_t>(i));
    const StateVector psi = haar_state(d + n, trial);
    double max_dev = 0.0;
    for (double p : prefix_probabilities(psi, d)) {
      max_dev = std::max(max_dev, std::abs(p - target));
    }
    return TrialStat{max_dev};
  });

  std::int64_t exceed = 0;
  double dev_sum = 0.0;
  for (const auto& s : stats) {
    if (s.max_dev >= delta) ++exceed;
    dev_sum += s.max_dev;
  }
  ConcentrationReport report;
  report.dim = dim_of_qubits(d + n);
  report.delta = delta;
  report.trials = trials;
  report.exceed_fraction =
      static_cast<double>(exceed) / static_cast<double>(trials);
  report.empirical_mean = dev_sum / static_cast<double>(trials);
  return report;
}

ConcentrationReport postselect_invariance_check(int d, int n, std::uint64_t x,
                                                std::int64_t trials,
                                                RandomStream& rng,
                                                int threads) {
  if (d < 0 || n < 0) {
    throw std::invalid_argument("postselect_invariance_check: negative size");
  }
  check_qubit_cap(d + n, "postselect_invariance_check");
  if (x >= static_cast<std::uint64_t>(dim_of_qubits(d))) {
    throw std::invalid_argument("postselect_invariance_check: outcome out of range");
  }
  if (trials <= 0) {
    throw std::invalid_argument("postselect_invariance_check: trials must be positive");
  }
  const std::int64_t dim = dim_of_qubits(n);
  const std::uint64_t master = rng.next_u64();

  struct ChunkAcc {
    Mat sum;
    std::int64_t kept = 0;
  };
  const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
  const auto partials = parallel_map<ChunkAcc>(chunks, threads, [&](std::int64_t c) {
    ChunkAcc acc{Mat::Zero(dim, dim), 0};
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(trials, lo + kChunk);
    for (std::int64_t i = lo; i < hi; ++i) {
      RandomStream trial = derive_stream(master, "postselect-invariance", static_cast<std::uint64_t>(i));
      const StateVector psi = haar_state(d + n, trial);
      const auto probs = prefix_probabilities(psi, d);
      const std::uint64_t outcome = trial.discrete(probs);
      if (outcome != x) continue;
      const std::int64_t block = dim;
      const Vec seg = psi.amps().segment(static_cast<std::int64_t>(x) * block, block);
      const double p = seg.squaredNorm();
      const Vec residual = seg / std::sqrt(p);
      acc.sum += residual * residual.adjoint();
      ++acc.kept;
    }
    return acc;
  });

  Mat sum = Mat::Zero(dim, dim);
  std::int64_t kept = 0;
  for (const auto& part : partials) {
    sum += part.sum;
    kept += part.kept;
  }
  ConcentrationReport report;
  report.dim = dim;
  report.delta = 0.0;
  report.trials = trials;
  report.exceed_fraction =
      static_cast<double>(kept) / static_cast<double>(trials);
  if (kept == 0) {
    report.empirical_mean = 1.0;  // nothing survived; maximal distance
    return report;
  }
  const Mat mean = sum / static_cast<double>(kept);
  report.empirical_mean =
      trace_distance(mean, Mat::Identity(dim, dim) / static_cast<double>(dim));
  return report;
}

}  // namespace prslab
