#include "prslab/qops.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prslab {

namespace {

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (std::int64_t i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

StateVector tensor(std::span<const StateVector> parts) {
  if (parts.empty()) {
    throw std::invalid_argument("tensor: no parts");
  }
  int qubits = 0;
  bool subnorm = false;
  for (const auto& p : parts) {
    qubits += p.num_qubits();
    subnorm = subnorm || p.subnormalized();
  }
  check_qubit_cap(qubits, "tensor");
  Vec amps = parts[0].amps();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    amps = kron(amps, parts[i].amps());
  }
  return StateVector(qubits, std::move(amps), subnorm);
}

DensityMatrix tensor(std::span<const DensityMatrix> parts) {
  if (parts.empty()) {
    throw std::invalid_argument("tensor: no parts");
  }
  int qubits = 0;
  bool subnorm = false;
  for (const auto& p : parts) {
    qubits += p.num_qubits();
    subnorm = subnorm || p.subnormalized();
  }
  check_qubit_cap(qubits, "tensor");
  Mat mat = parts[0].mat();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    mat = kron(mat, parts[i].mat());
  }
  return DensityMatrix(qubits, std::move(mat), subnorm);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const StateVector parts[] = {a, b};
  return tensor(std::span<const StateVector>(parts));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const DensityMatrix parts[] = {a, b};
  return tensor(std::span<const DensityMatrix>(parts));
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  const int m = rho.num_qubits();
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int q : keep) {
    if (q < 0 || q >= m) {
      throw std::invalid_argument("partial_trace: qubit index out of range");
    }
    if (seen[static_cast<std::size_t>(q)]) {
      throw std::invalid_argument("partial_trace: repeated qubit index");
    }
    seen[static_cast<std::size_t>(q)] = true;
  }

  const int r = static_cast<int>(keep.size());
  const int t = m - r;
  // Basis-index bit position of each kept / traced qubit (qubit q is
  // index bit m-1-q).
  std::vector<int> keep_bit(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    keep_bit[i] = m - 1 - keep[i];
  }
  std::vector<int> trace_bit;
  trace_bit.reserve(static_cast<std::size_t>(t));
  for (int q = 0; q < m; ++q) {
    if (!seen[static_cast<std::size_t>(q)]) trace_bit.push_back(m - 1 - q);
  }

  const auto scatter = [](std::uint64_t value, const std::vector<int>& bits) {
    std::uint64_t out = 0;
    // bits[0] corresponds to the most significant bit of `value`.
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const std::uint64_t bit = (value >> (bits.size() - 1 - i)) & 1;
      out |= bit << bits[i];
    }
    return out;
  };

  const std::int64_t keep_dim = dim_of_qubits(r);
  const std::int64_t trace_dim = dim_of_qubits(t);
  Mat out = Mat::Zero(keep_dim, keep_dim);
  for (std::int64_t a = 0; a < keep_dim; ++a) {
    const std::uint64_t abits = scatter(static_cast<std::uint64_t>(a), keep_bit);
    for (std::int64_t b = 0; b < keep_dim; ++b) {
      const std::uint64_t bbits =
          scatter(static_cast<std::uint64_t>(b), keep_bit);
      cplx sum = 0.0;
      for (std::int64_t e = 0; e < trace_dim; ++e) {
        const std::uint64_t ebits =
            scatter(static_cast<std::uint64_t>(e), trace_bit);
        sum += rho.mat()(static_cast<std::int64_t>(abits | ebits),
                         static_cast<std::int64_t>(bbits | ebits));
      }
      out(a, b) = sum;
    }
  }
  return DensityMatrix(r, std::move(out), rho.subnormalized());
}

std::vector<Branch> branch_decompose(const StateVector& state,
                                     int prefix_qubits) {
  const int m = state.num_qubits();
  if (prefix_qubits < 0 || prefix_qubits > m) {
    throw std::invalid_argument("branch_decompose: bad prefix length");
  }
  const int n = m - prefix_qubits;
  const std::int64_t block = dim_of_qubits(n);
  const std::int64_t outcomes = dim_of_qubits(prefix_qubits);
  std::vector<Branch> out;
  for (std::int64_t x = 0; x < outcomes; ++x) {
    const Vec seg = state.amps().segment(x * block, block);
    const double p = seg.squaredNorm();
    if (p < kBranchCutoff) continue;
    out.push_back(Branch{static_cast<std::uint64_t>(x), p,
                         StateVector(n, seg / std::sqrt(p))});
  }
  return out;
}

std::vector<double> prefix_probabilities(const StateVector& state,
                                         int prefix_qubits) {
  const int m = state.num_qubits();
  if (prefix_qubits < 0 || prefix_qubits > m) {
    throw std::invalid_argument("prefix_probabilities: bad prefix length");
  }
  const std::int64_t block = dim_of_qubits(m - prefix_qubits);
  const std::int64_t outcomes = dim_of_qubits(prefix_qubits);
  std::vector<double> probs(static_cast<std::size_t>(outcomes));
  for (std::int64_t x = 0; x < outcomes; ++x) {
    probs[static_cast<std::size_t>(x)] =
        state.amps().segment(x * block, block).squaredNorm();
  }
  return probs;
}

double trace_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.mat(), b.mat());
}

double operator_norm(const Mat& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("operator_norm: matrix is not square");
  }
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("operator_norm: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double swap_test_accept_prob(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("swap test: dimension mismatch");
  }
  return 0.5 + 0.5 * (a.mat() * b.mat()).trace().real();
}

bool swap_test_sample(const DensityMatrix& a, const DensityMatrix& b,
                      RandomStream& rng) {
  return rng.bernoulli(swap_test_accept_prob(a, b));
}

double swap_test_accept_prob_joint(const DensityMatrix& rho_two_blocks) {
  const int total = rho_two_blocks.num_qubits();
  if (total % 2 != 0) {
    throw std::invalid_argument("joint swap test needs two equal blocks");
  }
  // Tr(S rho) = sum_{ij} rho[(j,i),(i,j)] without materializing S.
  const std::int64_t b = dim_of_qubits(total / 2);
  cplx tr = 0.0;
  for (std::int64_t i = 0; i < b; ++i) {
    for (std::int64_t j = 0; j < b; ++j) {
      tr += rho_two_blocks.mat()(j * b + i, i * b + j);
    }
  }
  return 0.5 + 0.5 * tr.real();
}

Mat swap_operator(int block_qubits) {
  const std::int64_t b = dim_of_qubits(block_qubits);
  Mat s = Mat::Zero(b * b, b * b);
  for (std::int64_t i = 0; i < b; ++i) {
    for (std::int64_t j = 0; j < b; ++j) {
      s(j * b + i, i * b + j) = 1.0;
    }
  }
  return s;
}

DensityMatrix pauli_twirl_exact(const DensityMatrix& rho) {
  const int m = rho.num_qubits();
  if (m > 6) {
    throw DimensionLimitError("pauli_twirl_exact enumerates 4^m Paulis; m <= 6");
  }
  const std::uint64_t count = std::uint64_t{1} << (2 * m);
  Mat acc = Mat::Zero(rho.dim(), rho.dim());
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    acc += PauliString::from_index(m, idx).conjugate(rho.mat());
  }
  acc /= static_cast<double>(count);
  return DensityMatrix(m, std::move(acc), rho.subnormalized());
}

double pauli_overlap_mean(const StateVector& psi, const StateVector& phi) {
  if (psi.num_qubits() != phi.num_qubits()) {
    throw std::invalid_argument("pauli_overlap_mean: qubit count mismatch");
  }
  const int m = psi.num_qubits();
  if (m > 6) {
    throw DimensionLimitError("pauli_overlap_mean enumerates 4^m Paulis; m <= 6");
  }
  const std::uint64_t count = std::uint64_t{1} << (2 * m);
  double acc = 0.0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const Vec moved = PauliString::from_index(m, idx).apply(phi.amps());
    acc += std::norm(psi.amps().dot(moved));
  }
  return acc / static_cast<double>(count);
}

}  // namespace prslab
