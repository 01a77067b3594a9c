#include "prslab/state_vector.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace prslab {

StateVector::StateVector(int num_qubits, Vec amps, bool subnormalized)
    : num_qubits_(num_qubits), amps_(std::move(amps)),
      subnormalized_(subnormalized) {
  if (num_qubits_ < 0) {
    throw std::invalid_argument("negative qubit count");
  }
  check_qubit_cap(num_qubits_, "StateVector");
  if (amps_.size() != dim_of_qubits(num_qubits_)) {
    throw std::invalid_argument("amplitude vector length is not 2^m");
  }
  if (!subnormalized_ && std::abs(amps_.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  check_qubit_cap(num_qubits, "StateVector");
  const auto dim = dim_of_qubits(num_qubits);
  if (index >= static_cast<std::uint64_t>(dim)) {
    throw std::invalid_argument("basis index out of range");
  }
  Vec amps = Vec::Zero(dim);
  amps(static_cast<std::int64_t>(index)) = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.num_qubits_ != num_qubits_) {
    throw std::invalid_argument("inner product: qubit count mismatch");
  }
  return amps_.dot(other.amps_);  // Eigen's dot conjugates the left factor
}

DensityMatrix StateVector::to_density() const {
  return DensityMatrix(num_qubits_, amps_ * amps_.adjoint(), subnormalized_);
}

DensityMatrix::DensityMatrix(int num_qubits, Mat entries, bool subnormalized)
    : num_qubits_(num_qubits), mat_(std::move(entries)),
      subnormalized_(subnormalized) {
  if (num_qubits_ < 0) {
    throw std::invalid_argument("negative qubit count");
  }
  check_qubit_cap(num_qubits_, "DensityMatrix");
  const auto dim = dim_of_qubits(num_qubits_);
  if (mat_.rows() != dim || mat_.cols() != dim) {
    throw std::invalid_argument("density matrix is not 2^m x 2^m");
  }
  for (std::int64_t j = 0; j < dim; ++j) {
    for (std::int64_t i = 0; i <= j; ++i) {
      if (std::abs(mat_(i, j) - std::conj(mat_(j, i))) > kHermitianTol) {
        throw std::invalid_argument("density matrix is not Hermitian");
      }
    }
  }
  if (!subnormalized_ && std::abs(mat_.trace().real() - 1.0) > kNormTol) {
    throw std::invalid_argument("density matrix does not have unit trace");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return psi.to_density();
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const auto dim = dim_of_qubits(num_qubits);
  return DensityMatrix(
      num_qubits, Mat::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const {
  return (mat_ * mat_).trace().real();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> solver(mat_,
                                            Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid_state(double psd_tol) const {
  if (min_eigenvalue() < -psd_tol) return false;
  if (!subnormalized_ && std::abs(trace() - 1.0) > kNormTol) return false;
  return true;
}

}  // namespace prslab
