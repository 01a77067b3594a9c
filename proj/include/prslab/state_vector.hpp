// state_vector.hpp -- dense pure-state amplitudes
//
// Basis-index convention used everywhere: qubit 0 is the most significant
// bit of the basis index, so an m-qubit basis state |b_0 b_1 ... b_{m-1}>
// sits at index sum_i b_i * 2^(m-1-i).
#pragma once

#include <cstdint>

#include "prslab/common.hpp"

namespace prslab {

class DensityMatrix;

class StateVector {
 public:
  // Checks length 2^m and unit norm (within kNormTol) unless subnormalized.
  StateVector(int num_qubits, Vec amps, bool subnormalized = false);

  static StateVector basis(int num_qubits, std::uint64_t index);
  static StateVector zero(int num_qubits) { return basis(num_qubits, 0); }

  int num_qubits() const { return num_qubits_; }
  std::int64_t dim() const { return amps_.size(); }
  const Vec& amps() const { return amps_; }
  bool subnormalized() const { return subnormalized_; }

  cplx amp(std::int64_t i) const { return amps_(i); }
  double norm() const { return amps_.norm(); }

  // <this|other>
  cplx inner(const StateVector& other) const;

  DensityMatrix to_density() const;

 private:
  int num_qubits_;
  Vec amps_;
  bool subnormalized_;
};

class DensityMatrix {
 public:
  // Checks dimension 2^m, Hermiticity within kHermitianTol and unit trace
  // within kNormTol unless subnormalized. Positivity is not verified on
  // construction (it costs an eigendecomposition); call min_eigenvalue() or
  // is_valid_state() where it matters.
  DensityMatrix(int num_qubits, Mat entries, bool subnormalized = false);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::int64_t dim() const { return mat_.rows(); }
  const Mat& mat() const { return mat_; }
  bool subnormalized() const { return subnormalized_; }

  double trace() const { return mat_.trace().real(); }
  // Tr(rho^2)
  double purity() const;
  double min_eigenvalue() const;
  bool is_valid_state(double psd_tol = kPsdTol) const;

 private:
  int num_qubits_;
  Mat mat_;
  bool subnormalized_;
};

}  // namespace prslab
