// common.hpp -- shared scalar types, tolerances and error classes
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace prslab {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Numerical tolerances used across the library.
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kNormTol = 1e-9;
inline constexpr double kBranchCutoff = 1e-15;
inline constexpr double kRankCutoff = 1e-9;

// Raised when an operation would materialize a state or operator beyond the
// configured qubit cap.
class DimensionLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an exact key-space or Pauli-group enumeration is requested in a
// regime too large to enumerate.
class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Process-wide cap on the number of qubits a single state may span.
// Dense simulation: memory and time scale as 4^m for operators.
int qubit_cap();
void set_qubit_cap(int cap);
void check_qubit_cap(int qubits, const char* what);

inline std::int64_t dim_of_qubits(int qubits) {
  return std::int64_t{1} << qubits;
}

}  // namespace prslab
