#include "prslab/pauli_string.hpp"

#include <bit>
#include <cstdio>
#include <stdexcept>

namespace prslab {

namespace {

inline double parity_sign(std::uint64_t bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

}  // namespace

PauliString::PauliString(int num_qubits, std::uint64_t x_mask,
                         std::uint64_t z_mask)
    : num_qubits_(num_qubits), x_mask_(x_mask), z_mask_(z_mask) {
  if (num_qubits_ < 0 || num_qubits_ > 63) {
    throw std::invalid_argument("PauliString supports 0..63 qubits");
  }
  const std::uint64_t valid =
      num_qubits_ == 0 ? 0 : ((std::uint64_t{1} << num_qubits_) - 1);
  if ((x_mask_ & ~valid) != 0 || (z_mask_ & ~valid) != 0) {
    throw std::invalid_argument("Pauli mask has bits beyond the qubit count");
  }
}

PauliString PauliString::sample(int num_qubits, RandomStream& rng) {
  return PauliString(num_qubits, rng.bits(num_qubits), rng.bits(num_qubits));
}

PauliString PauliString::from_index(int num_qubits, std::uint64_t index) {
  const std::uint64_t mask =
      num_qubits == 0 ? 0 : ((std::uint64_t{1} << num_qubits) - 1);
  return PauliString(num_qubits, (index >> num_qubits) & mask, index & mask);
}

Vec PauliString::apply(const Vec& amps) const {
  const auto dim = dim_of_qubits(num_qubits_);
  if (amps.size() != dim) {
    throw std::invalid_argument("Pauli apply: dimension mismatch");
  }
  Vec out(dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    out(static_cast<std::int64_t>(ub ^ x_mask_)) =
        parity_sign(ub & z_mask_) * amps(b);
  }
  return out;
}

StateVector PauliString::apply(const StateVector& psi) const {
  return StateVector(psi.num_qubits(), apply(psi.amps()), psi.subnormalized());
}

Mat PauliString::conjugate(const Mat& rho) const {
  const auto dim = dim_of_qubits(num_qubits_);
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("Pauli conjugate: dimension mismatch");
  }
  Mat out(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) {
    const auto uj = static_cast<std::uint64_t>(j);
    const double sj = parity_sign(uj & z_mask_);
    const auto cj = static_cast<std::int64_t>(uj ^ x_mask_);
    for (std::int64_t i = 0; i < dim; ++i) {
      const auto ui = static_cast<std::uint64_t>(i);
      out(static_cast<std::int64_t>(ui ^ x_mask_), cj) =
          parity_sign(ui & z_mask_) * sj * rho(i, j);
    }
  }
  return out;
}

DensityMatrix PauliString::conjugate(const DensityMatrix& rho) const {
  return DensityMatrix(rho.num_qubits(), conjugate(rho.mat()),
                       rho.subnormalized());
}

Mat PauliString::matrix() const {
  const auto dim = dim_of_qubits(num_qubits_);
  Mat out = Mat::Zero(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    out(static_cast<std::int64_t>(ub ^ x_mask_), b) =
        parity_sign(ub & z_mask_);
  }
  return out;
}

PauliString PauliString::subrange(int start_qubit, int len) const {
  if (start_qubit < 0 || len < 0 || start_qubit + len > num_qubits_) {
    throw std::invalid_argument("Pauli subrange out of bounds");
  }
  const int shift = num_qubits_ - start_qubit - len;
  const std::uint64_t mask =
      len == 0 ? 0 : ((std::uint64_t{1} << len) - 1);
  return PauliString(len, (x_mask_ >> shift) & mask, (z_mask_ >> shift) & mask);
}

PauliString PauliString::tensor_with(const PauliString& other) const {
  const int total = num_qubits_ + other.num_qubits_;
  if (total > 63) {
    throw std::invalid_argument("Pauli tensor exceeds 63 qubits");
  }
  return PauliString(total, (x_mask_ << other.num_qubits_) | other.x_mask_,
                     (z_mask_ << other.num_qubits_) | other.z_mask_);
}

std::string PauliString::hex() const {
  const int digits = (num_qubits_ + 3) / 4;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "x:%0*llx,z:%0*llx", digits,
                static_cast<unsigned long long>(x_mask_), digits,
                static_cast<unsigned long long>(z_mask_));
  return std::string(buf);
}

}  // namespace prslab
