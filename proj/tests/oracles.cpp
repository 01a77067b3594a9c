#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace prslab::oracles {

Mat unitary_completion(const Vec& first_column) {
  const std::int64_t dim = first_column.size();
  Mat m = Mat::Identity(dim, dim);
  m.col(0) = first_column;
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  // QR fixes the first column only up to phase; rotate it back.
  const cplx overlap = q.col(0).dot(first_column);  // <q0|g>
  q.col(0) *= overlap / std::abs(overlap);
  return q;
}

namespace {

// One pure input |theta> on E (x) Q.
CircuitTestResult circuit_tester_pure(const DensityMatrix& target,
                                      const Vec& theta, int env_qubits) {
  const int n = target.num_qubits();
  const std::int64_t dq = target.dim();
  const std::int64_t de = theta.size() / dq;

  // Purification |g> of rho on R (x) B with an n-qubit purifying register.
  Eigen::SelfAdjointEigenSolver<Mat> eig(target.mat());
  Vec g = Vec::Zero(dq * dq);
  for (std::int64_t j = 0; j < dq; ++j) {
    const double w = std::max(0.0, eig.eigenvalues()(j));
    if (w <= 0.0) continue;
    const Vec psi_j = eig.eigenvectors().col(j);
    // |psi_j>_R (x) |j>_B
    for (std::int64_t r = 0; r < dq; ++r) {
      g(r * dq + j) += std::sqrt(w) * psi_j(r);
    }
  }
  const Mat ghat = unitary_completion(g);

  // Global register order: E, Q, R, B.
  const std::int64_t drb = dq * dq;
  Vec global = Vec::Zero(de * dq * drb);
  for (std::int64_t e = 0; e < de; ++e) {
    for (std::int64_t q = 0; q < dq; ++q) {
      const cplx a = theta(e * dq + q);
      if (a == cplx(0.0, 0.0)) continue;
      for (std::int64_t rb = 0; rb < drb; ++rb) {
        global(((e * dq + q) * drb) + rb) = a * g(rb);
      }
    }
  }

  // Swap registers Q and R.
  Vec swapped = Vec::Zero(global.size());
  for (std::int64_t e = 0; e < de; ++e) {
    for (std::int64_t q = 0; q < dq; ++q) {
      for (std::int64_t r = 0; r < dq; ++r) {
        for (std::int64_t b = 0; b < dq; ++b) {
          swapped((((e * dq + q) * dq + r) * dq) + b) =
              global((((e * dq + r) * dq + q) * dq) + b);
        }
      }
    }
  }

  // Uncompute: apply ghat^dagger on (R, B).
  const Mat ghat_dag = ghat.adjoint();
  Vec final_state = Vec::Zero(swapped.size());
  for (std::int64_t eq = 0; eq < de * dq; ++eq) {
    final_state.segment(eq * drb, drb) =
        ghat_dag * swapped.segment(eq * drb, drb);
  }

  // Measure (R, B) in the computational basis; accept on all-zeros.
  CircuitTestResult result;
  result.post_accept = Mat::Zero(de, de);
  result.post_reject = Mat::Zero(de, de);
  for (std::int64_t a = 0; a < drb; ++a) {
    Mat branch = Mat::Zero(de, de);
    for (std::int64_t e = 0; e < de; ++e) {
      for (std::int64_t e2 = 0; e2 < de; ++e2) {
        cplx sum = 0.0;
        for (std::int64_t q = 0; q < dq; ++q) {
          sum += final_state(((e * dq + q) * drb) + a) *
                 std::conj(final_state(((e2 * dq + q) * drb) + a));
        }
        branch(e, e2) = sum;
      }
    }
    if (a == 0) {
      result.post_accept += branch;
    } else {
      result.post_reject += branch;
    }
  }
  result.p_accept = result.post_accept.trace().real();
  return result;
}

}  // namespace

CircuitTestResult circuit_tester(const DensityMatrix& target,
                                 const DensityMatrix& joint, int env_qubits) {
  const std::int64_t de = dim_of_qubits(env_qubits);
  Eigen::SelfAdjointEigenSolver<Mat> eig(joint.mat());
  CircuitTestResult total;
  total.post_accept = Mat::Zero(de, de);
  total.post_reject = Mat::Zero(de, de);
  for (std::int64_t i = 0; i < joint.dim(); ++i) {
    const double w = eig.eigenvalues()(i);
    if (w <= 1e-14) continue;
    const CircuitTestResult part =
        circuit_tester_pure(target, eig.eigenvectors().col(i), env_qubits);
    total.post_accept += w * part.post_accept;
    total.post_reject += w * part.post_reject;
  }
  total.p_accept = total.post_accept.trace().real();
  return total;
}

Mat sandwiched_accept_branch(const DensityMatrix& target,
                             const DensityMatrix& joint, int env_qubits) {
  const std::int64_t dq = target.dim();
  const std::int64_t de = dim_of_qubits(env_qubits);
  // (I (x) rho) sigma (I (x) rho), then trace out Q.
  Mat big = Mat::Zero(de * dq, de * dq);
  for (std::int64_t e = 0; e < de; ++e) {
    for (std::int64_t e2 = 0; e2 < de; ++e2) {
      big.block(e * dq, e2 * dq, dq, dq) =
          target.mat() *
          joint.mat().block(e * dq, e2 * dq, dq, dq) * target.mat();
    }
  }
  Mat out = Mat::Zero(de, de);
  for (std::int64_t e = 0; e < de; ++e) {
    for (std::int64_t e2 = 0; e2 < de; ++e2) {
      out(e, e2) = big.block(e * dq, e2 * dq, dq, dq).trace();
    }
  }
  return out;
}

}  // namespace prslab::oracles
