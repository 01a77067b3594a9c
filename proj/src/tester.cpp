#include "prslab/tester.hpp"

#include <stdexcept>

#include "prslab/qops.hpp"

namespace prslab {

TestOutcome apply_test_operator(const Mat& accept_op,
                                const DensityMatrix& joint, int env_qubits) {
  const int total = joint.num_qubits();
  if (env_qubits < 0 || env_qubits > total) {
    throw std::invalid_argument("tester: bad environment size");
  }
  const int target_qubits = total - env_qubits;
  const std::int64_t dq = dim_of_qubits(target_qubits);
  const std::int64_t de = dim_of_qubits(env_qubits);
  if (accept_op.rows() != dq || accept_op.cols() != dq) {
    throw std::invalid_argument("tester: accept operator dimension mismatch");
  }

  // R[e,e'] = sum_q ((I (x) M) sigma)[(e,q),(e',q)]
  //         = sum_{q,q'} M[q,q'] sigma[(e,q'),(e',q)].
  const Mat& sigma = joint.mat();
  Mat accept = Mat::Zero(de, de);
  for (std::int64_t e = 0; e < de; ++e) {
    for (std::int64_t e2 = 0; e2 < de; ++e2) {
      cplx sum = 0.0;
      for (std::int64_t q = 0; q < dq; ++q) {
        for (std::int64_t q2 = 0; q2 < dq; ++q2) {
          sum += accept_op(q, q2) * sigma(e * dq + q2, e2 * dq + q);
        }
      }
      accept(e, e2) = sum;
    }
  }
  // The reject branch is the complement; Tr_Q(sigma) minus the accept branch.
  Mat reduced = Mat::Zero(de, de);
  for (std::int64_t e = 0; e < de; ++e) {
    for (std::int64_t e2 = 0; e2 < de; ++e2) {
      cplx sum = 0.0;
      for (std::int64_t q = 0; q < dq; ++q) {
        sum += sigma(e * dq + q, e2 * dq + q);
      }
      reduced(e, e2) = sum;
    }
  }
  // The contraction can leave ~1e-16 anti-Hermitian residue; symmetrize so
  // the branches satisfy the DensityMatrix invariants exactly.
  accept = 0.5 * (accept + accept.adjoint()).eval();
  Mat reject = reduced - accept;

  TestOutcome out{accept.trace().real(),
                  DensityMatrix(env_qubits, std::move(accept), true),
                  DensityMatrix(env_qubits, std::move(reject), true)};
  return out;
}

TestOutcome test_channel(const DensityMatrix& target,
                         const DensityMatrix& joint, int env_qubits) {
  const Mat m1 = target.mat() * target.mat();
  return apply_test_operator(m1, joint, env_qubits);
}

Mat prfs_accept_operator(double eta, const StateVector& psi, bool flagged) {
  const std::int64_t dim = psi.dim();
  if (!flagged) {
    return (eta * eta) * (psi.amps() * psi.amps().adjoint());
  }
  Mat op = Mat::Zero(2 * dim, 2 * dim);
  op.topLeftCorner(dim, dim) =
      (eta * eta) * (psi.amps() * psi.amps().adjoint());
  return op;
}

TestOutcome test_prfs(const PrfsSpec& spec, const PrsKey& key, std::uint64_t x,
                      const DensityMatrix& joint, int env_qubits) {
  const int target_qubits = joint.num_qubits() - env_qubits;
  const AbortableState out = prfs_eval_exact(spec, key, x);
  bool flagged = false;
  if (target_qubits == spec.output_qubits + 1) {
    flagged = true;
  } else if (target_qubits != spec.output_qubits) {
    throw std::invalid_argument("test_prfs: tested register must have n or n+1 qubits");
  }
  const Mat m1 = (out.eta > 0.0)
                     ? prfs_accept_operator(out.eta, out.psi, flagged)
                     : Mat::Zero(dim_of_qubits(target_qubits),
                                 dim_of_qubits(target_qubits));
  return apply_test_operator(m1, joint, env_qubits);
}

TestOutcome test_product(std::span<const PrfsInstance> instances,
                         const DensityMatrix& joint, int env_qubits,
                         bool flagged_blocks) {
  if (instances.empty()) {
    throw std::invalid_argument("test_product: no blocks");
  }
  Mat m1;
  bool first = true;
  int block_qubits = 0;
  for (const auto& inst : instances) {
    const AbortableState out = prfs_eval_exact(inst.spec, inst.key, inst.input);
    const Mat block =
        (out.eta > 0.0)
            ? prfs_accept_operator(out.eta, out.psi, flagged_blocks)
            : Mat::Zero(
                  dim_of_qubits(inst.spec.output_qubits + (flagged_blocks ? 1 : 0)),
                  dim_of_qubits(inst.spec.output_qubits + (flagged_blocks ? 1 : 0)));
    block_qubits += inst.spec.output_qubits + (flagged_blocks ? 1 : 0);
    if (first) {
      m1 = block;
      first = false;
    } else {
      Mat next(m1.rows() * block.rows(), m1.cols() * block.cols());
      for (std::int64_t i = 0; i < m1.rows(); ++i) {
        for (std::int64_t j = 0; j < m1.cols(); ++j) {
          next.block(i * block.rows(), j * block.cols(), block.rows(),
                     block.cols()) = m1(i, j) * block;
        }
      }
      m1 = std::move(next);
    }
  }
  if (joint.num_qubits() != env_qubits + block_qubits) {
    throw std::invalid_argument("test_product: joint state has the wrong size");
  }
  return apply_test_operator(m1, joint, env_qubits);
}

SelfTestStats self_test_stats(const PrfsSpec& spec, std::uint64_t x,
                              std::uint64_t y,
                              const std::vector<PrsKey>& keys) {
  if (x == y) {
    throw std::invalid_argument("self_test_stats: inputs must differ");
  }
  if (keys.empty()) {
    throw std::invalid_argument("self_test_stats: empty keyset");
  }
  double match = 0.0;
  double mismatch = 0.0;
  for (const auto& key : keys) {
    const DensityMatrix own = prfs_eval_exact(spec, key, x).densify();
    const DensityMatrix other = prfs_eval_exact(spec, key, y).densify();
    match += test_prfs(spec, key, x, own, 0).p_accept;
    mismatch += test_prfs(spec, key, x, other, 0).p_accept;
  }
  const double count = static_cast<double>(keys.size());
  return SelfTestStats{match / count, mismatch / count};
}

}  // namespace prslab
