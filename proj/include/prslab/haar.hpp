// haar.hpp -- Haar-random sampling and concentration-of-measure experiments
#pragma once

#include <cstdint>

#include "prslab/common.hpp"
#include "prslab/rand.hpp"
#include "prslab/state_vector.hpp"

namespace prslab {

struct ConcentrationReport {
  std::int64_t dim = 0;
  double delta = 0.0;
  std::int64_t trials = 0;
  // Fraction of samples whose statistic met or exceeded delta.
  double exceed_fraction = 0.0;
  // Meaning depends on the experiment: for prefix_concentration it is the
  // mean over trials of max_x |p_x - 2^{-d}|; for the post-selection check it
  // is the trace distance of the empirical mean residual to I/2^n.
  double empirical_mean = 0.0;
};

// Uniform (Haar) pure state on m qubits: normalized vector of complex
// standard Gaussians.
StateVector haar_state(int num_qubits, RandomStream& rng);

// Haar unitary of the given dimension via QR of a complex Ginibre matrix with
// the phase-corrected diagonal.
Mat haar_unitary(std::int64_t dim, RandomStream& rng);

// Samples Haar states on d+n qubits and reports how often some prefix
// probability deviates from 2^{-d} by at least delta.
ConcentrationReport prefix_concentration(int d, int n, double delta,
                                         std::int64_t trials,
                                         RandomStream& rng, int threads = 1);

// Samples Haar states on d+n qubits, post-selects prefix outcome x, and
// reports the trace distance between the empirical mean residual and the
// maximally mixed state on n qubits.
ConcentrationReport postselect_invariance_check(int d, int n, std::uint64_t x,
                                                std::int64_t trials,
                                                RandomStream& rng,
                                                int threads = 1);

}  // namespace prslab
