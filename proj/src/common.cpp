#include "prslab/common.hpp"

#include <atomic>

namespace prslab {

namespace {
std::atomic<int> g_qubit_cap{14};
}

int qubit_cap() { return g_qubit_cap.load(std::memory_order_relaxed); }

void set_qubit_cap(int cap) {
  if (cap < 1 || cap > 30) {
    throw std::invalid_argument("qubit cap must be in [1, 30]");
  }
  g_qubit_cap.store(cap, std::memory_order_relaxed);
}

void check_qubit_cap(int qubits, const char* what) {
  if (qubits > qubit_cap()) {
    throw DimensionLimitError(std::string(what) + ": " +
                              std::to_string(qubits) +
                              " qubits exceeds the cap of " +
                              std::to_string(qubit_cap()));
  }
}

}  // namespace prslab
