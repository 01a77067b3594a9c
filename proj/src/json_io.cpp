#include "prslab/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace prslab {

using nlohmann::json;

namespace {

json amps_to_json(const Vec& amps) {
  json out = json::array();
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    out.push_back({amps(i).real(), amps(i).imag()});
  }
  return out;
}

Vec amps_from_json(const json& j) {
  Vec amps(static_cast<std::int64_t>(j.size()));
  std::int64_t i = 0;
  for (const auto& pair : j) {
    amps(i++) = cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  return amps;
}

int qubits_for_dim(std::int64_t dim) {
  int qubits = 0;
  while ((std::int64_t{1} << qubits) < dim) ++qubits;
  if ((std::int64_t{1} << qubits) != dim) {
    throw std::invalid_argument("serialized dimension is not a power of two");
  }
  return qubits;
}

}  // namespace

json state_to_json(const StateVector& psi) {
  return json{{"num_qubits", psi.num_qubits()}, {"amps", amps_to_json(psi.amps())}};
}

StateVector state_from_json(const json& j) {
  Vec amps = amps_from_json(j.at("amps"));
  const int qubits = j.contains("num_qubits") ? j.at("num_qubits").get<int>()
                                              : qubits_for_dim(amps.size());
  return StateVector(qubits, std::move(amps));
}

json density_to_json(const DensityMatrix& rho) {
  json entries = json::array();
  for (std::int64_t r = 0; r < rho.dim(); ++r) {
    for (std::int64_t c = 0; c < rho.dim(); ++c) {
      entries.push_back({rho.mat()(r, c).real(), rho.mat()(r, c).imag()});
    }
  }
  return json{{"num_qubits", rho.num_qubits()}, {"entries", entries}};
}

DensityMatrix density_from_json(const json& j) {
  const int qubits = j.at("num_qubits").get<int>();
  const std::int64_t dim = dim_of_qubits(qubits);
  const auto& entries = j.at("entries");
  if (static_cast<std::int64_t>(entries.size()) != dim * dim) {
    throw std::invalid_argument("density entries have the wrong length");
  }
  Mat m(dim, dim);
  std::int64_t i = 0;
  for (const auto& pair : entries) {
    m(i / dim, i % dim) =
        cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
    ++i;
  }
  return DensityMatrix(qubits, std::move(m));
}

json abortable_to_json(const AbortableState& state) {
  return json{{"eta", state.eta}, {"amps", amps_to_json(state.psi.amps())}};
}

AbortableState abortable_from_json(const json& j) {
  const double eta = j.at("eta").get<double>();
  Vec amps = amps_from_json(j.at("amps"));
  const int qubits = qubits_for_dim(amps.size());
  if (eta <= 0.0) {
    return AbortableState::abort(qubits);
  }
  return AbortableState(eta, StateVector(qubits, std::move(amps)));
}

json ciphertext_to_json(const OtpCiphertext& ct) {
  json blocks = json::array();
  for (const auto& b : ct.blocks) {
    blocks.push_back(abortable_to_json(b));
  }
  return json{{"msg_len", ct.msg_len}, {"blocks", blocks}};
}

OtpCiphertext ciphertext_from_json(const json& j) {
  OtpCiphertext ct;
  ct.msg_len = j.at("msg_len").get<int>();
  for (const auto& b : j.at("blocks")) {
    ct.blocks.push_back(abortable_from_json(b));
  }
  return ct;
}

}  // namespace prslab
