// json_io.hpp -- wire formats: states as [re, im] pairs in basis-index order,
// density matrices row-major, abortable states as {eta, amps}.
#pragma once

#include <json.hpp>

#include "prslab/otp.hpp"
#include "prslab/prfs.hpp"
#include "prslab/state_vector.hpp"

namespace prslab {

nlohmann::json state_to_json(const StateVector& psi);
StateVector state_from_json(const nlohmann::json& j);

nlohmann::json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

nlohmann::json abortable_to_json(const AbortableState& state);
AbortableState abortable_from_json(const nlohmann::json& j);

nlohmann::json ciphertext_to_json(const OtpCiphertext& ct);
OtpCiphertext ciphertext_from_json(const nlohmann::json& j);

}  // namespace prslab
