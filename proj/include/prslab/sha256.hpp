#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace prslab {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

// Big-endian 8-byte encoding, the fixed integer wire form for hashing.
std::array<std::uint8_t, 8> be64(std::uint64_t v);

}  // namespace prslab
