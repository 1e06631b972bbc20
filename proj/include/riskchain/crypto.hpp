#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace riskchain {

using Hash256 = std::array<std::uint8_t, 32>;

constexpr Hash256 kZeroHash{};

/// SHA-256 digest (OpenSSL libcrypto under the hood).
Hash256 sha256(std::span<const std::uint8_t> data);
Hash256 sha256(const std::string& data);

/// Keyed-hash simulated signature: SHA-256(secret || message).
/// Stands in for a real digital signature in this closed simulation; verify
/// by recomputing with the registered secret.
Hash256 keyed_digest(const Hash256& secret, std::span<const std::uint8_t> message);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(const std::string& hex);
Hash256 hash_from_hex(const std::string& hex);

} // namespace riskchain
