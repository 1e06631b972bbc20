#include "riskchain/crypto.hpp"

#include "riskchain/errors.hpp"

#include <openssl/sha.h>

namespace riskchain {

Hash256 sha256(std::span<const std::uint8_t> data) {
    Hash256 out{};
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Hash256 sha256(const std::string& data) {
    return sha256(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Hash256 keyed_digest(const Hash256& secret, std::span<const std::uint8_t> message) {
    std::vector<std::uint8_t> buf;
    buf.reserve(secret.size() + message.size());
    buf.insert(buf.end(), secret.begin(), secret.end());
    buf.insert(buf.end(), message.begin(), message.end());
    return sha256(buf);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {
int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

std::vector<std::uint8_t> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw SchemaError("hex string has odd length");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw SchemaError("invalid hex digit in '" + hex + "'");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

Hash256 hash_from_hex(const std::string& hex) {
    auto bytes = from_hex(hex);
    if (bytes.size() != 32) throw SchemaError("expected 32-byte hex digest, got " + std::to_string(bytes.size()));
    Hash256 out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

} // namespace riskchain
