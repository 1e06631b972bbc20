#pragma once

#include "riskchain/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace riskchain {

/// Canonical byte encoder: fixed-width big-endian integers, IEEE-754 bit
/// patterns for doubles, length-prefixed UTF-8 strings. Bit-exact across
/// platforms; non-finite doubles are rejected, never encoded.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u32(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8) {
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }

    void u64(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8) {
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }

    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

    void f64(double v) {
        if (!std::isfinite(v)) {
            throw DomainError("cannot serialize non-finite value");
        }
        u64(std::bit_cast<std::uint64_t>(v));
    }

    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    void raw(std::span<const std::uint8_t> bytes) {
        buf_.insert(buf_.end(), bytes.begin(), bytes.end());
    }

    const std::vector<std::uint8_t>& bytes() const { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

} // namespace riskchain
