#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmsleuth/errors.hpp"

namespace pmsleuth {

using Bytes = std::vector<std::uint8_t>;

namespace detail {
inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace detail

/// Lowercase hex encoding, 0x-prefixed by default.
inline std::string to_hex(std::span<const std::uint8_t> data, bool prefix = true) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2 + (prefix ? 2 : 0));
    if (prefix) out += "0x";
    for (std::uint8_t b : data) {
        out += digits[b >> 4];
        out += digits[b & 0x0f];
    }
    return out;
}

/// Decodes hex with or without 0x prefix. Throws HexError on odd length or
/// non-hex characters. Surrounding ASCII whitespace is tolerated.
inline Bytes from_hex(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\n' ||
                             text.front() == '\r' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\n' ||
                             text.back() == '\r' || text.back() == '\t'))
        text.remove_suffix(1);
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        text.remove_prefix(2);
    if (text.size() % 2 != 0)
        throw HexError("hex string has odd length (" + std::to_string(text.size()) + ")");
    Bytes out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        int hi = detail::hex_nibble(text[i]);
        int lo = detail::hex_nibble(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw HexError("non-hex character at position " + std::to_string(i));
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

/// Fixed-width byte value with hex round-tripping. Ordered and hashable.
template <std::size_t N>
struct FixedBytes {
    std::array<std::uint8_t, N> bytes{};

    auto operator<=>(const FixedBytes&) const = default;

    std::string hex(bool prefix = true) const { return to_hex(bytes, prefix); }

    static FixedBytes from_hex(std::string_view text) {
        Bytes raw = pmsleuth::from_hex(text);
        if (raw.size() != N)
            throw HexError("expected " + std::to_string(N) + " bytes, got " +
                           std::to_string(raw.size()));
        FixedBytes out;
        std::copy(raw.begin(), raw.end(), out.bytes.begin());
        return out;
    }

    static FixedBytes from_bytes(std::span<const std::uint8_t> raw) {
        if (raw.size() != N)
            throw HexError("expected " + std::to_string(N) + " bytes, got " +
                           std::to_string(raw.size()));
        FixedBytes out;
        std::copy(raw.begin(), raw.end(), out.bytes.begin());
        return out;
    }

    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }
};

/// 20-byte account address.
using Address = FixedBytes<20>;
/// 4-byte function selector.
using Selector = FixedBytes<4>;
/// 32-byte EVM word (storage slots, storage values).
using Word = FixedBytes<32>;

/// Word from an unsigned integer, big-endian into the low-order bytes.
inline Word word_from_uint(std::uint64_t value) {
    Word w;
    for (int i = 0; i < 8; ++i)
        w.bytes[31 - i] = static_cast<std::uint8_t>(value >> (8 * i));
    return w;
}

/// Low-order 20 bytes of a word, per storage address packing.
inline Address address_from_word(const Word& w) {
    Address a;
    std::copy(w.bytes.begin() + 12, w.bytes.end(), a.bytes.begin());
    return a;
}

} // namespace pmsleuth
