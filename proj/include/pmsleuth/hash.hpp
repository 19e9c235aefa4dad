#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "pmsleuth/bytes.hpp"

namespace pmsleuth {

namespace detail {

inline std::uint64_t rotl64(std::uint64_t x, unsigned n) {
    return (x << n) | (x >> (64 - n));
}

inline void keccak_f1600(std::uint64_t s[25]) {
    static constexpr std::uint64_t round_constants[24] = {
        0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
        0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
        0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
        0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
        0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
        0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
        0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
        0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};
    static constexpr unsigned rot[24] = {1,  3,  6,  10, 15, 21, 28, 36,
                                         45, 55, 2,  14, 27, 41, 56, 8,
                                         25, 43, 62, 18, 39, 61, 20, 44};
    static constexpr unsigned pi[24] = {10, 7,  11, 17, 18, 3,  5,  16,
                                        8,  21, 24, 4,  15, 23, 19, 13,
                                        12, 2,  20, 14, 22, 9,  6,  1};
    std::uint64_t bc[5];
    for (int round = 0; round < 24; ++round) {
        // theta
        for (int i = 0; i < 5; ++i)
            bc[i] = s[i] ^ s[i + 5] ^ s[i + 10] ^ s[i + 15] ^ s[i + 20];
        for (int i = 0; i < 5; ++i) {
            std::uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5)
                s[j + i] ^= t;
        }
        // rho + pi
        std::uint64_t t = s[1];
        for (int i = 0; i < 24; ++i) {
            unsigned j = pi[i];
            bc[0] = s[j];
            s[j] = rotl64(t, rot[i]);
            t = bc[0];
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            for (int i = 0; i < 5; ++i)
                bc[i] = s[j + i];
            for (int i = 0; i < 5; ++i)
                s[j + i] ^= (~bc[(i + 1) % 5]) & bc[(i + 2) % 5];
        }
        s[0] ^= round_constants[round];
    }
}

inline std::uint64_t load_lane_le(const std::uint8_t* p) {
    std::uint64_t lane = 0;
    for (int i = 0; i < 8; ++i)
        lane |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return lane;
}

} // namespace detail

/// Keccak-256 (the pre-NIST padding variant used by the EVM, not SHA3-256).
inline Word keccak256(std::span<const std::uint8_t> data) {
    constexpr std::size_t rate = 136; // 1600/8 - 2*32
    std::uint64_t state[25] = {};
    std::uint8_t block[rate];

    std::size_t offset = 0;
    while (data.size() - offset >= rate) {
        for (std::size_t i = 0; i < rate / 8; ++i)
            state[i] ^= detail::load_lane_le(data.data() + offset + i * 8);
        detail::keccak_f1600(state);
        offset += rate;
    }

    std::size_t tail = data.size() - offset;
    std::memset(block, 0, rate);
    if (tail > 0) std::memcpy(block, data.data() + offset, tail);
    block[tail] ^= 0x01; // keccak domain padding
    block[rate - 1] ^= 0x80;
    for (std::size_t i = 0; i < rate / 8; ++i)
        state[i] ^= detail::load_lane_le(block + i * 8);
    detail::keccak_f1600(state);

    Word out;
    for (int i = 0; i < 4; ++i)
        for (int b = 0; b < 8; ++b)
            out.bytes[i * 8 + b] = static_cast<std::uint8_t>(state[i] >> (8 * b));
    return out;
}

inline Word keccak256(std::string_view text) {
    return keccak256(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// First 4 bytes of keccak-256, the EVM dispatch selector.
inline Selector selector_from_hash(const Word& h) {
    Selector s;
    std::copy(h.bytes.begin(), h.bytes.begin() + 4, s.bytes.begin());
    return s;
}

/// SHA-256 digest (used for cache keys and provenance hashes).
inline FixedBytes<32> sha256(std::span<const std::uint8_t> data) {
    FixedBytes<32> out;
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr);
    return out;
}

inline FixedBytes<32> sha256(std::string_view text) {
    return sha256(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

} // namespace pmsleuth
