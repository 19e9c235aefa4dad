#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "pmsleuth/bytes.hpp"
#include "pmsleuth/hash.hpp"

namespace pmsleuth::abi {

namespace detail {

inline bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

/// Canonical elementary ABI type names: uintN/intN (N = 8..256 step 8),
/// address, bool, string, bytes, bytesN (N = 1..32), function.
inline bool is_canonical_elementary(std::string_view t) {
    if (t == "address" || t == "bool" || t == "string" || t == "bytes" || t == "function")
        return true;
    auto numeric_suffix = [](std::string_view s) -> int {
        if (s.empty() || s.size() > 3) return -1;
        int v = 0;
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (t.starts_with("uint")) {
        int n = numeric_suffix(t.substr(4));
        return n >= 8 && n <= 256 && n % 8 == 0;
    }
    if (t.starts_with("int")) {
        int n = numeric_suffix(t.substr(3));
        return n >= 8 && n <= 256 && n % 8 == 0;
    }
    if (t.starts_with("bytes")) {
        int n = numeric_suffix(t.substr(5));
        return n >= 1 && n <= 32;
    }
    return false;
}

// Recursive-descent check of one canonical type at `pos`; advances past it.
inline bool check_canonical_type(std::string_view s, std::size_t& pos);

inline bool check_array_suffixes(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && s[pos] == '[') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos >= s.size() || s[pos] != ']') return false;
        ++pos;
    }
    return true;
}

inline bool check_canonical_type(std::string_view s, std::size_t& pos) {
    if (pos >= s.size()) return false;
    if (s[pos] == '(') {
        ++pos;
        if (pos < s.size() && s[pos] == ')') {
            ++pos; // empty tuple
        } else {
            while (true) {
                if (!check_canonical_type(s, pos)) return false;
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    continue;
                }
                break;
            }
            if (pos >= s.size() || s[pos] != ')') return false;
            ++pos;
        }
        return check_array_suffixes(s, pos);
    }
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos]))))
        ++pos;
    if (!is_canonical_elementary(s.substr(start, pos - start))) return false;
    return check_array_suffixes(s, pos);
}

} // namespace detail

/// True for canonical ABI signature text: identifier, "(", comma-joined
/// canonical types, ")". No spaces, no parameter names, no return types.
inline bool is_canonical_signature(std::string_view text) {
    std::size_t pos = 0;
    if (pos >= text.size() || !detail::is_ident_start(text[pos])) return false;
    while (pos < text.size() && detail::is_ident_char(text[pos]))
        ++pos;
    if (pos >= text.size() || text[pos] != '(') return false;
    ++pos;
    if (pos < text.size() && text[pos] == ')')
        return pos + 1 == text.size();
    while (true) {
        if (!detail::check_canonical_type(text, pos)) return false;
        if (pos < text.size() && text[pos] == ',') {
            ++pos;
            continue;
        }
        break;
    }
    if (pos >= text.size() || text[pos] != ')') return false;
    return pos + 1 == text.size();
}

/// First 4 bytes of keccak-256 over the canonical signature's ASCII bytes.
/// Throws SignatureError on non-canonical input.
inline Selector compute_selector(std::string_view signature_text) {
    if (!is_canonical_signature(signature_text))
        throw SignatureError("signature is not canonical ABI text: \"" +
                             std::string(signature_text) + "\"");
    return selector_from_hash(keccak256(signature_text));
}

} // namespace pmsleuth::abi
