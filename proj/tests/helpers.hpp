#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "srds/bytes.hpp"

namespace testutil {

inline srds::Bytes hex_bytes(const std::string& hex) {
    if (hex.size() % 2) throw std::invalid_argument("odd hex length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    srds::Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
        out.push_back(uint8_t(nib(hex[i]) << 4 | nib(hex[i + 1])));
    return out;
}

inline std::string to_hex(const uint8_t* p, size_t n) {
    static const char* d = "0123456789abcdef";
    std::string s;
    s.reserve(2 * n);
    for (size_t i = 0; i < n; ++i) {
        s.push_back(d[p[i] >> 4]);
        s.push_back(d[p[i] & 15]);
    }
    return s;
}

inline std::string to_hex(const srds::Bytes& b) { return to_hex(b.data(), b.size()); }

template <size_t N>
inline std::string to_hex(const std::array<uint8_t, N>& a) {
    return to_hex(a.data(), a.size());
}

inline srds::Bytes bytes_of(const std::string& s) { return srds::Bytes(s.begin(), s.end()); }

}  // namespace testutil
