#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "srds/errors.hpp"

namespace srds {

using Bytes = std::vector<uint8_t>;

inline void append_bytes(Bytes& out, const uint8_t* p, size_t n) {
    out.insert(out.end(), p, p + n);
}

inline void append_bytes(Bytes& out, const Bytes& b) {
    out.insert(out.end(), b.begin(), b.end());
}

inline void append_be16(Bytes& out, uint16_t v) {
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

inline void append_be32(Bytes& out, uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

inline void append_be64(Bytes& out, uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

// Unsigned LEB128.
inline void append_varint(Bytes& out, uint64_t v) {
    while (v >= 0x80) {
        out.push_back(uint8_t(v) | 0x80);
        v >>= 7;
    }
    out.push_back(uint8_t(v));
}

class ByteReader {
public:
    explicit ByteReader(const Bytes& b) : data_(b.data()), size_(b.size()) {}
    ByteReader(const uint8_t* p, size_t n) : data_(p), size_(n) {}

    bool done() const { return pos_ == size_; }
    size_t remaining() const { return size_ - pos_; }

    uint64_t read_varint() {
        uint64_t v = 0;
        int shift = 0;
        while (true) {
            if (pos_ >= size_) throw MalformedInput("varint: truncated");
            if (shift > 63) throw MalformedInput("varint: overlong");
            uint8_t b = data_[pos_++];
            v |= uint64_t(b & 0x7f) << shift;
            if (!(b & 0x80)) return v;
            shift += 7;
        }
    }

    Bytes read_bytes(size_t n) {
        if (remaining() < n) throw MalformedInput("bytes: truncated");
        Bytes out(data_ + pos_, data_ + pos_ + n);
        pos_ += n;
        return out;
    }

private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

inline std::string to_hex(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(b.size() * 2);
    for (uint8_t c : b) {
        s.push_back(digits[c >> 4]);
        s.push_back(digits[c & 0xf]);
    }
    return s;
}

inline Bytes from_hex(const std::string& s) {
    if (s.size() % 2) throw std::runtime_error("hex: odd length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::runtime_error("hex: bad digit");
    };
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = uint8_t(nib(s[2 * i]) << 4 | nib(s[2 * i + 1]));
    return out;
}

// MSB-first bit of a byte string; bit 0 is the top bit of byte 0.
inline int get_bit(const Bytes& b, size_t i) {
    return (b[i / 8] >> (7 - i % 8)) & 1;
}

}  // namespace srds
