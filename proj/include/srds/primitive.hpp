#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "srds/bytes.hpp"
#include "srds/sha256.hpp"

namespace srds {

// Single fixed hash primitive (SHA-256) in counter mode behind domain tags.
// Every derived function below is pinned in docs/encodings.md.
namespace tag {
constexpr uint8_t kMerkleLeaf = 0x00;
constexpr uint8_t kMerkleNode = 0x01;
constexpr uint8_t kOtsG = 0x02;
constexpr uint8_t kPrg = 0x03;
constexpr uint8_t kSubsetPrf = 0x04;
constexpr uint8_t kMsgDigest = 0x05;
constexpr uint8_t kPcdTranscript = 0x06;
constexpr uint8_t kMockProof = 0x07;
constexpr uint8_t kDerive = 0x08;
}  // namespace tag

using Seed = Bytes;  // 32 bytes everywhere

inline Digest tagged_hash(uint8_t t, const Bytes& payload) {
    Bytes buf;
    buf.reserve(1 + payload.size());
    buf.push_back(t);
    append_bytes(buf, payload);
    return sha256(buf);
}

// Length-doubling OWF for one-time signatures: kappa -> 2*kappa bits.
inline Bytes ots_g(const Bytes& x, int kappa_bits) {
    Digest d = tagged_hash(tag::kOtsG, x);
    size_t n = size_t(kappa_bits) / 4;  // 2*kappa bits in bytes
    return Bytes(d.begin(), d.begin() + n);
}

inline Bytes prg(const Seed& seed, size_t nbytes) {
    Bytes out;
    out.reserve(nbytes);
    Bytes block;
    block.reserve(1 + seed.size() + 8);
    for (uint64_t ctr = 0; out.size() < nbytes; ++ctr) {
        block.clear();
        block.push_back(tag::kPrg);
        append_bytes(block, seed);
        append_be64(block, ctr);
        Digest d = sha256(block);
        size_t take = nbytes - out.size();
        if (take > 32) take = 32;
        out.insert(out.end(), d.begin(), d.begin() + take);
    }
    return out;
}

// Root-seed derivation tree: scenario -> repetition -> party streams.
inline Seed derive(const Seed& seed, const std::string& label, uint64_t index) {
    Bytes buf;
    buf.push_back(tag::kDerive);
    append_bytes(buf, seed);
    append_be32(buf, uint32_t(label.size()));
    append_bytes(buf, reinterpret_cast<const uint8_t*>(label.data()), label.size());
    append_be64(buf, index);
    return digest_bytes(sha256(buf));
}

inline Bytes message_digest(const Bytes& m, int bits) {
    Digest d = tagged_hash(tag::kMsgDigest, m);
    return Bytes(d.begin(), d.begin() + bits / 8);
}

inline Seed seed_from_u64(uint64_t v) {
    Seed s(32, 0);
    for (int i = 0; i < 8; ++i) s[24 + i] = uint8_t(v >> (56 - 8 * i));
    return s;
}

// Counter-mode stream of 64-bit words under a tag, for rejection sampling.
class PrfStream {
public:
    PrfStream(uint8_t t, const Seed& seed, uint64_t instance) {
        prefix_.push_back(t);
        append_bytes(prefix_, seed);
        append_be64(prefix_, instance);
    }

    uint64_t next_u64() {
        if (word_ == 4) {
            Bytes buf = prefix_;
            append_be64(buf, ctr_++);
            cur_ = sha256(buf);
            word_ = 0;
        }
        const uint8_t* p = cur_.data() + 8 * word_++;
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | p[i];
        return v;
    }

    // Uniform draw in [0, n) by rejection.
    uint64_t next_below(uint64_t n) {
        uint64_t lim = n ? (~uint64_t(0) / n) * n : 0;
        while (true) {
            uint64_t w = next_u64();
            if (w < lim) return w % n;
        }
    }

private:
    Bytes prefix_;
    Digest cur_{};
    int word_ = 4;
    uint64_t ctr_ = 0;
};

// Statistical-only engine (committee shuffles, Monte-Carlo sampling); all
// protocol-visible randomness goes through the SHA-256 primitives instead.
inline std::mt19937_64 stat_engine(const Seed& seed, const std::string& label) {
    Seed s = derive(seed, label, 0);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | s[i];
    return std::mt19937_64(v);
}

}  // namespace srds
