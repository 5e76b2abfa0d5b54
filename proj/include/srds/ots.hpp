#pragma once

#include <optional>
#include <vector>

#include "srds/errors.hpp"
#include "srds/primitive.hpp"

namespace srds {

// Lamport one-time signatures over L-bit messages with kappa-bit preimages.
// Keys may be oblivious: a verification key sampled uniformly with no
// signing key, indistinguishable from a real key by the OWF assumption.
// One-time reuse is a caller contract; the simulator signs at most once per
// virtual identity.

struct OtsKeyPair {
    int msg_bits = 0;    // L
    int kappa = 0;       // bits, multiple of 8
    // vk[b*L + i] is the image for message bit value b at position i.
    std::vector<Bytes> vk;                 // 2L entries of 2*kappa bits
    std::optional<std::vector<Bytes>> sk;  // 2L entries of kappa bits; keyed iff present

    bool keyed() const { return sk.has_value(); }
};

struct OtsSignature {
    std::vector<Bytes> preimages;  // L entries of kappa bits
};

inline void check_ots_params(int msg_bits, int kappa) {
    if (msg_bits < 1) throw ParameterError("ots: msg_bits must be >= 1");
    if (kappa < 8 || kappa % 8) throw ParameterError("ots: kappa must be a multiple of 8, >= 8");
}

inline OtsKeyPair ots_keygen(const Seed& seed, int msg_bits, int kappa) {
    check_ots_params(msg_bits, kappa);
    const size_t L = size_t(msg_bits), sk_len = size_t(kappa) / 8;
    Bytes stream = prg(seed, 2 * L * sk_len);
    OtsKeyPair kp;
    kp.msg_bits = msg_bits;
    kp.kappa = kappa;
    kp.sk.emplace();
    kp.sk->reserve(2 * L);
    kp.vk.reserve(2 * L);
    for (size_t e = 0; e < 2 * L; ++e) {
        Bytes entry(stream.begin() + e * sk_len, stream.begin() + (e + 1) * sk_len);
        kp.vk.push_back(ots_g(entry, kappa));
        kp.sk->push_back(std::move(entry));
    }
    return kp;
}

inline OtsKeyPair ots_oblivious_keygen(const Seed& seed, int msg_bits, int kappa) {
    check_ots_params(msg_bits, kappa);
    const size_t L = size_t(msg_bits), vk_len = size_t(kappa) / 4;
    Bytes stream = prg(seed, 2 * L * vk_len);
    OtsKeyPair kp;
    kp.msg_bits = msg_bits;
    kp.kappa = kappa;
    kp.vk.reserve(2 * L);
    for (size_t e = 0; e < 2 * L; ++e)
        kp.vk.emplace_back(stream.begin() + e * vk_len, stream.begin() + (e + 1) * vk_len);
    return kp;
}

// message must be exactly ceil(L/8) bytes; bits beyond L must be zero.
inline void check_ots_message(const Bytes& message, int msg_bits) {
    size_t want = (size_t(msg_bits) + 7) / 8;
    if (message.size() != want)
        throw MalformedInput("ots: message length mismatch");
    for (size_t i = size_t(msg_bits); i < want * 8; ++i)
        if (get_bit(message, i)) throw MalformedInput("ots: nonzero padding bits");
}

inline OtsSignature ots_sign(const OtsKeyPair& kp, const Bytes& message) {
    if (!kp.keyed()) throw NoSigningKey("ots: no signing key");
    check_ots_message(message, kp.msg_bits);
    OtsSignature sig;
    sig.preimages.reserve(size_t(kp.msg_bits));
    for (int i = 0; i < kp.msg_bits; ++i) {
        int b = get_bit(message, size_t(i));
        sig.preimages.push_back((*kp.sk)[size_t(b) * kp.msg_bits + i]);
    }
    return sig;
}

inline bool ots_verify(const OtsKeyPair& kp, const Bytes& message, const OtsSignature& sig) {
    check_ots_message(message, kp.msg_bits);
    if (sig.preimages.size() != size_t(kp.msg_bits))
        throw MalformedInput("ots: signature length mismatch");
    if (kp.vk.size() != 2 * size_t(kp.msg_bits))
        throw MalformedInput("ots: verification key length mismatch");
    for (int i = 0; i < kp.msg_bits; ++i) {
        if (sig.preimages[size_t(i)].size() != size_t(kp.kappa) / 8)
            throw MalformedInput("ots: preimage length mismatch");
        int b = get_bit(message, size_t(i));
        if (ots_g(sig.preimages[size_t(i)], kp.kappa) != kp.vk[size_t(b) * kp.msg_bits + i])
            return false;
    }
    return true;
}

inline Bytes ots_encode_vk(const OtsKeyPair& kp) {
    Bytes out;
    append_varint(out, kp.vk.size());
    for (const Bytes& e : kp.vk) {
        append_varint(out, e.size());
        append_bytes(out, e);
    }
    return out;
}

inline Bytes ots_encode_sig(const OtsSignature& sig) {
    Bytes out;
    append_varint(out, sig.preimages.size());
    for (const Bytes& e : sig.preimages) {
        append_varint(out, e.size());
        append_bytes(out, e);
    }
    return out;
}

inline OtsKeyPair ots_decode_vk(ByteReader& r, int msg_bits, int kappa) {
    check_ots_params(msg_bits, kappa);
    OtsKeyPair kp;
    kp.msg_bits = msg_bits;
    kp.kappa = kappa;
    uint64_t n = r.read_varint();
    if (n != 2 * uint64_t(msg_bits)) throw MalformedInput("ots: vk entry count mismatch");
    kp.vk.reserve(size_t(n));
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t len = r.read_varint();
        if (len != uint64_t(kappa) / 4) throw MalformedInput("ots: vk entry length mismatch");
        kp.vk.push_back(r.read_bytes(size_t(len)));
    }
    return kp;
}

inline OtsSignature ots_decode_sig(ByteReader& r) {
    OtsSignature sig;
    uint64_t n = r.read_varint();
    if (n > 4096) throw MalformedInput("ots: signature too long");
    sig.preimages.reserve(size_t(n));
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t len = r.read_varint();
        if (len > 4096) throw MalformedInput("ots: preimage too long");
        sig.preimages.push_back(r.read_bytes(size_t(len)));
    }
    return sig;
}

}  // namespace srds
