#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "srds/errors.hpp"
#include "srds/ots.hpp"
#include "srds/primitive.hpp"

namespace srds {

inline int ceil_log2(uint64_t n) {
    int l = 0;
    uint64_t p = 1;
    while (p < n) { p *= 2; ++l; }
    return l;
}

// Size budget: 64 * ceil(log2 n)^2 * kappa bits for an instance over n IDs.
inline uint64_t default_alpha_bits(uint64_t n, int kappa) {
    uint64_t lg = uint64_t(ceil_log2(n));
    return 64 * lg * lg * uint64_t(kappa);
}

struct SrdsParams {
    uint32_t n = 0;             // signing IDs, 1-based
    int kappa = 32;             // bits
    int msg_bits = 32;          // hash-then-sign digest width
    uint64_t alpha_bytes = 0;   // payload budget, bytes
    Seed setup_seed;
};

// Aggregate envelope. Base signatures have id_min == id_max == the signer's
// ID; the empty aggregate carries the sentinel (0, 0) since IDs are 1-based.
struct SrdsSignature {
    Bytes message;
    uint64_t id_min = 0;
    uint64_t id_max = 0;
    Bytes payload;

    bool is_base() const { return id_min == id_max && id_min != 0; }

    Bytes encode() const {
        Bytes out;
        append_varint(out, message.size());
        append_bytes(out, message);
        append_varint(out, id_min);
        append_varint(out, id_max);
        append_varint(out, payload.size());
        append_bytes(out, payload);
        return out;
    }

    static SrdsSignature decode(const Bytes& b) {
        ByteReader r(b);
        SrdsSignature s;
        uint64_t ml = r.read_varint();
        if (ml > (1u << 20)) throw MalformedInput("signature: message too long");
        s.message = r.read_bytes(size_t(ml));
        s.id_min = r.read_varint();
        s.id_max = r.read_varint();
        uint64_t pl = r.read_varint();
        if (pl != r.remaining()) throw MalformedInput("signature: payload length mismatch");
        s.payload = r.read_bytes(size_t(pl));
        return s;
    }

    bool operator==(const SrdsSignature& o) const {
        return message == o.message && id_min == o.id_min && id_max == o.id_max &&
               payload == o.payload;
    }
};

struct SrdsKeyPair {
    OtsKeyPair ots;
    bool keyed() const { return ots.keyed(); }
};

// Scheme interface. Decomposability contract: aggregate1 is deterministic
// and may inspect the key registry; aggregate2 never touches keys (all key
// material it needs arrives inside s_sig elements).
class SrdsScheme {
public:
    virtual ~SrdsScheme() = default;

    virtual const SrdsParams& params() const = 0;
    virtual const char* name() const = 0;

    virtual SrdsKeyPair keygen(const Seed& rng) const = 0;

    // Independent copy, so callers may mutate keys without affecting shared
    // setup state.
    virtual std::unique_ptr<SrdsScheme> clone() const = 0;

    virtual void set_keys(std::vector<SrdsKeyPair> keys) = 0;
    virtual const std::vector<SrdsKeyPair>& keys() const = 0;
    // Bare-PKI substitution; id is 1-based.
    virtual void replace_key(uint32_t id, SrdsKeyPair kp) = 0;

    // nullopt when the key cannot sign (oblivious key).
    virtual std::optional<SrdsSignature> sign(uint32_t id, const Bytes& m,
                                              const SrdsKeyPair& kp) const = 0;

    // Canonical element list, or nullopt on size-budget overflow. Invalid,
    // wrong-message and malformed inputs are dropped, not errors.
    virtual std::optional<std::vector<Bytes>> aggregate1(
        const Bytes& m, const std::vector<SrdsSignature>& in) const = 0;

    virtual SrdsSignature aggregate2(const Bytes& m,
                                     const std::vector<Bytes>& s_sig) const = 0;

    virtual bool verify(const Bytes& m, const SrdsSignature& sig) const = 0;

    std::optional<SrdsSignature> aggregate(const Bytes& m,
                                           const std::vector<SrdsSignature>& in) const {
        auto s1 = aggregate1(m, in);
        if (!s1) return std::nullopt;
        return aggregate2(m, *s1);
    }
};

}  // namespace srds
