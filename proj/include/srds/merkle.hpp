#pragma once

#include <vector>

#include "srds/errors.hpp"
#include "srds/primitive.hpp"

namespace srds {

// Seeded Merkle hash proof system. Leaf list padded to the next power of two
// with all-zero 32-byte blocks; a 1-leaf tree is its own root (no padding).

struct MerkleProof {
    uint64_t leaf_index = 0;   // 1-based
    Digest leaf_digest{};      // base pair
    std::vector<Digest> siblings;  // bottom-up, one per level
};

inline Digest merkle_leaf_hash(const Seed& seed, const Bytes& x) {
    Bytes buf;
    buf.reserve(1 + seed.size() + x.size());
    buf.push_back(tag::kMerkleLeaf);
    append_bytes(buf, seed);
    append_bytes(buf, x);
    return sha256(buf);
}

inline Digest merkle_node_hash(const Seed& seed, const Digest& l, const Digest& r) {
    Bytes buf;
    buf.reserve(1 + seed.size() + 64);
    buf.push_back(tag::kMerkleNode);
    append_bytes(buf, seed);
    append_bytes(buf, l.data(), l.size());
    append_bytes(buf, r.data(), r.size());
    return sha256(buf);
}

inline size_t merkle_padded_size(size_t n) {
    size_t p = 1;
    while (p < n) p *= 2;
    return p;
}

// All levels of the padded tree, levels[0] = leaf digests, back() = {root}.
inline std::vector<std::vector<Digest>> merkle_levels(const Seed& seed,
                                                      const std::vector<Bytes>& leaves) {
    if (leaves.empty()) throw ParameterError("merkle: empty leaf list");
    size_t pad = merkle_padded_size(leaves.size());
    std::vector<std::vector<Digest>> levels;
    levels.emplace_back();
    levels[0].reserve(pad);
    const Bytes zero_block(32, 0);
    for (size_t i = 0; i < pad; ++i)
        levels[0].push_back(merkle_leaf_hash(seed, i < leaves.size() ? leaves[i] : zero_block));
    while (levels.back().size() > 1) {
        const auto& prev = levels.back();
        std::vector<Digest> next;
        next.reserve(prev.size() / 2);
        for (size_t i = 0; i + 1 < prev.size(); i += 2)
            next.push_back(merkle_node_hash(seed, prev[i], prev[i + 1]));
        levels.push_back(std::move(next));
    }
    return levels;
}

inline Digest merkle_root(const Seed& seed, const std::vector<Bytes>& leaves) {
    return merkle_levels(seed, leaves).back()[0];
}

inline MerkleProof merkle_prove_from_levels(const std::vector<std::vector<Digest>>& levels,
                                            uint64_t leaf_index_1based) {
    if (leaf_index_1based < 1 || leaf_index_1based > levels[0].size())
        throw ParameterError("merkle: leaf index out of range");
    MerkleProof proof;
    proof.leaf_index = leaf_index_1based;
    proof.leaf_digest = levels[0][leaf_index_1based - 1];
    uint64_t j = leaf_index_1based;
    for (size_t lvl = 0; lvl + 1 < levels.size(); ++lvl) {
        uint64_t sib = (j % 2) ? j + 1 : j - 1;
        proof.siblings.push_back(levels[lvl][sib - 1]);
        j = (j + 1) / 2;
    }
    return proof;
}

inline MerkleProof merkle_prove(const Seed& seed, const std::vector<Bytes>& leaves,
                                uint64_t leaf_index_1based) {
    if (leaf_index_1based < 1 || leaf_index_1based > leaves.size())
        throw ParameterError("merkle: leaf index out of range");
    return merkle_prove_from_levels(merkle_levels(seed, leaves), leaf_index_1based);
}

inline bool merkle_verify(const Seed& seed, const Bytes& x, const Digest& root,
                          const MerkleProof& proof) {
    if (proof.leaf_index < 1) throw MalformedInput("merkle: bad leaf index");
    if (merkle_leaf_hash(seed, x) != proof.leaf_digest) return false;
    Digest d = proof.leaf_digest;
    uint64_t j = proof.leaf_index;
    for (const Digest& sib : proof.siblings) {
        d = (j % 2) ? merkle_node_hash(seed, d, sib) : merkle_node_hash(seed, sib, d);
        j = (j + 1) / 2;
    }
    if (j != 1) throw MalformedInput("merkle: proof length inconsistent with index");
    return d == root;
}

inline Bytes merkle_encode_proof(const MerkleProof& p) {
    Bytes out;
    append_varint(out, p.leaf_index);
    append_bytes(out, p.leaf_digest.data(), p.leaf_digest.size());
    append_varint(out, p.siblings.size());
    for (const Digest& s : p.siblings) append_bytes(out, s.data(), s.size());
    return out;
}

inline MerkleProof merkle_decode_proof(ByteReader& r) {
    MerkleProof p;
    p.leaf_index = r.read_varint();
    Bytes d = r.read_bytes(32);
    std::copy(d.begin(), d.end(), p.leaf_digest.begin());
    uint64_t n = r.read_varint();
    if (n > 64) throw MalformedInput("merkle: proof too deep");
    for (uint64_t i = 0; i < n; ++i) {
        Bytes s = r.read_bytes(32);
        Digest sd;
        std::copy(s.begin(), s.end(), sd.begin());
        p.siblings.push_back(sd);
    }
    return p;
}

}  // namespace srds
