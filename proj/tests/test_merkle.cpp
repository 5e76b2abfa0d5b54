#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "srds/merkle.hpp"

using namespace srds;
using testutil::bytes_of;
using testutil::to_hex;

// Frozen vectors from tools/oracle_merkle.py (seed_from_u64(3)).

TEST_CASE("single leaf trees are their own root") {
    Seed seed = seed_from_u64(3);
    std::vector<Bytes> one{bytes_of("solo")};
    Digest root = merkle_root(seed, one);
    CHECK(to_hex(root) == "0194f9e3ee35c59f2ae9fefef4192c24fea562729e76ee28a80ffaaf3fab621a");
    CHECK(root == merkle_leaf_hash(seed, one[0]));
    MerkleProof p = merkle_prove(seed, one, 1);
    CHECK(p.siblings.empty());
    CHECK(merkle_verify(seed, one[0], root, p));
}

TEST_CASE("padded tree root and proof match the reference") {
    Seed seed = seed_from_u64(3);
    std::vector<Bytes> leaves;
    for (int i = 0; i < 5; ++i) leaves.push_back(bytes_of("leaf-" + std::to_string(i)));

    Digest root = merkle_root(seed, leaves);
    CHECK(to_hex(root) == "614033d69de67f3aff0f212cb5b664497882a662989da0c223f134d75f8ab29b");

    MerkleProof p = merkle_prove(seed, leaves, 3);
    CHECK(to_hex(p.leaf_digest) ==
          "67fbb1a4e4c3917ab60c76a30b9b61f08101ab26f9cf5dac4df82c070e5ab99e");
    REQUIRE(p.siblings.size() == 3);
    CHECK(to_hex(p.siblings[0]) ==
          "00247de763144fca86a0f00a36a25bd1dbcad5e6ea665be3ae3f830c6e5e0f31");
    CHECK(to_hex(p.siblings[1]) ==
          "5b5a22733d1e9e32089b4c5a79fbbe5718613f4a3babebf5a40df078e47e6ac9");
    CHECK(to_hex(p.siblings[2]) ==
          "bdde5dacff17aaee28e08a16f3d1f6a8832275b7f839b847eb65b11c8819a3bc");
    CHECK(merkle_verify(seed, leaves[2], root, p));
    CHECK_FALSE(merkle_verify(seed, leaves[1], root, p));

    // An explicit zero block equals the implicit padding leaf.
    std::vector<Bytes> six = leaves;
    six.push_back(Bytes(32, 0));
    CHECK(merkle_root(seed, six) == root);
}

TEST_CASE("64-leaf root matches the reference") {
    std::vector<Bytes> leaves;
    for (int i = 0; i < 64; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "item-%02d", i);
        leaves.push_back(bytes_of(buf));
    }
    CHECK(to_hex(merkle_root(seed_from_u64(9), leaves)) ==
          "413360cbdae4d74000cd1c9eb07aace3950047fb081679b7734b20b82e079cd5");
}

TEST_CASE("completeness over all leaf positions and sizes") {
    for (size_t n : {size_t(1), size_t(2), size_t(3), size_t(5), size_t(8), size_t(13),
                     size_t(16), size_t(17)}) {
        Seed seed = derive(seed_from_u64(11), "tree", n);
        std::vector<Bytes> leaves;
        for (size_t i = 0; i < n; ++i) leaves.push_back(prg(derive(seed, "leaf", i), 10));
        auto levels = merkle_levels(seed, leaves);
        Digest root = levels.back()[0];
        for (size_t j = 1; j <= n; ++j) {
            MerkleProof p = merkle_prove_from_levels(levels, j);
            CHECK(merkle_verify(seed, leaves[j - 1], root, p));
        }
    }
}

TEST_CASE("proofs fail closed under tampering and misuse") {
    Seed seed = seed_from_u64(12);
    std::vector<Bytes> leaves;
    for (size_t i = 0; i < 8; ++i) leaves.push_back(prg(derive(seed, "leaf", i), 16));
    Digest root = merkle_root(seed, leaves);
    MerkleProof p = merkle_prove(seed, leaves, 5);

    SECTION("flipped sibling bit") {
        p.siblings[1][7] ^= 1;
        CHECK_FALSE(merkle_verify(seed, leaves[4], root, p));
    }
    SECTION("wrong seed") {
        CHECK_FALSE(merkle_verify(seed_from_u64(13), leaves[4], root, p));
    }
    SECTION("proof under a different index") {
        p.leaf_index = 6;
        CHECK_FALSE(merkle_verify(seed, leaves[4], root, p));
    }
    SECTION("short proof is inconsistent, not just invalid") {
        p.siblings.pop_back();
        CHECK_THROWS_AS(merkle_verify(seed, leaves[4], root, p), MalformedInput);
    }
    SECTION("index zero is malformed") {
        p.leaf_index = 0;
        CHECK_THROWS_AS(merkle_verify(seed, leaves[4], root, p), MalformedInput);
    }
    SECTION("out-of-range prove") {
        CHECK_THROWS_AS(merkle_prove(seed, leaves, 9), ParameterError);
        CHECK_THROWS_AS(merkle_prove(seed, leaves, 0), ParameterError);
    }
    SECTION("empty leaf list") {
        CHECK_THROWS_AS(merkle_root(seed, {}), ParameterError);
    }
}

TEST_CASE("proof encoding round trips") {
    Seed seed = seed_from_u64(14);
    std::vector<Bytes> leaves;
    for (size_t i = 0; i < 6; ++i) leaves.push_back(prg(derive(seed, "leaf", i), 8));
    MerkleProof p = merkle_prove(seed, leaves, 4);
    Bytes enc = merkle_encode_proof(p);
    ByteReader r(enc);
    MerkleProof back = merkle_decode_proof(r);
    CHECK(r.remaining() == 0);
    CHECK(back.leaf_index == p.leaf_index);
    CHECK(back.leaf_digest == p.leaf_digest);
    CHECK(back.siblings == p.siblings);
}
