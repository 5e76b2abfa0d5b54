#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "srds/primitive.hpp"

using namespace srds;
using testutil::bytes_of;
using testutil::hex_bytes;
using testutil::to_hex;

// Frozen vectors below were produced by tools/oracle_primitives.py, an
// independent reimplementation of docs/encodings.md on top of hashlib.

TEST_CASE("seed embedding puts the value in the low eight bytes") {
    CHECK(to_hex(seed_from_u64(1)) ==
          "0000000000000000000000000000000000000000000000000000000000000001");
    CHECK(to_hex(seed_from_u64(0x0123456789abcdefULL)) ==
          "00000000000000000000000000000000000000000000000001234567" "89abcdef");
}

TEST_CASE("seed derivation separates label and index") {
    Seed s1 = seed_from_u64(1);
    CHECK(to_hex(derive(s1, "oracle", 7)) ==
          "3a0c29e27cd60bb8774cff89fdc2796c475e6cf240778e2baa068b3768accdb8");
    CHECK(to_hex(derive(s1, "oracle", 8)) ==
          "6a6b11be46d8d3b4346ccbbeb211d44c4f75c00b0cfe927ae8f605e5f5c8759d");
    CHECK(to_hex(derive(s1, "oracles", 7)) ==
          "03807041ecba4b79946504660a5d44377d1ee7852b9c24a95cd6c9a6c10802ac");
}

TEST_CASE("tagged hash, length doubling and message digest") {
    CHECK(to_hex(tagged_hash(tag::kMsgDigest, bytes_of("abc"))) ==
          "b9966140c282469349e03c4921ff6be362b53b942410fbbfbb6cf488cc0171cb");
    CHECK(to_hex(ots_g(bytes_of("abcd"), 32)) == "4c2914ad20dbf0f6");
    CHECK(ots_g(bytes_of("abcd"), 32).size() == 8);  // 2*kappa bits
    CHECK(to_hex(message_digest(bytes_of("vote:1"), 32)) == "b2c7b4eb");
}

TEST_CASE("pseudorandom generator is a prefix-stable counter stream") {
    Seed s1 = seed_from_u64(1);
    CHECK(to_hex(prg(s1, 12)) == "7e85cad41d163b85f95f6b7d");
    CHECK(to_hex(prg(s1, 40)) ==
          "7e85cad41d163b85f95f6b7d7df35edccd3ff1ea0e83e12bb84519c2d54d7d50b9defdce5a0093c3");
    Seed s7 = derive(s1, "oracle", 7);
    CHECK(to_hex(prg(s7, 33)) ==
          "94f07e78378297bd39e86be14904b48c3031f391c4b58674ef0a240014011b3dd7");
    // Prefix stability across lengths (counter mode).
    Bytes a = prg(s1, 100), b = prg(s1, 64);
    CHECK(Bytes(a.begin(), a.begin() + 64) == b);
}

TEST_CASE("word stream emits four big-endian words per block") {
    PrfStream ws(tag::kPrg, seed_from_u64(1), 5);
    const uint64_t expect[6] = {0x2af574e0f9332c20ULL, 0xea20599fde2b3219ULL,
                                0x0c5e8bc58ed2b7b9ULL, 0x47e25b5ff57dbfc8ULL,
                                0x2979a37631745738ULL, 0xff231ee8778ea212ULL};
    for (uint64_t w : expect) CHECK(ws.next_u64() == w);
}

TEST_CASE("bounded draws use rejection sampling") {
    PrfStream ws(tag::kPrg, seed_from_u64(1), 5);
    const uint64_t expect[8] = {768, 969, 337, 464, 256, 898, 323, 238};
    for (uint64_t w : expect) CHECK(ws.next_below(1000) == w);

    PrfStream unif(tag::kPrg, seed_from_u64(2), 0);
    for (int i = 0; i < 1000; ++i) CHECK(unif.next_below(7) < 7);
}

TEST_CASE("statistical engine is deterministic per label") {
    auto a = stat_engine(seed_from_u64(4), "shuffle");
    auto b = stat_engine(seed_from_u64(4), "shuffle");
    auto c = stat_engine(seed_from_u64(4), "other");
    CHECK(a() == b());
    CHECK(a() == b());
    CHECK(a() != c());
}

TEST_CASE("varint encoding round trips and rejects malformed input") {
    for (uint64_t v : {uint64_t(0), uint64_t(1), uint64_t(127), uint64_t(128), uint64_t(16383),
                       uint64_t(16384), uint64_t(1) << 32, ~uint64_t(0)}) {
        Bytes b;
        append_varint(b, v);
        ByteReader r(b);
        CHECK(r.read_varint() == v);
        CHECK(r.remaining() == 0);
    }

    SECTION("truncated varint") {
        Bytes b{0x80};
        ByteReader r(b);
        CHECK_THROWS_AS(r.read_varint(), MalformedInput);
    }
    SECTION("truncated byte read") {
        Bytes b{0x01, 0x02};
        ByteReader r(b);
        CHECK_THROWS_AS(r.read_bytes(3), MalformedInput);
    }
    SECTION("overlong varint") {
        Bytes b(11, 0x80);
        ByteReader r(b);
        CHECK_THROWS_AS(r.read_varint(), MalformedInput);
    }
}

TEST_CASE("bit indexing is most-significant-first") {
    Bytes m = hex_bytes("a5");  // 1010 0101
    const int want[8] = {1, 0, 1, 0, 0, 1, 0, 1};
    for (size_t i = 0; i < 8; ++i) CHECK(get_bit(m, i) == want[i]);
}
