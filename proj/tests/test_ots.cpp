#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "srds/ots.hpp"

using namespace srds;
using testutil::hex_bytes;
using testutil::to_hex;

// Frozen vectors from tools/oracle_ots.py (seed_from_u64(42), L=32, kappa=32).

static OtsKeyPair reference_pair() { return ots_keygen(seed_from_u64(42), 32, 32); }

TEST_CASE("keyed generation expands the seed into preimages and images") {
    OtsKeyPair kp = reference_pair();
    REQUIRE(kp.keyed());
    REQUIRE(kp.sk->size() == 64);
    REQUIRE(kp.vk.size() == 64);
    CHECK(to_hex((*kp.sk)[0]) == "a4a0920c");
    CHECK(to_hex((*kp.sk)[63]) == "3d53a5e5");
    CHECK(to_hex(kp.vk[0]) == "a55982a47af74e2b");
    CHECK(to_hex(kp.vk[32]) == "b28cb98a1b20c374");
    CHECK(to_hex(sha256(ots_encode_vk(kp))) ==
          "bfaeffebeea6e5423be92973b9e6a9760871f8771484b27273cde8214f992d9b");
    CHECK(ots_encode_vk(kp).size() == 577);
    for (size_t e = 0; e < 64; ++e) CHECK(kp.vk[e] == ots_g((*kp.sk)[e], 32));
}

TEST_CASE("signing reveals the preimage selected by each message bit") {
    OtsKeyPair kp = reference_pair();
    Bytes msg = hex_bytes("a5c30f01");
    OtsSignature sig = ots_sign(kp, msg);
    REQUIRE(sig.preimages.size() == 32);
    CHECK(to_hex(sig.preimages[0]) == "9031dff9");
    CHECK(to_hex(sig.preimages[7]) == "42dfc0b8");
    CHECK(to_hex(sig.preimages[31]) == "3d53a5e5");
    CHECK(ots_verify(kp, msg, sig));

    Bytes enc = ots_encode_sig(sig);
    CHECK(enc.size() == 161);
    CHECK(to_hex(sha256(enc)) ==
          "6feb281839324a48481c6bdc99cb2f1ff67978009b10b567a32ac3d3592152ea");

    ByteReader r(enc);
    OtsSignature back = ots_decode_sig(r);
    CHECK(r.remaining() == 0);
    CHECK(back.preimages == sig.preimages);
}

TEST_CASE("verification rejects tampered preimages and foreign messages") {
    OtsKeyPair kp = reference_pair();
    Bytes msg = hex_bytes("a5c30f01");
    OtsSignature sig = ots_sign(kp, msg);

    SECTION("zeroed preimage") {
        sig.preimages[5] = Bytes(4, 0);
        CHECK_FALSE(ots_verify(kp, msg, sig));
    }
    SECTION("single flipped preimage bit") {
        sig.preimages[11][2] ^= 0x40;
        CHECK_FALSE(ots_verify(kp, msg, sig));
    }
    SECTION("message with one flipped bit") {
        for (int bit : {0, 9, 31}) {
            Bytes other = msg;
            other[size_t(bit) / 8] ^= uint8_t(0x80 >> (bit % 8));
            CHECK_FALSE(ots_verify(kp, other, sig));
        }
    }
}

TEST_CASE("structurally broken inputs are malformed, not rejections") {
    OtsKeyPair kp = reference_pair();
    Bytes msg = hex_bytes("a5c30f01");
    OtsSignature sig = ots_sign(kp, msg);

    CHECK_THROWS_AS(ots_sign(kp, hex_bytes("a5c30f")), MalformedInput);
    CHECK_THROWS_AS(ots_verify(kp, hex_bytes("a5c30f"), sig), MalformedInput);

    OtsSignature shortened = sig;
    shortened.preimages.pop_back();
    CHECK_THROWS_AS(ots_verify(kp, msg, shortened), MalformedInput);

    OtsSignature stretched = sig;
    stretched.preimages[3].push_back(0);
    CHECK_THROWS_AS(ots_verify(kp, msg, stretched), MalformedInput);

    CHECK_THROWS_AS(ots_keygen(seed_from_u64(1), 0, 32), ParameterError);
    CHECK_THROWS_AS(ots_keygen(seed_from_u64(1), 32, 12), ParameterError);

    // 20-bit message: padding bits beyond L must be zero.
    OtsKeyPair kp20 = ots_keygen(seed_from_u64(8), 20, 32);
    CHECK_THROWS_AS(ots_sign(kp20, hex_bytes("ffffff")), MalformedInput);
    CHECK_NOTHROW(ots_sign(kp20, hex_bytes("fffff0")));
}

TEST_CASE("oblivious keys are unkeyed and verify nothing") {
    Seed seed = derive(seed_from_u64(42), "oblivious", 0);
    OtsKeyPair ob = ots_oblivious_keygen(seed, 32, 32);
    REQUIRE_FALSE(ob.keyed());
    CHECK(to_hex(ob.vk[0]) == "8e6df1747cbe8e89");
    CHECK(to_hex(ob.vk[63]) == "86b0ab458098e53f");
    CHECK_THROWS_AS(ots_sign(ob, hex_bytes("a5c30f01")), NoSigningKey);

    // A real signature verifies only against its own key's images.
    OtsKeyPair kp = reference_pair();
    Bytes msg = hex_bytes("a5c30f01");
    OtsSignature sig = ots_sign(kp, msg);
    CHECK_FALSE(ots_verify(ob, msg, sig));
}

TEST_CASE("verification key encoding round trips") {
    OtsKeyPair kp = reference_pair();
    Bytes enc = ots_encode_vk(kp);
    ByteReader r(enc);
    OtsKeyPair back = ots_decode_vk(r, 32, 32);
    CHECK(r.remaining() == 0);
    CHECK(back.vk == kp.vk);
    CHECK_FALSE(back.keyed());

    ByteReader wrong(enc);
    CHECK_THROWS_AS(ots_decode_vk(wrong, 16, 32), MalformedInput);
}
