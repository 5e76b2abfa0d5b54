#!/usr/bin/env python3
"""Independent oracle for the Lamport one-time signature layer.

Derives keys, signatures and wire encodings from the rules in
docs/encodings.md and prints frozen vectors for tests/test_srds_owf.cpp:

    python3 tools/oracle_ots.py
"""

from oracle_primitives import ots_g, prg, seed_from_u64, sha256, derive


def keygen(seed: bytes, msg_bits: int, kappa: int):
    L, sk_len = msg_bits, kappa // 8
    stream = prg(seed, 2 * L * sk_len)
    sk = [stream[e * sk_len : (e + 1) * sk_len] for e in range(2 * L)]
    vk = [ots_g(entry, kappa) for entry in sk]
    return sk, vk


def oblivious_keygen(seed: bytes, msg_bits: int, kappa: int):
    L, vk_len = msg_bits, kappa // 4
    stream = prg(seed, 2 * L * vk_len)
    return [stream[e * vk_len : (e + 1) * vk_len] for e in range(2 * L)]


def get_bit(message: bytes, i: int) -> int:
    return (message[i // 8] >> (7 - i % 8)) & 1


def sign(sk, msg_bits: int, message: bytes):
    return [sk[get_bit(message, i) * msg_bits + i] for i in range(msg_bits)]


def verify(vk, msg_bits: int, kappa: int, message: bytes, preimages) -> bool:
    return all(
        ots_g(preimages[i], kappa) == vk[get_bit(message, i) * msg_bits + i]
        for i in range(msg_bits)
    )


def varint(v: int) -> bytes:
    out = bytearray()
    while v >= 0x80:
        out.append((v & 0x7F) | 0x80)
        v >>= 7
    out.append(v)
    return bytes(out)


def encode_entries(entries) -> bytes:
    out = varint(len(entries))
    for e in entries:
        out += varint(len(e)) + e
    return out


def main():
    seed = seed_from_u64(42)
    L, kappa = 32, 32
    sk, vk = keygen(seed, L, kappa)
    msg = bytes.fromhex("a5c30f01")
    sig = sign(sk, L, msg)

    print(f"// seed = seed_from_u64(42), L = {L}, kappa = {kappa}")
    print(f"sk[0]        = {sk[0].hex()}")
    print(f"sk[2L-1]     = {sk[2 * L - 1].hex()}")
    print(f"vk[0]        = {vk[0].hex()}")
    print(f"vk[L]        = {vk[L].hex()}")
    print(f"vk digest    = {sha256(encode_entries(vk)).hex()}")
    print(f"// message a5c30f01: bits MSB-first")
    print(f"sig[0]  (bit {get_bit(msg, 0)}) = {sig[0].hex()}")
    print(f"sig[7]  (bit {get_bit(msg, 7)}) = {sig[7].hex()}")
    print(f"sig[31] (bit {get_bit(msg, 31)}) = {sig[31].hex()}")
    print(f"verify          = {verify(vk, L, kappa, msg, sig)}")
    bad = sig.copy()
    bad[5] = bytes(len(bad[5]))
    print(f"verify tampered = {verify(vk, L, kappa, msg, bad)}")

    enc = encode_entries(sig)
    print(f"encoded sig len  = {len(enc)}")
    print(f"encoded sig hash = {sha256(enc).hex()}")
    print(f"encoded vk len   = {len(encode_entries(vk))}")

    ovk = oblivious_keygen(derive(seed, "oblivious", 0), L, kappa)
    print(f"oblivious vk[0]  = {ovk[0].hex()}")
    print(f"oblivious vk[63] = {ovk[63].hex()}")


if __name__ == "__main__":
    main()
