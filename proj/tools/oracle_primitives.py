#!/usr/bin/env python3
"""Independent oracle for the hash-derived primitives.

Reimplements the byte layouts pinned in docs/encodings.md from scratch
(hashlib only) and prints test vectors as C++ initializer snippets. The
frozen constants in tests/test_primitives.cpp were produced by this script:

    python3 tools/oracle_primitives.py
"""

import hashlib

TAG_MERKLE_LEAF = 0x00
TAG_MERKLE_NODE = 0x01
TAG_OTS_G = 0x02
TAG_PRG = 0x03
TAG_SUBSET_PRF = 0x04
TAG_MSG_DIGEST = 0x05
TAG_DERIVE = 0x08


def sha256(b: bytes) -> bytes:
    return hashlib.sha256(b).digest()


def tagged_hash(tag: int, payload: bytes) -> bytes:
    return sha256(bytes([tag]) + payload)


def ots_g(x: bytes, kappa_bits: int) -> bytes:
    return tagged_hash(TAG_OTS_G, x)[: kappa_bits // 4]


def prg(seed: bytes, nbytes: int) -> bytes:
    out = b""
    ctr = 0
    while len(out) < nbytes:
        out += sha256(bytes([TAG_PRG]) + seed + ctr.to_bytes(8, "big"))
        ctr += 1
    return out[:nbytes]


def derive(seed: bytes, label: str, index: int) -> bytes:
    lb = label.encode()
    return sha256(
        bytes([TAG_DERIVE])
        + seed
        + len(lb).to_bytes(4, "big")
        + lb
        + index.to_bytes(8, "big")
    )


def message_digest(m: bytes, bits: int) -> bytes:
    return tagged_hash(TAG_MSG_DIGEST, m)[: bits // 8]


def seed_from_u64(v: int) -> bytes:
    return bytes(24) + v.to_bytes(8, "big")


def prf_words(tag: int, seed: bytes, instance: int, count: int):
    """Counter-mode stream of big-endian 64-bit words, 4 per block."""
    words = []
    ctr = 0
    while len(words) < count:
        block = sha256(
            bytes([tag]) + seed + instance.to_bytes(8, "big") + ctr.to_bytes(8, "big")
        )
        for i in range(4):
            words.append(int.from_bytes(block[8 * i : 8 * i + 8], "big"))
        ctr += 1
    return words[:count]


def next_below_stream(tag: int, seed: bytes, instance: int, n: int, count: int):
    """Rejection sampling in [0, n) as pinned in docs/encodings.md."""
    lim = (2**64 // n) * n
    out = []
    ctr = 0
    while len(out) < count:
        block = sha256(
            bytes([tag]) + seed + instance.to_bytes(8, "big") + ctr.to_bytes(8, "big")
        )
        for i in range(4):
            w = int.from_bytes(block[8 * i : 8 * i + 8], "big")
            if w < lim:
                out.append(w % n)
                if len(out) == count:
                    break
        ctr += 1
    return out


def prf_subset(seed: bytes, party: int, n: int, out_size: int):
    """Distinct-member subset of {0..n-1}, sorted ascending."""
    lim = (2**64 // n) * n
    seen = set()
    ctr = 0
    while len(seen) < out_size:
        block = sha256(
            bytes([TAG_SUBSET_PRF])
            + seed
            + party.to_bytes(8, "big")
            + ctr.to_bytes(8, "big")
        )
        for i in range(4):
            w = int.from_bytes(block[8 * i : 8 * i + 8], "big")
            if w < lim:
                seen.add(w % n)
                if len(seen) == out_size:
                    break
        ctr += 1
    return sorted(seen)


def cxx_hex(b: bytes) -> str:
    return '"' + b.hex() + '"'


def main():
    seed1 = seed_from_u64(1)
    seed7 = derive(seed1, "oracle", 7)

    print("// --- seed material")
    print(f"seed_from_u64(1)          = {cxx_hex(seed1)}")
    print(f'derive(seed1,"oracle",7)  = {cxx_hex(seed7)}')
    print(f'derive(seed1,"oracle",8)  = {cxx_hex(derive(seed1, "oracle", 8))}')
    print(f'derive(seed1,"oracles",7) = {cxx_hex(derive(seed1, "oracles", 7))}')

    print("// --- tagged hash / G / message digest")
    print(f"tagged_hash(0x05, 'abc')  = {cxx_hex(tagged_hash(0x05, b'abc'))}")
    print(f"ots_g('abcd', kappa=32)   = {cxx_hex(ots_g(b'abcd', 32))}")
    print(f"message_digest('vote:1', 32) = {cxx_hex(message_digest(b'vote:1', 32))}")

    print("// --- PRG")
    print(f"prg(seed1, 12)  = {cxx_hex(prg(seed1, 12))}")
    print(f"prg(seed1, 40)  = {cxx_hex(prg(seed1, 40))}")
    print(f"prg(seed7, 33)  = {cxx_hex(prg(seed7, 33))}")

    print("// --- PrfStream words (tag 0x03, instance 5)")
    ws = prf_words(TAG_PRG, seed1, 5, 6)
    print("words =", ", ".join(f"0x{w:016x}ULL" for w in ws))

    print("// --- next_below(1000), 8 draws (tag 0x03, instance 5)")
    print("draws =", next_below_stream(TAG_PRG, seed1, 5, 1000, 8))

    print("// --- prf_subset(seed1, party=3, n=64, out=16)")
    print("subset =", prf_subset(seed1, 3, 64, 16))
    print("// --- prf_subset(seed7, party=0, n=20, out=20) (full range)")
    print("subset =", prf_subset(seed7, 0, 20, 20))


if __name__ == "__main__":
    main()
