#!/usr/bin/env python3
"""Independent oracle for the seeded Merkle hash proof system.

Builds padded trees per docs/encodings.md and prints root digests and a
worked proof for tests/test_comm_tree.cpp:

    python3 tools/oracle_merkle.py
"""

from oracle_primitives import seed_from_u64, sha256


def leaf_hash(seed: bytes, x: bytes) -> bytes:
    return sha256(bytes([0x00]) + seed + x)


def node_hash(seed: bytes, l: bytes, r: bytes) -> bytes:
    return sha256(bytes([0x01]) + seed + l + r)


def padded(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def levels(seed: bytes, leaves):
    pad = padded(len(leaves))
    lvl = [leaf_hash(seed, leaves[i] if i < len(leaves) else bytes(32)) for i in range(pad)]
    out = [lvl]
    while len(out[-1]) > 1:
        prev = out[-1]
        out.append([node_hash(seed, prev[i], prev[i + 1]) for i in range(0, len(prev), 2)])
    return out

def root(seed: bytes, leaves) -> bytes:
    return levels(seed, leaves)[-1][0]


def prove(seed: bytes, leaves, j: int):
    """1-based leaf index -> (leaf digest, sibling list bottom-up)."""
    lv = levels(seed, leaves)
    sibs = []
    idx = j
    for lvl in lv[:-1]:
        sib = idx + 1 if idx % 2 else idx - 1
        sibs.append(lvl[sib - 1])
        idx = (idx + 1) // 2
    return lv[0][j - 1], sibs


def verify(seed: bytes, x: bytes, rt: bytes, j: int, leaf_digest: bytes, sibs) -> bool:
    if leaf_hash(seed, x) != leaf_digest:
        return False
    d = leaf_digest
    for sib in sibs:
        d = node_hash(seed, d, sib) if j % 2 else node_hash(seed, sib, d)
        j = (j + 1) // 2
    return j == 1 and d == rt


def main():
    seed = seed_from_u64(3)
    print("// seed = seed_from_u64(3)")
    one = [b"solo"]
    print(f"root(['solo'])            = {root(seed, one).hex()}")
    assert root(seed, one) == leaf_hash(seed, b"solo"), "1-leaf tree is its own root"

    leaves = [f"leaf-{i}".encode() for i in range(5)]  # pads to 8
    rt = root(seed, leaves)
    print(f"root(leaf-0..leaf-4)      = {rt.hex()}")
    ld, sibs = prove(seed, leaves, 3)
    print(f"proof leaf 3: digest      = {ld.hex()}")
    for i, s in enumerate(sibs):
        print(f"  sibling[{i}]              = {s.hex()}")
    assert verify(seed, b"leaf-2", rt, 3, ld, sibs)
    assert not verify(seed, b"leaf-1", rt, 3, ld, sibs)

    # Padding leaves participate: appending an explicit zero block is a no-op
    # for the root at a power-of-two boundary crossing only when n < pad.
    leaves6 = leaves + [bytes(32)]
    assert root(seed, leaves6) == rt, "explicit zero block equals padding"
    print("// root(5 leaves) == root(5 leaves + zero block): True")

    big = [f"item-{i:02d}".encode() for i in range(64)]
    print(f"root(item-00..item-63)    = {root(seed_from_u64(9), big).hex()}")


if __name__ == "__main__":
    main()
