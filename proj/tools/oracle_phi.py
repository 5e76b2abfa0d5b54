#!/usr/bin/env python3
"""Independent oracle for the degree-ell elementary symmetric map over F_p.

Evaluates phi_ell directly from the definition (sum over all size-ell
combinations of the product), deliberately avoiding the production code's
incremental recurrence, and prints vectors for tests/test_subset_phi.cpp:

    python3 tools/oracle_phi.py
"""

from itertools import combinations
from math import prod


def phi(ell: int, values, p: int) -> int:
    """Scalar phi_ell: elementary symmetric polynomial e_ell mod p."""
    return sum(prod(c) % p for c in combinations(values, ell)) % p


def phi_vec(ell: int, vectors, p: int):
    dim = len(vectors[0])
    return [phi(ell, [v[c] for v in vectors], p) for c in range(dim)]


def main():
    print(f"phi_2({{2,3,5}}) mod 101       = {phi(2, [2, 3, 5], 101)}")
    print(f"phi_2({{2,3,5,7}}) mod 101     = {phi(2, [2, 3, 5, 7], 101)}")
    print(f"phi_3({{2,3,5,7}}) mod 101     = {phi(3, [2, 3, 5, 7], 101)}")
    print(f"phi_3({{1..7}}) mod 97         = {phi(3, range(1, 8), 97)}")
    print(f"phi_4({{1..9}}) mod 1009       = {phi(4, range(1, 10), 1009)}")
    print(f"phi_5({{3,1,4,1,5,9,2,6}}) mod 997 = {phi(5, [3, 1, 4, 1, 5, 9, 2, 6], 997)}")
    print(f"phi_2({{0,5,0,7}}) mod 11      = {phi(2, [0, 5, 0, 7], 11)}")
    print(f"phi_8({{1..8}}) mod 65537      = {phi(8, range(1, 9), 65537)}  # = 8!")

    vecs = [[2, 1], [3, 10], [5, 100], [7, 1000]]
    print(f"component-wise phi_2 over F_1013, columns [2,3,5,7]/[1,10,100,1000]:")
    print(f"  = {phi_vec(2, vecs, 1013)}")

    # Recurrence cross-check: e_ell(S + x) = e_ell(S) + x * e_(ell-1)(S).
    s, x, p = [4, 9, 2, 7, 6], 11, 10007
    lhs = phi(3, s + [x], p)
    rhs = (phi(3, s, p) + x * phi(2, s, p)) % p
    print(f"recurrence e_3(S+x) {lhs} == e_3(S) + x e_2(S) {rhs}: {lhs == rhs}")


if __name__ == "__main__":
    main()
