#!/usr/bin/env python3
"""Exact tail bounds for the self-election committee experiment.

Each of n parties independently joins the committee with probability ell/n.
Prints the exact binomial tails backing the thresholds in the committee-size
acceptance check, and the corrupt-overlap failure probability as a function
of the corrupt-set size (which shows where the overlap bound stops holding).

    python3 tools/oracle_committee.py
"""

from math import comb


def binom_cdf(k: int, n: int, p: float) -> float:
    return sum(comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(k + 1))


def size_in_band(n: int, ell: int) -> float:
    """P[ ell/2 <= |C| <= 3 ell/2 ]."""
    p = ell / n
    return binom_cdf(3 * ell // 2, n, p) - binom_cdf(ell // 2 - 1, n, p)


def overlap_ok(n: int, ell: int, bad: int) -> float:
    """P[ |C ∩ Bad| < ell'/3 ] with ell' = |C|, via independent splits.

    |C ∩ Bad| ~ Bin(bad, ell/n) and |C ∩ Good| ~ Bin(n-bad, ell/n) are
    independent; success means 3*|C∩Bad| < |C∩Bad| + |C∩Good|, i.e.
    |C∩Good| > 2*|C∩Bad|.
    """
    p = ell / n
    good = n - bad
    pb = [comb(bad, i) * p**i * (1 - p) ** (bad - i) for i in range(bad + 1)]
    total = 0.0
    for i, pbi in enumerate(pb):
        if pbi == 0.0:
            continue
        total += pbi * (1.0 - binom_cdf(min(2 * i, good), good, p))
    return total


def main():
    n, ell = 1024, 100
    print(f"n={n} ell={ell} join-probability {ell / n}")
    print(f"P[|C| in [{ell // 2},{3 * ell // 2}]] = {size_in_band(n, ell):.6f}")
    for bad in (0, 16, 32, 64, 128, 307):
        print(f"P[overlap < ell'/3] bad={bad:4d} ({bad / n:.3f} n) = "
              f"{overlap_ok(n, ell, bad):.6f}")


if __name__ == "__main__":
    main()
