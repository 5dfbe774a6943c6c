"""Independent oracles built on sympy's DomainMatrix, sharing no code with hopfo."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix


def _domain(p):
    return QQ if p is None else GF(p)


def dm(p, m) -> DomainMatrix:
    m = np.asarray(m)
    K = _domain(p)
    rows = [[K(int(x)) if p is not None else K(Fraction(x).numerator, Fraction(x).denominator) for x in row]
            for row in m.tolist()]
    return DomainMatrix(rows, m.shape, K)


def rank(p, m) -> int:
    m = np.asarray(m)
    if 0 in m.shape:
        return 0
    return dm(p, m).rank()


def nullity(p, m) -> int:
    m = np.asarray(m)
    return m.shape[1] - rank(p, m)


def nullspace(p, m) -> list[list]:
    """Rows spanning {v : m v = 0}, as python ints/Fractions."""
    m = np.asarray(m)
    ns = dm(p, m).nullspace().to_Matrix()
    out = []
    for i in range(ns.rows):
        row = []
        for j in range(ns.cols):
            x = ns[i, j]
            row.append(int(x) % p if p is not None else Fraction(int(x.p), int(x.q)))
        out.append(row)
    return out


def left_integral_space(p, mult, counit) -> list[list]:
    """Solutions of b_j lam = eps(b_j) lam for every basis element b_j."""
    mult = np.asarray(mult)
    d = mult.shape[0]
    blocks = []
    for j in range(d):
        left = mult[j].T.astype(object)  # left[k, i] = mult[j, i, k]
        blocks.append(left - int(counit[j]) * np.eye(d, dtype=object))
    return nullspace(p, np.vstack(blocks))


def dp_homology(p, x) -> int:
    """dim ker x - rank x^(p-1) for a nilpotent matrix x over GF(p)."""
    x = np.asarray(x, dtype=object)
    n = x.shape[0]
    power = np.eye(n, dtype=object)
    for _ in range(p - 1):
        power = power.dot(x) % p
    return nullity(p, x) - rank(p, power)


def jordan_type(p, x) -> list[int]:
    """Jordan block sizes of a nilpotent matrix from ranks of its powers."""
    x = np.asarray(x, dtype=object)
    n = x.shape[0]
    ranks = [n]
    power = np.eye(n, dtype=object)
    while ranks[-1]:
        power = power.dot(x) % p
        ranks.append(rank(p, power))
    ge = [ranks[k] - ranks[k + 1] for k in range(len(ranks) - 1)]  # blocks of size > k
    sizes = []
    for k, g in enumerate(ge):
        nxt = ge[k + 1] if k + 1 < len(ge) else 0
        sizes += [k + 1] * (g - nxt)
    return sorted(sizes, reverse=True)
