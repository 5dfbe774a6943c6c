from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfo.exactla import (
    Field,
    Subspace,
    image,
    inverse,
    kernel,
    kernel_of_blocks,
    quotient_map,
    rank,
    rref,
    solve,
)

PRIMES = [2, 3, 5, 7]


def matrices(max_rows=4, max_cols=4, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def brute_kernel_size(p, m):
    """Count solutions of m v = 0 over GF(p) by enumeration."""
    m = np.asarray(m, dtype=np.int64) % p
    cols = m.shape[1]
    return sum(1 for v in itertools.product(range(p), repeat=cols) if not (m @ np.array(v) % p).any())


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field(4)


def test_scalar_parsing():
    F = Field(7)
    assert F("1/2") == 4
    assert F(Fraction(3, 2)) == 5
    Q = Field(None)
    assert Q("3/6") == Fraction(1, 2)
    assert Q.inv(Fraction(2, 3)) == Fraction(3, 2)


def test_field_json_round_trip():
    for F in (Field(None), Field(5)):
        assert Field.from_json(F.to_json()) == F


@pytest.mark.parametrize("p", [2, 3, 5])
@given(m=matrices(3, 4, 0, 6))
def test_kernel_matches_enumeration(p, m):
    F = Field(p)
    k = kernel(F, F.array(m))
    assert p ** k.dim == brute_kernel_size(p, m)


@given(m=matrices(5, 5))
def test_rational_rank_matches_float_oracle(m):
    F = Field(None)
    a = np.array(m, dtype=float)
    assert rank(F, F.array(m)) == np.linalg.matrix_rank(a)


@pytest.mark.parametrize("p", [None, 2, 5])
@given(m=matrices(4, 5))
def test_rank_nullity(p, m):
    F = Field(p)
    a = F.array(m)
    assert rank(F, a) + kernel(F, a).dim == a.shape[1]
    k = kernel(F, a)
    if k.dim:
        assert F.is_zero(F.matmul(a, k.basis.T))


@pytest.mark.parametrize("p", [None, 3])
@given(m=matrices(4, 4))
def test_rref_is_idempotent_and_pivoted(p, m):
    F = Field(p)
    r, piv = rref(F, F.array(m))
    r2, piv2 = rref(F, r)
    assert F.equal(r, r2) and list(piv) == list(piv2)
    for i, c in enumerate(piv):
        assert r[i, c] == 1
        assert sum(1 for x in r[:, c] if x != 0) == 1


@pytest.mark.parametrize("p", [None, 7])
@given(m=matrices(4, 4), x=st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_finds_solution_of_consistent_system(p, m, x):
    F = Field(p)
    a = F.array(m)
    xv = F.array(x[: a.shape[1]])
    b = F.matmul(a, xv[:, None])[:, 0]
    sol = solve(F, a, b)
    assert sol is not None
    assert F.equal(F.matmul(a, sol[:, None])[:, 0], b)


def test_solve_reports_inconsistency():
    F = Field(5)
    assert solve(F, F.array([[1, 1], [2, 2]]), F.array([1, 0])) is None


@pytest.mark.parametrize("p", [None, 2, 3, 11])
def test_inverse(p):
    F = Field(p)
    rng = np.random.default_rng(1)
    for n in (1, 3, 5):
        a = F.random_invertible(rng, n)
        assert F.equal(F.matmul(a, inverse(F, a)), F.eye(n))
    with pytest.raises(np.linalg.LinAlgError):
        inverse(F, F.zeros((2, 2)))


@given(a=matrices(4, 4, 0, 4), b=matrices(4, 4, 0, 4))
def test_subspace_lattice(a, b):
    F = Field(5)
    n = 4
    u = Subspace.span(F, n, F.array([row + [0] * (n - len(row)) for row in a]))
    w = Subspace.span(F, n, F.array([row + [0] * (n - len(row)) for row in b]))
    s = u + w
    i = u.intersect(w)
    assert s.dim + i.dim == u.dim + w.dim
    assert i <= u and i <= w and u <= s and w <= s


@given(m=matrices(4, 5), cut=st.integers(1, 3))
def test_kernel_of_blocks_equals_stacked_kernel(m, cut):
    F = Field(3)
    a = F.array(m)
    blocks = [a[:cut], a[cut:]]
    k1 = kernel_of_blocks(F, iter(blocks), a.shape[1])
    k2 = kernel(F, a)
    assert k1.dim == k2.dim and k1 <= k2


@given(m=matrices(3, 4))
def test_quotient_map_is_split_surjection(m):
    F = Field(None)
    sub = image(F, F.array(m).T)
    proj, section = quotient_map(F, sub.ambient_dim, sub)
    assert F.equal(F.matmul(proj, section), F.eye(proj.shape[0]))
    if sub.dim:
        assert F.is_zero(F.matmul(proj, sub.basis.T))


def test_coordinates_round_trip():
    F = Field(7)
    sub = Subspace.span(F, 3, F.array([[1, 2, 3], [0, 1, 4]]))
    v = F.array([[2, 5, 3]]).T  # 2*(1,2,3) + 1*(0,1,4) = (2,5,10) = (2,5,3)
    assert sub.contains(v)
    c = sub.coordinates(v)
    assert F.equal(F.matmul(sub.basis.T, c), v)
