from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfo.catalogs import parse_category, parse_module
from hopfo.cotorsion import random_a_split_extension
from hopfo.equivariant import eq_cone, eq_suspend, lambda_maps
from hopfo.hmodules import cone_inclusion, cone_projection, counit_map
from hopfo.hopfcore import HopfoError, parse_hopf
from hopfo.homotopy import (
    SHIFT_DIM_LIMIT,
    connecting_map,
    cone_hom_commutation,
    is_contractible,
    is_homotopic,
    is_quism,
    is_sigma_acyclic,
    is_sigma_quism,
    long_exact_check,
    make_extension,
    mapping_cone,
    null_homotopy_iff_cone_splits,
    random_equivariant_map,
    stable_hom,
    surjectivity_transfer,
)


def setting(h, a="k"):
    return parse_category(a, parse_hopf(h))


def mod(cat, spec):
    return parse_module(spec, cat)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_stable_hom_between_jordan_blocks(p):
    # stable Hom over k[d]/(d^p) between cyclic modules: min(a, b, p - a, p - b)
    cat = setting(f"divided_power:{p}")
    for a in range(1, p + 1):
        for b in range(1, p + 1):
            sh = stable_hom(mod(cat, f"J{a}"), mod(cat, f"J{b}"))
            assert sh.dim == min(a, b, p - a, p - b)
            assert sh.dim == sh.homology_dim


@pytest.mark.parametrize("pair", [("divided_power:3", "k"), ("divided_power:2", "truncpoly:2"),
                                  ("sweedler:3", "k"), ("divided_power:3", "a2")])
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_homotopy_is_an_equivalence_relation(pair, seed):
    cat = setting(*pair)
    rng = np.random.default_rng(seed)
    m = mod(cat, "k+H" if cat.dim == 1 else "A")
    n = mod(cat, "Hbar" if cat.dim == 1 else "C:A")
    f, g, k = (random_equivariant_map(m, n, rng) for _ in range(3))
    assert is_homotopic(f, f, m, n) is not None
    assert (is_homotopic(f, g, m, n) is None) == (is_homotopic(g, f, m, n) is None)
    if is_homotopic(f, g, m, n) is not None and is_homotopic(g, k, m, n) is not None:
        assert is_homotopic(f, k, m, n) is not None


@given(seed=st.integers(0, 2 ** 32 - 1))
def test_null_homotopy_iff_cone_splits(seed):
    cat = setting("divided_power:3")
    rng = np.random.default_rng(seed)
    m, n = mod(cat, "J2"), mod(cat, "k+J2")
    f = random_equivariant_map(m, n, rng)
    v = null_homotopy_iff_cone_splits(f, m, n)
    assert v.agree
    if v.homotopic:
        F = cat.field
        c = cone_inclusion(m.dim, m.hopf)
        assert F.equal(F.matmul(v.homotopy, c), f)


@pytest.mark.parametrize("pair", [("divided_power:3", "k"), ("sweedler:3", "k"), ("divided_power:3", "truncpoly:3")])
def test_mapping_cone_triangle(pair):
    cat = setting(*pair)
    rng = np.random.default_rng(5)
    m = mod(cat, "k" if cat.dim == 1 else "A")
    n = mod(cat, "Hbar+k" if cat.dim == 1 else "A+A")
    f = random_equivariant_map(m, n, rng)
    tri = mapping_cone(f, m, n)
    tri.verify()
    assert tri.cone.dim == n.dim + eq_suspend(m).dim


def test_mapping_cone_rejects_non_equivariant():
    cat = setting("divided_power:2")
    m = mod(cat, "k")
    n = mod(cat, "H")
    with pytest.raises(ValueError):
        mapping_cone(cat.field.array([[1], [0]]), m, n)


def test_cone_of_identity_is_sigma_acyclic():
    cat = setting("divided_power:3")
    m = mod(cat, "J2")
    tri = mapping_cone(cat.field.eye(m.dim), m, m)
    assert is_sigma_acyclic(tri.cone, window=3)


@pytest.mark.parametrize("h", ["divided_power:2", "divided_power:3", "sweedler:3"])
def test_contractibility(h):
    cat = setting(h)
    assert is_contractible(mod(cat, "H"))
    assert is_contractible(mod(cat, "C:k"))
    assert not is_contractible(mod(cat, "k"))
    assert not is_sigma_acyclic(mod(cat, "k"), window=3)


@pytest.mark.parametrize("h", ["divided_power:3", "sweedler:3"])
def test_counit_is_sigma_quism_on_acyclic(h):
    cat = setting(h)
    t = mod(cat, "H")
    c = eq_cone(t)
    eps = counit_map(t.dim, t.hopf)
    assert is_sigma_quism(eps, c, t, window=2)
    rep = surjectivity_transfer(eps, c, t)
    assert rep == {"Z_surjective": True, "B_surjective": True}


def test_quism_detects_homology_iso():
    cat = setting("divided_power:3")
    m = mod(cat, "k")
    n = mod(cat, "k+H")
    F = cat.field
    inc = F.zeros((n.dim, 1))
    inc[0, 0] = 1
    assert is_quism(inc, m, n)
    assert not is_quism(F.zeros((n.dim, 1)), m, n)


@pytest.mark.parametrize("pair", [("divided_power:2", "k"), ("divided_power:3", "k"), ("sweedler:3", "k"),
                                  ("divided_power:2", "truncpoly:2")])
def test_long_exact_sequence_of_cone_extension(pair):
    cat = setting(*pair)
    m = mod(cat, "k" if cat.dim == 1 else "A")
    c = eq_cone(m)
    e = make_extension(m, c, eq_suspend(m), cone_inclusion(m.dim, m.hopf), cone_projection(m.dim, m.hopf))
    rep = long_exact_check(e, window=2)
    assert rep.exact, rep.failures
    d = connecting_map(e)
    assert d.shape == (eq_suspend(m).dim, eq_suspend(m).dim)


@pytest.mark.parametrize("pair", [("divided_power:3", "k"), ("sweedler:3", "k")])
def test_long_exact_sequence_random_extensions(pair):
    cat = setting(*pair)
    rng = np.random.default_rng(11)
    m, n = mod(cat, "k"), mod(cat, "k")
    for _ in range(5):
        e = random_a_split_extension(m, n, rng)
        assert long_exact_check(e, window=2).exact


def test_make_extension_rejects_non_exact():
    cat = setting("divided_power:2")
    m = mod(cat, "k")
    c = eq_cone(m)
    F = cat.field
    with pytest.raises(HopfoError):
        make_extension(m, c, eq_suspend(m), F.zeros((c.dim, 1)), cone_projection(1, m.hopf))


def test_shift_limit_is_enforced():
    cat = setting("taft:4:5")
    m = mod(cat, "H+H")
    assert m.dim * (m.hopf.dim - 1) ** 3 > SHIFT_DIM_LIMIT
    with pytest.raises(HopfoError, match="SHIFT_DIM_LIMIT"):
        is_sigma_quism(m.field.eye(m.dim), m, m, window=3)


@pytest.mark.parametrize("pair", [("divided_power:2", "k"), ("divided_power:3", "k")])
def test_cone_commutes_with_hom_from_trivial(pair):
    cat = setting(*pair)
    rng = np.random.default_rng(3)
    p = mod(cat, "k")
    m, n = mod(cat, "J2" if cat.hopf.dim > 2 else "k"), mod(cat, "k+H")
    f = random_equivariant_map(m, n, rng)
    rep = cone_hom_commutation(p, f, m, n)
    assert rep["well_defined"] and rep["equivariant"] and rep["isomorphism"]


def test_equivariant_maps_contain_stable_representatives():
    cat = setting("sweedler:3")
    m, n = mod(cat, "k"), mod(cat, "S:S:k")
    sh = stable_hom(m, n)
    z = lambda_maps(m, n)
    for r in sh.representatives:
        assert z.contains(r.reshape(-1))


@pytest.mark.parametrize("pair", [("divided_power:2", "k"), ("divided_power:3", "k"), ("sweedler:3", "k"),
                                  ("divided_power:2", "truncpoly:2:trivial")])
def test_contractibility_shortcuts_agree_with_homotopy_solve(pair):
    from hopfo.catalogs import module_zoo
    from hopfo.equivariant import as_equivariant

    cat = setting(*pair)
    for m in module_zoo(cat):
        if m.dim > 5:
            continue
        F = cat.field
        for eq in (False, True):
            e = m if eq else as_equivariant(m.hmod)
            direct = is_homotopic(F.eye(e.dim), F.zeros((e.dim, e.dim)), e, e) is not None
            assert is_contractible(m, equivariant=eq) == direct, (m.name, eq)
