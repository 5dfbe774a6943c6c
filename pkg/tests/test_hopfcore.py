from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from hopfo.hopfcore import AxiomError, catalog, hopf_from_json, hopf_to_json, parse_hopf

ALGEBRAS = ["divided_power:2", "divided_power:3", "divided_power:5", "group:2:q", "group:3:3",
            "sweedler:3", "taft:2:3", "taft:4:5"]


@pytest.fixture(scope="module", params=ALGEBRAS)
def hopf(request):
    return parse_hopf(request.param)


def test_integral_space_is_a_line(hopf):
    space = oracles.left_integral_space(hopf.field.p, hopf.mult, hopf.counit)
    assert len(space) == 1
    # the library's integral spans the oracle line
    stacked = np.vstack([np.array(space[0], dtype=object), hopf.integral.astype(object)])
    assert oracles.rank(hopf.field.p, stacked) == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_divided_power_integral_is_top_power(p):
    h = catalog("divided_power", p)
    expected = [0] * (p - 1) + [1]
    assert [int(x) for x in h.integral] == expected
    assert h.labels[-1] in (f"d^{p - 1}", "d")


def test_antipode_inverse(hopf):
    F = hopf.field
    assert F.equal(F.matmul(hopf.antipode, hopf.s_inverse), F.eye(hopf.dim))


def test_semisimplicity_from_counit_of_integral(hopf):
    eps_lambda = hopf.field.reduce(np.dot(hopf.counit, hopf.integral))
    assert hopf.is_semisimple == (eps_lambda != 0)
    # only the rational group algebra is semisimple in the catalog
    assert hopf.is_semisimple == (hopf.name == "group:2:q" or hopf.field.p is None)


def test_json_round_trip(hopf):
    data = hopf_to_json(hopf)
    again = hopf_from_json(json.loads(json.dumps(data)))
    F = hopf.field
    for key in ("mult", "comult", "antipode", "counit", "unit"):
        assert F.equal(getattr(again, key), getattr(hopf, key))
    assert again.labels == hopf.labels


def _elements(d):
    return st.lists(st.integers(-3, 3), min_size=d, max_size=d)


@pytest.mark.parametrize("name", ["divided_power:3", "sweedler:3", "taft:2:3"])
@given(data=st.data())
def test_comultiplication_is_multiplicative(name, data):
    h = parse_hopf(name)
    F = h.field
    d = h.dim
    u = F.array(data.draw(_elements(d)))
    v = F.array(data.draw(_elements(d)))
    uv = F.einsum("i,ik->k", u, F.einsum("j,ijk->ik", v, h.mult))
    lhs = F.einsum("i,ijk->jk", uv, h.comult)
    du = F.einsum("i,ijk->jk", u, h.comult)
    dv = F.einsum("i,ijk->jk", v, h.comult)
    # (a (x) b)(c (x) e) = ac (x) be
    t = F.einsum("ab,ce->acbe", du, dv)
    t = F.einsum("acbe,acx->xbe", t, h.mult)
    rhs = F.einsum("xbe,bey->xy", t, h.mult)
    assert F.equal(lhs, rhs)


@pytest.mark.parametrize("name", ALGEBRAS)
def test_antipode_is_antimultiplicative(name):
    h = parse_hopf(name)
    F = h.field
    S = h.antipode
    for i in range(h.dim):
        for j in range(h.dim):
            lhs = F.matmul(S, h.mult[i, j][:, None])[:, 0]
            rhs = F.einsum("a,ac->c", S[:, i], F.einsum("b,bac->ac", S[:, j], h.mult))
            assert F.equal(lhs, rhs)


def _dp3_json():
    return hopf_to_json(parse_hopf("divided_power:3"))


def test_broken_coassociativity_names_delta():
    data = _dp3_json()
    data["comult"].append([2, 1, 2, 1])
    with pytest.raises(AxiomError, match="coassociativity of Delta") as exc:
        hopf_from_json(data)
    assert exc.value.where == (2,)


def test_broken_counit():
    data = hopf_to_json(parse_hopf("divided_power:2"))
    data["comult"] = [r for r in data["comult"] if r[:3] != [1, 0, 1]]
    with pytest.raises(AxiomError, match="counit"):
        hopf_from_json(data)


def test_broken_antipode():
    data = hopf_to_json(parse_hopf("sweedler:3"))
    data["antipode"] = [[int(i == j) for j in range(4)] for i in range(4)]
    with pytest.raises(AxiomError, match="antipode"):
        hopf_from_json(data)


@pytest.mark.parametrize("spec", ["divided_power:4", "taft:3:5", "nope:1", "sweedler"])
def test_bad_shorthand(spec):
    with pytest.raises(ValueError):
        parse_hopf(spec)
