from __future__ import annotations

import json

import pytest

from hopfo.catalogs import (
    STANDARD_PAIRS,
    ShorthandError,
    load_hopf,
    module_zoo,
    parse_category,
    parse_hmodule,
    parse_module,
    zoo_names,
)
from hopfo.equivariant import eqmod_to_json
from hopfo.hopfcore import hopf_to_json

ZOO_SIZES = {
    ("divided_power:2", "k"): 13,
    ("divided_power:3", "k"): 14,
    ("divided_power:2", "truncpoly:2"): 12,
    ("sweedler:3", "k"): 13,
    ("divided_power:2", "truncpoly:2:trivial"): 18,
    ("divided_power:3", "a2"): 19,
}


@pytest.mark.parametrize("pair,size", sorted(ZOO_SIZES.items()))
def test_zoo_sizes(pair, size):
    cat = parse_category(pair[1], load_hopf(pair[0]))
    zoo = module_zoo(cat)
    assert len(zoo) == size >= 12
    assert [m.name for m in zoo] == zoo_names(cat)
    assert len(set(zoo_names(cat))) == size


def test_standard_pairs_have_large_catalogs():
    for h, a in STANDARD_PAIRS:
        assert len(zoo_names(parse_category(a, load_hopf(h)))) >= 12


@pytest.mark.parametrize("spec,dim", [("k", 1), ("H", 3), ("Hbar", 2), ("kereps", 2), ("J2", 2), ("free:2", 6),
                                      ("k+J2", 3), ("C:k", 3), ("S:k", 2), ("D:k", 2), ("E:k", 3), ("F:k", 3),
                                      ("S:S:k", 4), ("k@Hbar", 2)])
def test_module_shorthand_dims(spec, dim):
    cat = parse_category("k", load_hopf("divided_power:3"))
    assert parse_module(spec, cat).dim == dim


def test_module_shorthand_over_nontrivial_category():
    cat = parse_category("truncpoly:3", load_hopf("divided_power:3"))
    assert parse_module("A", cat).dim == 3
    assert parse_module("Lambda", cat).dim == 9
    assert parse_module("A@Hbar", cat).dim == 6
    with pytest.raises(ShorthandError, match="X@"):
        parse_module("Hbar", cat)


def test_a2_needs_explicit_simple():
    cat = parse_category("a2", load_hopf("divided_power:2"))
    with pytest.raises(ShorthandError, match="ambiguous"):
        parse_module("k", cat)
    assert parse_module("S1", cat).grading == (1,)


def test_radical_must_be_stable():
    cat = parse_category("truncpoly:2", load_hopf("divided_power:2"))
    with pytest.raises(ShorthandError, match="not stable under H"):
        parse_module("k", cat)


@pytest.mark.parametrize("bad", ["", "X", "J", "free:x", "C:", "truncpoly"])
def test_bad_module_shorthand(bad):
    cat = parse_category("k", load_hopf("divided_power:2"))
    with pytest.raises((ShorthandError, ValueError)):
        parse_module(bad, cat)


@pytest.mark.parametrize("bad", ["truncpoly:x", "truncpoly:2:odd", "quiver"])
def test_bad_category_shorthand(bad):
    with pytest.raises(ShorthandError):
        parse_category(bad, load_hopf("divided_power:2"))


def test_files(tmp_path):
    h = load_hopf("divided_power:3")
    hp = tmp_path / "h.json"
    hp.write_text(json.dumps(hopf_to_json(h)))
    h2 = load_hopf(str(hp))
    assert h2.dim == 3
    mp = tmp_path / "m.json"
    mp.write_text(json.dumps(parse_hmodule("J2", h).to_json()))
    assert parse_hmodule(str(mp), h2).dim == 2
    cat = parse_category("truncpoly:3", h)
    ep = tmp_path / "e.json"
    ep.write_text(json.dumps(eqmod_to_json(parse_module("C:A", cat))))
    assert parse_module(str(ep), cat).dim == 9


def test_json_errors_report_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"field": {\n  "kind": }')
    with pytest.raises(ShorthandError, match="line 2 column"):
        load_hopf(str(p))


def test_module_file_dim_mismatch(tmp_path):
    h = load_hopf("divided_power:2")
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"dim": 3, "action": {"d": [[0, 0], [1, 0]]}}))
    with pytest.raises(ShorthandError, match="dim"):
        parse_hmodule(str(p), h)
