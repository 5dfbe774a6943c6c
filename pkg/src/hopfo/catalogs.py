"""Shorthand parsing for categories and modules, and the built-in module catalogs.

Category shorthand::

    k | unit            one object, A = k
    truncpoly:n         k[x]/(x^n), primitive generator acting as d/dx
    truncpoly:n:trivial k[x]/(x^n), trivial H-action
    a2                  the A2 quiver e1, e2, alpha: 1 -> 2, trivial H-action
    path.json           a category file

Module shorthand (summands joined by ``+``)::

    k            trivial module (unit category) / the simple at object 0
    S<i>         simple module at object i (radical must be H-stable)
    A            A itself, with its H-action
    Lambda       A # H;  free:<r> for (A # H)^r
    H, Hbar, kereps, J<n>
                 H-modules: regular, H/(lambda), ker(eps), Jordan block
                 (unit category only, otherwise use X@V)
    X@V          tensor X with the H-module V
    C:X S:X D:X  cone, suspension, desuspension
    E:X F:X      coinduced E(U X) and induced C(U X) along the forgetful functor
    path.json    a module file
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from pathlib import Path

import numpy as np

from .equivariant import (
    AModule,
    EquivariantModule,
    HModuleCategory,
    E_functor,
    a2_category,
    as_equivariant,
    category_from_json,
    cone_adjoint_C,
    eq_cone,
    eq_desuspend,
    eq_direct_sum,
    eq_suspend,
    eqmod_from_json,
    free_lambda_module,
    tensor_with_hmodule,
    truncpoly_category,
    unit_category,
)
from .exactla import Subspace
from .hmodules import (
    HModule,
    counit_kernel_module,
    free_module,
    jordan_module,
    quotient_by_integral,
    regular_module,
    trivial_module,
    validate_module,
)
from .hopfcore import HopfPresentation, HopfoError, hopf_from_json, parse_hopf

__all__ = [
    "ShorthandError",
    "load_hopf",
    "parse_category",
    "parse_hmodule",
    "hmodule_from_json",
    "parse_module",
    "regular_A",
    "simple_module",
    "module_zoo",
    "zoo_names",
    "STANDARD_PAIRS",
]


class ShorthandError(ValueError):
    """Malformed or inapplicable shorthand."""


# (hopf, category) pairs used by the suites; the category string is parsed over the hopf
STANDARD_PAIRS = (
    ("divided_power:2", "k"),
    ("divided_power:3", "k"),
    ("divided_power:2", "truncpoly:2"),
    ("sweedler:3", "k"),
)


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ShorthandError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ShorthandError(f"{path}: {exc.strerror}") from exc


def load_hopf(spec: str) -> HopfPresentation:
    if spec.endswith(".json"):
        return hopf_from_json(_read_json(spec))
    try:
        return parse_hopf(spec)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, HopfoError):
            raise
        raise ShorthandError(f"unknown Hopf algebra {spec!r}: {exc}") from exc


def parse_category(spec: str, hopf: HopfPresentation) -> HModuleCategory:
    spec = spec.strip()
    if spec.endswith(".json"):
        return category_from_json(_read_json(spec), hopf)
    return _category(spec, hopf)


def _category(spec: str, hopf: HopfPresentation) -> HModuleCategory:
    cache = hopf.__dict__.setdefault("_cat_cache", {})
    if spec in cache:
        return cache[spec]
    parts = spec.split(":")
    if parts[0] in ("k", "unit"):
        cat = unit_category(hopf)
    elif parts[0] == "truncpoly":
        if len(parts) not in (2, 3) or not parts[1].isdigit():
            raise ShorthandError("expected truncpoly:n or truncpoly:n:trivial")
        trivial = len(parts) == 3
        if trivial and parts[2] != "trivial":
            raise ShorthandError(f"unknown truncpoly option {parts[2]!r}")
        cat = truncpoly_category(hopf, int(parts[1]), trivial=trivial)
    elif parts[0] == "a2":
        cat = a2_category(hopf)
    else:
        raise ShorthandError(f"unknown category {spec!r}")
    cache[spec] = cat
    return cat


# ---------------------------------------------------------------------------
# modules


def regular_A(cat: HModuleCategory) -> EquivariantModule:
    """A as a left module over itself, with the H-action of the category."""
    grading = [cat.target[i] for i in range(cat.dim)]
    return EquivariantModule(cat, grading, cat.left_mult, cat.h_action, name="A")


def _radical_candidate(cat: HModuleCategory) -> Subspace:
    """Span of the non-identity basis morphisms, checked to be an H-stable nilpotent ideal."""
    F = cat.field
    ids = {int(np.nonzero(u)[0][0]) for u in cat.units if np.count_nonzero(u) == 1}
    if len(ids) != len(cat.objects):
        raise ShorthandError("identity morphisms are not basis elements")
    rest = [i for i in range(cat.dim) if i not in ids]
    span = Subspace.span(F, cat.dim, np.stack([cat.basis_vector(i) for i in rest])) if rest else \
        Subspace.zero(F, cat.dim)
    for i in rest:
        for j in range(cat.dim):
            for prod in (cat.mult[i, j], cat.mult[j, i]):
                if not span.contains(prod):
                    raise ShorthandError("non-identity morphisms do not span an ideal")
        for u in range(cat.hopf.dim):
            if not span.contains(cat.h_action[u][:, i]):
                raise ShorthandError("the radical is not stable under H; no simple equivariant modules")
    return span


def simple_module(cat: HModuleCategory, x: int) -> EquivariantModule:
    """The one-dimensional module at object ``x`` with H acting through the counit."""
    F = cat.field
    if not 0 <= x < len(cat.objects):
        raise ShorthandError(f"no object {x}")
    _radical_candidate(cat)
    a = F.zeros((cat.dim, 1, 1))
    a[:, 0, 0] = cat.units[x]
    h = F.zeros((cat.hopf.dim, 1, 1))
    h[:, 0, 0] = cat.hopf.counit
    return EquivariantModule(cat, [x], a, h, name=f"S{x}" if len(cat.objects) > 1 else "k")


def parse_hmodule(spec: str, hopf: HopfPresentation) -> HModule:
    """H-module shorthand: k, H, Hbar, kereps, J<n>, free:<r>, sums with ``+``, or a module file."""
    spec = spec.strip()
    if "+" in spec:
        from .hmodules import direct_sum

        return direct_sum(*[parse_hmodule(s, hopf) for s in spec.split("+")])
    if spec.endswith(".json"):
        return hmodule_from_json(_read_json(spec), hopf, name=Path(spec).stem)
    if spec == "k":
        return trivial_module(hopf, 1)
    if spec == "H":
        return regular_module(hopf)
    if spec == "Hbar":
        return quotient_by_integral(hopf)
    if spec == "kereps":
        return counit_kernel_module(hopf)
    m = re.fullmatch(r"J(\d+)", spec)
    if m:
        return jordan_module(hopf, [int(m.group(1))])
    m = re.fullmatch(r"free:(\d+)", spec)
    if m:
        return free_module(hopf, int(m.group(1)))
    raise ShorthandError(f"unknown H-module {spec!r}")


def hmodule_from_json(data: dict, hopf: HopfPresentation, name: str = "") -> HModule:
    """``{"hopf": ..., "dim": n, "action": {label: matrix}}``."""
    if "action" not in data:
        raise ShorthandError("module file has no 'action' field")
    try:
        m = validate_module(hopf, data["action"], name=name)
    except HopfoError:
        raise
    except (ValueError, TypeError) as exc:
        raise ShorthandError(f"action: {exc}") from exc
    if "dim" in data and int(data["dim"]) != m.dim:
        raise ShorthandError(f"dim: declared {data['dim']} but the action matrices have size {m.dim}")
    return m


_HMOD_ATOMS = re.compile(r"(H|Hbar|kereps|J\d+)")


def _split_sum(spec: str) -> list[str]:
    return [s.strip() for s in spec.split("+")]


def parse_module(spec: str, cat: HModuleCategory) -> EquivariantModule:
    spec = spec.strip()
    if not spec:
        raise ShorthandError("empty module shorthand")
    parts = _split_sum(spec)
    if len(parts) > 1:
        out = eq_direct_sum(*[parse_module(p, cat) for p in parts], name=spec)
        return out
    m = _atom(spec, cat)
    m.name = spec
    return m


def _atom(spec: str, cat: HModuleCategory) -> EquivariantModule:
    hopf = cat.hopf
    if spec.endswith(".json"):
        data = _read_json(spec)
        if "object_grading" in data:
            return eqmod_from_json(data, cat)
        return as_equivariant(parse_hmodule(spec, hopf)) if cat.dim == 1 else _need_unit(spec)
    prefix = re.match(r"([CSDEF]):(.*)", spec)
    if prefix:
        op, rest = prefix.groups()
        inner = _atom(rest, cat)
        if op == "C":
            return eq_cone(inner)
        if op == "S":
            return eq_suspend(inner)
        if op == "D":
            return eq_desuspend(inner)
        u = AModule(cat, inner.grading, inner.a_action, name=inner.name, check=False)
        return E_functor(u) if op == "E" else cone_adjoint_C(u)
    if "@" in spec:
        left, right = spec.split("@", 1)
        return tensor_with_hmodule(_atom(left, cat), parse_hmodule(right, hopf))
    if spec == "k":
        if cat.dim == 1:
            return as_equivariant(trivial_module(hopf, 1))
        if len(cat.objects) == 1:
            return simple_module(cat, 0)
        raise ShorthandError("'k' is ambiguous over a category with several objects; use S<i>")
    m = re.fullmatch(r"S(\d+)", spec)
    if m:
        return simple_module(cat, int(m.group(1)))
    if spec == "A":
        return regular_A(cat)
    if spec == "Lambda":
        return free_lambda_module(cat)
    m = re.fullmatch(r"free:(\d+)", spec)
    if m:
        return free_lambda_module(cat, int(m.group(1)))
    if _HMOD_ATOMS.fullmatch(spec):
        if cat.dim != 1:
            return _need_unit(spec)
        return as_equivariant(parse_hmodule(spec, hopf))
    raise ShorthandError(f"unknown module {spec!r}")


def _need_unit(spec: str):
    raise ShorthandError(f"{spec!r} is an H-module; over a nontrivial A write X@{spec}")


# ---------------------------------------------------------------------------
# catalogs


def zoo_names(cat: HModuleCategory) -> list[str]:
    """Shorthand for the built-in catalog over ``cat`` (at least 12 entries)."""
    hopf = cat.hopf
    if cat.dim == 1:
        names = ["k", "H", "Hbar", "kereps", "k+k", "k+H", "H+H", "C:k", "E:k", "S:S:k", "D:k", "S:k+k",
                 "D:Hbar"]
        if hopf.name.startswith(("divided_power", "group")) and hopf.dim <= 5:
            names += [f"J{n}" for n in range(2, hopf.dim)]
        return names
    names = ["A", "Lambda", "A+A", "C:A", "S:A", "D:A", "E:A", "F:A", "A+Lambda", "S:S:A", "D:D:A", "S:D:A"]
    try:
        _radical_candidate(cat)
        simples = [f"S{x}" if len(cat.objects) > 1 else "k" for x in range(len(cat.objects))]
        s0 = simples[0]
        names += simples + [f"{s0}@H", f"{s0}@Hbar", f"{s0}+A", f"C:{s0}", f"S:{s0}"]
    except ShorthandError:
        pass
    return names


def module_zoo(cat: HModuleCategory) -> list[EquivariantModule]:
    return list(_zoo(cat))


@lru_cache(maxsize=32)
def _zoo(cat: HModuleCategory) -> tuple:
    return tuple(parse_module(n, cat) for n in zoo_names(cat))
