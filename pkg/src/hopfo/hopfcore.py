"""Finite-dimensional (Hopf) algebras given by structure constants.

Conventions used throughout the package:

* ``mult[i, j, k]`` is the coefficient of ``b_k`` in ``b_i b_j``;
* ``comult[i, j, k]`` is the coefficient of ``b_j (x) b_k`` in ``Delta(b_i)``;
* ``antipode[:, i]`` holds the coordinates of ``S(b_i)`` (matrices act on
  column vectors).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .exactla import Field, Subspace, image, inverse, kernel, rank, stack_constraints

__all__ = [
    "HopfoError",
    "AxiomError",
    "Algebra",
    "HopfPresentation",
    "SweedlerExpansion",
    "validate_hopf",
    "left_integral",
    "antipode_inverse",
    "catalog",
    "divided_power",
    "group_algebra",
    "taft",
    "sweedler",
    "hopf_to_json",
    "hopf_from_json",
    "primitive_root_of_unity",
]


class HopfoError(Exception):
    """Base class for errors raised by this package."""


class AxiomError(HopfoError, ValueError):
    """A structure failed one of its defining axioms.

    ``axiom`` names the law, ``where`` holds the offending basis indices.
    """

    def __init__(self, axiom: str, where: tuple = (), detail: str = ""):
        self.axiom = axiom
        self.where = tuple(int(w) for w in where)
        msg = f"{axiom} fails at basis indices {self.where}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def _first_mismatch(F: Field, a: np.ndarray, b: np.ndarray) -> Optional[tuple]:
    diff = np.argwhere(F.reduce(a) != F.reduce(b))
    if diff.size == 0:
        return None
    return tuple(int(x) for x in diff[0])


class Algebra:
    """Associative unital algebra on a fixed basis."""

    def __init__(self, field: Field, mult, unit, labels: Optional[Sequence[str]] = None):
        self.field = field
        self.mult = field.array(mult) if not isinstance(mult, np.ndarray) else field.reduce(mult)
        self.unit = field.array(unit) if not isinstance(unit, np.ndarray) else field.reduce(unit)
        d = self.mult.shape[0]
        if self.mult.shape != (d, d, d) or self.unit.shape != (d,):
            raise ValueError(f"inconsistent structure constant shapes {self.mult.shape}, {self.unit.shape}")
        self.dim = d
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(d))
        if len(self.labels) != d:
            raise ValueError("one label per basis element required")

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, field={self.field!r})"

    def check_algebra(self) -> None:
        """Associativity and unit laws, exhaustively on basis elements."""
        F, d, m = self.field, self.dim, self.mult
        left = F.matmul(m.reshape(d * d, d), m.reshape(d, d * d)).reshape(d, d, d, d)
        # b_i (b_j b_k): sum_l m[j,k,l] m[i,l,x]
        right = F.einsum("jkl,ilx->ijkx", m, m)
        bad = _first_mismatch(F, left, right)
        if bad is not None:
            raise AxiomError("associativity", bad[:3])
        eye = F.eye(d)
        bad = _first_mismatch(F, F.einsum("i,ijk->jk", self.unit, m), eye)
        if bad is not None:
            raise AxiomError("left unit", bad[:1])
        bad = _first_mismatch(F, F.einsum("j,ijk->ik", self.unit, m), eye)
        if bad is not None:
            raise AxiomError("right unit", bad[:1])

    def product(self, u, v) -> np.ndarray:
        """Coordinates of ``u v``."""
        return self.field.matmul(self.element_matrix(u), np.asarray(v))

    @cached_property
    def left_mult(self) -> np.ndarray:
        """``left_mult[i]`` is the matrix of ``x -> b_i x``."""
        return np.ascontiguousarray(self.mult.transpose(0, 2, 1))

    @cached_property
    def right_mult(self) -> np.ndarray:
        """``right_mult[j]`` is the matrix of ``x -> x b_j``."""
        return np.ascontiguousarray(self.mult.transpose(1, 2, 0))

    def element_matrix(self, coeffs) -> np.ndarray:
        """Left multiplication by the element with the given coordinates."""
        F = self.field
        d = self.dim
        flat = F.matmul(np.asarray(coeffs)[None, :], self.left_mult.reshape(d, d * d))
        return flat.reshape(d, d)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = 1
        return v

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra, chosen greedily in basis order."""
        F, d = self.field, self.dim
        gens: list[int] = []
        span = Subspace.span(F, d, self.unit[None, :])
        for i in range(d):
            if span.contains(self.basis_vector(i)):
                continue
            gens.append(i)
            span = self._closure(span, gens)
            if span.dim == d:
                break
        return tuple(gens)

    def _closure(self, span: Subspace, gens: Sequence[int]) -> Subspace:
        F = self.field
        while True:
            cols = span.columns()
            new = [F.matmul(self.left_mult[g], cols) for g in gens]
            grown = Subspace.span(F, self.dim, np.hstack([cols] + new).T)
            if grown.dim == span.dim:
                return grown
            span = grown


@dataclass(frozen=True)
class SweedlerExpansion:
    """``Delta(h) = sum coeff * b_left (x) b_right`` with zero terms dropped."""

    terms: tuple[tuple[int, int, object], ...]

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


class HopfPresentation(Algebra):
    """A validated finite-dimensional Hopf algebra.

    Build instances with :func:`validate_hopf` or :func:`catalog`; the
    constructor runs full validation and caches ``s_inverse``,
    ``integral`` (the normalized left integral), ``counit_kernel`` and
    ``integral_ideal``.
    """

    def __init__(self, field, labels, mult, unit, comult, counit, antipode, name: str = ""):
        super().__init__(field, mult, unit, labels)
        F = field
        self.comult = F.array(comult) if not isinstance(comult, np.ndarray) else F.reduce(comult)
        self.counit = F.array(counit) if not isinstance(counit, np.ndarray) else F.reduce(counit)
        self.antipode = F.array(antipode) if not isinstance(antipode, np.ndarray) else F.reduce(antipode)
        d = self.dim
        if self.comult.shape != (d, d, d) or self.counit.shape != (d,) or self.antipode.shape != (d, d):
            raise ValueError("inconsistent Hopf structure shapes")
        self.name = name
        self._validate()
        try:
            self.s_inverse = inverse(F, self.antipode)
        except np.linalg.LinAlgError:
            raise AxiomError("antipode invertibility", (), "S is singular") from None
        self.integral = self._left_integral()
        self.counit_kernel = kernel(F, self.counit[None, :])
        self.integral_ideal = Subspace.span(F, d, self.integral[None, :])

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"HopfPresentation({tag.strip() or 'dim=' + str(self.dim)}, field={self.field!r})"

    # -- axioms ------------------------------------------------------------

    def _validate(self) -> None:
        F, d = self.field, self.dim
        m, c, e, S = self.mult, self.comult, self.counit, self.antipode
        self.check_algebra()

        # (Delta (x) 1) Delta vs (1 (x) Delta) Delta
        lhs = F.einsum("ijk,jab->iabk", c, c)
        rhs = F.einsum("iak,kbe->iabe", c, c)
        bad = _first_mismatch(F, lhs, rhs)
        if bad is not None:
            raise AxiomError("coassociativity of Delta", bad[:1])

        eye = F.eye(d)
        bad = _first_mismatch(F, F.einsum("j,ijk->ik", e, c), eye)
        if bad is not None:
            raise AxiomError("left counit law", bad[:1])
        bad = _first_mismatch(F, F.einsum("k,ijk->ij", e, c), eye)
        if bad is not None:
            raise AxiomError("right counit law", bad[:1])

        # Delta is an algebra map
        one = self.unit
        bad = _first_mismatch(F, F.einsum("i,ijk->jk", one, c), F.reduce(np.outer(one, one)))
        if bad is not None:
            raise AxiomError("Delta(1) = 1 (x) 1", bad)
        delta_of_prod = F.einsum("ijl,lab->ijab", m, c)
        # Delta(b_i) Delta(b_j) = sum c[i,a,b] c[j,a',b'] m[a,a',x] m[b,b',y]
        t1 = F.einsum("iab,acx->ibcx", c, m)  # i, b, a', x
        t2 = F.einsum("ibcx,jcd->ijbdx", t1, c)  # i, j, b, b', x
        prod = F.einsum("ijbdx,bdy->ijxy", t2, m)
        bad = _first_mismatch(F, delta_of_prod, prod)
        if bad is not None:
            raise AxiomError("Delta is multiplicative", bad[:2])

        # epsilon is an algebra map
        if F.reduce(np.dot(e, one)) != 1:
            raise AxiomError("epsilon(1) = 1", ())
        bad = _first_mismatch(F, F.einsum("ijk,k->ij", m, e), F.reduce(np.outer(e, e)))
        if bad is not None:
            raise AxiomError("epsilon is multiplicative", bad[:2])

        # antipode: m (S (x) 1) Delta = eta epsilon = m (1 (x) S) Delta
        target = F.reduce(np.outer(e, one))
        s_left = F.einsum("ijk,lj->ilk", c, S)  # i, l(=S b_j), k
        lhs = F.einsum("ilk,lkx->ix", s_left, m)
        bad = _first_mismatch(F, lhs, target)
        if bad is not None:
            raise AxiomError("antipode law m(S(x)1)Delta = eta epsilon", bad[:1])
        s_right = F.einsum("ijk,lk->ijl", c, S)
        rhs = F.einsum("ijl,jlx->ix", s_right, m)
        bad = _first_mismatch(F, rhs, target)
        if bad is not None:
            raise AxiomError("antipode law m(1(x)S)Delta = eta epsilon", bad[:1])

    def _left_integral(self) -> np.ndarray:
        F, d = self.field, self.dim
        blocks = [F.sub(self.left_mult[i], F.scal(self.counit[i], F.eye(d))) for i in self.generators]
        space = kernel(F, stack_constraints(F, blocks, d))
        if space.dim != 1:
            raise AxiomError("left integral space is one-dimensional", (), f"found dimension {space.dim}")
        # rref rows already have leading coefficient 1
        return space.basis[0].copy()

    # -- derived data --------------------------------------------------------

    def sweedler(self, i: int) -> SweedlerExpansion:
        c = self.comult[i]
        terms = tuple((int(j), int(k), c[j, k]) for j, k in zip(*np.nonzero(c)))
        return SweedlerExpansion(terms)

    @cached_property
    def delta_terms(self) -> list[SweedlerExpansion]:
        return [self.sweedler(i) for i in range(self.dim)]

    @property
    def is_semisimple(self) -> bool:
        # Maschke / Larson-Sweedler: semisimple iff epsilon(integral) != 0
        return self.field.reduce(np.dot(self.counit, self.integral)) != 0

    def eps(self, v) -> object:
        return self.field.reduce(np.dot(self.counit, np.asarray(v)))

    def apply_antipode(self, v, inverse: bool = False) -> np.ndarray:
        S = self.s_inverse if inverse else self.antipode
        return self.field.matmul(S, np.asarray(v))

    def to_json(self) -> dict:
        return hopf_to_json(self)


def validate_hopf(field: Field, labels, mult, unit, comult, counit, antipode, name: str = "") -> HopfPresentation:
    """Check every Hopf axiom and return the cached presentation."""
    return HopfPresentation(field, labels, mult, unit, comult, counit, antipode, name=name)


def left_integral(h: HopfPresentation) -> np.ndarray:
    return h.integral.copy()


def antipode_inverse(h: HopfPresentation) -> np.ndarray:
    return h.s_inverse.copy()


# ---------------------------------------------------------------------------
# construction helpers


def _tensor_product(F: Field, mult: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product in H (x) H of elements given as d x d coefficient matrices."""
    t = F.einsum("ab,acx->bcx", x, mult)
    t = F.einsum("bcx,cd->bdx", t, y)
    return F.einsum("bdx,bdy->xy", t, mult)


def _from_words(F: Field, mult, unit, words, gen_delta, gen_antipode):
    """Extend Delta multiplicatively and S anti-multiplicatively from generators.

    ``words[i]`` lists the generator ids whose product is basis element i.
    """
    d = mult.shape[0]
    one_one = F.reduce(np.outer(unit, unit))
    comult = F.zeros((d, d, d))
    antipode = F.zeros((d, d))
    alg = Algebra(F, mult, unit)
    for i, word in enumerate(words):
        delta = one_one
        s = unit.copy()
        for g in word:
            delta = _tensor_product(F, mult, delta, gen_delta[g])
            s = alg.product(gen_antipode[g], s)
        comult[i] = delta
        antipode[:, i] = s
    return comult, antipode


def primitive_root_of_unity(n: int, p: int) -> int:
    """A primitive n-th root of unity in GF(p): g^((p-1)/n) for the smallest primitive root g."""
    if (p - 1) % n:
        raise ValueError(f"GF({p}) has no primitive {n}-th root of unity ({n} does not divide {p - 1})")
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2 if p > 2 else 1, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return pow(g, (p - 1) // n, p)
    raise ValueError(f"no primitive root modulo {p}")


def divided_power(p: int) -> HopfPresentation:
    """``F_p[d]/(d^p)`` with ``d`` primitive; modules are p-complexes."""
    F = Field(p)
    d = p
    mult = F.zeros((d, d, d))
    for a in range(d):
        for b in range(d):
            if a + b < d:
                mult[a, b, a + b] = 1
    unit = F.zeros(d)
    unit[0] = 1
    gen = F.zeros((d, d))
    gen[1, 0] = 1
    gen[0, 1] = 1
    s_gen = F.zeros(d)
    s_gen[1] = p - 1
    words = [[0] * n for n in range(d)]
    comult, antipode = _from_words(F, mult, unit, words, [gen], [s_gen])
    counit = F.zeros(d)
    counit[0] = 1
    labels = ["1", "d"] + [f"d^{n}" for n in range(2, d)]
    return validate_hopf(F, labels[:d], mult, unit, comult, counit, antipode, name=f"divided_power:{p}")


def _mixed_radix(orders: Sequence[int]):
    elems = [()]
    for n in orders:
        elems = [e + (k,) for e in elems for k in range(n)]
    return elems


def group_algebra(orders: Sequence[int], p: Optional[int] = None) -> HopfPresentation:
    """Group algebra of the abelian group with the given invariant factors over GF(p) or Q."""
    orders = tuple(int(n) for n in orders)
    if not orders or any(n < 1 for n in orders):
        raise ValueError("invariant factors must be positive integers")
    F = Field(p)
    elems = _mixed_radix(orders)
    index = {e: i for i, e in enumerate(elems)}
    d = len(elems)
    mult = F.zeros((d, d, d))
    comult = F.zeros((d, d, d))
    antipode = F.zeros((d, d))
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mult[i, j, index[tuple((x + y) % n for x, y, n in zip(a, b, orders))]] = 1
        comult[i, i, i] = 1
        antipode[index[tuple((-x) % n for x, n in zip(a, orders))], i] = 1
    unit = F.zeros(d)
    unit[0] = 1
    counit = F.array([1] * d)

    def label(e):
        parts = []
        for t, k in enumerate(e):
            g = "g" if len(orders) == 1 else f"g{t}"
            if k == 1:
                parts.append(g)
            elif k > 1:
                parts.append(f"{g}^{k}")
        return "*".join(parts) or "1"

    field_tag = "q" if p is None else str(p)
    name = f"group:{'x'.join(map(str, orders))}:{field_tag}"
    return validate_hopf(F, [label(e) for e in elems], mult, unit, comult, counit, antipode, name=name)


def taft(n: int, p: int) -> HopfPresentation:
    """Taft algebra ``<g, x | g^n = 1, x^n = 0, x g = q g x>`` over GF(p), n | p - 1.

    ``g`` is grouplike and ``Delta(x) = x (x) 1 + g (x) x``.  Basis
    ``g^a x^b`` has index ``a * n + b``.
    """
    if n < 2:
        raise ValueError("Taft algebras need n >= 2")
    F = Field(p)
    q = primitive_root_of_unity(n, p)
    d = n * n
    mult = F.zeros((d, d, d))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for e in range(n):
                    if b + e < n:
                        mult[a * n + b, c * n + e, ((a + c) % n) * n + b + e] = pow(q, b * c, p)
    unit = F.zeros(d)
    unit[0] = 1
    gi = {"g": 0, "x": 1}
    g_vec = F.zeros(d)
    g_vec[1 * n + 0] = 1
    x_vec = F.zeros(d)
    x_vec[0 * n + 1] = 1
    one = unit
    delta_g = F.reduce(np.outer(g_vec, g_vec))
    delta_x = F.add(np.outer(x_vec, one), np.outer(g_vec, x_vec))
    g_inv = F.zeros(d)
    g_inv[((n - 1) % n) * n] = 1
    alg = Algebra(F, mult, unit)
    s_x = F.scal(-1, alg.product(g_inv, x_vec))
    words = [[gi["g"]] * a + [gi["x"]] * b for a in range(n) for b in range(n)]
    comult, antipode = _from_words(F, mult, unit, words, [delta_g, delta_x], [g_inv, s_x])
    counit = F.zeros(d)
    for a in range(n):
        counit[a * n] = 1

    def label(a, b):
        gs = "" if a == 0 else ("g" if a == 1 else f"g^{a}")
        xs = "" if b == 0 else ("x" if b == 1 else f"x^{b}")
        return (gs + xs) or "1"

    labels = [label(a, b) for a in range(n) for b in range(n)]
    name = f"sweedler:{p}" if n == 2 else f"taft:{n}:{p}"
    return validate_hopf(F, labels, mult, unit, comult, counit, antipode, name=name)


def sweedler(p: int) -> HopfPresentation:
    """Sweedler's four-dimensional Hopf algebra (Taft algebra with n = 2), p odd."""
    if p == 2:
        raise ValueError("Sweedler's algebra needs odd characteristic")
    return taft(2, p)


_CATALOG_CACHE: dict = {}


def catalog(name: str, *params) -> HopfPresentation:
    """Built-in Hopf algebras.

    ``catalog("divided_power", 3)``, ``catalog("group_algebra", (3,), 3)``
    (``p=None`` for Q), ``catalog("taft", 4, 5)``, ``catalog("sweedler", 3)``.
    Shorthand strings such as ``"taft:2:3"`` are accepted as the sole
    argument.  Results are cached (presentations are immutable).
    """
    if not params and ":" in name:
        return parse_hopf(name)
    key = (name, params)
    if key in _CATALOG_CACHE:
        return _CATALOG_CACHE[key]
    if name in ("divided_power", "divided_power_p"):
        (p,) = params
        h = divided_power(int(p))
    elif name in ("group_algebra", "group"):
        orders, p = params
        if isinstance(orders, int):
            orders = (orders,)
        h = group_algebra(orders, p)
    elif name == "taft":
        n, p = params
        h = taft(int(n), int(p))
    elif name == "sweedler":
        (p,) = params
        h = sweedler(int(p))
    else:
        raise ValueError(f"unknown Hopf algebra family {name!r}")
    _CATALOG_CACHE[key] = h
    return h


def parse_hopf(spec: str) -> HopfPresentation:
    """Parse ``family:param[:param]`` shorthand.

    ``divided_power:p`` | ``group:n1xn2:p`` (``q`` for the rationals) |
    ``taft:n:p`` | ``sweedler:p``.
    """
    parts = spec.strip().split(":")
    fam, args = parts[0], parts[1:]
    try:
        if fam in ("divided_power", "dp") and len(args) == 1:
            return catalog("divided_power", int(args[0]))
        if fam in ("group", "group_algebra") and len(args) == 2:
            orders = tuple(int(x) for x in args[0].split("x"))
            p = None if args[1].lower() in ("q", "rational") else int(args[1])
            return catalog("group_algebra", orders, p)
        if fam == "taft" and len(args) == 2:
            return catalog("taft", int(args[0]), int(args[1]))
        if fam == "sweedler" and len(args) == 1:
            return catalog("sweedler", int(args[0]))
    except ValueError as exc:
        raise ValueError(f"bad Hopf algebra shorthand {spec!r}: {exc}") from None
    raise ValueError(f"bad Hopf algebra shorthand {spec!r}")


# ---------------------------------------------------------------------------
# JSON


def _sparse_triples(F: Field, t: np.ndarray) -> list:
    return [[int(i), int(j), int(k), F.format(t[i, j, k])] for i, j, k in sorted(zip(*np.nonzero(t)))]


def hopf_to_json(h: HopfPresentation) -> dict:
    F = h.field
    return {
        "field": F.to_json(),
        "dim": h.dim,
        "basis": list(h.labels),
        "unit": [F.format(x) for x in h.unit],
        "mult": _sparse_triples(F, h.mult),
        "comult": _sparse_triples(F, h.comult),
        "counit": [F.format(x) for x in h.counit],
        # row i lists the coordinates of S(b_i)
        "antipode": [[F.format(x) for x in h.antipode[:, i]] for i in range(h.dim)],
    }


def _dense_from_triples(F: Field, d: int, triples, what: str) -> np.ndarray:
    out = F.zeros((d, d, d))
    for n, entry in enumerate(triples):
        if len(entry) != 4:
            raise ValueError(f"{what}[{n}]: expected [i, j, k, c], got {entry!r}")
        i, j, k, c = entry
        for idx in (i, j, k):
            if not (0 <= int(idx) < d):
                raise ValueError(f"{what}[{n}]: index {idx} out of range for dim {d}")
        out[int(i), int(j), int(k)] = F.reduce(out[int(i), int(j), int(k)] + F(c))
    return out


def hopf_from_json(data: dict) -> HopfPresentation:
    for key in ("field", "dim", "unit", "mult", "comult", "counit", "antipode"):
        if key not in data:
            raise ValueError(f"hopf.json: missing field {key!r}")
    F = Field.from_json(data["field"])
    d = int(data["dim"])
    labels = data.get("basis") or [f"b{i}" for i in range(d)]
    if len(labels) != d or len(data["unit"]) != d or len(data["counit"]) != d:
        raise ValueError("hopf.json: basis/unit/counit lengths must equal dim")
    anti = data["antipode"]
    if len(anti) != d or any(len(r) != d for r in anti):
        raise ValueError("hopf.json: antipode must be a dim x dim matrix")
    mult = _dense_from_triples(F, d, data["mult"], "mult")
    comult = _dense_from_triples(F, d, data["comult"], "comult")
    antipode = F.array(anti).T.copy()
    return validate_hopf(F, labels, mult, F.array(data["unit"]), comult, F.array(data["counit"]), antipode,
                         name=data.get("name", ""))


def regular_rank_check(h: HopfPresentation) -> bool:
    """Sanity helper: the regular representation is faithful."""
    return rank(h.field, h.left_mult.reshape(h.dim, -1)) == h.dim


def counit_kernel_basis(h: HopfPresentation) -> np.ndarray:
    return h.counit_kernel.columns()


def integral_span(h: HopfPresentation):
    return image(h.field, h.integral[:, None])
