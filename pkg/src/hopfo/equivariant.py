"""H-module categories, equivariant modules and smash products.

A finite H-module category is stored as its category algebra: a basis of
morphisms ``a_i: source(i) -> target(i)``, composition constants
``mult[i, j, k]`` (coefficient of ``a_k`` in ``a_i o a_j``), identity
idempotents per object and an H-action on the morphism space.  Modules
are left modules of this algebra whose coordinates each live over a single
object (``grading``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .exactla import Field, Subspace, image, kernel, kronecker, quotient_map, rank, solve, stack_constraints
from .hmodules import (
    VALIDATE_LIMIT,
    HModule,
    _check_module_axioms,
    _tensor_action,
    counit_kernel_module,
    homology,
    intertwiners,
    lin_comb,
    module_from_generators,
    quotient_by_integral,
    regular_module,
)
from .hopfcore import Algebra, AxiomError, HopfoError, HopfPresentation

__all__ = [
    "HModuleCategory",
    "validate_category",
    "unit_category",
    "truncpoly_category",
    "a2_category",
    "SmashAlgebra",
    "smash",
    "AlgebraModule",
    "AModule",
    "EquivariantModule",
    "HomSpace",
    "as_equivariant",
    "forgetful_U",
    "cone_adjoint_C",
    "E_functor",
    "adjunction_phi",
    "adjunction_psi",
    "cu_unit",
    "cu_counit",
    "tensor_with_hmodule",
    "eq_cone",
    "eq_suspend",
    "eq_desuspend",
    "eq_shift",
    "eq_direct_sum",
    "eq_submodule",
    "eq_quotient",
    "generated_submodule",
    "lambda_maps",
    "a_linear_maps",
    "hom_space",
    "to_smash_module",
    "from_smash_module",
    "free_lambda_module",
    "category_to_json",
    "category_from_json",
    "eqmod_to_json",
    "eqmod_from_json",
]


# ---------------------------------------------------------------------------
# categories


class HModuleCategory(Algebra):
    """A finite linear category with an H-action on morphisms, as a graded algebra."""

    def __init__(self, hopf: HopfPresentation, objects: Sequence[str], source: Sequence[int],
                 target: Sequence[int], mult, units, h_action, labels=None, name: str = "", check: bool = True):
        F = hopf.field
        mult = F.reduce(np.asarray(mult)) if isinstance(mult, np.ndarray) else F.array(mult)
        units = F.reduce(np.asarray(units)) if isinstance(units, np.ndarray) else F.array(units)
        unit = F.reduce(units.sum(axis=0)) if len(units) else F.zeros(mult.shape[0])
        super().__init__(F, mult, unit, labels)
        self.hopf = hopf
        self.objects = tuple(objects)
        self.source = tuple(int(s) for s in source)
        self.target = tuple(int(t) for t in target)
        self.units = units
        self.h_action = F.reduce(np.asarray(h_action)) if isinstance(h_action, np.ndarray) else F.array(h_action)
        self.name = name
        if len(self.source) != self.dim or len(self.target) != self.dim:
            raise ValueError("source/target needed for every morphism basis element")
        if self.units.shape != (len(self.objects), self.dim):
            raise ValueError("one identity vector per object required")
        if self.h_action.shape != (hopf.dim, self.dim, self.dim):
            raise ValueError("h_action must have shape (dim H, dim A, dim A)")
        if check:
            self.validate()

    def __repr__(self):
        return f"HModuleCategory({self.name or 'dim=' + str(self.dim)}, objects={len(self.objects)})"

    @cached_property
    def hom_dims(self) -> np.ndarray:
        out = np.zeros((len(self.objects), len(self.objects)), dtype=int)
        for s, t in zip(self.source, self.target):
            out[s, t] += 1
        return out

    @property
    def total_dim(self) -> int:
        return self.dim

    def validate(self) -> None:
        F, d, h = self.field, self.dim, self.hopf
        self.check_algebra()
        for i, j, k in np.argwhere(self.mult != 0):
            composable = self.target[j] == self.source[i]
            if not composable or self.source[k] != self.source[j] or self.target[k] != self.target[i]:
                raise AxiomError("composition respects the grading", (i, j, k))
        for x, e in enumerate(self.units):
            for i in np.nonzero(e)[0]:
                if self.source[i] != x or self.target[i] != x:
                    raise AxiomError("identity lies in the endomorphisms of its object", (x, i))
            if not F.equal(self.product(e, e), e):
                raise AxiomError("identity is idempotent", (x,))
        # h_action: a module structure preserving each block
        _check_module_axioms(h, self.h_action)
        for u, i, j in np.argwhere(self.h_action != 0):
            if self.source[i] != self.source[j] or self.target[i] != self.target[j]:
                raise AxiomError("H-action preserves morphism blocks", (u, j, i))
        # enrichment: h.(a b) = sum (h_(1).a)(h_(2).b)
        act = self.h_action
        lhs = F.einsum("ijk,hzk->hijz", self.mult, act)
        q = F.einsum("uyi,ywz->uiwz", act, self.mult)
        s = F.einsum("uiwz,vwj->uivjz", q, act)
        rhs = F.einsum("huv,uivjz->hijz", h.comult, s)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            raise AxiomError("enrichment h.(a o b) = sum (h1.a) o (h2.b)", tuple(bad[0][:3]))
        for x, e in enumerate(self.units):
            for u in range(h.dim):
                if not F.equal(F.matmul(act[u], e), F.scal(h.counit[u], e)):
                    raise AxiomError("h.id = eps(h) id", (u, x))

    def act(self, hcoeffs, a) -> np.ndarray:
        """``h . a`` for coordinates of h in H and of a in A."""
        return self.field.matmul(lin_comb(self.field, hcoeffs, self.h_action), np.asarray(a))

    @cached_property
    def s_inv_action(self) -> np.ndarray:
        """``s_inv_action[u]`` is the matrix of ``a -> S^-1(b_u) . a``."""
        F = self.field
        return np.stack([lin_comb(F, self.hopf.s_inverse[:, u], self.h_action) for u in range(self.hopf.dim)])


def validate_category(hopf, objects, source, target, mult, units, h_action, labels=None, name="") -> HModuleCategory:
    return HModuleCategory(hopf, objects, source, target, mult, units, h_action, labels=labels, name=name)


def unit_category(hopf: HopfPresentation) -> HModuleCategory:
    """One object with endomorphisms k, H acting through the counit."""
    cached = getattr(hopf, "_unit_cat", None)
    if cached is None:
        F = hopf.field
        mult = F.zeros((1, 1, 1))
        mult[0, 0, 0] = 1
        units = F.eye(1)
        act = hopf.counit.reshape(hopf.dim, 1, 1).copy()
        cached = HModuleCategory(hopf, ["*"], [0], [0], mult, units, act, labels=["id"], name="k")
        hopf._unit_cat = cached
    return cached


def truncpoly_category(hopf: HopfPresentation, n: int, trivial: bool = False) -> HModuleCategory:
    """``k[x]/(x^n)``, with the primitive generator acting as ``d/dx`` unless ``trivial``.

    The derivation action is only defined for ``divided_power:p`` with
    ``p | n``; validation rejects other combinations.
    """
    F = hopf.field
    mult = F.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            if a + b < n:
                mult[a, b, a + b] = 1
    units = F.zeros((1, n))
    units[0, 0] = 1
    labels = ["1", "x"] + [f"x^{i}" for i in range(2, n)]
    if trivial:
        act = np.stack([F.scal(hopf.counit[u], F.eye(n)) for u in range(hopf.dim)])
        name = f"truncpoly:{n}:trivial"
    else:
        if not hopf.name.startswith("divided_power"):
            raise ValueError("the derivation action needs a divided_power Hopf algebra")
        D = F.zeros((n, n))
        for i in range(1, n):
            D[i - 1, i] = i
        act = module_from_generators(hopf, {hopf.generators[0]: D}).action
        name = f"truncpoly:{n}"
    return HModuleCategory(hopf, ["*"], [0] * n, [0] * n, mult, units, act, labels=labels[:n], name=name)


def a2_category(hopf: HopfPresentation) -> HModuleCategory:
    """Two objects and one arrow ``1 -> 2``, trivial H-action."""
    F = hopf.field
    # basis: e1, e2, alpha
    mult = F.zeros((3, 3, 3))
    mult[0, 0, 0] = 1
    mult[1, 1, 1] = 1
    mult[2, 0, 2] = 1  # alpha o e1
    mult[1, 2, 2] = 1  # e2 o alpha
    units = F.zeros((2, 3))
    units[0, 0] = 1
    units[1, 1] = 1
    act = np.stack([F.scal(hopf.counit[u], F.eye(3)) for u in range(hopf.dim)])
    return HModuleCategory(hopf, ["1", "2"], [0, 1, 0], [0, 1, 1], mult, units, act,
                           labels=["e1", "e2", "alpha"], name="a2")


# ---------------------------------------------------------------------------
# smash product


class SmashAlgebra(Algebra):
    """``A # H`` on ``A (x) H`` (index ``i * dim H + j``)."""

    def __init__(self, cat: HModuleCategory):
        h = cat.hopf
        F = h.field
        dA, d = cat.dim, h.dim
        # (a_i (x) h_j)(a_k (x) h_l) = sum a_i (h_j1 . a_k) (x) h_j2 h_l
        x = F.einsum("juv,uyk->jkyv", h.comult, cat.h_action)  # h_j1 . a_k = sum_y act[u][y, k] a_y
        y = F.einsum("jkyv,iyz->ijkzv", x, cat.mult)
        z = F.einsum("ijkzv,vlw->ijklzw", y, h.mult)
        mult = z.reshape(dA * d, dA * d, dA * d)
        unit = F.reduce(np.kron(cat.unit, h.unit))
        labels = [f"{a}#{b}" for a in cat.labels for b in h.labels]
        super().__init__(F, mult, unit, labels)
        self.base = cat
        self.hopf = h
        self.check_algebra()

    @cached_property
    def grading(self) -> tuple[int, ...]:
        """Object over which each basis element lives, as a left module over itself."""
        return tuple(self.base.target[i] for i in range(self.base.dim) for _ in range(self.hopf.dim))


def smash(cat: HModuleCategory, hopf: Optional[HopfPresentation] = None) -> SmashAlgebra:
    if hopf is not None and hopf is not cat.hopf:
        raise ValueError("category is enriched over a different Hopf algebra")
    cached = getattr(cat, "_smash", None)
    if cached is None:
        cached = SmashAlgebra(cat)
        cat._smash = cached
    return cached


class AlgebraModule:
    """A left module over an arbitrary :class:`Algebra`."""

    def __init__(self, algebra: Algebra, action, check: bool = True, name: str = ""):
        F = algebra.field
        self.algebra = algebra
        self.field = F
        self.action = F.reduce(np.asarray(action))
        self.dim = self.action.shape[1]
        self.name = name
        if self.action.shape[0] != algebra.dim:
            raise ValueError("one action matrix per algebra basis element required")
        if check:
            _check_module_axioms(algebra, self.action)

    @cached_property
    def gen_action(self):
        return [self.action[g] for g in self.algebra.generators]


# ---------------------------------------------------------------------------
# A-modules and equivariant modules


def _check_grading(cat: HModuleCategory, grading, a_action) -> None:
    g = np.asarray(grading, dtype=int)
    n = len(g)
    for i in range(cat.dim):
        rows, cols = np.nonzero(a_action[i])
        bad = (g[cols] != cat.source[i]) | (g[rows] != cat.target[i])
        if np.any(bad):
            k = int(np.argmax(bad))
            raise AxiomError("A-action respects the object grading", (i, int(rows[k]), int(cols[k])))
    for x in range(len(cat.objects)):
        e = lin_comb(cat.field, cat.units[x], a_action) if n else a_action[0]
        expect = np.diag((g == x).astype(int))
        if n and not cat.field.equal(e, cat.field.array(expect)):
            raise AxiomError("object identities act as grading projectors", (x,))


class AModule:
    """A left module over the category algebra with homogeneous coordinates."""

    def __init__(self, cat: HModuleCategory, grading, a_action, name: str = "", check: bool = True):
        F = cat.field
        self.cat = cat
        self.field = F
        self.grading = tuple(int(x) for x in grading)
        self.a_action = F.reduce(np.asarray(a_action)) if isinstance(a_action, np.ndarray) else F.array(a_action)
        self.dim = len(self.grading)
        self.name = name
        if self.a_action.shape != (cat.dim, self.dim, self.dim):
            raise ValueError(f"a_action must have shape {(cat.dim, self.dim, self.dim)}")
        if check and self.dim:
            _check_module_axioms(cat, self.a_action)
            _check_grading(cat, self.grading, self.a_action)

    @cached_property
    def a_gens(self):
        return [self.a_action[g] for g in self.cat.generators]

    def rho_a(self, coeffs) -> np.ndarray:
        return lin_comb(self.field, coeffs, self.a_action)


class EquivariantModule(AModule):
    """An A-module with a compatible H-action (an object of the equivariant category)."""

    def __init__(self, cat: HModuleCategory, grading, a_action, h_action, name: str = "", check: bool = True):
        super().__init__(cat, grading, a_action, name=name, check=check)
        F = self.field
        h = cat.hopf
        self.hopf = h
        self.h_action = F.reduce(np.asarray(h_action)) if isinstance(h_action, np.ndarray) else F.array(h_action)
        if self.h_action.shape != (h.dim, self.dim, self.dim):
            raise ValueError(f"h_action must have shape {(h.dim, self.dim, self.dim)}")
        if check and self.dim:
            self.validate_h()

    def __repr__(self):
        return f"EquivariantModule({self.name + ', ' if self.name else ''}dim={self.dim}, A={self.cat.name})"

    def validate_h(self) -> None:
        F, h, cat = self.field, self.hopf, self.cat
        _check_module_axioms(h, self.h_action)
        g = np.asarray(self.grading)
        for u in range(h.dim):
            rows, cols = np.nonzero(self.h_action[u])
            if np.any(g[rows] != g[cols]):
                raise AxiomError("H-action preserves the object grading", (u,))
        # h.(a.m) = sum (h_(1).a).(h_(2).m)
        au = F.einsum("uyi,yab->uiab", cat.h_action, self.a_action)  # (b_u . a_i) acting
        for hh in range(h.dim):
            terms = h.delta_terms[hh]
            for i in range(cat.dim):
                lhs = F.matmul(self.h_action[hh], self.a_action[i])
                rhs = F.zeros((self.dim, self.dim))
                for u, v, c in terms:
                    rhs = F.add(rhs, F.scal(c, F.matmul(au[u, i], self.h_action[v])))
                if not F.equal(lhs, rhs):
                    raise AxiomError("compatibility h.(a.m) = sum (h1.a).(h2.m)", (hh, i))

    @cached_property
    def hmod(self) -> HModule:
        """The underlying H-module."""
        return HModule(self.hopf, self.h_action, name=self.name, check=False)

    @cached_property
    def h_gens(self):
        return [self.h_action[g] for g in self.hopf.generators]

    @cached_property
    def lambda_gens(self):
        return self.a_gens + self.h_gens

    def forget(self) -> AModule:
        return AModule(self.cat, self.grading, self.a_action, name=f"U({self.name})", check=False)


def _rebuild(cat, grading, a_action, h_action, name, dim) -> EquivariantModule:
    return EquivariantModule(cat, grading, a_action, h_action, name=name, check=dim <= VALIDATE_LIMIT)


def as_equivariant(m) -> EquivariantModule:
    """View an H-module as an equivariant module over the unit category."""
    if isinstance(m, EquivariantModule):
        return m
    if not isinstance(m, HModule):
        raise TypeError(f"expected HModule or EquivariantModule, got {type(m).__name__}")
    cat = unit_category(m.hopf)
    F = m.field
    a = F.eye(m.dim)[None, :, :]
    return EquivariantModule(cat, [0] * m.dim, a, m.action, name=m.name, check=False)


def forgetful_U(m: EquivariantModule) -> AModule:
    return m.forget()


def eq_direct_sum(*mods: EquivariantModule, name: str = "") -> EquivariantModule:
    cat = mods[0].cat
    F = cat.field
    n = sum(m.dim for m in mods)
    a = F.zeros((cat.dim, n, n))
    h = F.zeros((cat.hopf.dim, n, n))
    grading = []
    off = 0
    for m in mods:
        if m.cat is not cat:
            raise ValueError("modules over different categories")
        a[:, off:off + m.dim, off:off + m.dim] = m.a_action
        h[:, off:off + m.dim, off:off + m.dim] = m.h_action
        grading.extend(m.grading)
        off += m.dim
    return EquivariantModule(cat, grading, a, h, name=name or "+".join(m.name or "?" for m in mods), check=False)


def tensor_with_hmodule(m: EquivariantModule, v: HModule, name: str = "") -> EquivariantModule:
    """``M (x) V``: A acts on M, H diagonally (index ``i * dim V + j``)."""
    if isinstance(m, HModule):
        m = as_equivariant(m)
    if m.hopf is not v.hopf:
        raise ValueError("modules over different Hopf algebras")
    F = m.field
    a = np.stack([kronecker(F, m.a_action[i], F.eye(v.dim)) for i in range(m.cat.dim)]) if m.dim * v.dim else \
        F.zeros((m.cat.dim, 0, 0))
    h = _tensor_action(m.hopf, m.h_action, v.action)
    grading = [g for g in m.grading for _ in range(v.dim)]
    return _rebuild(m.cat, grading, a, h, name or f"({m.name})(x)({v.name})", m.dim * v.dim)


def eq_cone(m: EquivariantModule) -> EquivariantModule:
    return tensor_with_hmodule(m, regular_module(m.hopf), name=f"C({m.name})")


def eq_suspend(m: EquivariantModule) -> EquivariantModule:
    return tensor_with_hmodule(m, quotient_by_integral(m.hopf), name=f"S({m.name})")


def eq_desuspend(m: EquivariantModule) -> EquivariantModule:
    return tensor_with_hmodule(m, counit_kernel_module(m.hopf), name=f"S^-1({m.name})")


def eq_shift(m: EquivariantModule, n: int) -> EquivariantModule:
    for _ in range(abs(n)):
        m = eq_suspend(m) if n > 0 else eq_desuspend(m)
    return m


def _all_actions(m: EquivariantModule) -> list[np.ndarray]:
    return list(m.a_action) + list(m.h_action)


def eq_submodule(m: EquivariantModule, sub: Subspace, name: str = "") -> tuple[EquivariantModule, np.ndarray]:
    """Restriction to a submodule; the rref basis of a submodule is homogeneous."""
    F = m.field
    incl = sub.columns()
    k = sub.dim
    if k == 0:
        return EquivariantModule(m.cat, [], F.zeros((m.cat.dim, 0, 0)), F.zeros((m.hopf.dim, 0, 0)),
                                 name=name, check=False), incl

    def restrict(mats):
        acted = F.matmul(mats, incl)
        for x in acted:
            if not sub.contains(x):
                raise HopfoError("subspace is not a submodule")
        return np.stack([sub.coordinates(x) for x in acted])

    grading = [m.grading[p] for p in sub.pivots]
    return _rebuild(m.cat, grading, restrict(m.a_action), restrict(m.h_action), name, k), incl


def eq_quotient(m: EquivariantModule, sub: Subspace, name: str = "") -> tuple[EquivariantModule, np.ndarray, np.ndarray]:
    """``M / sub`` with projection and (homogeneous) linear section."""
    F = m.field
    if sub.dim:
        for x in F.matmul(np.concatenate([m.a_action, m.h_action]), sub.columns()):
            if not sub.contains(x):
                raise HopfoError("subspace is not a submodule")
    proj, section = quotient_map(F, m.dim, sub)
    q = proj.shape[0]
    comp = [c for c in range(m.dim) if c not in set(sub.pivots)]
    grading = [m.grading[c] for c in comp]
    if q == 0:
        return EquivariantModule(m.cat, [], F.zeros((m.cat.dim, 0, 0)), F.zeros((m.hopf.dim, 0, 0)),
                                 name=name, check=False), proj, section
    a = F.matmul(F.matmul(proj[None], m.a_action), section[None])
    h = F.matmul(F.matmul(proj[None], m.h_action), section[None])
    return _rebuild(m.cat, grading, a, h, name, q), proj, section


def generated_submodule(m: EquivariantModule, vectors) -> Subspace:
    """Smallest submodule containing the given vectors (columns or a single vector)."""
    F = m.field
    v = np.asarray(vectors)
    if v.ndim == 1:
        v = v[:, None]
    gens = m.a_gens + m.h_gens
    span = Subspace.span(F, m.dim, v.T)
    while True:
        cols = span.columns()
        grown = Subspace.span(F, m.dim, np.hstack([cols] + [F.matmul(g, cols) for g in gens]).T)
        if grown.dim == span.dim:
            return grown
        span = grown


def free_lambda_module(cat: HModuleCategory, r: int = 1) -> EquivariantModule:
    """``(A # H)^r`` as an equivariant module."""
    F = cat.field
    lam = smash(cat)
    h = cat.hopf
    dA, d = cat.dim, h.dim
    n = dA * d
    # left multiplication by a (x) 1 and 1 (x) h inside the smash algebra
    a_units = [F.reduce(np.kron(cat.basis_vector(i), h.unit)) for i in range(dA)]
    h_units = [F.reduce(np.kron(cat.unit, h.basis_vector(j))) for j in range(d)]
    a = np.stack([lam.element_matrix(x) for x in a_units])
    hh = np.stack([lam.element_matrix(x) for x in h_units])
    one = EquivariantModule(cat, lam.grading, a, hh, name="Lambda", check=n <= VALIDATE_LIMIT)
    if r == 1:
        return one
    out = eq_direct_sum(*[one] * r)
    out.name = f"Lambda^{r}"
    return out


# ---------------------------------------------------------------------------
# hom spaces


def lambda_maps(m: EquivariantModule, n: EquivariantModule) -> Subspace:
    """Equivariant A-linear maps ``M -> N`` (vectorized ``n x m`` matrices)."""
    return intertwiners(m.field, m.lambda_gens, n.lambda_gens, m.dim, n.dim)


def a_linear_maps(m: AModule, n: AModule) -> Subspace:
    return intertwiners(m.field, m.a_gens, n.a_gens, m.dim, n.dim)


@dataclass
class HomSpace:
    """A-linear maps ``M -> N`` with the conjugation H-action."""

    source: EquivariantModule
    target: EquivariantModule
    space: Subspace  # inside vec(Hom_k(M, N))
    hmodule: HModule  # H-action in the coordinates of ``space``

    @property
    def dim(self) -> int:
        return self.space.dim

    def maps(self) -> np.ndarray:
        """Basis maps, shape ``(dim, dim N, dim M)``."""
        return self.space.basis.reshape(self.space.dim, self.target.dim, self.source.dim)

    def coords(self, f: np.ndarray) -> np.ndarray:
        return self.space.coordinates(np.asarray(f).reshape(-1))

    def to_map(self, coords) -> np.ndarray:
        F = self.space.field
        return F.matmul(self.space.basis.T, np.asarray(coords)).reshape(self.target.dim, self.source.dim)

    @cached_property
    def homology(self):
        return homology(self.hmodule)

    @property
    def Z(self) -> Subspace:
        """Equivariant maps, as a subspace of vec(Hom_k(M, N))."""
        return _lift(self.space, self.homology.Z)

    @property
    def B(self) -> Subspace:
        return _lift(self.space, self.homology.B)


def _lift(space: Subspace, sub: Subspace) -> Subspace:
    F = space.field
    if sub.dim == 0:
        return Subspace.zero(F, space.ambient_dim)
    return Subspace.span(F, space.ambient_dim, F.matmul(sub.basis, space.basis))


def hom_space(m: EquivariantModule, n: EquivariantModule) -> HomSpace:
    """``Hom_A(M, N)`` with ``(h.f)(x) = sum h_(2) f(S^-1(h_(1)) x)``."""
    m, n = as_equivariant(m), as_equivariant(n)
    if m.cat is not n.cat:
        raise ValueError("modules over different categories")
    F = m.field
    hopf = m.hopf
    space = a_linear_maps(m, n) if m.cat.dim > 1 else Subspace.full(F, m.dim * n.dim)
    t = space.dim
    if t == 0:
        return HomSpace(m, n, space, HModule(hopf, F.zeros((hopf.dim, 0, 0)), check=False))
    basis = space.basis.reshape(t, n.dim, m.dim)
    sm = m.hmod.s_inv_action
    action = F.zeros((hopf.dim, t, t))
    cache: dict = {}
    for i, terms in enumerate(hopf.delta_terms):
        acc = F.zeros((t, n.dim, m.dim))
        for j, k, c in terms:
            key = (j, k)
            if key not in cache:
                cache[key] = F.matmul(F.matmul(n.h_action[k][None], basis), sm[j][None])
            acc = F.add(acc, F.scal(c, cache[key]))
        acted = acc.reshape(t, -1).T
        if not space.contains(acted):
            raise HopfoError("internal: H-action does not preserve A-linear maps")
        action[i] = space.coordinates(acted)
    hm = HModule(hopf, action, name=f"Hom_A({m.name},{n.name})", check=t <= VALIDATE_LIMIT)
    return HomSpace(m, n, space, hm)


# ---------------------------------------------------------------------------
# smash modules


def to_smash_module(m: EquivariantModule) -> AlgebraModule:
    """``(a (x) h)`` acts as ``a . (h . -)``."""
    F = m.field
    lam = smash(m.cat)
    action = F.matmul(m.a_action[:, None], m.h_action[None, :]).reshape(lam.dim, m.dim, m.dim) if m.dim else \
        F.zeros((lam.dim, 0, 0))
    return AlgebraModule(lam, action, check=m.dim <= VALIDATE_LIMIT, name=m.name)


def from_smash_module(x: AlgebraModule, cat: HModuleCategory) -> EquivariantModule:
    """Inverse of :func:`to_smash_module`; coordinates must be homogeneous."""
    F = x.field
    lam = smash(cat)
    if x.algebra is not lam:
        raise ValueError("module is over a different smash algebra")
    h = cat.hopf
    dA, d = cat.dim, h.dim
    act = x.action.reshape(dA, d, x.dim, x.dim)
    a = F.einsum("j,ijab->iab", h.unit, act)
    hh = F.einsum("i,ijab->jab", cat.unit, act)
    grading = []
    for c in range(x.dim):
        owners = [o for o in range(len(cat.objects)) if lin_comb(F, cat.units[o], a)[c, c] == 1]
        if len(owners) != 1:
            raise AxiomError("coordinates are homogeneous for the object idempotents", (c,))
        grading.append(owners[0])
    out = EquivariantModule(cat, grading, a, hh, name=x.name, check=True)
    back = to_smash_module(out)
    if not F.equal(back.action, x.action):
        raise AxiomError("module factors as a . (h . -)", ())
    return out


# ---------------------------------------------------------------------------
# adjoints of the forgetful functor


def cone_adjoint_C(n: AModule, name: str = "") -> EquivariantModule:
    """Left adjoint of U: ``N (x) H`` (index ``i * dim H + j``).

    H acts on the right factor and ``a.(x (x) h) = sum (S^-1(h_(1)).a) x (x) h_(2)``.
    """
    cat = n.cat
    h = cat.hopf
    F = cat.field
    d = h.dim
    dn = n.dim
    hh = np.stack([kronecker(F, F.eye(dn), h.left_mult[i]) for i in range(d)])
    a = F.zeros((cat.dim, dn * d, dn * d))
    sa = cat.s_inv_action  # sa[u][:, i] = S^-1(b_u) . a_i
    for i in range(cat.dim):
        acc = F.zeros((dn, d, dn, d))
        for j in range(d):
            for u, v, c in h.delta_terms[j]:
                op = n.rho_a(sa[u][:, i])
                acc[:, v, :, j] = F.add(acc[:, v, :, j], F.scal(c, op))
        a[i] = acc.reshape(dn * d, dn * d)
    grading = [g for g in n.grading for _ in range(d)]
    return _rebuild(cat, grading, a, hh, name or f"C({n.name})", dn * d)


def E_functor(n: AModule, name: str = "") -> EquivariantModule:
    """Right adjoint of U: maps ``psi: H -> N``, stored as ``psi(b_j)`` at index ``j * dim N + i``.

    ``(h.psi)(g) = psi(S(h) g)`` and ``(a.psi)(g) = sum (S^-1(g_(2)).a) psi(g_(1))``.
    """
    cat = n.cat
    h = cat.hopf
    F = cat.field
    d, dn = h.dim, n.dim
    hh = np.stack([kronecker(F, h.element_matrix(h.antipode[:, i]).T, F.eye(dn)) for i in range(d)])
    sa = cat.s_inv_action
    a = F.zeros((cat.dim, d * dn, d * dn))
    for i in range(cat.dim):
        acc = F.zeros((d, dn, d, dn))
        for j in range(d):
            for u, v, c in h.delta_terms[j]:
                acc[j, :, u, :] = F.add(acc[j, :, u, :], F.scal(c, n.rho_a(sa[v][:, i])))
        a[i] = acc.reshape(d * dn, d * dn)
    grading = [g for _ in range(d) for g in n.grading]
    return _rebuild(cat, grading, a, hh, name or f"E({n.name})", d * dn)


def _is_a_linear(f, m: AModule, n: AModule) -> bool:
    F = m.field
    return all(F.equal(F.matmul(y, f), F.matmul(f, x)) for x, y in zip(m.a_gens, n.a_gens))


def adjunction_phi(f: np.ndarray, m: EquivariantModule, n: AModule) -> np.ndarray:
    """``Phi(f)(x)(h) = f(S^-1(h) x)``: an A-map ``U M -> N`` to an equivariant ``M -> E(N)``."""
    if not _is_a_linear(f, m, n):
        raise ValueError("adjunction_phi expects an A-linear map")
    F = m.field
    sm = m.hmod.s_inv_action
    return np.vstack([F.matmul(f, sm[j]) for j in range(m.hopf.dim)])


def adjunction_psi(psi: np.ndarray, m: EquivariantModule, n: AModule) -> np.ndarray:
    """``Psi(psi)(x) = psi(x)(1)``."""
    F = m.field
    d = m.hopf.dim
    blocks = psi.reshape(d, n.dim, m.dim)
    return F.reduce(np.tensordot(m.hopf.unit.astype(blocks.dtype), blocks, axes=(0, 0)))


def cu_unit(n: AModule) -> np.ndarray:
    """Unit ``N -> U C(N)``, ``x -> x (x) 1``."""
    F = n.field
    return kronecker(F, F.eye(n.dim), n.cat.hopf.unit[:, None])


def cu_counit(m: EquivariantModule) -> np.ndarray:
    """Counit ``C(U M) -> M``, ``x (x) h -> h.x``."""
    F = m.field
    d = m.hopf.dim
    out = F.zeros((m.dim, m.dim * d))
    for j in range(d):
        out[:, j::d] = m.h_action[j]
    return out


# ---------------------------------------------------------------------------
# JSON


def _mat_json(F: Field, m) -> list:
    return [[F.format(x) for x in row] for row in m]


def category_to_json(cat: HModuleCategory) -> dict:
    F = cat.field
    return {
        "hopf": cat.hopf.name or None,
        "objects": list(cat.objects),
        "basis": [{"label": lab, "source": s, "target": t}
                  for lab, s, t in zip(cat.labels, cat.source, cat.target)],
        "compose": [[int(i), int(j), int(k), F.format(cat.mult[i, j, k])]
                    for i, j, k in sorted(zip(*np.nonzero(cat.mult)))],
        "units": [[F.format(x) for x in e] for e in cat.units],
        "h_action": {lab: _mat_json(F, cat.h_action[u]) for u, lab in enumerate(cat.hopf.labels)},
    }


def category_from_json(data: dict, hopf: HopfPresentation) -> HModuleCategory:
    F = hopf.field
    for key in ("objects", "basis", "compose", "units", "h_action"):
        if key not in data:
            raise ValueError(f"hmodcat.json: missing field {key!r}")
    basis = data["basis"]
    dA = len(basis)
    mult = F.zeros((dA, dA, dA))
    for n, entry in enumerate(data["compose"]):
        if len(entry) != 4:
            raise ValueError(f"compose[{n}]: expected [i, j, k, c]")
        i, j, k, c = entry
        mult[int(i), int(j), int(k)] = F(c)
    act = _labeled_stack(hopf, data["h_action"], dA, "h_action")
    return HModuleCategory(hopf, data["objects"], [b["source"] for b in basis], [b["target"] for b in basis],
                           mult, F.array(data["units"]), act, labels=[b["label"] for b in basis],
                           name=data.get("name", "custom"))


def _labeled_stack(alg, table: dict, n: int, what: str) -> np.ndarray:
    F = alg.field
    out = []
    unit_idx = None
    nz = np.nonzero(alg.unit)[0]
    if len(nz) == 1:
        unit_idx = int(nz[0])
    for i, lab in enumerate(alg.labels):
        if lab in table:
            m = F.array(table[lab])
            if m.shape != (n, n):
                raise ValueError(f"{what}[{lab!r}] must be {n} x {n}")
            out.append(m)
        elif i == unit_idx:
            out.append(F.eye(n))
        else:
            raise ValueError(f"{what}: missing matrix for {lab!r}")
    unknown = set(table) - set(alg.labels)
    if unknown:
        raise ValueError(f"{what}: unknown labels {sorted(unknown)}")
    return np.stack(out) if out else F.zeros((0, n, n))


def eqmod_to_json(m: EquivariantModule) -> dict:
    F = m.field
    return {
        "category": m.cat.name or None,
        "hopf": m.hopf.name or None,
        "object_grading": list(m.grading),
        "a_action": {lab: _mat_json(F, m.a_action[i]) for i, lab in enumerate(m.cat.labels)},
        "h_action": {lab: _mat_json(F, m.h_action[u]) for u, lab in enumerate(m.hopf.labels)},
    }


def eqmod_from_json(data: dict, cat: HModuleCategory) -> EquivariantModule:
    for key in ("object_grading", "a_action", "h_action"):
        if key not in data:
            raise ValueError(f"eqmod.json: missing field {key!r}")
    n = len(data["object_grading"])
    a = _labeled_stack(cat, data["a_action"], n, "a_action")
    h = _labeled_stack(cat.hopf, data["h_action"], n, "h_action")
    return EquivariantModule(cat, data["object_grading"], a, h, name=data.get("name", ""))
