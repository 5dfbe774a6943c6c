"""Finite-dimensional left H-modules.

A module is stored as the stack ``action[i] = rho(b_i)`` of matrices acting
on column vectors.  Linear maps ``f: M -> N`` are ``dim N x dim M`` matrices
and are vectorized row-major, so ``vec(X f Y) = kron(X, Y^T) vec(f)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .exactla import (
    Field,
    Subspace,
    image,
    kernel_of_blocks,
    inverse,
    kernel,
    kronecker,
    quotient_map,
    rank,
    solve,
    stack_constraints,
)
from .hopfcore import AxiomError, HopfoError, HopfPresentation

__all__ = [
    "HModule",
    "HomologyData",
    "DecompositionReport",
    "validate_module",
    "module_from_generators",
    "trivial_module",
    "regular_module",
    "free_module",
    "integral_submodule",
    "quotient_by_integral",
    "counit_kernel_module",
    "jordan_module",
    "submodule",
    "quotient_module",
    "direct_sum",
    "tensor",
    "hom_module",
    "intertwiners",
    "equivariant_maps",
    "invariants",
    "coinvariants",
    "hom_action",
    "zero_module",
    "free_basis",
    "desuspension_inclusion",
    "is_equivariant",
    "homology",
    "homology_map",
    "cone",
    "suspend",
    "desuspend",
    "shift",
    "cone_inclusion",
    "cone_projection",
    "counit_map",
    "is_free",
    "is_projective",
    "strip_free",
    "sigma_homology_dims",
    "switching_iso",
    "switching_element",
    "jordan_decompose",
    "split_off_trivials",
    "lin_comb",
]

# exhaustive re-validation of constructed modules up to this dimension
VALIDATE_LIMIT = 96


def lin_comb(F: Field, coeffs, mats: np.ndarray) -> np.ndarray:
    """``sum_i coeffs[i] * mats[i]``."""
    coeffs = np.asarray(coeffs)
    nz = np.nonzero(coeffs)[0]
    out = F.zeros(mats.shape[1:])
    for i in nz:
        out = F.add(out, F.scal(coeffs[i], mats[i]))
    return out


class HModule:
    """A validated left module over a Hopf algebra."""

    def __init__(self, hopf: HopfPresentation, action, name: str = "", check: bool = True):
        F = hopf.field
        action = F.reduce(np.asarray(action)) if isinstance(action, np.ndarray) else F.array(action)
        if action.ndim != 3 or action.shape[0] != hopf.dim or action.shape[1] != action.shape[2]:
            raise ValueError(f"action must have shape (dim H, n, n), got {action.shape}")
        self.hopf = hopf
        self.field = F
        self.action = action
        self.dim = action.shape[1]
        self.name = name
        if check:
            _check_module_axioms(hopf, action)

    def __repr__(self):
        tag = f"{self.name}, " if self.name else ""
        return f"HModule({tag}dim={self.dim}, hopf={self.hopf.name or self.hopf.dim})"

    def rho(self, coeffs) -> np.ndarray:
        """Action matrix of the element of H with the given coordinates."""
        return lin_comb(self.field, coeffs, self.action)

    @cached_property
    def gen_action(self) -> list[np.ndarray]:
        return [self.action[g] for g in self.hopf.generators]

    @cached_property
    def s_inv_action(self) -> np.ndarray:
        """``rho(S^-1 b_j)`` for every basis element."""
        Sinv = self.hopf.s_inverse
        return np.stack([self.rho(Sinv[:, j]) for j in range(self.hopf.dim)]) if self.dim else self.action.copy()

    @cached_property
    def integral_action(self) -> np.ndarray:
        return self.rho(self.hopf.integral)

    def to_json(self) -> dict:
        F = self.field
        act = {}
        unit_idx = _unit_index(self.hopf)
        for i, lab in enumerate(self.hopf.labels):
            if i == unit_idx:
                continue
            act[lab] = [[F.format(x) for x in row] for row in self.action[i]]
        return {"hopf": self.hopf.name or None, "dim": self.dim, "action": act}


def _unit_index(h: HopfPresentation) -> Optional[int]:
    nz = np.nonzero(h.unit)[0]
    if len(nz) == 1 and h.unit[nz[0]] == 1:
        return int(nz[0])
    return None


def _check_module_axioms(hopf: HopfPresentation, action: np.ndarray) -> None:
    F = hopf.field
    n = action.shape[1]
    if n == 0:
        return
    one = lin_comb(F, hopf.unit, action)
    if not F.equal(one, F.eye(n)):
        raise AxiomError("unit acts as identity", ())
    d = hopf.dim
    lhs = F.einsum("iab,jbc->ijac", action, action)
    rhs = F.matmul(hopf.mult.reshape(d * d, d), action.reshape(d, n * n)).reshape(d, d, n, n)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        i, j = int(bad[0][0]), int(bad[0][1])
        raise AxiomError("module action is multiplicative", (i, j),
                         f"rho(b_{i}) rho(b_{j}) != sum_k mult[{i},{j},k] rho(b_k)")


def validate_module(hopf: HopfPresentation, action, name: str = "") -> HModule:
    """Check that ``b_i -> action[i]`` is an algebra map and wrap it.

    ``action`` may be a full stack of ``dim H`` matrices, or a dict keyed by
    basis labels (the unit's matrix may be omitted).
    """
    if isinstance(action, dict):
        action = _action_from_labels(hopf, action)
    return HModule(hopf, action, name=name, check=True)


def _action_from_labels(hopf: HopfPresentation, action: dict) -> np.ndarray:
    F = hopf.field
    mats = {}
    n = None
    for lab, m in action.items():
        if lab not in hopf.labels:
            raise ValueError(f"unknown basis label {lab!r}; expected one of {list(hopf.labels)}")
        arr = F.array(m)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"action[{lab!r}] must be a square matrix")
        if n is not None and arr.shape[0] != n:
            raise ValueError(f"action[{lab!r}] has size {arr.shape[0]}, expected {n}")
        n = arr.shape[0]
        mats[hopf.labels.index(lab)] = arr
    u = _unit_index(hopf)
    if n is None:
        raise ValueError("module action is empty")
    missing = [hopf.labels[i] for i in range(hopf.dim) if i not in mats and i != u]
    if missing:
        raise ValueError(f"missing action matrices for {missing}")
    if u is not None and u not in mats:
        mats[u] = F.eye(n)
    return np.stack([mats[i] for i in range(hopf.dim)])


def module_from_generators(hopf: HopfPresentation, gen_mats: dict, name: str = "") -> HModule:
    """Extend matrices given on ``hopf.generators`` to the whole basis.

    Words in the generators are expanded breadth-first until their
    coordinate vectors span H; the resulting module is then validated, which
    certifies that the generator matrices satisfy the defining relations.
    """
    F = hopf.field
    d = hopf.dim
    gens = list(hopf.generators)
    n = next(iter(gen_mats.values())).shape[0]
    words = [(hopf.unit.copy(), F.eye(n))]
    span = Subspace.span(F, d, hopf.unit[None, :])
    frontier = list(words)
    while span.dim < d and frontier:
        nxt = []
        for vec, mat in frontier:
            for g in gens:
                v2 = F.matmul(hopf.left_mult[g], vec)
                if span.contains(v2):
                    continue
                span = span + Subspace.span(F, d, v2[None, :])
                item = (v2, F.matmul(gen_mats[g], mat))
                words.append(item)
                nxt.append(item)
        frontier = nxt
    if span.dim < d:
        raise HopfoError("generators do not span the algebra")
    coords = np.stack([w[0] for w in words], axis=1)  # d x len(words)
    mats = np.stack([w[1] for w in words])
    action = []
    for i in range(d):
        c = solve(F, coords, hopf.basis_vector(i))
        action.append(lin_comb(F, c, mats))
    return validate_module(hopf, np.stack(action), name=name)


# ---------------------------------------------------------------------------
# standard modules


def trivial_module(hopf: HopfPresentation, dim: int = 1) -> HModule:
    F = hopf.field
    action = np.stack([F.scal(hopf.counit[i], F.eye(dim)) for i in range(hopf.dim)])
    return HModule(hopf, action, name="k" if dim == 1 else f"k^{dim}")


def regular_module(hopf: HopfPresentation) -> HModule:
    return HModule(hopf, hopf.left_mult, name="H")


def free_module(hopf: HopfPresentation, r: int) -> HModule:
    if r == 1:
        return regular_module(hopf)
    return direct_sum(*[regular_module(hopf)] * r, name=f"H^{r}") if r else zero_module(hopf)


def zero_module(hopf: HopfPresentation) -> HModule:
    return HModule(hopf, hopf.field.zeros((hopf.dim, 0, 0)), name="0", check=False)


def integral_submodule(hopf: HopfPresentation) -> HModule:
    m, _ = submodule(regular_module(hopf), hopf.integral_ideal)
    m.name = "k.lambda"
    return m


def quotient_by_integral(hopf: HopfPresentation) -> HModule:
    m = _quotient_by_integral_cached(hopf)
    return m


def _quotient_by_integral_cached(hopf: HopfPresentation) -> HModule:
    cached = getattr(hopf, "_hbar", None)
    if cached is None:
        cached, _, _ = quotient_module(regular_module(hopf), hopf.integral_ideal)
        cached.name = "H/(lambda)"
        hopf._hbar = cached
    return cached


def counit_kernel_module(hopf: HopfPresentation) -> HModule:
    cached = getattr(hopf, "_keps", None)
    if cached is None:
        cached, _ = submodule(regular_module(hopf), hopf.counit_kernel)
        cached.name = "ker(eps)"
        hopf._keps = cached
    return cached


def jordan_module(hopf: HopfPresentation, sizes: Sequence[int]) -> HModule:
    """Direct sum of Jordan blocks for the nilpotent generator.

    Works for ``divided_power:p`` (the generator acts by a nilpotent Jordan
    block) and for ``group:p:p`` (the generator acts by identity plus it).
    """
    F = hopf.field
    gens = hopf.generators
    if len(gens) != 1:
        raise ValueError("Jordan modules need a singly generated Hopf algebra")
    g = gens[0]
    n = sum(sizes)
    nil = F.zeros((n, n))
    off = 0
    for s in sizes:
        for t in range(s - 1):
            nil[off + t + 1, off + t] = 1
        off += s
    if hopf.counit[g] == 1:
        mat = F.add(F.eye(n), nil)
    elif hopf.counit[g] == 0:
        mat = nil
    else:
        raise ValueError("unsupported generator for Jordan modules")
    name = "+".join(f"J{s}" for s in sizes)
    return module_from_generators(hopf, {g: mat}, name=name)


def submodule(m: HModule, sub: Subspace) -> tuple[HModule, np.ndarray]:
    """Restriction to an invariant subspace, with the inclusion matrix."""
    F = m.field
    incl = sub.columns()
    acted = F.matmul(m.action, incl) if sub.dim else F.zeros((m.hopf.dim, m.dim, 0))
    if sub.dim and not all(sub.contains(acted[i]) for i in range(m.hopf.dim)):
        raise HopfoError("subspace is not a submodule")
    action = np.stack([sub.coordinates(acted[i]) for i in range(m.hopf.dim)]) if sub.dim else F.zeros(
        (m.hopf.dim, 0, 0))
    return HModule(m.hopf, action, check=sub.dim <= VALIDATE_LIMIT), incl


def quotient_module(m: HModule, sub: Subspace) -> tuple[HModule, np.ndarray, np.ndarray]:
    """``M / sub`` with its projection and a linear section."""
    F = m.field
    proj, section = quotient_map(F, m.dim, sub)
    q = proj.shape[0]
    if sub.dim:
        acted = F.matmul(m.action, sub.columns())
        if not all(sub.contains(acted[i]) for i in range(m.hopf.dim)):
            raise HopfoError("subspace is not a submodule")
    action = F.matmul(F.matmul(proj[None, :, :], m.action), section[None, :, :]) if q else F.zeros(
        (m.hopf.dim, 0, 0))
    return HModule(m.hopf, action, check=q <= VALIDATE_LIMIT), proj, section


def direct_sum(*mods: HModule, name: str = "") -> HModule:
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    hopf = mods[0].hopf
    for m in mods:
        if m.hopf is not hopf:
            raise ValueError("modules over different Hopf algebras")
    F = hopf.field
    n = sum(m.dim for m in mods)
    action = F.zeros((hopf.dim, n, n))
    off = 0
    for m in mods:
        action[:, off:off + m.dim, off:off + m.dim] = m.action
        off += m.dim
    return HModule(hopf, action, name=name or "+".join(m.name or "?" for m in mods), check=False)


def _tensor_action(hopf: HopfPresentation, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``rho(b_i) = sum Delta-terms kron(a[j], b[k])``."""
    F = hopf.field
    na, nb = a.shape[1], b.shape[1]
    out = F.zeros((hopf.dim, na * nb, na * nb))
    if na * nb == 0:
        return out
    cache: dict = {}
    for i, terms in enumerate(hopf.delta_terms):
        acc = F.zeros((na * nb, na * nb))
        for j, k, c in terms:
            key = (j, k)
            if key not in cache:
                cache[key] = kronecker(F, a[j], b[k])
            acc = F.add(acc, F.scal(c, cache[key]))
        out[i] = acc
    return out


def tensor(m: HModule, n: HModule) -> HModule:
    """``M (x) N`` with the diagonal action (index ``i * dim N + j``)."""
    if m.hopf is not n.hopf:
        raise ValueError("modules over different Hopf algebras")
    action = _tensor_action(m.hopf, m.action, n.action)
    name = f"({m.name or '?'})(x)({n.name or '?'})"
    return HModule(m.hopf, action, name=name, check=m.dim * n.dim <= VALIDATE_LIMIT)


def hom_action(m: HModule, n: HModule) -> np.ndarray:
    """Action on vec(f), ``f: M -> N``: ``(h.f) = sum rho_N(h_(2)) f rho_M(S^-1 h_(1))``."""
    hopf = m.hopf
    F = hopf.field
    size = m.dim * n.dim
    out = F.zeros((hopf.dim, size, size))
    if size == 0:
        return out
    sm = m.s_inv_action
    cache: dict = {}
    for i, terms in enumerate(hopf.delta_terms):
        acc = F.zeros((size, size))
        for j, k, c in terms:
            if (j, k) not in cache:
                cache[(j, k)] = kronecker(F, n.action[k], sm[j].T)
            acc = F.add(acc, F.scal(c, cache[(j, k)]))
        out[i] = acc
    return out


def hom_module(m: HModule, n: HModule) -> HModule:
    """All linear maps ``M -> N`` with the conjugation action."""
    if m.hopf is not n.hopf:
        raise ValueError("modules over different Hopf algebras")
    return HModule(m.hopf, hom_action(m, n), name=f"Hom({m.name or '?'},{n.name or '?'})",
                   check=m.dim * n.dim <= VALIDATE_LIMIT)


def intertwiners(F: Field, src: Sequence[np.ndarray], tgt: Sequence[np.ndarray], s: int, t: int) -> Subspace:
    """Maps ``f`` (t x s, vectorized row-major) with ``tgt[g] f = f src[g]`` for all g."""
    if s * t == 0:
        return Subspace.zero(F, s * t)
    eye_s, eye_t = F.eye(s), F.eye(t)
    blocks = (F.sub(kronecker(F, y, eye_s), kronecker(F, eye_t, x.T)) for x, y in zip(src, tgt))
    return kernel_of_blocks(F, blocks, s * t)


def equivariant_maps(m: HModule, n: HModule) -> Subspace:
    return intertwiners(m.field, m.gen_action, n.gen_action, m.dim, n.dim)


def is_equivariant(f: np.ndarray, m: HModule, n: HModule) -> bool:
    F = m.field
    return all(F.equal(F.matmul(y, f), F.matmul(f, x)) for x, y in zip(m.gen_action, n.gen_action))


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyData:
    """``H(M) = Z(M)/B(M)`` with ``Z`` the invariants and ``B = lambda M``."""

    Z: Subspace
    B: Subspace
    dim_H: int
    representatives: np.ndarray  # dim M x dim_H, lifts of a homology basis
    _proj: np.ndarray = dc_field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return self.dim_H

    def classes(self, vectors: np.ndarray) -> np.ndarray:
        """Homology coordinates of cycles (columns)."""
        v = np.asarray(vectors)
        return self.Z.field.matmul(self._proj, self.Z.coordinates(v))


def invariants(m: HModule) -> Subspace:
    F = m.field
    blocks = [F.sub(m.action[g], F.scal(m.hopf.counit[g], F.eye(m.dim))) for g in m.hopf.generators]
    return kernel(F, stack_constraints(F, blocks, m.dim))


def homology(m: HModule) -> HomologyData:
    F = m.field
    if m.dim == 0:
        z = Subspace.zero(F, 0)
        return HomologyData(z, z, 0, F.zeros((0, 0)), F.zeros((0, 0)))
    Z = invariants(m)
    B = image(F, m.integral_action)
    if not (B <= Z):
        raise HopfoError("internal: lambda M is not contained in the invariants")
    # quotient inside Z-coordinates
    b_in_z = Subspace.span(F, Z.dim, Z.coordinates(B.columns()).T) if B.dim else Subspace.zero(F, Z.dim)
    proj, section = quotient_map(F, Z.dim, b_in_z)
    reps = F.matmul(Z.columns(), section) if Z.dim else F.zeros((m.dim, 0))
    return HomologyData(Z, B, Z.dim - B.dim, reps, proj)


def homology_map(f: np.ndarray, m: HModule, n: HModule, hm: Optional[HomologyData] = None,
                 hn: Optional[HomologyData] = None) -> np.ndarray:
    """Matrix of ``H(f): H(M) -> H(N)``."""
    F = m.field
    hm = hm or homology(m)
    hn = hn or homology(n)
    if hm.dim_H == 0 or hn.dim_H == 0:
        return F.zeros((hn.dim_H, hm.dim_H))
    return hn.classes(F.matmul(f, hm.representatives))


# ---------------------------------------------------------------------------
# cone and suspensions


def cone(m: HModule) -> HModule:
    """``C(M) = M (x) H``."""
    out = tensor(m, regular_module(m.hopf))
    out.name = f"C({m.name or '?'})"
    return out


def suspend(m: HModule) -> HModule:
    """``Sigma(M) = M (x) H/(lambda)``."""
    out = tensor(m, quotient_by_integral(m.hopf))
    out.name = f"S({m.name or '?'})"
    return out


def desuspend(m: HModule) -> HModule:
    """``Sigma^-1(M) = M (x) ker(eps)``."""
    out = tensor(m, counit_kernel_module(m.hopf))
    out.name = f"S^-1({m.name or '?'})"
    return out


def shift(m: HModule, n: int) -> HModule:
    for _ in range(abs(n)):
        m = suspend(m) if n > 0 else desuspend(m)
    return m


def cone_inclusion(m_dim: int, hopf: HopfPresentation) -> np.ndarray:
    """``i_M: M -> M (x) H``, ``m -> m (x) lambda``."""
    F = hopf.field
    return kronecker(F, F.eye(m_dim), hopf.integral[:, None])


def cone_projection(m_dim: int, hopf: HopfPresentation) -> np.ndarray:
    """``p_M: M (x) H -> M (x) H/(lambda)``."""
    F = hopf.field
    proj, _ = quotient_map(F, hopf.dim, hopf.integral_ideal)
    return kronecker(F, F.eye(m_dim), proj)


def desuspension_inclusion(m_dim: int, hopf: HopfPresentation) -> np.ndarray:
    """``M (x) ker(eps) -> M (x) H``."""
    F = hopf.field
    return kronecker(F, F.eye(m_dim), hopf.counit_kernel.columns())


def counit_map(m_dim: int, hopf: HopfPresentation) -> np.ndarray:
    """``1 (x) eps: M (x) H -> M``."""
    F = hopf.field
    return kronecker(F, F.eye(m_dim), hopf.counit[None, :])


# ---------------------------------------------------------------------------
# freeness and projectivity

_CANDIDATE_SEED = 0x5EED


def _candidates(F: Field, n: int, count: int):
    """Deterministic candidate vectors: basis vectors, then fixed-seed mixtures."""
    for i in range(n):
        v = F.zeros(n)
        v[i] = 1
        yield v
    rng = np.random.default_rng(_CANDIDATE_SEED + n)
    for _ in range(count):
        yield F.random_matrix(rng, (n,))


def _free_generator(m: HModule, count: int) -> Optional[np.ndarray]:
    F = m.field
    d = m.hopf.dim
    for v in _candidates(F, m.dim, count):
        orbit = F.matmul(m.action, v).T  # n x d, column i is b_i v
        if rank(F, orbit) == d:
            return v
    return None


def is_free(m: HModule, search: int = 64) -> Optional[int]:
    """Rank r if ``M`` is free, else ``None``; see :func:`free_basis`."""
    w = free_basis(m, search)
    return None if w is None else w.shape[1] // max(m.hopf.dim, 1)


def free_basis(m: HModule, search: int = 64) -> Optional[np.ndarray]:
    """An equivariant isomorphism ``H^r -> M`` (columns ``b_i v_t``), or ``None``.

    Generators are found greedily: a vector whose orbit has rank ``dim H``
    spans a free submodule, which is a direct summand because H is
    self-injective, so the search continues in the quotient.  The
    candidate list is a fixed deterministic enumeration; a ``None`` answer
    after quick rejection is therefore relative to that enumeration.
    """
    F, d, n = m.field, m.hopf.dim, m.dim
    if n % d:
        return None
    r = n // d
    if r == 0:
        return F.zeros((0, 0))
    if invariants(m).dim != r:
        return None
    cur = m
    lift = F.eye(n)  # current module coordinates -> M (a section of the quotients)
    gens = []
    for _ in range(r):
        v = _free_generator(cur, search)
        if v is None:
            return None
        gens.append(F.matmul(lift, v))
        orbit = Subspace.span(F, cur.dim, F.matmul(cur.action, v))
        cur, _, section = quotient_module(cur, orbit)
        lift = F.matmul(lift, section)
    iso = np.hstack([F.matmul(m.action, g).T for g in gens])
    if rank(F, iso) != n:
        raise HopfoError("internal: free generators do not give an isomorphism")
    return iso


def is_projective(m: HModule) -> bool:
    """Whether ``1 (x) eps: M (x) H -> M`` has an equivariant section.

    ``M (x) H`` is free, so a section exists exactly when M is a direct
    summand of a free module.
    """
    if m.dim == 0:
        return True
    if homology(m).dim_H:
        return False
    if is_free(m, search=16) is not None:
        return True
    F = m.field
    c = cone(m)
    eps = counit_map(m.dim, m.hopf)
    space = intertwiners(F, m.gen_action, c.gen_action, m.dim, c.dim)
    if space.dim == 0:
        return False
    # eps . s = id is linear in s
    basis = space.basis.reshape(space.dim, c.dim, m.dim)
    comp = np.stack([F.matmul(eps, b).reshape(-1) for b in basis], axis=1)
    return solve(F, comp, F.eye(m.dim).reshape(-1)) is not None


def strip_free(m: HModule, search: int = 8) -> HModule:
    """Quotient out free summands found by the greedy orbit search.

    The result differs from M by a free (hence projective) summand, so it
    has the same homology after any number of suspensions.
    """
    F, d = m.field, m.hopf.dim
    cur = m
    while cur.dim >= d:
        v = _free_generator(cur, search)
        if v is None:
            break
        orbit = Subspace.span(F, cur.dim, F.matmul(cur.action, v))
        cur, _, _ = quotient_module(cur, orbit)
    cur.name = m.name
    return cur


def sigma_homology_dims(m: HModule, window: int = 3, strip: bool = True) -> dict[int, int]:
    """``{n: dim H(Sigma^n M)}`` for ``-window <= n <= window``."""
    out = {0: homology(m).dim_H}
    for sign in (1, -1):
        cur = strip_free(m) if strip else m
        for k in range(1, window + 1):
            cur = suspend(cur) if sign > 0 else desuspend(cur)
            if strip:
                cur = strip_free(cur)
            out[sign * k] = homology(cur).dim_H
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# switching isomorphism


def _switch_tensor(hopf: HopfPresentation) -> np.ndarray:
    """``(Delta (x) 1) Delta(b_j) = sum t[j, a, b, e] b_a (x) b_b (x) b_e``."""
    cached = getattr(hopf, "_delta2", None)
    if cached is None:
        F = hopf.field
        cached = F.einsum("jxe,xab->jabe", hopf.comult, hopf.comult)
        hopf._delta2 = cached
    return cached


def _switch_map(v: HModule, x: np.ndarray) -> np.ndarray:
    """``r(v (x) h) = sum h_(2) X_1 (x) h_(3) X_2 S^-1(h_(1)) v`` for ``X = sum x[p, q] b_p (x) b_q``."""
    hopf = v.hopf
    F = hopf.field
    d, n = hopf.dim, v.dim
    t = _switch_tensor(hopf)
    sv = v.s_inv_action
    r = F.zeros((d, n, n, d))  # (row H index, row V index, col V index, col H index)
    xs = [(int(p), int(q), x[p, q]) for p, q in np.argwhere(x != 0)]
    left = {}
    for j in range(d):
        for a, b, e in np.argwhere(t[j] != 0):
            coeff = t[j, a, b, e]
            for p, q, xc in xs:
                key = (int(b), p)
                if key not in left:
                    left[key] = hopf.mult[b, p]
                op = F.scal(F.reduce(coeff * xc), F.mchain(v.action[e], v.action[q], sv[a]))
                for w in np.nonzero(left[key])[0]:
                    r[w, :, :, j] = F.add(r[w, :, :, j], F.scal(left[key][w], op))
    return r.reshape(d * n, n * d)


def switching_element(hopf: HopfPresentation) -> np.ndarray:
    """The element ``X`` of ``H (x) H`` defining :func:`switching_iso`.

    Natural equivariant maps ``V (x) H -> H (x) V`` are exactly the maps
    ``v (x) h -> h_(2) X_1 (x) h_(3) X_2 S^-1(h_(1)) v``.  X is the
    solution (free variables zero) of the linear conditions
    ``r(1 (x) lambda) = lambda (x) 1`` on the regular module and
    ``(1 (x) eps)(X) = 1``; invertibility is checked on the regular module,
    which implies it for every module since both functors are exact.
    """
    cached = getattr(hopf, "_switch_x", None)
    if cached is not None:
        return cached
    F = hopf.field
    d = hopf.dim
    m = hopf.mult
    T = F.einsum("j,jabe->abe", hopf.integral, _switch_tensor(hopf))
    ys = F.einsum("la,ylz->yaz", hopf.s_inverse, m)  # b_y S^-1(b_a)
    eq = F.einsum("eqy,yaz->eqaz", m, ys)  # b_e b_q S^-1(b_a)
    lft = F.einsum("abe,bpw->aepw", T, m)
    res = F.einsum("aepw,eqaz->pqwz", lft, eq)
    A = res.reshape(d * d, d * d).T
    rhs = F.reduce(np.outer(hopf.integral, hopf.unit)).reshape(-1)
    U = F.zeros((d, d * d))
    for p in range(d):
        U[p, p * d:(p + 1) * d] = hopf.counit
    A = np.vstack([A, U])
    rhs = np.concatenate([rhs, hopf.unit])
    x0 = solve(F, A, rhs)
    if x0 is None:
        raise HopfoError("no natural switching map satisfies the integral square")
    free = kernel(F, A)
    reg = regular_module(hopf)
    tries = [x0] + [F.add(x0, free.basis[i]) for i in range(free.dim)]
    for x in tries:
        X = x.reshape(d, d)
        if rank(F, _switch_map(reg, X)) == d * d:
            hopf._switch_x = X
            return X
    raise HopfoError("switching search exhausted without an invertible solution")


def switching_iso(v: HModule) -> np.ndarray:
    """Natural isomorphism ``r: V (x) H -> H (x) V`` with ``r(v (x) lambda) = lambda (x) v``.

    Built from the fixed element of :func:`switching_element`, so the same
    rule applies to every V; the result is checked for equivariance,
    invertibility and the commuting square.
    """
    hopf = v.hopf
    F = hopf.field
    d, n = hopf.dim, v.dim
    r = _switch_map(v, switching_element(hopf))
    if n == 0:
        return r
    src = tensor(v, regular_module(hopf))
    tgt = tensor(regular_module(hopf), v)
    if not is_equivariant(r, src, tgt):
        raise HopfoError("switching map is not equivariant")
    if rank(F, r) != d * n:
        raise HopfoError("switching map is not invertible")
    lhs = F.matmul(r, cone_inclusion(n, hopf))
    rhs = kronecker(F, hopf.integral[:, None], F.eye(n))
    if not F.equal(lhs, rhs):
        raise HopfoError("switching map does not satisfy r(v (x) lambda) = lambda (x) v")
    return r


# ---------------------------------------------------------------------------
# p-complex oracle and trivial summands


def jordan_decompose(m: HModule) -> list[int]:
    """Jordan type of the nilpotent generator of ``divided_power:p``, sizes descending."""
    hopf = m.hopf
    if not hopf.name.startswith("divided_power"):
        raise ValueError("jordan_decompose expects a divided_power Hopf algebra")
    F = m.field
    if m.dim == 0:
        return []
    x = m.action[1]
    ranks = [m.dim]
    power = F.eye(m.dim)
    while ranks[-1]:
        power = F.matmul(power, x)
        ranks.append(rank(F, power))
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes.extend([k] * exact)
    return sizes


@dataclass
class DecompositionReport:
    """``M = k^a (+) Q`` with mutually inverse equivariant witnesses.

    ``forward: M -> k^a (+) Q`` and ``backward`` its inverse.
    """

    trivial_multiplicity: int
    projective_complement: HModule
    forward: np.ndarray
    backward: np.ndarray
    complement_projective: bool

    @property
    def iso_witness(self):
        return self.forward, self.backward


def coinvariants(m: HModule) -> Subspace:
    """Row vectors ``r`` with ``r rho(h) = eps(h) r`` (equivariant maps M -> k)."""
    F = m.field
    blocks = [F.sub(m.action[g].T, F.scal(m.hopf.counit[g], F.eye(m.dim))) for g in m.hopf.generators]
    return kernel(F, stack_constraints(F, blocks, m.dim))


def split_off_trivials(m: HModule, check_projective: bool = True) -> DecompositionReport:
    F = m.field
    hopf = m.hopf
    cur = m
    embed = F.eye(m.dim)  # columns: basis of current complement inside M
    sections = []
    while cur.dim:
        Z = invariants(cur)
        W = coinvariants(cur)
        if Z.dim == 0 or W.dim == 0:
            break
        pairing = F.matmul(W.basis, Z.columns())
        nz = np.argwhere(pairing != 0)
        if nz.size == 0:
            break
        a, b = int(nz[0][0]), int(nz[0][1])
        s = Z.columns()[:, b]
        r = F.scal(F.inv(pairing[a, b]), W.basis[a])
        sections.append(F.matmul(embed, s))
        ker = kernel(F, r[None, :])
        cur, incl = submodule(cur, ker)
        embed = F.matmul(embed, incl)
    a = len(sections)
    back = np.hstack([np.stack(sections, axis=1) if a else F.zeros((m.dim, 0)), embed])
    fwd = inverse(F, back)
    target = direct_sum(trivial_module(hopf, a), cur) if a else cur
    if a and not (is_equivariant(back, target, m) and is_equivariant(fwd, m, target)):
        raise HopfoError("internal: trivial summand witnesses are not equivariant")
    cur.name = "Q"
    proj = is_projective(cur) if check_projective else False
    return DecompositionReport(a, cur, fwd, back, proj)
