"""Homotopy, stable homs, mapping cones and long exact sequences.

All functions accept :class:`EquivariantModule` values; plain H-modules are
promoted to modules over the one-object unit category.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .equivariant import (
    EquivariantModule,
    a_linear_maps,
    as_equivariant,
    eq_cone,
    eq_direct_sum,
    eq_quotient,
    eq_suspend,
    hom_space,
    lambda_maps,
    tensor_with_hmodule,
)
from .exactla import Subspace, image, kernel, kronecker, rank, solve
from .hmodules import (
    HModule,
    cone_inclusion,
    cone_projection,
    counit_kernel_module,
    homology,
    homology_map,
    is_free,
    quotient_by_integral,
    regular_module,
    sigma_homology_dims,
    tensor,
)
from .hopfcore import HopfoError

__all__ = [
    "ExtensionData",
    "TriangleData",
    "StableHom",
    "is_homotopic",
    "stable_hom",
    "mapping_cone",
    "null_homotopy_iff_cone_splits",
    "make_extension",
    "is_A_split",
    "equivariant_retraction",
    "is_quism",
    "is_sigma_quism",
    "is_sigma_acyclic",
    "is_contractible",
    "long_exact_check",
    "surjectivity_transfer",
    "cone_hom_commutation",
    "hom_tensor_iso",
    "shift_power",
    "random_equivariant_map",
]


def _vec_maps(space: Subspace, rows: int, cols: int) -> np.ndarray:
    return space.basis.reshape(space.dim, rows, cols)


def random_equivariant_map(m: EquivariantModule, n: EquivariantModule, rng: np.random.Generator,
                           space: Optional[Subspace] = None) -> np.ndarray:
    """A random combination of a basis of equivariant A-linear maps ``M -> N``."""
    F = m.field
    space = space if space is not None else lambda_maps(m, n)
    if space.dim == 0:
        return F.zeros((n.dim, m.dim))
    c = F.random_matrix(rng, (space.dim,))
    return F.matmul(c, space.basis).reshape(n.dim, m.dim)


# ---------------------------------------------------------------------------
# homotopy and stable homs


def _null_image(m: EquivariantModule, n: EquivariantModule) -> tuple[Subspace, Subspace, np.ndarray]:
    """Span of ``phi o i_M`` over equivariant A-linear ``phi: C(M) -> N``.

    Returns (image subspace in vec(Hom(M, N)), the phi space, the matrix
    ``phi-coordinates -> vec(phi o i_M)``).
    """
    F = m.field
    c = eq_cone(m)
    phis = lambda_maps(c, n)
    i_m = cone_inclusion(m.dim, m.hopf)
    if phis.dim == 0:
        return Subspace.zero(F, n.dim * m.dim), phis, F.zeros((n.dim * m.dim, 0))
    comp = F.matmul(_vec_maps(phis, n.dim, c.dim), i_m[None]).reshape(phis.dim, -1).T
    return image(F, comp), phis, comp


def is_homotopic(f: np.ndarray, g: np.ndarray, m, n) -> Optional[np.ndarray]:
    """A homotopy ``phi: C(M) -> N`` with ``phi o i_M = f - g``, or ``None``."""
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    diff = F.sub(f, g)
    if F.is_zero(diff):
        return F.zeros((n.dim, m.dim * m.hopf.dim))
    _, phis, comp = _null_image(m, n)
    if phis.dim == 0:
        return None
    x = solve(F, comp, diff.reshape(-1))
    if x is None:
        return None
    phi = F.matmul(x, phis.basis).reshape(n.dim, m.dim * m.hopf.dim)
    return phi


@dataclass
class StableHom:
    dim: int
    representatives: list  # maps M -> N spanning a complement of the null-homotopic ones
    equivariant: Subspace
    null_homotopic: Subspace
    homology_dim: int


def stable_hom(m, n) -> StableHom:
    """``T(M, N)``: equivariant maps modulo homotopy, cross-checked against ``H(Hom_A(M, N))``."""
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    Z = lambda_maps(m, n)
    null, _, _ = _null_image(m, n)
    if not (null <= Z):
        raise HopfoError("internal: a null-homotopic map is not equivariant")
    hs = hom_space(m, n)
    hz, hb = hs.Z, hs.B
    dim = Z.dim - null.dim
    if hz != Z or hb != null or hs.homology.dim_H != dim:
        raise HopfoError(
            "stable hom disagreement: homotopy quotient has dim "
            f"{dim} but H(Hom_A(M,N)) has dim {hs.homology.dim_H}")
    if Z.dim:
        zc = Subspace.span(F, Z.dim, Z.coordinates(null.columns()).T) if null.dim else Subspace.zero(F, Z.dim)
        comp = [c for c in range(Z.dim) if c not in set(zc.pivots)]
        reps = [Z.basis[c].reshape(n.dim, m.dim) for c in comp]
    else:
        reps = []
    return StableHom(dim, reps, Z, null, hs.homology.dim_H)


# ---------------------------------------------------------------------------
# triangles


@dataclass
class TriangleData:
    """``M -f-> N -j-> C_f -delta-> Sigma(M)`` with the pushout data."""

    source: EquivariantModule
    target: EquivariantModule
    f: np.ndarray
    cone: EquivariantModule
    j_f: np.ndarray
    delta_f: np.ndarray
    c_map: np.ndarray  # C(M) -> C_f
    suspension: EquivariantModule

    def verify(self) -> None:
        F = self.source.field
        m, n, c = self.source, self.target, self.cone
        if rank(F, self.j_f) != n.dim:
            raise HopfoError("j_f is not injective")
        if rank(F, self.delta_f) != self.suspension.dim:
            raise HopfoError("delta_f is not surjective")
        if not F.is_zero(F.matmul(self.delta_f, self.j_f)):
            raise HopfoError("delta_f o j_f != 0")
        if c.dim != n.dim + self.suspension.dim:
            raise HopfoError("extension row has the wrong dimension")
        i_m = cone_inclusion(m.dim, m.hopf)
        if not F.equal(F.matmul(self.j_f, self.f), F.matmul(self.c_map, i_m)):
            raise HopfoError("pushout square does not commute")
        for x, y, mp in ((n, c, self.j_f), (c, self.suspension, self.delta_f)):
            if not _is_lambda_map(mp, x, y):
                raise HopfoError("triangle map is not equivariant")


def _is_lambda_map(f, m: EquivariantModule, n: EquivariantModule) -> bool:
    F = m.field
    return all(F.equal(F.matmul(y, f), F.matmul(f, x)) for x, y in zip(m.lambda_gens, n.lambda_gens))


def mapping_cone(f: np.ndarray, m, n) -> TriangleData:
    """``C_f = (N (+) C(M)) / {(f(x), -i_M(x))}``."""
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    if not _is_lambda_map(f, m, n):
        raise ValueError("mapping_cone expects an equivariant A-linear map")
    c = eq_cone(m)
    total = eq_direct_sum(n, c)
    i_m = cone_inclusion(m.dim, m.hopf)
    graph = np.vstack([f, F.scal(-1, i_m)])
    sub = image(F, graph)
    cf, proj, section = eq_quotient(total, sub, name=f"C_f({m.name}->{n.name})")
    j_f = proj[:, :n.dim]
    c_map = proj[:, n.dim:]
    susp = eq_suspend(m)
    p_m = cone_projection(m.dim, m.hopf)
    delta = F.matmul(np.hstack([F.zeros((susp.dim, n.dim)), p_m]), section)
    tri = TriangleData(m, n, f, cf, j_f, delta, c_map, susp)
    tri.verify()
    return tri


def equivariant_retraction(i: np.ndarray, sub: EquivariantModule, big: EquivariantModule,
                           a_only: bool = False) -> Optional[np.ndarray]:
    """``r: big -> sub`` with ``r o i = id`` (A-linear, and equivariant unless ``a_only``)."""
    F = sub.field
    space = a_linear_maps(big, sub) if a_only else lambda_maps(big, sub)
    if sub.dim == 0:
        return F.zeros((0, big.dim))
    if space.dim == 0:
        return None
    comp = F.matmul(_vec_maps(space, sub.dim, big.dim), i[None]).reshape(space.dim, -1).T
    x = solve(F, comp, F.eye(sub.dim).reshape(-1))
    if x is None:
        return None
    return F.matmul(x, space.basis).reshape(sub.dim, big.dim)


@dataclass
class ConeSplitVerdict:
    homotopic: bool
    cone_splits: bool
    homotopy: Optional[np.ndarray] = dc_field(repr=False, default=None)
    retraction: Optional[np.ndarray] = dc_field(repr=False, default=None)

    @property
    def agree(self) -> bool:
        return self.homotopic == self.cone_splits


def null_homotopy_iff_cone_splits(f: np.ndarray, m, n) -> ConeSplitVerdict:
    """Compare ``f ~ 0`` with the splitting of ``0 -> N -> C_f -> Sigma M -> 0``."""
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    phi = is_homotopic(f, F.zeros(f.shape), m, n)
    tri = mapping_cone(f, m, n)
    r = equivariant_retraction(tri.j_f, n, tri.cone)
    return ConeSplitVerdict(phi is not None, r is not None, phi, r)


# ---------------------------------------------------------------------------
# extensions


@dataclass
class ExtensionData:
    """``0 -> L -i-> M -p-> N -> 0`` with split certificates."""

    L: EquivariantModule
    M: EquivariantModule
    N: EquivariantModule
    i: np.ndarray
    p: np.ndarray
    is_exact: bool = False
    a_retraction: Optional[np.ndarray] = dc_field(repr=False, default=None)
    retraction: Optional[np.ndarray] = dc_field(repr=False, default=None)

    @property
    def is_A_split(self) -> bool:
        return self.a_retraction is not None

    @property
    def is_split(self) -> bool:
        return self.retraction is not None


def make_extension(L, M, N, i, p, certify: bool = True) -> ExtensionData:
    L, M, N = as_equivariant(L), as_equivariant(M), as_equivariant(N)
    F = L.field
    exact = (
        F.is_zero(F.matmul(p, i))
        and rank(F, i) == L.dim
        and rank(F, p) == N.dim
        and M.dim == L.dim + N.dim
    )
    if not exact:
        raise HopfoError("row is not a short exact sequence")
    if not (_is_lambda_map(i, L, M) and _is_lambda_map(p, M, N)):
        raise HopfoError("extension maps are not equivariant")
    e = ExtensionData(L, M, N, i, p, True)
    if certify:
        e.a_retraction = equivariant_retraction(i, L, M, a_only=True)
        e.retraction = equivariant_retraction(i, L, M)
    return e


def is_A_split(e: ExtensionData) -> Optional[np.ndarray]:
    """An A-linear retraction of ``i``, or ``None``."""
    if e.a_retraction is None:
        e.a_retraction = equivariant_retraction(e.i, e.L, e.M, a_only=True)
    return e.a_retraction


# ---------------------------------------------------------------------------
# quisms and acyclicity


def shift_power(n: int, hopf):
    """The H-module ``(H/(lambda))^{(x) n}`` (n > 0) or ``ker(eps)^{(x) |n|}`` (n < 0); None for 0."""
    if n == 0:
        return None
    base = quotient_by_integral(hopf) if n > 0 else counit_kernel_module(hopf)
    out = base
    for _ in range(abs(n) - 1):
        out = tensor(out, base)
    return out


SHIFT_DIM_LIMIT = 1600


def _check_shift(dim: int, n: int, hopf) -> None:
    est = max(dim, 1) * (hopf.dim - 1) ** abs(n)
    if est > SHIFT_DIM_LIMIT:
        raise HopfoError(f"shifted module of dimension {est} exceeds SHIFT_DIM_LIMIT={SHIFT_DIM_LIMIT}; "
                         "use a smaller window")


def _shifted(m: EquivariantModule, n: int) -> EquivariantModule:
    _check_shift(m.dim, n, m.hopf)
    w = shift_power(n, m.hopf)
    return m if w is None else tensor_with_hmodule(m, w)


def _shifted_map(f: np.ndarray, n: int, hopf) -> np.ndarray:
    _check_shift(max(f.shape), n, hopf)
    w = shift_power(n, hopf)
    if w is None:
        return f
    return kronecker(hopf.field, f, hopf.field.eye(w.dim))


def is_quism(f: np.ndarray, m, n) -> bool:
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    hm, hn = homology(m.hmod), homology(n.hmod)
    if hm.dim_H != hn.dim_H:
        return False
    return rank(F, homology_map(f, m.hmod, n.hmod, hm, hn)) == hm.dim_H


def is_sigma_quism(f: np.ndarray, m, n, window: int = 3) -> bool:
    """``H(Sigma^k f)`` is an isomorphism for every ``|k| <= window``."""
    m, n = as_equivariant(m), as_equivariant(n)
    for k in range(-window, window + 1):
        if not is_quism(_shifted_map(f, k, m.hopf), _shifted(m, k), _shifted(n, k)):
            return False
    return True


def is_sigma_acyclic(m, window: int = 3) -> bool:
    hm = m if isinstance(m, HModule) else as_equivariant(m).hmod
    return all(v == 0 for v in sigma_homology_dims(hm, window).values())


def is_contractible(m, equivariant: bool = False) -> bool:
    """``id_M ~ 0``; in ``lMod H`` (forgetting A) unless ``equivariant``."""
    e = as_equivariant(m)
    # id_M ~ 0 forces H(id_M) = 0
    if homology(e.hmod).dim_H:
        return False
    if not equivariant or e.cat.dim == 1:
        # over A = k the two notions agree; free H-modules are injective, so i_M splits
        if is_free(e.hmod, search=16) is not None:
            return True
        e = as_equivariant(e.hmod)
    F = e.field
    return is_homotopic(F.eye(e.dim), F.zeros((e.dim, e.dim)), e, e) is not None


# ---------------------------------------------------------------------------
# long exact sequence


@dataclass
class LESReport:
    window: int
    exact: bool
    failures: list
    connecting_nonzero: bool
    dims: dict


def _exact_at(F, g: np.ndarray, h: np.ndarray, mid: int) -> bool:
    """``im g = ker h`` for ``A -g-> B -h-> C`` on homology (B of dim ``mid``)."""
    if g.size and h.size and not F.is_zero(F.matmul(h, g)):
        return False
    rg = rank(F, g) if g.size else 0
    rh = rank(F, h) if h.size else 0
    return rg == mid - rh


def connecting_map(e: ExtensionData) -> np.ndarray:
    """``delta: N -> Sigma(L)`` from an extension ``u: M -> C(L)`` of ``i_L`` along ``i``."""
    L, M = e.L, e.M
    F = L.field
    c = eq_cone(L)
    space = lambda_maps(M, c)
    i_l = cone_inclusion(L.dim, L.hopf)
    if space.dim == 0:
        raise HopfoError("no equivariant maps M -> C(L)")
    comp = F.matmul(_vec_maps(space, c.dim, M.dim), e.i[None]).reshape(space.dim, -1).T
    x = solve(F, comp, i_l.reshape(-1))
    if x is None:
        raise HopfoError("i_L does not extend along i (extension is not A-split)")
    u = F.matmul(x, space.basis).reshape(c.dim, M.dim)
    # any linear section of p
    sec = solve(F, e.p, F.eye(e.N.dim))
    delta = F.mchain(cone_projection(L.dim, L.hopf), u, sec)
    if not _is_lambda_map(delta, e.N, eq_suspend(L)):
        raise HopfoError("internal: connecting map is not equivariant")
    return delta


def long_exact_check(e: ExtensionData, window: int = 3) -> LESReport:
    """Exactness of ``H(S^n L) -> H(S^n M) -> H(S^n N) -> H(S^n S L) -> H(S^n S M)`` on the window."""
    F = e.L.field
    hopf = e.L.hopf
    delta = connecting_map(e)
    sl = eq_suspend(e.L)
    sm = eq_suspend(e.M)
    si = kronecker(F, e.i, F.eye(quotient_by_integral(hopf).dim))
    failures = []
    nonzero = False
    dims = {}
    for k in range(-window, window + 1):
        mods = [_shifted(x, k).hmod for x in (e.L, e.M, e.N, sl, sm)]
        maps = [_shifted_map(x, k, hopf) for x in (e.i, e.p, delta, si)]
        hs = [homology(x) for x in mods]
        hmaps = [homology_map(f, mods[t], mods[t + 1], hs[t], hs[t + 1]) for t, f in enumerate(maps)]
        dims[k] = [h.dim_H for h in hs]
        for t, name in ((1, "M"), (2, "N"), (3, "Sigma L")):
            if not _exact_at(F, hmaps[t - 1], hmaps[t], hs[t].dim_H):
                failures.append({"shift": k, "joint": name})
        if hmaps[2].size and not F.is_zero(hmaps[2]):
            nonzero = True
    return LESReport(window, not failures, failures, nonzero, dims)


def surjectivity_transfer(f: np.ndarray, m, n) -> dict:
    """For a surjective quism, check that ``B(f)`` and ``Z(f)`` are surjective."""
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    if rank(F, f) != n.dim:
        raise ValueError("map is not surjective")
    if not is_quism(f, m, n):
        raise ValueError("map is not a quism")
    hm, hn = homology(m.hmod), homology(n.hmod)
    zb = image(F, F.matmul(f, hm.Z.columns())) if hm.Z.dim else Subspace.zero(F, n.dim)
    bb = image(F, F.matmul(f, hm.B.columns())) if hm.B.dim else Subspace.zero(F, n.dim)
    return {"Z_surjective": zb == hn.Z, "B_surjective": bb == hn.B}


# ---------------------------------------------------------------------------
# hom and cones


def hom_tensor_iso(m: EquivariantModule, n: EquivariantModule, v: HModule) -> np.ndarray:
    """``kappa: Hom_A(M, N) (x) V -> Hom_A(M, N (x) V)``, ``g (x) x -> (y -> g(y) (x) x)``.

    Returned in the coordinates of the two hom spaces.
    """
    F = m.field
    src = hom_space(m, n)
    nv = tensor_with_hmodule(n, v)
    tgt = hom_space(m, nv)
    cols = []
    for g in src.maps():
        for t in range(v.dim):
            x = F.zeros((v.dim, 1))
            x[t, 0] = 1
            img = kronecker(F, g, x)  # (n*v) x m: (g(y)) (x) x
            cols.append(tgt.coords(img))
    mat = np.stack(cols, axis=1) if cols else F.zeros((tgt.dim, 0))
    return mat


def cone_hom_commutation(p: EquivariantModule, f: np.ndarray, m: EquivariantModule, n: EquivariantModule) -> dict:
    """Pushout-universality map ``C_{Hom(P, f)} -> Hom(P, C_f)`` and whether it is an isomorphism."""
    F = p.field
    hopf = p.hopf
    tri = mapping_cone(f, m, n)
    hpm = hom_space(p, m)
    hpn = hom_space(p, n)
    hpc = hom_space(p, tri.cone)
    # Hom(P, f) in hom-space coordinates
    hf = np.stack([hpn.coords(F.matmul(f, g)) for g in hpm.maps()], axis=1) if hpm.dim else F.zeros((hpn.dim, 0))
    x_mod = as_equivariant(hpm.hmodule)
    y_mod = as_equivariant(hpn.hmodule)
    tri_h = mapping_cone(hf, x_mod, y_mod)
    # map on N-part: g -> j_f o g
    on_n = np.stack([hpc.coords(F.matmul(tri.j_f, g)) for g in hpn.maps()], axis=1) if hpn.dim else \
        F.zeros((hpc.dim, 0))
    # map on C(Hom(P, M)) = Hom(P, M) (x) H: kappa then c_map
    kappa = hom_tensor_iso(p, m, regular_module(hopf))
    cm = hom_space(p, eq_cone(m))
    on_c = []
    for col in range(kappa.shape[1]):
        phi = cm.to_map(kappa[:, col])
        on_c.append(hpc.coords(F.matmul(tri.c_map, phi)))
    on_c = np.stack(on_c, axis=1) if on_c else F.zeros((hpc.dim, 0))
    total = np.hstack([on_n, on_c])
    # descend along the quotient N (+) C(M) -> C_f (its section)
    _, _, section = eq_quotient(eq_direct_sum(y_mod, eq_cone(x_mod)), image(
        F, np.vstack([hf, F.scal(-1, cone_inclusion(x_mod.dim, hopf))])))
    u = F.matmul(total, section)
    graph = np.vstack([hf, F.scal(-1, cone_inclusion(x_mod.dim, hopf))])
    well_defined = F.is_zero(F.matmul(total, graph)) if graph.size else True
    equivariant = _is_lambda_map(u, tri_h.cone, as_equivariant(hpc.hmodule))
    iso = u.shape[0] == u.shape[1] and rank(F, u) == u.shape[0]
    return {"well_defined": bool(well_defined), "equivariant": bool(equivariant), "isomorphism": bool(iso),
            "dims": (tri_h.cone.dim, hpc.dim)}
