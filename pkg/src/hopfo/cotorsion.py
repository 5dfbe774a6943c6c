"""Ext^1 over the smash product, A-split extensions and cotorsion-pair checks.

Every report here is relative to a finite list of modules (a "catalog") and a
shift window; nothing in this module proves a universally quantified claim.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .equivariant import (
    AModule,
    EquivariantModule,
    as_equivariant,
    eq_cone,
    eq_desuspend,
    eq_direct_sum,
    eq_suspend,
    eq_quotient,
    eq_submodule,
    free_lambda_module,
    hom_space,
    lambda_maps,
    a_linear_maps,
)
from .exactla import Subspace, image, kernel, kernel_of_blocks, rank, solve
from .hmodules import VALIDATE_LIMIT, lin_comb, strip_free
from .homotopy import (
    ExtensionData,
    _is_lambda_map,
    _shifted,
    is_contractible,
    is_sigma_acyclic,
    make_extension,
    mapping_cone,
    random_equivariant_map,
    stable_hom,
)
from .hopfcore import HopfoError

__all__ = [
    "Presentation",
    "Ext1",
    "OrthogonalityReport",
    "ContractiblePairReport",
    "presentation",
    "ext1",
    "extension_from_cocycle",
    "a_split_cocycle_space",
    "extension_from_theta",
    "random_a_split_extension",
    "is_projective_module",
    "is_A_projective",
    "semiprojective_witness",
    "reduced_shift",
    "hovey_triple_report",
    "contractible_pair_report",
]


def _warn_semisimple(hopf) -> bool:
    if hopf.is_semisimple:
        warnings.warn(
            f"{hopf.name or 'H'} is semisimple: every module has zero homology and the "
            "cotorsion checks are degenerate", stacklevel=3)
        return True
    return False


# ---------------------------------------------------------------------------
# presentations and Ext^1


def _greedy_generators(m: EquivariantModule) -> list[np.ndarray]:
    """Homogeneous vectors generating M over A # H (basis vectors, greedily)."""
    from .equivariant import generated_submodule

    F = m.field
    gens: list[np.ndarray] = []
    span = Subspace.zero(F, m.dim)
    for c in range(m.dim):
        e = F.zeros(m.dim)
        e[c] = 1
        if span.contains(e):
            continue
        gens.append(e)
        span = generated_submodule(m, np.stack(gens, axis=1))
        if span.dim == m.dim:
            break
    return gens


@dataclass
class Presentation:
    """``0 -> K0 -> F0 -> M -> 0`` with ``F0`` free over ``A # H``."""

    module: EquivariantModule
    free: EquivariantModule
    pi: np.ndarray
    kernel: EquivariantModule
    inclusion: np.ndarray
    generators: list = dc_field(repr=False, default_factory=list)


def presentation(m) -> Presentation:
    m = as_equivariant(m)
    F = m.field
    cached = getattr(m, "_presentation", None)
    if cached is not None:
        return cached
    cat, hopf = m.cat, m.hopf
    gens = _greedy_generators(m)
    r = len(gens)
    dA, d = cat.dim, hopf.dim
    if r == 0:
        free = EquivariantModule(cat, [], F.zeros((dA, 0, 0)), F.zeros((d, 0, 0)), check=False)
        pi = F.zeros((m.dim, 0))
    else:
        free = free_lambda_module(cat, r)
        cols = []
        for g in gens:
            hg = [F.matmul(m.h_action[j], g) for j in range(d)]
            for i in range(dA):
                for j in range(d):
                    cols.append(F.matmul(m.a_action[i], hg[j]))
        pi = np.stack(cols, axis=1)
    if rank(F, pi) != m.dim:
        raise HopfoError("internal: free cover is not surjective")
    if free.dim and not _is_lambda_map(pi, free, m):
        raise HopfoError("internal: free cover map is not equivariant")
    ker = kernel(F, pi) if free.dim else Subspace.zero(F, 0)
    k0, incl = eq_submodule(free, ker, name=f"K0({m.name})")
    pres = Presentation(m, free, pi, k0, incl, gens)
    m._presentation = pres
    return pres


@dataclass
class Ext1:
    dim: int
    cocycles: list  # maps K0 -> N representing a basis of Ext^1
    presentation: Presentation
    cocycle_space: Subspace  # Hom_Lambda(K0, N)
    coboundaries: Subspace  # restrictions of Hom_Lambda(F0, N)

    def is_coboundary(self, c: np.ndarray) -> bool:
        return self.coboundaries.contains(np.asarray(c).reshape(-1))


def ext1(m, n) -> Ext1:
    """``Ext^1_{A#H}(M, N) = coker(Hom(F0, N) -> Hom(K0, N))``."""
    m, n = as_equivariant(m), as_equivariant(n)
    if m.cat is not n.cat:
        raise ValueError("modules over different categories")
    F = m.field
    pres = presentation(m)
    k0, f0, incl = pres.kernel, pres.free, pres.inclusion
    cocycles = lambda_maps(k0, n)
    if k0.dim == 0 or n.dim == 0:
        z = Subspace.zero(F, n.dim * k0.dim)
        return Ext1(0, [], pres, cocycles, z)
    homs = lambda_maps(f0, n)
    if homs.dim:
        rest = F.matmul(homs.basis.reshape(homs.dim, n.dim, f0.dim), incl[None]).reshape(homs.dim, -1)
        cob = Subspace.span(F, n.dim * k0.dim, rest)
    else:
        cob = Subspace.zero(F, n.dim * k0.dim)
    if not (cob <= cocycles):
        raise HopfoError("internal: restricted maps are not equivariant")
    dim = cocycles.dim - cob.dim
    reps = []
    if dim:
        span = cob
        for v in cocycles.basis:
            if not span.contains(v):
                reps.append(v.reshape(n.dim, k0.dim))
                span = span + Subspace.span(F, span.ambient_dim, v[None])
    return Ext1(dim, reps, pres, cocycles, cob)


def extension_from_cocycle(m, n, cocycle: np.ndarray, data: Optional[Ext1] = None) -> ExtensionData:
    """``0 -> N -> (N (+) F0)/{(c(k), -k)} -> M -> 0``; split iff ``c`` is a coboundary."""
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    data = data if data is not None else ext1(m, n)
    pres = data.presentation
    c = F.reduce(np.asarray(cocycle)).reshape(n.dim, pres.kernel.dim)
    if not data.cocycle_space.contains(c.reshape(-1)):
        raise ValueError("cocycle is not an equivariant map K0 -> N")
    total = eq_direct_sum(n, pres.free)
    graph = np.vstack([c, F.scal(-1, pres.inclusion)])
    sub = image(F, graph) if graph.shape[1] else Subspace.zero(F, total.dim)
    e, proj, section = eq_quotient(total, sub, name=f"E({m.name};{n.name})")
    i = proj[:, :n.dim]
    p = F.matmul(np.hstack([F.zeros((m.dim, n.dim)), pres.pi]), section)
    ext = make_extension(n, e, m, i, p)
    if ext.is_split != data.is_coboundary(c):
        raise HopfoError("splitting of the extension disagrees with the cocycle class")
    return ext


# ---------------------------------------------------------------------------
# A-split extensions as H-direction cocycles


def a_split_cocycle_space(m, n) -> Subspace:
    """Maps ``theta: H -> Hom_k(M, N)`` making ``N (+) M`` an A-split extension ``0 -> N -> E -> M -> 0``.

    ``E`` carries the diagonal A-action and ``h -> [[rho_N(h), theta(h)], [0, rho_M(h)]]``.
    Returned in the coordinates ``vec(theta(b_0)), ..., vec(theta(b_{d-1}))``.
    """
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    hopf, cat = m.hopf, m.cat
    d, dn, dm = hopf.dim, n.dim, m.dim
    blk = dn * dm
    if blk == 0:
        return Subspace.zero(F, 0)
    In, Im = F.eye(dn), F.eye(dm)
    cols = d * blk

    def blocks():
        # theta(1) = 0
        row = F.zeros((blk, cols))
        for k in np.nonzero(hopf.unit)[0]:
            row[:, k * blk:(k + 1) * blk] = F.scal(hopf.unit[k], F.eye(blk))
        yield row
        # theta(g b_j) = rho_N(g) theta(b_j) + theta(g) rho_M(b_j) for algebra generators g;
        # Leibniz for all products follows by induction on word length
        for g in hopf.generators:
            left = F.reduce(np.kron(n.h_action[g], Im))
            for j in range(d):
                row = F.zeros((blk, cols))
                for k in np.nonzero(hopf.mult[g, j])[0]:
                    row[:, k * blk:(k + 1) * blk] = F.scal(hopf.mult[g, j, k], F.eye(blk))
                row[:, j * blk:(j + 1) * blk] = F.sub(row[:, j * blk:(j + 1) * blk], left)
                right = F.reduce(np.kron(In, m.h_action[j].T))
                row[:, g * blk:(g + 1) * blk] = F.sub(row[:, g * blk:(g + 1) * blk], right)
                yield row
        # theta(h) rho_M(a) = sum rho_N(h_(1) . a) theta(h_(2)) for algebra generators a of A
        if cat.dim > 1:
            for a in cat.generators:
                ra = F.reduce(np.kron(In, m.a_action[a].T))
                for i in range(d):
                    row = F.zeros((blk, cols))
                    row[:, i * blk:(i + 1) * blk] = ra
                    for u, v, c in hopf.delta_terms[i]:
                        act = F.reduce(np.kron(n.rho_a(cat.h_action[u][:, a]), Im))
                        row[:, v * blk:(v + 1) * blk] = F.sub(row[:, v * blk:(v + 1) * blk], F.scal(c, act))
                    yield row

    return kernel_of_blocks(F, blocks(), cols)


def extension_from_theta(m, n, theta, certify: bool = True) -> ExtensionData:
    """The A-split extension ``0 -> N -> N (+) M -> M -> 0`` twisted by ``theta``."""
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    d, dn, dm = m.hopf.dim, n.dim, m.dim
    th = F.reduce(np.asarray(theta)).reshape(d, dn, dm)
    tot = dn + dm
    a = F.zeros((m.cat.dim, tot, tot))
    a[:, :dn, :dn] = n.a_action
    a[:, dn:, dn:] = m.a_action
    h = F.zeros((d, tot, tot))
    h[:, :dn, :dn] = n.h_action
    h[:, dn:, dn:] = m.h_action
    h[:, :dn, dn:] = th
    e = EquivariantModule(m.cat, list(n.grading) + list(m.grading), a, h,
                          name=f"E_theta({m.name};{n.name})", check=tot <= VALIDATE_LIMIT)
    i = np.vstack([F.eye(dn), F.zeros((dm, dn))])
    p = np.hstack([F.zeros((dm, dn)), F.eye(dm)])
    ext = make_extension(n, e, m, i, p, certify=certify)
    if certify and not ext.is_A_split:
        raise HopfoError("internal: theta-extension is not A-split")
    return ext


def random_a_split_extension(m, n, rng: np.random.Generator, space: Optional[Subspace] = None) -> ExtensionData:
    m, n = as_equivariant(m), as_equivariant(n)
    F = m.field
    space = space if space is not None else a_split_cocycle_space(m, n)
    d = m.hopf.dim
    if space.dim == 0:
        theta = F.zeros((d, n.dim, m.dim))
    else:
        theta = F.matmul(F.random_matrix(rng, (space.dim,)), space.basis)
    return extension_from_theta(m, n, theta)


# ---------------------------------------------------------------------------
# projectivity


def is_projective_module(m) -> bool:
    """``M`` is projective over ``A # H``: the free cover has an equivariant section."""
    m = as_equivariant(m)
    F = m.field
    if m.dim == 0:
        return True
    pres = presentation(m)
    space = lambda_maps(m, pres.free)
    if space.dim == 0:
        return False
    maps = space.basis.reshape(space.dim, pres.free.dim, m.dim)
    comp = F.matmul(pres.pi[None], maps).reshape(space.dim, -1).T
    return solve(F, comp, F.eye(m.dim).reshape(-1)) is not None


def _free_a_module(cat, r: int) -> AModule:
    F = cat.field
    one = AModule(cat, [cat.target[i] for i in range(cat.dim)],
                  cat.left_mult, name="A", check=False)
    if r == 1:
        return one
    n = cat.dim * r
    a = F.zeros((cat.dim, n, n))
    for t in range(r):
        a[:, t * cat.dim:(t + 1) * cat.dim, t * cat.dim:(t + 1) * cat.dim] = one.a_action
    return AModule(cat, list(one.grading) * r, a, name=f"A^{r}", check=False)


def is_A_projective(m) -> bool:
    """The underlying A-module of ``M`` is projective (section of ``A^{dim M} -> M``)."""
    m = as_equivariant(m) if not isinstance(m, AModule) else m
    F = m.field
    cat = m.cat
    if m.dim == 0 or cat.dim == 1:
        return True
    free = _free_a_module(cat, m.dim)
    cols = []
    for c in range(m.dim):
        for i in range(cat.dim):
            cols.append(m.a_action[i][:, c])
    pi = np.stack(cols, axis=1)
    space = a_linear_maps(m, free)
    if space.dim == 0:
        return False
    maps = space.basis.reshape(space.dim, free.dim, m.dim)
    comp = F.matmul(pi[None], maps).reshape(space.dim, -1).T
    return solve(F, comp, F.eye(m.dim).reshape(-1)) is not None


def reduced_shift(m: EquivariantModule, n: int) -> EquivariantModule:
    """``Sigma^n M`` up to free summands (stripped after each step when A is the unit category)."""
    cache = m.__dict__.setdefault("_reduced_shifts", {0: m})
    if n in cache:
        return cache[n]
    step = 1 if n > 0 else -1
    prev = reduced_shift(m, n - step)
    out = eq_suspend(prev) if step > 0 else eq_desuspend(prev)
    if out.cat.dim == 1 and out.dim:
        out = as_equivariant(strip_free(out.hmod))
    out.name = f"S^{n}({m.name})"
    cache[n] = out
    return out


@dataclass
class SemiprojectiveVerdict:
    witnessed: bool
    a_projective: bool
    failures: list  # names of catalog modules T with hom(P, T) not Sigma-acyclic


def semiprojective_witness(p, acyclic_catalog: Sequence, window: int = 3) -> SemiprojectiveVerdict:
    """Catalog-relative certificate: ``U(P)`` projective and ``Hom_A(P, T)`` Sigma-acyclic."""
    p = as_equivariant(p)
    ap = is_A_projective(p)
    failures = []
    if ap:
        for t in acyclic_catalog:
            hs = hom_space(p, as_equivariant(t))
            if hs.dim and not is_sigma_acyclic(hs.hmodule, window):
                failures.append(t.name)
    return SemiprojectiveVerdict(ap and not failures, ap, failures)


# ---------------------------------------------------------------------------
# reports


@dataclass
class OrthogonalityReport:
    pair: str
    window: int
    modules: list
    acyclic: list
    semiprojective: list
    projective: list
    ext_dims: dict = dc_field(default_factory=dict)
    checks: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "pair": self.pair,
            "window": self.window,
            "catalog_relative": True,
            "modules": self.modules,
            "acyclic": self.acyclic,
            "semiprojective": self.semiprojective,
            "projective": self.projective,
            "ext1": {f"{a}|{b}": v for (a, b), v in sorted(self.ext_dims.items())},
            "checks": dict(sorted(self.checks.items())),
            "failures": self.failures,
            "degenerate": self.degenerate,
        }


def _thickness_checks(mods, acyc, rng, report: OrthogonalityReport, window: int, samples: int) -> None:
    idx = [t for t, a in enumerate(acyc) if a]
    count = 0
    # 2-out-of-3 on mapping cones between acyclic modules
    for _ in range(samples):
        if not idx:
            break
        s, t = (int(x) for x in rng.choice(idx, size=2))
        f = random_equivariant_map(mods[s], mods[t], rng)
        tri = mapping_cone(f, mods[s], mods[t])
        ok = is_sigma_acyclic(tri.cone, window)
        count += 1
        if not ok:
            report.failures.append({"check": "thick-cone", "source": mods[s].name, "target": mods[t].name})
    # summands: X (+) Y acyclic iff both are
    for s in range(len(mods)):
        t = (s + 1) % len(mods)
        both = is_sigma_acyclic(eq_direct_sum(mods[s], mods[t]), window)
        count += 1
        if both != (acyc[s] and acyc[t]):
            report.failures.append({"check": "thick-summand", "modules": [mods[s].name, mods[t].name]})
    report.checks["d_thickness"] = count


def hovey_triple_report(modules: Sequence, window: int = 3, rng: Optional[np.random.Generator] = None,
                        pair: str = "", thickness_samples: int = 6) -> OrthogonalityReport:
    """Orthogonality and projectivity checks on a finite catalog of equivariant modules."""
    mods = [as_equivariant(x) for x in modules]
    rng = rng if rng is not None else np.random.default_rng(0)
    hopf = mods[0].hopf
    names = [x.name for x in mods]
    report = OrthogonalityReport(pair, window, names, [], [], [])
    if _warn_semisimple(hopf):
        report.degenerate = True
        return report
    acyc = [is_sigma_acyclic(x, window) for x in mods]
    acyclic_mods = [x for x, a in zip(mods, acyc) if a]
    sp = [semiprojective_witness(x, acyclic_mods, window).witnessed for x in mods]
    proj = [is_projective_module(x) for x in mods]
    report.acyclic, report.semiprojective, report.projective = acyc, sp, proj
    # (a) Ext^1(P, T) = 0
    na = 0
    for s, x in enumerate(mods):
        if not sp[s]:
            continue
        for t, y in enumerate(mods):
            if not acyc[t]:
                continue
            e = ext1(x, y).dim
            report.ext_dims[(x.name, y.name)] = e
            na += 1
            if e:
                report.failures.append({"check": "a", "P": x.name, "T": y.name, "ext1": e})
    report.checks["a_ext_vanishing"] = na
    # (b) semiprojective and acyclic => projective; (c) projective => both
    for s, x in enumerate(mods):
        if sp[s] and acyc[s] and not proj[s]:
            report.failures.append({"check": "b", "module": x.name})
        if proj[s] and not (sp[s] and acyc[s]):
            report.failures.append({"check": "c", "module": x.name, "semiprojective": sp[s], "acyclic": acyc[s]})
    report.checks["b_c_modules"] = len(mods)
    # (d) P orthogonal to every shift of T => T(P, S^n T) = 0; the Sigma-closed class
    # {S^n T} is approximated by one extra shift on each side of the window
    hyp = range(-window - 1, window + 2)
    shifted = [{k: reduced_shift(y, k) for k in hyp} for y in mods]
    nd = 0
    for x in mods:
        for t, y in enumerate(mods):
            if any(ext1(x, shifted[t][k]).dim for k in hyp):
                continue
            for k in range(-window, window + 1):
                nd += 1
                st = stable_hom(x, shifted[t][k]).dim
                if st:
                    report.failures.append({"check": "d", "P": x.name, "T": y.name, "shift": k,
                                            "stable_hom": st})
    report.checks["d_ext_to_stable"] = nd
    _thickness_checks(mods, acyc, rng, report, window, thickness_samples)
    return report


@dataclass
class ContractiblePairReport:
    pair: str
    contractible: list
    samples: int
    checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"pair": self.pair, "contractible": self.contractible, "samples_per_pair": self.samples,
                "checked": self.checked, "failures": self.failures, "catalog_relative": True}


def contractible_pair_report(modules: Sequence, rng: np.random.Generator, samples: int = 30,
                             pair: str = "", equivariant: bool = False,
                             slots: Sequence[str] = ("sub",)) -> ContractiblePairReport:
    """Sampled A-split extensions with a contractible term must split equivariantly.

    ``slots`` chooses where the contractible module sits: ``"sub"`` for
    ``0 -> T -> E -> M -> 0`` and ``"quotient"`` for ``0 -> M -> E -> T -> 0``.
    """
    mods = [as_equivariant(x) for x in modules]
    cntr = [x for x in mods if is_contractible(x, equivariant=equivariant)]
    report = ContractiblePairReport(pair, [x.name for x in cntr], samples)
    for t in cntr:
        for m in mods:
            for slot in slots:
                sub, quo = (t, m) if slot == "sub" else (m, t)
                space = a_split_cocycle_space(quo, sub)
                for s in range(samples):
                    e = random_a_split_extension(quo, sub, rng, space)
                    report.checked += 1
                    if not e.is_split:
                        report.failures.append({"T": t.name, "M": m.name, "slot": slot, "sample": s})
                        break
    # the approximation sequence 0 -> M -> C(M) -> S(M) -> 0 has contractible middle term
    for m in mods:
        if not is_contractible(eq_cone(m), equivariant=True):
            report.failures.append({"check": "cone-contractible", "M": m.name})
    return report
