"""Verification suites: each returns a list of pass/fail checks with replay witnesses.

Randomness is drawn from generators seeded by ``(seed, crc32(check key))``,
so a single failing check can be rerun in isolation and reports do not depend
on execution order.
"""

from __future__ import annotations

import os
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np

from .catalogs import STANDARD_PAIRS, load_hopf, module_zoo, parse_category, parse_module
from .cotorsion import (
    a_split_cocycle_space,
    contractible_pair_report,
    ext1,
    extension_from_cocycle,
    hovey_triple_report,
    random_a_split_extension,
)
from .equivariant import (
    AModule,
    E_functor,
    a_linear_maps,
    adjunction_phi,
    adjunction_psi,
    eq_cone,
    lambda_maps,
)
from .exactla import kernel, rank
from .hmodules import (
    cone_inclusion,
    desuspend,
    homology,
    jordan_decompose,
    jordan_module,
    regular_module,
    sigma_homology_dims,
    split_off_trivials,
    suspend,
    switching_iso,
    tensor,
    counit_kernel_module,
    quotient_by_integral,
    trivial_module,
)
from .homotopy import (
    is_sigma_acyclic,
    long_exact_check,
    mapping_cone,
    null_homotopy_iff_cone_splits,
    random_equivariant_map,
    stable_hom,
)
from .hopfcore import HopfoError, hopf_from_json, hopf_to_json

__all__ = [
    "Check",
    "SuiteConfig",
    "SuiteReport",
    "HOPF_CATALOG",
    "SUITES",
    "run_suite",
    "rng_for",
]

HOPF_CATALOG = (
    "divided_power:2",
    "divided_power:3",
    "divided_power:5",
    "group:2:q",
    "group:3:3",
    "sweedler:3",
    "taft:2:3",
    "taft:4:5",
)


@dataclass
class Check:
    key: str
    passed: bool
    detail: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"key": self.key, "passed": self.passed, **self.detail}


@dataclass
class SuiteConfig:
    seed: int = 0
    window: int = 3
    pairs: Optional[Sequence[tuple[str, str]]] = None  # (hopf, category) shorthand
    samples: Optional[int] = None  # overrides the per-suite sample count

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def pair_list(self) -> list[tuple[str, str]]:
        return list(self.pairs) if self.pairs else list(STANDARD_PAIRS)


@dataclass
class SuiteReport:
    name: str
    config: SuiteConfig
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.key)
        return {
            "suite": self.name,
            "seed": self.config.seed,
            "window": self.config.window,
            "passed": self.passed,
            "n_checks": len(checks),
            "n_failed": sum(not c.passed for c in checks),
            "checks": [c.to_json() for c in checks],
        }


def rng_for(seed: int, key: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(key.encode())])


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("HOPFO_THREADS", "1")))
    except ValueError:
        return 1


def _fan_out(fn: Callable, items: Sequence) -> list:
    n = _workers()
    if n == 1 or len(items) < 2:
        out = [fn(x) for x in items]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            out = list(pool.map(fn, items))
    return [c for chunk in out for c in chunk]


def _pair_setup(pair):
    hs, cs = pair
    hopf = load_hopf(hs)
    cat = parse_category(cs, hopf)
    return hopf, cat, f"{hs}|{cs}"


def _n(cfg: SuiteConfig, default: int) -> int:
    return cfg.samples if cfg.samples is not None else default


def _guard(key: str, fn: Callable[[], dict | bool]) -> Check:
    """Run one check; internal errors become failures carrying the message."""
    try:
        res = fn()
    except HopfoError as exc:
        return Check(key, False, {"error": str(exc)})
    if isinstance(res, dict):
        return Check(key, bool(res.pop("passed")), res)
    return Check(key, bool(res))


# ---------------------------------------------------------------------------
# hopf-axioms


def _integral_space_dim(hopf) -> int:
    """Dimension of ``{x : b_i x = eps(b_i) x}`` by a direct nullspace solve."""
    F = hopf.field
    blocks = [F.sub(hopf.left_mult[i], F.scal(hopf.counit[i], F.eye(hopf.dim))) for i in range(hopf.dim)]
    return kernel(F, np.vstack(blocks)).dim


def suite_hopf_axioms(cfg: SuiteConfig) -> list[Check]:
    checks = []
    for name in HOPF_CATALOG:
        def one(name=name):
            h = load_hopf(name)
            again = hopf_from_json(hopf_to_json(h))  # re-runs every axiom check
            F = h.field
            dim_int = _integral_space_dim(h)
            lam = h.integral
            ok = dim_int == 1 and F.equal(again.integral, lam)
            out = {"dim": h.dim, "integral_space_dim": dim_int, "integral": [F.format(x) for x in lam]}
            if name.startswith("divided_power"):
                expect = F.zeros(h.dim)
                expect[h.dim - 1] = 1
                out["matches_top_power"] = bool(F.equal(lam, expect))
                ok = ok and out["matches_top_power"]
            s_round = F.equal(F.matmul(h.antipode, h.s_inverse), F.eye(h.dim))
            eps_lam = h.eps(lam)
            out["semisimple"] = bool(h.is_semisimple)
            ok = ok and s_round and (eps_lam != 0) == h.is_semisimple
            out["passed"] = ok
            return out
        checks.append(_guard(f"hopf/{name}", one))
    return checks


# ---------------------------------------------------------------------------
# homology-basics


def _jordan_oracle(k: int, p: int) -> int:
    """dim H(J_k) over divided_power:p from ranks of powers of a numpy Jordan block."""
    nil = np.eye(k, k=-1, dtype=np.int64)
    ker_dim = k - np.linalg.matrix_rank(nil)
    top = np.linalg.matrix_power(nil, p - 1) if p - 1 > 0 else np.eye(k, dtype=np.int64)
    return int(ker_dim - np.linalg.matrix_rank(top))


def suite_homology_basics(cfg: SuiteConfig) -> list[Check]:
    checks = []
    for name in HOPF_CATALOG:
        h = load_hopf(name)
        if h.is_semisimple:
            continue
        checks.append(_guard(f"regular/{name}", lambda h=h: {
            "passed": homology(regular_module(h)).dim_H == 0, "dim_H": homology(regular_module(h)).dim_H}))
    for p in (2, 3, 5):
        h = load_hopf(f"divided_power:{p}")
        for k in range(1, p + 1):
            def one(h=h, k=k, p=p):
                got = homology(jordan_module(h, [k])).dim_H
                oracle = _jordan_oracle(k, p)
                return {"passed": got == oracle == (1 if k < p else 0), "dim_H": got, "oracle": oracle}
            checks.append(_guard(f"jordan/dp{p}/J{k}", one))
    return checks


# ---------------------------------------------------------------------------
# stablehom-agreement


def suite_stablehom(cfg: SuiteConfig) -> list[Check]:
    def per_pair(pair):
        hopf, cat, tag = _pair_setup(pair)
        zoo = module_zoo(cat)
        out = []
        for m in zoo:
            for n in zoo:
                if m.dim * n.dim > 96:
                    continue

                def one(m=m, n=n):
                    sh = stable_hom(m, n)  # raises on disagreement
                    return {"passed": sh.dim == sh.homology_dim, "stable_hom": sh.dim,
                            "homology_of_hom": sh.homology_dim}
                out.append(_guard(f"{tag}/{m.name}|{n.name}", one))
        return out
    return _fan_out(per_pair, cfg.pair_list())


# ---------------------------------------------------------------------------
# cone-lemmas


def suite_cone_lemmas(cfg: SuiteConfig) -> list[Check]:
    w = cfg.window
    checks = []
    for name in HOPF_CATALOG:
        h = load_hopf(name)
        if h.is_semisimple:
            continue

        def split(h=h):
            rep = split_off_trivials(tensor(counit_kernel_module(h), quotient_by_integral(h)))
            return {"passed": rep.trivial_multiplicity == 1 and rep.complement_projective,
                    "multiplicity": rep.trivial_multiplicity, "complement_dim": rep.projective_complement.dim}
        checks.append(_guard(f"split/{name}", split))

    def per_pair(pair):
        hopf, cat, tag = _pair_setup(pair)
        out = []
        for m in module_zoo(cat):
            def cone(m=m):
                dims = sigma_homology_dims(eq_cone(m).hmod, w)
                return {"passed": all(v == 0 for v in dims.values()), "dims": _dims(dims)}
            out.append(_guard(f"{tag}/cone/{m.name}", cone))

            def inverse(m=m):
                base = sigma_homology_dims(m.hmod, w)
                both = sigma_homology_dims(suspend(desuspend(m.hmod)), w)
                return {"passed": base == both, "dims": _dims(base), "dims_suspended_desuspended": _dims(both)}
            out.append(_guard(f"{tag}/sigma-inverse/{m.name}", inverse))
        return out
    return checks + _fan_out(per_pair, cfg.pair_list())


def _dims(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items())}


# ---------------------------------------------------------------------------
# adjunctions


def suite_adjunctions(cfg: SuiteConfig) -> list[Check]:
    w = cfg.window
    total = _n(cfg, 50)

    def per_pair(pair):
        hopf, cat, tag = _pair_setup(pair)
        F = hopf.field
        zoo = [m for m in module_zoo(cat) if m.dim <= 6]
        out = []
        rng = rng_for(cfg.seed, f"adjunctions/{tag}")
        roundtrips = 0
        failures = []
        combos = [(m, n) for m in zoo for n in zoo]
        t = 0
        while roundtrips < total and t < 10 * total:
            m, n = combos[int(rng.integers(len(combos)))]
            t += 1
            u = AModule(cat, n.grading, n.a_action, name=n.name, check=False)
            alin = a_linear_maps(m, u)
            if alin.dim == 0:
                continue
            f = F.matmul(F.random_matrix(rng, (alin.dim,)), alin.basis).reshape(u.dim, m.dim)
            e = E_functor(u)
            phi = adjunction_phi(f, m, u)
            ok1 = F.equal(adjunction_psi(phi, m, u), f)
            eq = lambda_maps(m, e)
            psi = random_equivariant_map(m, e, rng, eq)
            ok2 = F.equal(adjunction_phi(adjunction_psi(psi, m, u), m, u), psi)
            roundtrips += 1
            if not (ok1 and ok2):
                failures.append({"m": m.name, "n": n.name, "draw": t, "psi_phi": bool(ok1), "phi_psi": bool(ok2)})
        out.append(Check(f"{tag}/roundtrip", not failures and roundtrips >= total,
                         {"samples": roundtrips, "failures": failures}))
        for m in module_zoo(cat):
            if m.dim > 6:
                continue

            def acyc(m=m):
                u = AModule(cat, m.grading, m.a_action, name=m.name, check=False)
                e = E_functor(u)
                hd = homology(e.hmod)
                dims = sigma_homology_dims(e.hmod, w)
                return {"passed": all(v == 0 for v in dims.values()) and hd.Z.dim == hd.B.dim == m.dim,
                        "Z": hd.Z.dim, "B": hd.B.dim, "dim": m.dim, "dims": _dims(dims)}
            out.append(_guard(f"{tag}/E/{m.name}", acyc))
        return out
    return _fan_out(per_pair, cfg.pair_list())


# ---------------------------------------------------------------------------
# a-split-lemmas


def suite_a_split(cfg: SuiteConfig) -> list[Check]:
    n_ext = _n(cfg, 20)
    n_maps = _n(cfg, 50)

    def per_pair(pair):
        hopf, cat, tag = _pair_setup(pair)
        F = hopf.field
        zoo = [m for m in module_zoo(cat) if m.dim <= 3]
        out = []
        # A-split extensions with quotient Z (x) H split
        rng = rng_for(cfg.seed, f"a-split/cone/{tag}")
        fails, count = [], 0
        combos = [(z, n) for z in zoo for n in zoo if z.dim <= 2]
        spaces = {}
        for s in range(n_ext):
            z, n = combos[s % len(combos)]
            cz = eq_cone(z)
            key = (z.name, n.name)
            if key not in spaces:
                spaces[key] = a_split_cocycle_space(cz, n)
            e = random_a_split_extension(cz, n, rng, spaces[key])
            count += 1
            if not e.is_split:
                fails.append({"Z": z.name, "sub": n.name, "sample": s})
        out.append(Check(f"{tag}/cone-quotient-splits", not fails and count >= n_ext,
                         {"samples": count, "failures": fails}))
        # null-homotopic iff the cone extension splits
        rng = rng_for(cfg.seed, f"a-split/nullhtpy/{tag}")
        fails, count, both = [], 0, {True: 0, False: 0}
        combos = [(m, n) for m in zoo for n in zoo]
        for s in range(n_maps):
            m, n = combos[int(rng.integers(len(combos)))]
            if s % 2:
                f = random_equivariant_map(m, n, rng)
            else:  # force a null-homotopic map phi o i_M
                c = eq_cone(m)
                phi = random_equivariant_map(c, n, rng)
                f = F.matmul(phi, cone_inclusion(m.dim, hopf))
            v = null_homotopy_iff_cone_splits(f, m, n)
            count += 1
            both[v.homotopic] += 1
            if not v.agree:
                fails.append({"m": m.name, "n": n.name, "sample": s, "homotopic": v.homotopic,
                              "cone_splits": v.cone_splits})
        out.append(Check(f"{tag}/null-homotopic-iff-cone-splits", not fails and count >= n_maps,
                         {"samples": count, "null_homotopic": both[True], "not_null_homotopic": both[False],
                          "failures": fails}))
        return out
    return _fan_out(per_pair, cfg.pair_list())


# ---------------------------------------------------------------------------
# les


def suite_les(cfg: SuiteConfig) -> list[Check]:
    n_ext = _n(cfg, 20)
    w = cfg.window

    def per_pair(pair):
        hopf, cat, tag = _pair_setup(pair)
        cap = 3 if hopf.dim <= 3 else 2
        zoo = [m for m in module_zoo(cat) if m.dim <= cap]
        rng = rng_for(cfg.seed, f"les/{tag}")
        combos = [(m, n) for m in zoo for n in zoo]
        spaces = {}
        fails, count, nonzero = [], 0, 0
        for s in range(n_ext):
            m, n = combos[s % len(combos)]
            key = (m.name, n.name)
            if key not in spaces:
                spaces[key] = a_split_cocycle_space(m, n)
            e = random_a_split_extension(m, n, rng, spaces[key])
            rep = long_exact_check(e, window=w)
            count += 1
            nonzero += rep.connecting_nonzero
            if not rep.exact:
                fails.append({"quotient": m.name, "sub": n.name, "sample": s, "joints": rep.failures})
        return [Check(f"{tag}/les", not fails and count >= n_ext,
                      {"samples": count, "nonzero_connecting": nonzero, "failures": fails})]
    return _fan_out(per_pair, cfg.pair_list())


# ---------------------------------------------------------------------------
# hovey


def suite_hovey(cfg: SuiteConfig) -> list[Check]:
    def per_pair(pair):
        hopf, cat, tag = _pair_setup(pair)
        zoo = module_zoo(cat)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rep = hovey_triple_report(zoo, cfg.window, rng_for(cfg.seed, f"hovey/{tag}"), pair=tag)
        detail = rep.to_json()
        detail["warnings"] = [str(x.message) for x in caught]
        detail["n_modules"] = len(zoo)
        return [Check(f"{tag}/hovey", rep.passed and len(zoo) >= 12, detail)]
    return _fan_out(per_pair, cfg.pair_list())


# ---------------------------------------------------------------------------
# cntr-pair


def suite_cntr_pair(cfg: SuiteConfig) -> list[Check]:
    samples = _n(cfg, 30)

    def per_pair(pair):
        hopf, cat, tag = _pair_setup(pair)
        zoo = module_zoo(cat)
        rep = contractible_pair_report(zoo, rng_for(cfg.seed, f"cntr/{tag}"), samples=samples, pair=tag)
        return [Check(f"{tag}/cntr-pair", rep.passed and bool(rep.contractible), rep.to_json())]
    return _fan_out(per_pair, cfg.pair_list())


# ---------------------------------------------------------------------------
# oracles


def suite_oracles(cfg: SuiteConfig) -> list[Check]:
    checks = []
    for p in (2, 3, 5):
        def e(p=p):
            h = load_hopf(f"divided_power:{p}")
            k = trivial_module(h, 1)
            data = ext1(k, k)
            mid = extension_from_cocycle(k, k, data.cocycles[0], data) if data.dim else None
            jt = jordan_decompose(mid.M.hmod) if mid else []
            return {"passed": data.dim == 1 and jt == [2], "ext1": data.dim, "middle_term_jordan": jt}
        checks.append(_guard(f"ext1/dp{p}/k|k", e))

    def jj():
        h = load_hopf("divided_power:3")
        j2 = jordan_module(h, [2])
        jt = jordan_decompose(tensor(j2, j2))
        return {"passed": jt == [3, 1], "jordan_type": jt}
    checks.append(_guard("jordan/dp3/J2xJ2", jj))
    for name in HOPF_CATALOG:
        h = load_hopf(name)
        vs = [("k", trivial_module(h, 1)), ("H", regular_module(h)), ("Hbar", quotient_by_integral(h)),
              ("kereps", counit_kernel_module(h))]
        if name.startswith("divided_power"):
            vs += [(f"J{n}", jordan_module(h, [n])) for n in range(2, h.dim)]
        for label, v in vs:
            def sw(v=v):
                r = switching_iso(v)  # checks equivariance, invertibility and the square
                return {"passed": rank(v.field, r) == r.shape[0] == v.dim * h.dim}
            checks.append(_guard(f"switch/{name}/{label}", sw))
    return checks


SUITES: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "hopf-axioms": suite_hopf_axioms,
    "homology-basics": suite_homology_basics,
    "stablehom-agreement": suite_stablehom,
    "cone-lemmas": suite_cone_lemmas,
    "adjunctions": suite_adjunctions,
    "a-split-lemmas": suite_a_split,
    "les": suite_les,
    "hovey": suite_hovey,
    "cntr-pair": suite_cntr_pair,
    "oracles": suite_oracles,
}


def run_suite(name: str, cfg: Optional[SuiteConfig] = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    cfg = cfg or SuiteConfig()
    return SuiteReport(name, cfg, SUITES[name](cfg))
