"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

All arithmetic is exact (GF(p) or Q), so every comparison uses tolerance 0.
Randomized suites run with seed 0 and window 3.
"""

from __future__ import annotations

import time
from collections import Counter

import pytest

from hopfo.catalogs import STANDARD_PAIRS, load_hopf
from hopfo.suites import HOPF_CATALOG, SuiteConfig, run_suite

SEED = 0
WINDOW = 3
TOLERANCE = 0  # exact arithmetic
PAIR_TAGS = [f"{h}|{a}" for h, a in STANDARD_PAIRS]


def _run(name):
    t = time.perf_counter()
    rep = run_suite(name, SuiteConfig(seed=SEED, window=WINDOW))
    return rep, time.perf_counter() - t


def _report(capsys, number, title, ok, detail, elapsed):
    with capsys.disabled():
        print(f"\nCRITERION {number} [{title}]: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.1f}s)")
    assert ok, detail


def _failed(rep):
    return [c.key for c in rep.checks if not c.passed]


def _by_pair(rep, suffix=""):
    counts = Counter()
    for c in rep.checks:
        tag = c.key.split("/")[0]
        if tag in PAIR_TAGS and c.key.endswith(suffix):
            counts[tag] += 1
    return counts


def test_criterion_1_hopf_validity_and_integral(capsys):
    rep, dt = _run("hopf-axioms")
    names = {c.key.split("/", 1)[1] for c in rep.checks}
    dims = {c.key: c.detail["integral_space_dim"] for c in rep.checks}
    top = [c.detail.get("matches_top_power") for c in rep.checks if "divided_power" in c.key]
    ok = (rep.passed and names == set(HOPF_CATALOG) and set(dims.values()) == {1}
          and len(top) == 3 and all(top))
    _report(capsys, 1, "hopf validity + integral", ok,
            f"{len(names)} algebras, integral space dims {sorted(set(dims.values()))}, failed {_failed(rep)}", dt)


def test_criterion_2_homology_basics(capsys):
    rep, dt = _run("homology-basics")
    regular = [c for c in rep.checks if c.key.startswith("regular/")]
    jordan = [c for c in rep.checks if c.key.startswith("jordan/")]
    nonss = [n for n in HOPF_CATALOG if not load_hopf(n).is_semisimple]
    exact = all(abs(c.detail["dim_H"] - c.detail["oracle"]) <= TOLERANCE for c in jordan)
    ok = rep.passed and len(regular) == len(nonss) and len(jordan) == 2 + 3 + 5 and exact
    _report(capsys, 2, "homology basics", ok,
            f"{len(regular)} regular modules acyclic, {len(jordan)} Jordan blocks match oracle", dt)


def test_criterion_3_stable_hom_agreement(capsys):
    rep, dt = _run("stablehom-agreement")
    counts = _by_pair(rep)
    exact = all(c.detail["stable_hom"] == c.detail["homology_of_hom"] for c in rep.checks if c.passed)
    ok = rep.passed and exact and all(counts[t] >= 20 for t in PAIR_TAGS)
    _report(capsys, 3, "stable hom = H(hom)", ok,
            f"pairs per setting {dict(sorted(counts.items()))}, failed {len(_failed(rep))}", dt)


def test_criterion_4_cone_suspension_lemmas(capsys):
    rep, dt = _run("cone-lemmas")
    split = [c for c in rep.checks if c.key.startswith("split/")]
    nonss = [n for n in HOPF_CATALOG if not load_hopf(n).is_semisimple]
    cones = _by_pair(rep)
    mult_ok = all(c.detail.get("multiplicity") == 1 for c in split)
    window_ok = all(len(c.detail["dims"]) == 2 * WINDOW + 1 for c in rep.checks if "/cone/" in c.key)
    ok = rep.passed and len(split) == len(nonss) and mult_ok and window_ok and all(cones[t] > 0 for t in PAIR_TAGS)
    _report(capsys, 4, "cone/suspension lemmas", ok,
            f"{len(split)} trivial-summand splits, {sum(cones.values())} cone/sigma checks, "
            f"failed {_failed(rep)}", dt)


def test_criterion_5_adjunction_identities(capsys):
    rep, dt = _run("adjunctions")
    trips = {c.key.split("/")[0]: c.detail["samples"] for c in rep.checks if c.key.endswith("/roundtrip")}
    e_checks = [c for c in rep.checks if "/E/" in c.key]
    zb = all(c.detail["Z"] == c.detail["B"] == c.detail["dim"] for c in e_checks)
    ok = rep.passed and all(trips.get(t, 0) >= 50 for t in PAIR_TAGS) and zb and len(e_checks) > 0
    _report(capsys, 5, "adjunction identities", ok,
            f"round trips {dict(sorted(trips.items()))}, {len(e_checks)} E(M) acyclicity checks", dt)


def test_criterion_6_a_split_lemmas(capsys):
    rep, dt = _run("a-split-lemmas")
    les, dt2 = _run("les")
    cone = {c.key.split("/")[0]: c.detail["samples"] for c in rep.checks if c.key.endswith("cone-quotient-splits")}
    null = {c.key.split("/")[0]: c.detail["samples"] for c in rep.checks if "null-homotopic" in c.key}
    ext = {c.key.split("/")[0]: c.detail["samples"] for c in les.checks}
    ok = (rep.passed and les.passed
          and all(cone.get(t, 0) >= 20 and null.get(t, 0) >= 50 and ext.get(t, 0) >= 20 for t in PAIR_TAGS))
    _report(capsys, 6, "A-split lemmas", ok,
            f"cone-quotient {min(cone.values())}+ per pair, null-homotopy {min(null.values())}+ per pair, "
            f"LES window {WINDOW} {min(ext.values())}+ per pair, failed {_failed(rep) + _failed(les)}", dt + dt2)


def test_criterion_7_orthogonality_hovey(capsys):
    rep, dt = _run("hovey")
    n_mod = {c.key.split("/")[0]: c.detail["n_modules"] for c in rep.checks}
    d_checks = {c.key.split("/")[0]: c.detail["checks"].get("d_ext_to_stable", 0) for c in rep.checks}
    fails = [f for c in rep.checks for f in c.detail.get("failures", [])]
    ok = rep.passed and not fails and all(n_mod.get(t, 0) >= 12 and d_checks.get(t, 0) > 0 for t in PAIR_TAGS)
    _report(capsys, 7, "orthogonality / Hovey triple", ok,
            f"catalog sizes {dict(sorted(n_mod.items()))}, counterexamples {len(fails)}", dt)


def test_criterion_8_contractible_cotorsion_pair(capsys):
    rep, dt = _run("cntr-pair")
    samples = {c.key.split("/")[0]: c.detail["samples_per_pair"] for c in rep.checks}
    cntr = {c.key.split("/")[0]: len(c.detail["contractible"]) for c in rep.checks}
    ok = rep.passed and all(samples.get(t, 0) >= 30 and cntr.get(t, 0) > 0 for t in PAIR_TAGS)
    _report(capsys, 8, "contractible cotorsion pair", ok,
            f"contractible modules per pair {dict(sorted(cntr.items()))}, "
            f"{min(samples.values())} samples per (T, M), failed {_failed(rep)}", dt)


def test_criterion_9_oracle_cross_checks(capsys):
    rep, dt = _run("oracles")
    ext = {c.key: c.detail["ext1"] for c in rep.checks if c.key.startswith("ext1/")}
    jj = [c.detail["jordan_type"] for c in rep.checks if c.key == "jordan/dp3/J2xJ2"]
    sw = [c for c in rep.checks if c.key.startswith("switch/")]
    ok = (rep.passed and sorted(ext.values()) == [1, 1, 1] and jj == [[3, 1]]
          and {c.key.split("/")[1] for c in sw} == set(HOPF_CATALOG))
    _report(capsys, 9, "oracle cross-checks", ok,
            f"ext1(k,k) {ext}, J2 (x) J2 = {jj}, {len(sw)} switching isos, failed {_failed(rep)}", dt)
