"""Verification suite runner with machine-readable, deterministic reports.

Reports are JSON-serializable dicts with schema version 1.  Wall times
are collected for console display but stripped from serialized reports
by default so identical invocations produce byte-identical output.
"""

from __future__ import annotations

import json
import random
import time
from fractions import Fraction

from .fdmod import (_candidate_tops, build_sqrt_module, check_relations_numeric,
                    sqrt_original_agreement)
from .generic import verify_generic_relations
from .halfint import HalfInt
from .patterns import enumerate_basis, row_length, shift, validate
from .ratmod import (build_rat_module, check_relations_exact, lambda_ratio_squared,
                     similarity_check)
from .scalars import CLASSICAL, QUANTUM, qnum
from .skew import phi_generator, verify_embedding

SCHEMA_VERSION = 1

SUITES = ("relations-numeric", "relations-exact", "telescoping", "generic",
          "embedding", "invariance", "casimir-consistency", "all")

DEFAULT_BOUNDS = {
    "relations-numeric": 5,
    "relations-exact": 5,
    "telescoping": 6,
    "generic": 5,
    "embedding": 6,
    "invariance": 6,
    "casimir-consistency": 5,
}


def _entry(check: str, ok: bool, t0: float, **extra) -> dict:
    out = {"check": check, "status": "pass" if ok else "fail"}
    out.update(extra)
    out["wall_time"] = time.time() - t0
    return out


def _suite_relations_numeric(n: int, mode: str, seed: int, tol: float) -> list:
    checks = []
    if mode == CLASSICAL:
        return [{"check": "relations-numeric[skipped: classical has no numeric q]",
                 "status": "pass", "wall_time": 0.0}]
    for top in _candidate_tops(n, Fraction(3, 2)):
        for q in (1.1, 1.5):
            t0 = time.time()
            rep = build_sqrt_module(n, top, q)
            worst = max(check_relations_numeric(rep, tol).values(), default=0.0)
            name = f"numeric-relations[top={','.join(str(x) for x in top)},q={q}]"
            checks.append(_entry(name, worst <= tol, t0, residual=worst))
    t0 = time.time()
    worst = sqrt_original_agreement(n, seed=seed)
    checks.append(_entry(f"original-vs-rewritten-coefficients[n={n}]", worst <= 1e-12,
                         t0, residual=worst))
    for top in _small_tops(n):
        t0 = time.time()
        worst = similarity_check(n, top, 1.2)
        checks.append(_entry(f"similarity[top={','.join(str(x) for x in top)}]",
                             worst <= 1e-8, t0, residual=worst))
    return checks


def _small_tops(n: int):
    k = row_length(n)
    tops = [tuple([1] + [0] * (k - 1))]
    if k >= 2:
        tops.append(tuple([1] * 2 + [0] * (k - 2)))
    tops.append(tuple([HalfInt(1)] * k))
    return tops


def _suite_relations_exact(n: int, mode: str) -> list:
    checks = []
    for top in _small_tops(n):
        t0 = time.time()
        rep = build_rat_module(n, top, mode)
        res = check_relations_exact(rep)
        bad = {k: v for k, v in res.items() if v is not None}
        name = f"exact-relations[top={','.join(str(x) for x in top)}]"
        if bad:
            witness = {k: (v[0], v[1], v[2].serialize()) for k, v in bad.items()}
            checks.append(_entry(name, False, t0, witness=witness))
        else:
            checks.append(_entry(name, True, t0, dim=rep.dim))
    return checks


def _suite_telescoping(n: int, mode: str, seed: int) -> list:
    rng = random.Random(seed)
    tops = _candidate_tops(n, 2)
    checks = []
    levels = ["top"] + (["mid"] if n >= 4 else [])
    for level in levels:
        for j in range(1, row_length(n - 1) + 1):
            t0 = time.time()
            done = 0
            tries = 0
            ok = True
            while done < 10 and tries < 5000:
                tries += 1
                basis = enumerate_basis(n, rng.choice(tops))
                if not basis:
                    continue
                alpha = rng.choice(basis)
                if not validate(shift(alpha, n - 1, j, +1)).valid:
                    continue
                r = lambda_ratio_squared(n, alpha, j, "recursion", level, mode)
                c = lambda_ratio_squared(n, alpha, j, "closed_form", level, mode)
                ok = ok and (r == c)
                done += 1
            checks.append(_entry(f"telescoping[{level},j={j}]", ok and done == 10,
                                 t0, samples=done))
    return checks


def _suite_casimir(n: int, mode: str) -> list:
    from .casimir import (casimir_eigenvalue, casimir_half_eigenvalue,
                          casimir_scalar_action_check, phi_casimir_half)
    checks = []
    t0 = time.time()
    m = HalfInt(7)
    chi = casimir_eigenvalue(2, 1, [m], mode)
    half = casimir_half_eigenvalue(2, [m], mode)
    checks.append(_entry("square-root-consistency[n=2]",
                         half * half == chi and chi == -(qnum(m, mode) ** 2), t0))
    t0 = time.time()
    img = phi_casimir_half(2, mode)
    gen = phi_generator(2, 2, mode)
    key = (0,) * gen.alg.N
    checks.append(_entry("half-image-equals-generator-image[n=2]",
                         gen.terms.get(key) == img, t0))
    for nn in range(2, n + 1):
        for d in range(1, row_length(nn) + 1):
            t0 = time.time()
            checks.append(_entry(f"scalar-action[n={nn},deg={2 * d}]",
                                 casimir_scalar_action_check(nn, d, mode), t0))
    return checks


def _suite_invariance(n: int, mode: str, seed: int) -> list:
    from .casimir import (invariant_decompose, phi_casimir, phi_casimir_half,
                          to_centered_laurent, verify_invariance, _ldict_eq,
                          random_invariant)
    checks = []
    for nn in range(3, n + 1):
        t0 = time.time()
        rep = verify_invariance(nn, mode)
        checks.append(_entry(f"invariance[n={nn}]", rep["passed"], t0,
                             n_checks=len(rep["checks"])))
        imgs = [phi_casimir(nn, d, mode) for d in range(1, row_length(nn) + 1)]
        if nn % 2 == 0:
            imgs.append(phi_casimir_half(nn, mode))
        t0 = time.time()
        ok = True
        for f in imgs:
            w = invariant_decompose(nn, f, mode)
            ok = ok and _ldict_eq(w.expand(), to_centered_laurent(nn, f, mode))
        checks.append(_entry(f"decompose-images[n={nn}]", ok, t0))
    rng = random.Random(seed)
    t0 = time.time()
    ok = True
    for _ in range(20):
        nn = rng.choice([4, 5])
        f = random_invariant(nn, mode, rng)
        if f is None:
            continue
        w = invariant_decompose(nn, f, mode)
        ok = ok and _ldict_eq(w.expand(), f)
    checks.append(_entry("decompose-random-invariants", ok, t0))
    return checks


def _reset_kernel():
    """Fresh caches and counters so identical invocations execute identically."""
    from . import coeffs
    from .multirat import reset_kernel_stats
    coeffs._CTX_CACHE.clear()
    coeffs._SYMBOLIC_CACHE.clear()
    reset_kernel_stats()


def run_suite(name: str, n: int | None = None, mode: str | None = None,
              seed: int = 0, tol: float = 1e-9) -> dict:
    """Run one named suite (or `all`) and return the report dict."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    if name == "all":
        reports = []
        bound = n
        for sub in SUITES[:-1]:
            eff = min(bound, DEFAULT_BOUNDS[sub]) if bound else DEFAULT_BOUNDS[sub]
            for nn in range(3, eff + 1):
                for md in ((mode,) if mode else (QUANTUM, CLASSICAL)):
                    reports.append(run_suite(sub, nn, md, seed=seed, tol=tol))
        return {"schema": SCHEMA_VERSION, "suite": "all", "seed": seed,
                "passed": all(r["passed"] for r in reports), "reports": reports}
    if n is None:
        raise ValueError("suite runs need --n")
    if n < 2:
        raise ValueError("n must be at least 2")
    bound = DEFAULT_BOUNDS[name]
    if n > bound:
        raise ValueError(f"n={n} exceeds the default bound {bound} for {name}; "
                         "larger sizes are possible but slow")
    mode = mode or QUANTUM
    if mode not in (QUANTUM, CLASSICAL):
        raise ValueError(f"unknown mode {mode!r}")
    _reset_kernel()
    if name == "relations-numeric":
        checks = _suite_relations_numeric(n, mode, seed, tol)
    elif name == "relations-exact":
        checks = _suite_relations_exact(n, mode)
    elif name == "telescoping":
        checks = _suite_telescoping(n, mode, seed)
    elif name == "generic":
        rep = verify_generic_relations(n, mode)
        checks = rep["checks"]
    elif name == "embedding":
        rep = verify_embedding(n, mode)
        checks = rep["checks"]
    elif name == "invariance":
        checks = _suite_invariance(n, mode, seed)
    elif name == "casimir-consistency":
        checks = _suite_casimir(n, mode)
    passed = all(c["status"] == "pass" for c in checks)
    from .multirat import kernel_stats_snapshot
    return {"schema": SCHEMA_VERSION, "suite": name, "n": n, "mode": mode,
            "seed": seed, "passed": passed, "checks": checks,
            "kernel_stats": kernel_stats_snapshot()}


def serialize_report(report: dict, include_timings: bool = False) -> str:
    """Canonical JSON text; timings stripped unless requested."""

    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()
                    if include_timings or k != "wall_time"}
        if isinstance(obj, list):
            return [clean(x) for x in obj]
        if isinstance(obj, float):
            return float(f"{obj:.6e}")
        return obj

    return json.dumps(clean(report), indent=2, sort_keys=True) + "\n"
