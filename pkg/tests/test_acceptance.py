"""Acceptance criteria, one test per criterion, at the stated tolerances.

Each test prints a single pass/fail line (run pytest -s to see them all).
"""

import random
import time
from fractions import Fraction

import pytest

from gtso.casimir import (casimir_eigenvalue_symbolic, casimir_scalar_action_check,
                          invariant_decompose, phi_casimir, phi_casimir_half,
                          random_invariant, to_centered_laurent, verify_invariance,
                          _ldict_eq)
from gtso.fdmod import (_candidate_tops, build_sqrt_module, check_relations_numeric,
                        sqrt_original_agreement)
from gtso.generic import AdmissibleBase, check_admissible, lower_var_labels, \
    verify_generic_relations
from gtso.halfint import HalfInt
from gtso.patterns import enumerate_basis, row_length, shift, validate
from gtso.ratmod import (build_rat_module, check_relations_exact,
                         lambda_ratio_squared, similarity_check)
from gtso.scalars import CLASSICAL, QUANTUM, RatScalar
from gtso.skew import phi_generator, verify_embedding
from gtso.suites import run_suite, serialize_report

from test_patterns import brute_force_count


def _report(name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] {name}{': ' + detail if detail else ''}")
    assert ok, f"{name} failed: {detail}"


def test_criterion_01_dimension_oracle():
    t0 = time.time()
    checked = 0
    for n in (3, 4, 5, 6):
        for top in _candidate_tops(n, 2):
            assert len(enumerate_basis(n, top)) == brute_force_count(n, top), (n, top)
            checked += 1
    el = time.time() - t0
    _report("criterion-1 dimension oracle",
            el < 10, f"{checked} top rows, {el:.1f}s (< 10 s)")


def test_criterion_02_numeric_relations():
    t0 = time.time()
    worst = 0.0
    for n in (3, 4, 5):
        for top in _candidate_tops(n, Fraction(3, 2)):
            for q in (1.1, 1.5):
                rep = build_sqrt_module(n, top, q)
                res = check_relations_numeric(rep)
                worst = max(worst, max(res.values(), default=0.0))
    el = time.time() - t0
    _report("criterion-2 numeric relations", worst <= 1e-9 and el < 30,
            f"max residual {worst:.2e} (<= 1e-9), {el:.1f}s (< 30 s)")


def test_criterion_03_rewritten_coefficients():
    t0 = time.time()
    worst = max(sqrt_original_agreement(n, samples=17, seed=2) for n in (3, 4, 5))
    el = time.time() - t0
    _report("criterion-3 absolute-value rewrite", worst <= 1e-12 and el < 5,
            f"max disagreement {worst:.2e} (<= 1e-12), {el:.1f}s (< 5 s)")


def test_criterion_04_exact_relations():
    t0 = time.time()
    ok = True
    for n in (3, 4, 5):
        k = row_length(n)
        tops = [(1,) + (0,) * (k - 1), (HalfInt(1),) * k]
        for mode in (QUANTUM, CLASSICAL):
            for top in tops:
                res = check_relations_exact(build_rat_module(n, top, mode))
                ok = ok and all(v is None for v in res.values())
    el = time.time() - t0
    _report("criterion-4 exact relations", ok and el < 120,
            f"identically zero, {el:.1f}s (< 2 min)")


def test_criterion_05_telescoping():
    t0 = time.time()
    rng = random.Random(0)
    ok = True
    for n in (3, 4, 5, 6):
        tops = _candidate_tops(n, 2)
        levels = ["top"] + (["mid"] if n >= 4 else [])
        for level in levels:
            for j in range(1, row_length(n - 1) + 1):
                done = 0
                tries = 0
                while done < 10 and tries < 6000:
                    tries += 1
                    basis = enumerate_basis(n, rng.choice(tops))
                    if not basis:
                        continue
                    alpha = rng.choice(basis)
                    if not validate(shift(alpha, n - 1, j, +1)).valid:
                        continue
                    r = lambda_ratio_squared(n, alpha, j, "recursion", level)
                    c = lambda_ratio_squared(n, alpha, j, "closed_form", level)
                    ok = ok and (r == c)
                    done += 1
                ok = ok and done == 10
    from gtso.coeffs import lam_ratio_sq_closed_mid
    ok = ok and lam_ratio_sq_closed_mid(3, (1,), (), 1, QUANTUM) == RatScalar.one(QUANTUM)
    el = time.time() - t0
    _report("criterion-5 telescoping closed forms", ok and el < 120,
            f"recursion == closed form on 10 samples per (n, j), {el:.1f}s (< 2 min)")


def test_criterion_06_similarity():
    t0 = time.time()
    worst = 0.0
    for n, top, q in [(3, (1,), 1.5), (4, (1, 0), 1.2), (5, (1, 0), 1.1),
                      (5, (1, 1), 1.2)]:
        worst = max(worst, similarity_check(n, top, q))
    el = time.time() - t0
    _report("criterion-6 rescaling similarity", worst <= 1e-8 and el < 60,
            f"max residual {worst:.2e} (<= 1e-8), {el:.1f}s (< 1 min)")


def test_criterion_07_generic_modules():
    t0 = time.time()
    ok = True
    timing5 = None
    for n in (3, 4, 5):
        for mode in (QUANTUM, CLASSICAL):
            t1 = time.time()
            rep = verify_generic_relations(n, mode)
            ok = ok and rep["passed"]
            if n == 5 and mode == QUANTUM:
                timing5 = time.time() - t1
    el = time.time() - t0
    _report("criterion-7 generic modules", ok and timing5 < 600,
            f"all coefficients identically zero, n=5 quantum {timing5:.1f}s (< 10 min), total {el:.1f}s")


def test_criterion_08_admissibility():
    t0 = time.time()
    ok = check_admissible(AdmissibleBase.prime_reciprocal(5)).admissible
    entries = {lab: 1 for lab in lower_var_labels(5)}
    ok = ok and not check_admissible(AdmissibleBase(5, [None, None], entries)).admissible
    pair = {(4, 1): Fraction(1, 3), (4, 2): Fraction(2, 3),
            (3, 1): Fraction(1, 5), (2, 1): Fraction(1, 7)}
    ok = ok and not check_admissible(AdmissibleBase(5, [None, None], pair)).admissible
    el = time.time() - t0
    _report("criterion-8 admissibility", ok and el < 1,
            f"prime reciprocals admissible, counterexamples rejected, {el:.2f}s (< 1 s)")


def test_criterion_09_embeddings():
    t0 = time.time()
    ok = True
    timing6 = 0.0
    for n in (3, 4, 5, 6):
        for mode in (QUANTUM, CLASSICAL):
            t1 = time.time()
            rep = verify_embedding(n, mode)
            ok = ok and rep["passed"]
            if n == 6:
                timing6 = max(timing6, time.time() - t1)
    el = time.time() - t0
    _report("criterion-9 skew-algebra embeddings", ok and timing6 < 600,
            f"all relation images zero, worst n=6 mode {timing6:.1f}s (< 10 min), total {el:.1f}s")


def test_criterion_10_casimir_consistency():
    t0 = time.time()
    # (i) the n=2 square-root identity with a symbolic entry
    half = phi_casimir_half(2, QUANTUM)
    chi = casimir_eigenvalue_symbolic(2, 1, QUANTUM)
    ok = (half * half) == chi
    # (ii) the degree-1 image equals the generator image
    gen = phi_generator(2, 2, QUANTUM)
    ok = ok and gen.terms[(0,) * gen.alg.N] == half
    # (iii) diagonal scalar action with symbolic top row, n <= 5
    for n in (2, 3, 4, 5):
        for d in range(1, row_length(n) + 1):
            for mode in (QUANTUM, CLASSICAL):
                ok = ok and casimir_scalar_action_check(n, d, mode)
    el = time.time() - t0
    _report("criterion-10 casimir consistency", ok and el < 300,
            f"square-root identity, image match, scalar action, {el:.1f}s (< 5 min)")


def test_criterion_11_invariance():
    t0 = time.time()
    ok = True
    for n in (3, 4, 5, 6):
        for mode in (QUANTUM, CLASSICAL):
            rep = verify_invariance(n, mode)
            ok = ok and rep["passed"]
            if n % 2 == 0:
                names = [c["check"] for c in rep["checks"]]
                ok = ok and "single-flip-negates-half" in names
            imgs = [phi_casimir(n, d, mode) for d in range(1, row_length(n) + 1)]
            if n % 2 == 0:
                imgs.append(phi_casimir_half(n, mode))
            for f in imgs:
                w = invariant_decompose(n, f, mode)
                ok = ok and _ldict_eq(w.expand(), to_centered_laurent(n, f, mode))
    rng = random.Random(1)
    done = 0
    while done < 20:
        n = rng.choice([4, 5, 6])
        mode = rng.choice([QUANTUM, CLASSICAL])
        f = random_invariant(n, mode, rng)
        if f is None:
            continue
        w = invariant_decompose(n, f, mode)
        ok = ok and _ldict_eq(w.expand(), f)
        done += 1
    el = time.time() - t0
    _report("criterion-11 invariance and decomposition", ok and el < 300,
            f"images fixed, parity sanity triggers, 20 random round-trips, {el:.1f}s (< 5 min)")


def test_criterion_12_determinism():
    t0 = time.time()
    a = serialize_report(run_suite("all", 3, seed=0))
    b = serialize_report(run_suite("all", 3, seed=0))
    el = time.time() - t0
    _report("criterion-12 deterministic reports", a == b,
            f"byte-identical JSON over two runs, {el:.1f}s")
