"""Finite-dimensional modules with the original square-root coefficients,
built numerically at a real q, plus numeric relation checking.

These are the baseline the exact rationalized modules are checked
against: the rescaling that removes the square roots must conjugate one
into the other.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import relation_instances
from .coeffs import diagonal_coeff, module_context, pattern_values, sqrt_up_squared
from .patterns import enumerate_basis, row_length, shift, validate
from .scalars import QUANTUM

RADICAND_TOL = 1e-12


class NumericModule:
    """Basis patterns plus one dense complex matrix per generator."""

    __slots__ = ("n", "basis", "gens", "q", "index")

    def __init__(self, n, basis, gens, q):
        self.n = n
        self.basis = basis
        self.gens = gens
        self.q = q
        self.index = {p: i for i, p in enumerate(basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)


def build_sqrt_module(n: int, top_row, q: float) -> NumericModule:
    """Module matrices from the square-root coefficient formulas at real q."""
    if not (q > 0) or q == 1.0:
        raise ValueError("q must be a positive real different from 1")
    basis = enumerate_basis(n, top_row)
    index = {p: i for i, p in enumerate(basis)}
    ctx = module_context(n, QUANTUM)
    dim = len(basis)
    gens = {}
    for gi in range(2, n + 1):
        mat = np.zeros((dim, dim), dtype=complex)
        p = (gi - 1) // 2 if gi % 2 else (gi - 2) // 2
        up_sq = [sqrt_up_squared(ctx, gi, j) for j in range(1, p + 1)]
        diag = diagonal_coeff(ctx, gi) if gi % 2 == 0 else None
        for col, alpha in enumerate(basis):
            vals = pattern_values(ctx, alpha)
            for j in range(1, p + 1):
                up = shift(alpha, gi - 1, j, +1)
                tgt = index.get(up)
                if tgt is not None:
                    mat[tgt, col] += _sqrt_coeff(up_sq[j - 1], ctx, vals, q)
                down = shift(alpha, gi - 1, j, -1)
                tgt = index.get(down)
                if tgt is not None:
                    dvals = pattern_values(ctx, down)
                    mat[tgt, col] -= _sqrt_coeff(up_sq[j - 1], ctx, dvals, q)
            if diag is not None:
                mat[col, col] += 1j * diag.floats(ctx, vals, q)
        gens[gi] = mat
    return NumericModule(n, basis, gens, q)


def _sqrt_coeff(factors, ctx, vals, q) -> float:
    rad = factors.floats(ctx, vals, q)
    if rad < -RADICAND_TOL:
        raise ValueError(f"negative radicand {rad} (invalid pattern reached the builder)")
    return math.sqrt(max(rad, 0.0))


def check_relations_numeric(rep: NumericModule, tol: float = 1e-9) -> dict:
    """Max-abs residual of every defining-relation instance."""
    two = rep.q + 1.0 / rep.q
    out = {}
    for name, terms in relation_instances(rep.n):
        acc = np.zeros((rep.dim, rep.dim), dtype=complex)
        for kind, word in terms:
            m = np.eye(rep.dim, dtype=complex)
            for gi in word:
                m = m @ rep.gens[gi]
            if kind == "minus_two":
                acc -= two * m
            else:
                acc += kind * m
        out[name] = float(np.max(np.abs(acc))) if rep.dim else 0.0
    return out


def sqrt_original_agreement(n: int, q_values=(1.1, 1.7), samples: int = 50,
                            seed: int = 0, max_entry=2) -> float:
    """Worst disagreement between the sign-resolved squared coefficients and
    the absolute-value originals over random valid patterns."""
    import random

    rng = random.Random(seed)
    ctx = module_context(n, QUANTUM)
    tops = [t for t in _candidate_tops(n, max_entry)]
    worst = 0.0
    checked = 0
    while checked < samples:
        top = rng.choice(tops)
        basis = enumerate_basis(n, top)
        alpha = rng.choice(basis)
        vals = pattern_values(ctx, alpha)
        for gi in range(3, n + 1):
            p = (gi - 1) // 2 if gi % 2 else (gi - 2) // 2
            for j in range(1, p + 1):
                target = shift(alpha, gi - 1, j, +1)
                if not validate(target).valid:
                    continue
                plain = sqrt_up_squared(ctx, gi, j)
                orig = sqrt_up_squared(ctx, gi, j, original=True)
                for q in q_values:
                    a = plain.floats(ctx, vals, q)
                    b = orig.floats(ctx, vals, q)
                    worst = max(worst, abs(a - b))
        checked += 1
    return worst


def _candidate_tops(n: int, max_entry):
    """Valid top rows with |entries| <= max_entry, both integrality families."""
    import itertools
    from fractions import Fraction
    from .halfint import HalfInt
    from .patterns import check_top_row
    k = row_length(n)
    lim = int(2 * Fraction(max_entry))
    ints = [HalfInt(w) for w in range(-lim + (lim % 2), lim + 1, 2)]
    halves = [HalfInt(w) for w in range(-lim + (1 - lim % 2), lim + 1, 2)]
    out = []
    for fam in (ints, halves):
        for combo in itertools.product(fam, repeat=k):
            if not check_top_row(n, combo):
                out.append(combo)
    return out
