"""Exact rationalized modules: construction over the scalar field, exact
relation checking, the rescaling recursion against its closed forms, and
the numeric similarity bridge to the square-root modules."""

from __future__ import annotations

import math
import numpy as np

from .algebra import relation_instances
from .coeffs import (diagonal_coeff, ladder_down, ladder_up, lam_ratio_sq_closed_mid,
                     lam_ratio_sq_closed_top, lam_ratio_sq_recursion, lam_sq,
                     module_context, pattern_values)
from .fdmod import build_sqrt_module
from .patterns import GTPattern, enumerate_basis, shift
from .scalars import QUANTUM, RatScalar, qnum


class ExactMatrix:
    """Sparse square matrix over RatScalar."""

    __slots__ = ("dim", "mode", "entries")

    def __init__(self, dim: int, mode: str, entries=None):
        self.dim = dim
        self.mode = mode
        self.entries = dict(entries or {})

    def add_at(self, r: int, c: int, val: RatScalar):
        if val.is_zero:
            return
        cur = self.entries.get((r, c))
        new = val if cur is None else cur + val
        if new.is_zero:
            self.entries.pop((r, c), None)
        else:
            self.entries[(r, c)] = new

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        out = ExactMatrix(self.dim, self.mode)
        left_by_mid = {}
        for (r, k), v in self.entries.items():
            left_by_mid.setdefault(k, []).append((r, v))
        for (k, c), v2 in other.entries.items():
            for r, v1 in left_by_mid.get(k, ()):
                out.add_at(r, c, v1 * v2)
        return out

    def scaled(self, s) -> "ExactMatrix":
        return ExactMatrix(self.dim, self.mode,
                           {k: v * s for k, v in self.entries.items()})

    def plus(self, other: "ExactMatrix") -> "ExactMatrix":
        out = ExactMatrix(self.dim, self.mode, self.entries)
        for k, v in other.entries.items():
            out.add_at(*k, v)
        return out

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def first_nonzero(self):
        if not self.entries:
            return None
        (r, c) = min(self.entries)
        return (r, c, self.entries[(r, c)])

    def to_complex(self, q: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for (r, c), v in self.entries.items():
            out[r, c] = v.to_complex(q)
        return out


class ExactModule:
    """Basis patterns plus one sparse exact matrix per generator."""

    __slots__ = ("n", "mode", "basis", "gens", "index")

    def __init__(self, n, mode, basis, gens):
        self.n = n
        self.mode = mode
        self.basis = basis
        self.gens = gens
        self.index = {p: i for i, p in enumerate(basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)


class RatCoeffSet:
    """Exact coefficient values of one generator at one pattern."""

    __slots__ = ("gi", "up", "down", "const")

    def __init__(self, gi, up, down, const=None):
        self.gi = gi
        self.up = up      # {j: RatScalar}
        self.down = down  # {j: RatScalar}
        self.const = const


def rat_coeffs(n: int, alpha: GTPattern, gi: int, mode: str = QUANTUM) -> RatCoeffSet:
    """Rationalized coefficients of I_(gi,gi-1) at the pattern alpha."""
    if not 2 <= gi <= n:
        raise ValueError(f"generator index {gi} out of range")
    ctx = module_context(n, mode)
    vals = pattern_values(ctx, alpha)
    p = (gi - 1) // 2 if gi % 2 else (gi - 2) // 2
    up = {j: ladder_up(ctx, gi, j).exact(ctx, vals, mode) for j in range(1, p + 1)}
    down = {j: ladder_down(ctx, gi, j).exact(ctx, vals, mode) for j in range(1, p + 1)}
    const = diagonal_coeff(ctx, gi).exact(ctx, vals, mode) if gi % 2 == 0 else None
    return RatCoeffSet(gi, up, down, const)


def build_rat_module(n: int, top_row, mode: str = QUANTUM) -> ExactModule:
    """Exact generator matrices from the rationalized coefficient formulas."""
    basis = enumerate_basis(n, top_row)
    index = {p: i for i, p in enumerate(basis)}
    ctx = module_context(n, mode)
    gens = {}
    imag = RatScalar.imag_unit(mode)
    for gi in range(2, n + 1):
        mat = ExactMatrix(len(basis), mode)
        p = (gi - 1) // 2 if gi % 2 else (gi - 2) // 2
        ups = [ladder_up(ctx, gi, j) for j in range(1, p + 1)]
        downs = [ladder_down(ctx, gi, j) for j in range(1, p + 1)]
        diag = diagonal_coeff(ctx, gi) if gi % 2 == 0 else None
        for col, alpha in enumerate(basis):
            vals = pattern_values(ctx, alpha)
            for j in range(1, p + 1):
                tgt = index.get(shift(alpha, gi - 1, j, +1))
                if tgt is not None:
                    mat.add_at(tgt, col, ups[j - 1].exact(ctx, vals, mode))
                tgt = index.get(shift(alpha, gi - 1, j, -1))
                if tgt is not None:
                    mat.add_at(tgt, col, -downs[j - 1].exact(ctx, vals, mode))
            if diag is not None:
                mat.add_at(col, col, imag * diag.exact(ctx, vals, mode))
        gens[gi] = mat
    return ExactModule(n, mode, basis, gens)


def check_relations_exact(rep: ExactModule) -> dict:
    """Evaluate every relation instance; value None means exactly zero,
    otherwise a (row, col, scalar) witness of the first nonzero entry."""
    two = qnum(2, rep.mode)
    out = {}
    for name, terms in relation_instances(rep.n):
        acc = ExactMatrix(rep.dim, rep.mode)
        for kind, word in terms:
            m = None
            for gi in word:
                m = rep.gens[gi] if m is None else m.matmul(rep.gens[gi])
            if kind == "minus_two":
                acc = acc.plus(m.scaled(-two))
            else:
                acc = acc.plus(m if kind == 1 else m.scaled(RatScalar.from_rational(rep.mode, kind)))
        out[name] = None if acc.is_zero else acc.first_nonzero()
    return out


# -- rescaling recursion vs closed forms --------------------------------------


def lambda_ratio_squared(n: int, pattern: GTPattern, j: int, via: str = "recursion",
                         level: str = "top", mode: str = QUANTUM) -> RatScalar:
    """Squared rescaling ratio for adding e_j, computed two independent ways.

    level='top' compares symbols over rows (n, n-1); level='mid' the
    symbols over rows (n-1, n-2) with the shift in their upper row.
    """
    m_n = pattern.row(n)
    m_n1 = pattern.row(n - 1)
    if level == "top":
        if via == "recursion":
            return lam_ratio_sq_recursion(n, m_n, m_n1, j, "bottom", mode)
        return lam_ratio_sq_closed_top(n, m_n, m_n1, j, mode)
    if n - 2 < 2:
        raise ValueError("mid-level ratios need n >= 4")
    m_n2 = pattern.row(n - 2)
    if via == "recursion":
        return lam_ratio_sq_recursion(n - 1, m_n1, m_n2, j, "top", mode)
    return lam_ratio_sq_closed_mid(n, m_n1, m_n2, j, mode)


def rescale_factor_squared(pattern: GTPattern, mode: str = QUANTUM) -> RatScalar:
    """Squared global rescaling of a basis vector: the product of the
    two-row factors down the pattern."""
    out = RatScalar.one(mode)
    for K in range(3, pattern.n + 1):
        out = out * lam_sq(K, pattern.row(K), pattern.row(K - 1), mode)
    return out


def similarity_check(n: int, top_row, q: float) -> float:
    """Max-abs entry of D^-1 * M_sqrt * D - M_rat over all generators,
    with D the diagonal rescaling from the recursion at real q."""
    sq = build_sqrt_module(n, top_row, q)
    ex = build_rat_module(n, top_row, QUANTUM)
    assert sq.basis == ex.basis
    mu = []
    for alpha in sq.basis:
        val = rescale_factor_squared(alpha).to_complex(q).real
        if val <= 0:
            raise ValueError("rescaling factor must be positive at real q")
        mu.append(math.sqrt(val))
    d = np.array(mu)
    worst = 0.0
    for gi in range(2, n + 1):
        conj = (sq.gens[gi] * d[None, :]) / d[:, None]
        worst = max(worst, float(np.max(np.abs(conj - ex.gens[gi].to_complex(q)))))
    return worst
