"""Generic modules: admissible bases, the symbolic action on formal basis
vectors indexed by integer shift vectors, and fully symbolic verification
that the defining relations annihilate everything.

The base entries (and the whole top row) stay symbolic during relation
verification: every coefficient of the result must cancel to the exact
zero rational function, which is the strongest form of the statement.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

from .algebra import relation_instances
from .coeffs import generator_terms, module_context, symbolic_generator
from .multirat import MultiRat
from .patterns import row_length
from .scalars import (CLASSICAL, QUANTUM, RatScalar, inv_qexp_plus_scaled,
                      qnum_scaled)


def lower_var_labels(n: int):
    """Shift-carrying entries: rows n-1 down to 2, row-major."""
    return [(i, j) for i in range(n - 1, 1, -1) for j in range(1, row_length(i) + 1)]


def shift_vector_size(n: int) -> int:
    return sum(row_length(i) for i in range(2, n))


class AdmissibleBase:
    """Base entry assignment for a generic module.

    top_row: one value per top-row slot, or None for a formal symbol.
    entries: {(row, col): Fraction} for every slot below the top row,
    or None values for formal symbols.
    """

    __slots__ = ("n", "top_row", "entries")

    def __init__(self, n: int, top_row, entries):
        self.n = n
        self.top_row = tuple(None if v is None else Fraction(v) for v in top_row)
        if len(self.top_row) != row_length(n):
            raise ValueError("top row has the wrong length")
        self.entries = {}
        for (i, j) in lower_var_labels(n):
            if (i, j) not in entries:
                raise ValueError(f"missing base entry ({i},{j})")
            v = entries[(i, j)]
            self.entries[(i, j)] = None if v is None else Fraction(v)

    @property
    def is_numeric(self) -> bool:
        return all(v is not None for v in self.entries.values())

    @staticmethod
    def prime_reciprocal(n: int, top_row=None) -> "AdmissibleBase":
        """The standard admissible family: entries 1/p for distinct odd primes."""
        primes = _odd_primes(len(lower_var_labels(n)))
        entries = {lab: Fraction(1, p) for lab, p in zip(lower_var_labels(n), primes)}
        if top_row is None:
            top_row = [None] * row_length(n)
        return AdmissibleBase(n, top_row, entries)


def _odd_primes(count: int):
    out = []
    cand = 3
    while len(out) < count:
        if all(cand % p for p in range(3, int(math.isqrt(cand)) + 1, 2)):
            out.append(cand)
        cand += 2
    return out


class AdmissibilityReport:
    __slots__ = ("admissible", "violations", "assumed_symbolic")

    def __init__(self, violations, assumed_symbolic=()):
        self.violations = list(violations)
        self.assumed_symbolic = list(assumed_symbolic)
        self.admissible = not self.violations

    def __bool__(self):
        return self.admissible

    def __repr__(self):
        return (f"AdmissibilityReport(admissible={self.admissible}, "
                f"violations={self.violations})")


def check_admissible(base: AdmissibleBase) -> AdmissibilityReport:
    """Decide the admissibility conditions for all integer shifts at once.

    For rational entries and q not a root of unity, q^y = 1 with rational
    y forces y = 0 and q^y = -1 is impossible, so each condition family
    reduces to an integrality test.  Symbolic entries cannot be decided
    and are recorded as assumed.
    """
    out = []
    assumed = []
    for i in range(2, base.n):
        row = [(j, base.entries[(i, j)]) for j in range(1, row_length(i) + 1)]
        sym = [j for j, v in row if v is None]
        if sym:
            assumed.append(f"row {i}: symbolic entries {sym} assumed admissible")
        vals = [(j, v) for j, v in row if v is not None]
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                j1, v1 = vals[a]
                j2, v2 = vals[b]
                if (v1 + v2).denominator == 1:
                    out.append(f"row {i}: m[{i},{j1}] + m[{i},{j2}] = {v1 + v2} is an integer")
                if (v1 - v2).denominator == 1:
                    out.append(f"row {i}: m[{i},{j1}] - m[{i},{j2}] = {v1 - v2} is an integer")
        if i % 2 == 1:
            for j, v in vals:
                if v.denominator == 1:
                    out.append(f"row {i}: m[{i},{j}] = {v} is an integer")
                elif (2 * v).denominator == 1:
                    out.append(f"row {i}: 2*m[{i},{j}] = {2 * v} is an integer")
    return AdmissibilityReport(out, assumed)


class FormalVector:
    """Finite sum of formal basis vectors over integer shift vectors."""

    __slots__ = ("calc", "terms")

    def __init__(self, calc, terms=None):
        self.calc = calc
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero}

    def plus_term(self, key, coeff: MultiRat):
        if coeff.is_zero:
            return
        cur = self.terms.get(key)
        new = coeff if cur is None else cur + coeff
        if new.is_zero:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def scaled(self, s) -> "FormalVector":
        return FormalVector(self.calc, {k: v * s for k, v in self.terms.items()})

    def plus(self, other: "FormalVector") -> "FormalVector":
        out = FormalVector(self.calc, self.terms)
        out.terms = dict(self.terms)
        for k, v in other.terms.items():
            out.plus_term(k, v)
        return out

    @property
    def is_zero(self) -> bool:
        return not self.terms


class GenericCalculus:
    """Symbolic action of the generators on formal vectors for one (n, mode)."""

    def __init__(self, n: int, mode: str):
        self.n = n
        self.mode = mode
        self.ctx = module_context(n, mode)
        self.offset = row_length(n)  # first shift-carrying variable index
        self.N = shift_vector_size(n)
        self._shifted_cache = {}
        self._term_info = {}

    def base_vector(self) -> FormalVector:
        return FormalVector(self, {(0,) * self.N: self.ctx.one()})

    def _terms(self, gi: int):
        info = self._term_info.get(gi)
        if info is None:
            sym_terms, sym_diag = symbolic_generator(self.ctx, self.n, gi)
            info = []
            for (i, j, d, coeff, sign) in sym_terms:
                var = self.ctx.var_index[(i, j)]
                info.append((var - self.offset, d, coeff, sign, tuple(sorted(coeff.used_vars()))))
            if sym_diag is not None:
                info.append((None, 0, sym_diag, +1, tuple(sorted(sym_diag.used_vars()))))
            self._term_info[gi] = info
        return info

    def _shifted_coeff(self, gi, term_idx, coeff, used, shift_key):
        rel = tuple((v, shift_key[v - self.offset]) for v in used
                    if v >= self.offset and shift_key[v - self.offset])
        cache_key = (gi, term_idx, rel)
        hit = self._shifted_cache.get(cache_key)
        if hit is None:
            hit = coeff.shift_vars({v: Fraction(s) for v, s in rel}) if rel else coeff
            self._shifted_cache[cache_key] = hit
        return hit

    def apply_generator(self, gi: int, fv: FormalVector) -> FormalVector:
        pending = {}
        for key, val in fv.terms.items():
            for t_idx, (slot, d, coeff, sign, used) in enumerate(self._terms(gi)):
                c = self._shifted_coeff(gi, t_idx, coeff, used, key)
                c = c * val
                if sign < 0:
                    c = -c
                if slot is None:
                    pending.setdefault(key, []).append(c)
                else:
                    new = list(key)
                    new[slot] += d
                    pending.setdefault(tuple(new), []).append(c)
        return FormalVector(self, {k: MultiRat.sum_values_tree(self.ctx, vs)
                                   for k, vs in pending.items()})

    def apply_word(self, word, fv: FormalVector) -> FormalVector:
        for gi in reversed(word):
            fv = self.apply_generator(gi, fv)
        return fv

    def two(self) -> MultiRat:
        if self.mode == CLASSICAL:
            return self.ctx.from_scalar(2)
        from .multirat import LinForm
        return self.ctx.qnum(LinForm.constant(2))


def verify_generic_relations(n: int, mode: str, collect_timings: bool = True) -> dict:
    """Apply every defining relation to the formal base vector with fully
    symbolic entries (top row included); every coefficient must vanish
    identically.  Returns a machine-readable report."""
    calc = GenericCalculus(n, mode)
    checks = []
    ok = True
    for name, terms in relation_instances(n):
        t0 = time.time()
        pending = {}
        nterms = 0
        for kind, word in terms:
            piece = calc.apply_word(word, calc.base_vector())
            nterms += len(piece.terms)
            if kind == "minus_two":
                scale = -calc.two()
            elif kind != 1:
                scale = calc.ctx.from_scalar(kind)
            else:
                scale = None
            for key, v in piece.terms.items():
                pending.setdefault(key, []).append(v if scale is None else v * scale)
        acc = FormalVector(calc, {k: MultiRat.sum_values_tree(calc.ctx, vs)
                                  for k, vs in pending.items()})
        entry = {"check": name, "status": "pass" if acc.is_zero else "fail",
                 "n_terms": nterms}
        if not acc.is_zero:
            ok = False
            key = min(acc.terms)
            entry["witness"] = {"shift": list(key), "coeff": acc.terms[key].serialize()}
        if collect_timings:
            entry["wall_time"] = time.time() - t0
        checks.append(entry)
    return {"suite": "generic", "n": n, "mode": mode, "passed": ok, "checks": checks}


# -- numeric instantiation ----------------------------------------------------


def _value_scale(base: AdmissibleBase) -> int:
    vals = [v for v in base.entries.values()] + [v for v in base.top_row]
    if any(v is None for v in vals):
        raise ValueError("window instantiation needs a fully numeric base")
    return math.lcm(*(v.denominator for v in vals)) if vals else 1


def instantiate_window(base: AdmissibleBase, radius: int, mode: str = QUANTUM) -> dict:
    """Exact coefficients of every generator at all shift vectors with
    sup-norm <= radius.  Quantum values are written over s = q^(1/(2L))
    with L the lcm of the entry denominators; terms whose target leaves
    the window are marked."""
    rep = check_admissible(base)
    if not rep.admissible:
        raise ValueError("inadmissible base: " + "; ".join(rep.violations))
    n = base.n
    ctx = module_context(n, mode)
    scale = _value_scale(base) if mode == QUANTUM else 1
    labels = lower_var_labels(n)
    N = len(labels)
    base_vals = {}
    for j, v in enumerate(base.top_row):
        base_vals[ctx.var_index[(n, j + 1)]] = v
    for lab in labels:
        base_vals[ctx.var_index[lab]] = base.entries[lab]

    def shifts(radius, N):
        if N == 0:
            yield ()
            return
        from itertools import product
        yield from product(range(-radius, radius + 1), repeat=N)

    points = []
    for a in shifts(radius, N):
        vals = dict(base_vals)
        for idx, lab in enumerate(labels):
            vals[ctx.var_index[lab]] += a[idx]
        actions = {}
        for gi in range(2, n + 1):
            terms, diag = generator_terms(ctx, n, gi)
            entries = []
            for (i, j, d, fac, sign) in terms:
                coeff = _exact_scaled(fac, ctx, vals, scale, mode)
                if sign < 0:
                    coeff = -coeff
                slot = ctx.var_index[(i, j)] - row_length(n)
                tgt = list(a)
                tgt[slot] += d
                entries.append({
                    "col": j, "dir": d, "coeff": coeff.serialize(),
                    "target": tgt, "inside": max(abs(x) for x in tgt) <= radius,
                })
            if diag is not None:
                entries.append({"col": None, "dir": 0,
                                "coeff": "i*" + _exact_scaled(diag, ctx, vals, scale, mode).serialize(),
                                "target": list(a), "inside": True})
            actions[gi] = entries
        points.append({"shift": list(a), "action": actions})
    return {"n": n, "mode": mode, "radius": radius,
            "scale": scale,
            "scalar_variable": "s = q^(1/%d)" % (2 * scale) if mode == QUANTUM else "rational",
            "points": points}


def _exact_scaled(fac, ctx, vals, scale, mode) -> RatScalar:
    num_args = [f.evaluate(vals) for f in fac.num]
    den_args = [f.evaluate(vals) for f in fac.den]
    if any(a == 0 for a in den_args):
        raise ZeroDivisionError("admissibility should preclude vanishing denominators")
    if any(a == 0 for a in num_args):
        return RatScalar.zero(mode)
    out = RatScalar.one(mode)
    for a in num_args:
        out = out * qnum_scaled(a, scale, mode)
    for f in fac.inv_plus:
        out = out * inv_qexp_plus_scaled(f.evaluate(vals), scale, mode)
    for f in fac.inv_plus_den:
        out = out / inv_qexp_plus_scaled(f.evaluate(vals), scale, mode)
    for a in den_args:
        out = out / qnum_scaled(a, scale, mode)
    return out
