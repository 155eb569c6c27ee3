"""Matrix-coefficient formula tables for the generator ladder.

Every coefficient of the generator action is a product of q-numbers of
linear forms in l-coordinates.  This module encodes those products once,
as factor lists, and provides three evaluations that share them:

* symbolic   -- MultiRat over the shift variables (generic modules,
                skew-algebra images),
* exact      -- RatScalar at a concrete pattern (rationalized modules),
* floats     -- complex/float at a real q (square-root modules).

Generator I_(i,i-1) moves entries of row i-1; its formulas read rows
i, i-1, i-2 through the l-coordinate view (the primed notation).
"""

from __future__ import annotations

from .halfint import HalfInt
from .multirat import DenominatorVanishes, FieldContext, LinForm, MultiRat
from .patterns import GTPattern, l_offset, row_length
from .scalars import RatScalar, inv_qexp_plus, qnum, qnum_float

_CTX_CACHE: dict = {}


def pattern_var_labels(n: int):
    """Variable order: rows n down to 2, left to right within a row."""
    return [(i, j) for i in range(n, 1, -1) for j in range(1, row_length(i) + 1)]


def module_context(n: int, mode: str) -> FieldContext:
    key = (n, mode)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = FieldContext(mode, pattern_var_labels(n))
        _CTX_CACHE[key] = ctx
    return ctx


def shift_var_index(ctx: FieldContext, n: int, i: int, j: int) -> int:
    """Index of the pattern variable (i, j); rows below the top carry shifts."""
    return ctx.var_index[(i, j)]


def pattern_values(ctx: FieldContext, pattern: GTPattern) -> dict:
    return {ctx.var_index[(i, j)]: pattern.entry(i, j).as_fraction()
            for i in range(pattern.n, 1, -1)
            for j in range(1, row_length(i) + 1)}


class CoeffFactors:
    """A product prod [num] * prod 1/(q^f+q^-f) / prod [den], with optional
    absolute values on selected factors (float evaluation only)."""

    __slots__ = ("n", "num", "den", "inv_plus", "inv_plus_den", "abs_num", "abs_den")

    def __init__(self, n, num=(), den=(), inv_plus=(), inv_plus_den=(),
                 abs_num=(), abs_den=()):
        self.n = n
        self.num = list(num)
        self.den = list(den)
        self.inv_plus = list(inv_plus)
        self.inv_plus_den = list(inv_plus_den)
        self.abs_num = list(abs_num)
        self.abs_den = list(abs_den)

    def symbolic(self, ctx: FieldContext) -> MultiRat:
        if self.abs_num or self.abs_den:
            raise ValueError("absolute-value factors have no symbolic form")
        out = ctx.one()
        for f in self.num:
            out = out * ctx.qnum(f)
        for f in self.inv_plus:
            out = out * ctx.inv_plus(f)
        for f in self.inv_plus_den:
            out = out / ctx.inv_plus(f)
        for f in self.den:
            out = out / ctx.qnum(f)
        return out

    def exact(self, ctx: FieldContext, values: dict, mode: str) -> RatScalar:
        """Evaluate at exact entry values.

        A vanishing denominator factor is tolerated only when strictly more
        numerator factors vanish (the diagonal coefficient at its degenerate
        patterns); the value is then zero.  Otherwise it raises.
        """
        if self.abs_num or self.abs_den:
            raise ValueError("absolute-value factors are float-only")
        num_args = [f.evaluate(values) for f in self.num]
        den_args = [f.evaluate(values) for f in self.den]
        nz = sum(1 for a in num_args if a == 0)
        dz = sum(1 for a in den_args if a == 0)
        if dz:
            if nz > dz:
                return RatScalar.zero(mode)
            bad = next(f for f, a in zip(self.den, den_args) if a == 0)
            raise DenominatorVanishes(f"[{bad.describe(ctx)}] = [0]")
        if nz:
            return RatScalar.zero(mode)
        out = RatScalar.one(mode)
        for a in num_args:
            out = out * qnum(HalfInt.of(a), mode)
        for f in self.inv_plus:
            out = out * inv_qexp_plus(HalfInt.of(f.evaluate(values)), mode)
        for f in self.inv_plus_den:
            out = out / inv_qexp_plus(HalfInt.of(f.evaluate(values)), mode)
        for a in den_args:
            out = out / qnum(HalfInt.of(a), mode)
        return out

    def floats(self, ctx: FieldContext, values: dict, q: float) -> float:
        """Float evaluation at real q; same vanishing-count convention, decided
        exactly on the half-integer arguments."""
        num_args = [f.evaluate(values) for f in self.num + self.abs_num]
        den_args = [f.evaluate(values) for f in self.den + self.abs_den]
        nz = sum(1 for a in num_args if a == 0)
        dz = sum(1 for a in den_args if a == 0)
        if dz and nz <= dz:
            bad = next(f for f, a in zip(self.den + self.abs_den, den_args) if a == 0)
            raise DenominatorVanishes(f"[{bad.describe(ctx)}] = [0]")
        if nz:
            return 0.0
        out = 1.0
        for f in self.num:
            out *= qnum_float(float(f.evaluate(values)), q)
        for f in self.abs_num:
            out *= qnum_float(abs(float(f.evaluate(values))), q)
        for f in self.inv_plus:
            a = float(f.evaluate(values))
            out /= q ** a + q ** (-a)
        for f in self.inv_plus_den:
            a = float(f.evaluate(values))
            out *= q ** a + q ** (-a)
        for f in self.den:
            out /= qnum_float(float(f.evaluate(values)), q)
        for f in self.abs_den:
            out /= qnum_float(abs(float(f.evaluate(values))), q)
        return out


def _lf(ctx: FieldContext, i: int, j: int, d=0) -> LinForm:
    """The l-coordinate of entry (i, j) plus integer d, as a linear form."""
    return LinForm.var(ctx.var_index[(i, j)], 1, l_offset(i, j) + d)


def _gen_rows(gi: int):
    """(p, top, mid, low) row indices for generator I_(gi, gi-1)."""
    if gi % 2 == 1:
        p = (gi - 1) // 2
    else:
        p = (gi - 2) // 2
    return p, gi, gi - 1, gi - 2


def ladder_up(ctx: FieldContext, gi: int, j: int) -> CoeffFactors:
    """Raising coefficient of I_(gi,gi-1) at column j of row gi-1."""
    p, T, M, B = _gen_rows(gi)
    l = lambda r, d=0: _lf(ctx, T, r, d)
    lp = lambda r, d=0: _lf(ctx, M, r, d)
    lpp = lambda r, d=0: _lf(ctx, B, r, d)
    num, den, ip = [], [], []
    if gi % 2 == 1:
        # odd generator: row gi-2 has p-1 entries; its j=p factors drop out
        ip += [lp(j), lp(j, 1)]
        num += [l(j) + lp(j), l(j) - lp(j) - 1]
        num += [l(r) + lp(j) for r in range(1, j)]
        for r in range(j + 1, p + 1):
            num += [lp(j) + l(r), lp(j) - l(r) + 1]
        num += [lpp(r) + lp(j) for r in range(1, min(j, p - 1) + 1)]
        for r in range(j + 1, p):
            num += [lp(j) + lpp(r), lp(j) - lpp(r) + 1]
        for r in range(1, j):
            den += [lp(r) + lp(j), lp(r) + lp(j) + 1]
        for r in range(j + 1, p + 1):
            den += [lp(j) + lp(r), lp(j) - lp(r), lp(j) + lp(r) + 1, lp(j) - lp(r) + 1]
    else:
        num += [l(j) + lp(j), l(j) - lp(j)]
        num += [l(r) + lp(j) for r in range(1, j)]
        for r in range(j + 1, p + 2):
            num += [lp(j) + l(r), lp(j) - l(r)]
        num += [lpp(r) + lp(j) for r in range(1, j + 1)]
        for r in range(j + 1, p + 1):
            num += [lp(j) + lpp(r), lp(j) - lpp(r)]
        for r in range(1, j):
            den += [lp(r) + lp(j), lp(r) + lp(j) - 1]
        for r in range(j + 1, p + 1):
            den += [lp(j) + lp(r), lp(j) - lp(r), lp(j) + lp(r) - 1, lp(j) - lp(r) + 1]
        den += [lp(j), lp(j), 2 * lp(j) + 1, 2 * lp(j) - 1]
    return CoeffFactors(ctx.nvars, num, den, ip)


def ladder_down(ctx: FieldContext, gi: int, j: int) -> CoeffFactors:
    """Lowering coefficient of I_(gi,gi-1) at column j of row gi-1."""
    p, T, M, B = _gen_rows(gi)
    l = lambda r, d=0: _lf(ctx, T, r, d)
    lp = lambda r, d=0: _lf(ctx, M, r, d)
    lpp = lambda r, d=0: _lf(ctx, B, r, d)
    num, den = [], []
    if gi % 2 == 1:
        if j <= p - 1:
            num.append(lp(j) - lpp(j))
        for r in range(1, j):
            num += [l(r) - lp(j), lpp(r) - lp(j)]
            den += [lp(r) - lp(j) + 1, lp(r) - lp(j)]
    else:
        num.append(lp(j) - lpp(j) - 1)
        for r in range(1, j):
            num += [l(r) - lp(j) + 1, lpp(r) - lp(j) + 1]
            den += [lp(r) - lp(j) + 1, lp(r) - lp(j)]
    return CoeffFactors(ctx.nvars, num, den)


def diagonal_coeff(ctx: FieldContext, gi: int) -> CoeffFactors:
    """Diagonal coefficient of an even generator (the factor on i)."""
    if gi % 2:
        raise ValueError("odd generators have no diagonal term")
    p, T, M, B = _gen_rows(gi)
    num = [_lf(ctx, T, r) for r in range(1, p + 2)]
    num += [_lf(ctx, B, r) for r in range(1, p + 1)]
    den = []
    for r in range(1, p + 1):
        den += [_lf(ctx, M, r), _lf(ctx, M, r, -1)]
    return CoeffFactors(ctx.nvars, num, den)


def sqrt_up_squared(ctx: FieldContext, gi: int, j: int, original: bool = False) -> CoeffFactors:
    """Square of the unrescaled raising coefficient; `original` uses the
    absolute-value form it rewrites."""
    p, T, M, B = _gen_rows(gi)
    l = lambda r, d=0: _lf(ctx, T, r, d)
    lp = lambda r, d=0: _lf(ctx, M, r, d)
    lpp = lambda r, d=0: _lf(ctx, B, r, d)
    num, den, ip, anum, aden = [], [], [], [], []
    if gi % 2 == 1:
        ip += [lp(j), lp(j, 1)]
        if original:
            for r in range(1, p + 1):
                num.append(l(r) + lp(j))
                anum.append(l(r) - lp(j) - 1)
            for r in range(1, p):
                num.append(lpp(r) + lp(j))
                anum.append(lpp(r) - lp(j) - 1)
            for r in range(1, p + 1):
                if r == j:
                    continue
                den += [lp(r) + lp(j), lp(r) + lp(j) + 1]
                aden += [lp(r) - lp(j), lp(r) - lp(j) - 1]
        else:
            for r in range(1, j + 1):
                num += [l(r) + lp(j), l(r) - lp(j) - 1]
            for r in range(j + 1, p + 1):
                num += [lp(j) + l(r), lp(j) - l(r) + 1]
            for r in range(1, j):
                num += [lpp(r) + lp(j), lpp(r) - lp(j) - 1]
            for r in range(j, p):
                num += [lp(j) + lpp(r), lp(j) - lpp(r) + 1]
            for r in range(1, j):
                den += [lp(r) + lp(j), lp(r) - lp(j), lp(r) + lp(j) + 1, lp(r) - lp(j) - 1]
            for r in range(j + 1, p + 1):
                den += [lp(j) + lp(r), lp(j) - lp(r), lp(j) + lp(r) + 1, lp(j) - lp(r) + 1]
    else:
        den += [lp(j), lp(j), 2 * lp(j) + 1, 2 * lp(j) - 1]
        if original:
            for r in range(1, p + 2):
                num.append(l(r) + lp(j))
                anum.append(l(r) - lp(j))
            for r in range(1, p + 1):
                num.append(lpp(r) + lp(j))
                anum.append(lpp(r) - lp(j))
            for r in range(1, p + 1):
                if r == j:
                    continue
                den += [lp(r) + lp(j), lp(r) + lp(j) - 1]
                aden += [lp(r) - lp(j), lp(r) - lp(j) - 1]
        else:
            for r in range(1, j + 1):
                num += [l(r) + lp(j), l(r) - lp(j)]
            for r in range(j + 1, p + 2):
                num += [lp(j) + l(r), lp(j) - l(r)]
            for r in range(1, j):
                num += [lpp(r) + lp(j), lpp(r) - lp(j)]
            for r in range(j, p + 1):
                num += [lp(j) + lpp(r), lp(j) - lpp(r)]
            for r in range(1, j):
                den += [lp(r) + lp(j), lp(r) - lp(j), lp(r) + lp(j) - 1, lp(r) - lp(j) - 1]
            for r in range(j + 1, p + 1):
                den += [lp(j) + lp(r), lp(j) - lp(r), lp(j) + lp(r) - 1, lp(j) - lp(r) + 1]
    return CoeffFactors(ctx.nvars, num, den, ip, abs_num=anum, abs_den=aden)


def generator_terms(ctx: FieldContext, n: int, gi: int):
    """All transition terms of I_(gi,gi-1): (row, col, direction, factors, sign)
    ladder terms plus ('diag', factors) when gi is even."""
    p, T, M, B = _gen_rows(gi)
    terms = []
    for j in range(1, p + 1):
        terms.append((M, j, +1, ladder_up(ctx, gi, j), +1))
        terms.append((M, j, -1, ladder_down(ctx, gi, j), -1))
    diag = diagonal_coeff(ctx, gi) if gi % 2 == 0 else None
    return terms, diag


_SYMBOLIC_CACHE: dict = {}


def symbolic_generator(ctx: FieldContext, n: int, gi: int):
    """[(row, col, dir, MultiRat coefficient, sign)], diagonal MultiRat or None."""
    key = (id(ctx), n, gi)
    hit = _SYMBOLIC_CACHE.get(key)
    if hit is not None:
        return hit
    terms, diag = generator_terms(ctx, n, gi)
    sym_terms = [(i, j, d, fac.symbolic(ctx), sg) for (i, j, d, fac, sg) in terms]
    sym_diag = diag.symbolic(ctx) * ctx.imag() if diag is not None else None
    _SYMBOLIC_CACHE[key] = (sym_terms, sym_diag)
    return sym_terms, sym_diag


# -- rescaling recursion and its closed forms -------------------------------


def _row_l(values, i: int, r: int) -> HalfInt:
    return HalfInt.of(values[r - 1]) + l_offset(i, r)


def lam_step_sq(K: int, m_top, m_bot, s: int, cur: HalfInt, mode: str) -> RatScalar:
    """Square of one rescaling step for the two-row symbol (m_top over m_bot)
    of size K, raising column s whose current entry is `cur`."""
    lpj = HalfInt.of(cur) + l_offset(K - 1, s)
    lt = lambda r: _row_l(m_top, K, r)
    lb = lambda r: _row_l(m_bot, K - 1, r)
    out = RatScalar.one(mode)
    if K % 2 == 1:
        p = (K - 1) // 2
        out = out * inv_qexp_plus(lpj - p + s, mode) * inv_qexp_plus(lpj + 1, mode)
        out = out * qnum(lt(s) + lpj, mode) * qnum(lt(s) - lpj - 1, mode)
        for r in range(s + 1, p + 1):
            out = out * qnum(lpj + lt(r), mode) * qnum(lpj - lt(r) + 1, mode)
            out = out / (qnum(lpj + lb(r) + 1, mode) * qnum(lpj - lb(r) + 1, mode))
    else:
        p = (K - 2) // 2
        out = out * inv_qexp_plus(lpj - p + s - 1, mode)
        out = out * qnum(lt(s) + lpj, mode) * qnum(lt(s) - lpj, mode)
        for r in range(s + 1, p + 2):
            out = out * qnum(lpj + lt(r), mode) * qnum(lpj - lt(r), mode)
        for r in range(s + 1, p + 1):
            out = out / (qnum(lpj + lb(r), mode) * qnum(lpj - lb(r) + 1, mode))
        out = out / (qnum(lpj, mode) * qnum(2 * lpj + 1, mode))
    return out


def lam_sq(K: int, m_top, m_bot, mode: str) -> RatScalar:
    """Squared rescaling factor for the two-row symbol, by telescoping."""
    out = RatScalar.one(mode)
    for s in range(1, len(m_bot) + 1):
        steps = (HalfInt.of(m_top[s - 1]) - HalfInt.of(m_bot[s - 1])).twice
        if steps % 2:
            raise ValueError("rows differ by non-integers")
        for k in range(steps // 2):
            out = out * lam_step_sq(K, m_top, m_bot, s, HalfInt.of(m_bot[s - 1]) + k, mode)
    return out


def lam_ratio_sq_recursion(K: int, m_top, m_bot, j: int, shifted: str, mode: str) -> RatScalar:
    """Squared ratio lambda(symbol)/lambda(symbol with e_j added), via telescoping.

    shifted='bottom' raises column j of the lower row; 'top' raises it in
    the upper row (the symbol one level down the recursion).
    """
    base = lam_sq(K, m_top, m_bot, mode)
    if shifted == "bottom":
        m2 = list(m_bot)
        m2[j - 1] = HalfInt.of(m2[j - 1]) + 1
        other = lam_sq(K, m_top, m2, mode)
    elif shifted == "top":
        m2 = list(m_top)
        m2[j - 1] = HalfInt.of(m2[j - 1]) + 1
        other = lam_sq(K, m2, m_bot, mode)
    else:
        raise ValueError("shifted must be 'top' or 'bottom'")
    return base / other


def lam_ratio_sq_closed_top(n: int, m_n, m_n1, j: int, mode: str) -> RatScalar:
    """Closed form for the squared ratio with e_j added to the lower row."""
    lt = lambda r: _row_l(m_n, n, r)
    lb = lambda r: _row_l(m_n1, n - 1, r)
    lpj = lb(j)
    out = RatScalar.one(mode)
    if n % 2 == 1:
        for s in range(1, j):
            out = out * qnum(lt(s) + lpj, mode) * qnum(lb(s) - lpj, mode)
            out = out / (qnum(lb(s) + lpj + 1, mode) * qnum(lt(s) - lpj - 1, mode))
    else:
        for s in range(1, j):
            out = out * qnum(lt(s) + lpj, mode) * qnum(lb(s) - lpj, mode)
            out = out / (qnum(lb(s) + lpj, mode) * qnum(lt(s) - lpj, mode))
    return out * lam_step_sq(n, m_n, m_n1, j, HalfInt.of(m_n1[j - 1]), mode)


def lam_ratio_sq_closed_mid(n: int, m_n1, m_n2, j: int, mode: str) -> RatScalar:
    """Closed form for the squared ratio with e_j added to the *upper* row of
    the symbol one level down (rows n-1 over n-2)."""
    lp = lambda r: _row_l(m_n1, n - 1, r)
    lpp = lambda r: _row_l(m_n2, n - 2, r)
    lpj = lp(j)
    out = RatScalar.one(mode)
    if n % 2 == 1:
        p = (n - 1) // 2
        for s in range(1, j):
            out = out * qnum(lpp(s) + lpj, mode) * qnum(lp(s) - lpj - 1, mode)
            out = out / (qnum(lp(s) + lpj, mode) * qnum(lpp(s) - lpj - 1, mode))
        if j == p:
            return out
        out = out * qnum(lpj + lpp(j), mode) / qnum(lpj - lpp(j) + 1, mode)
        out = out * inv_qexp_plus(lpj, mode) / inv_qexp_plus(lpj - p + j, mode)
        for r in range(j + 1, p):
            out = out * qnum(lpj + lpp(r), mode) * qnum(lpj - lpp(r) + 1, mode)
        for r in range(j + 1, p + 1):
            out = out / (qnum(lpj + lp(r), mode) * qnum(lpj - lp(r), mode))
        return out
    p = (n - 2) // 2
    for s in range(1, j):
        out = out * qnum(lpp(s) + lpj, mode) * qnum(lp(s) - lpj - 1, mode)
        out = out / (qnum(lp(s) + lpj - 1, mode) * qnum(lpp(s) - lpj, mode))
    out = out * qnum(lpj + lpp(j), mode)
    out = out / (qnum(2 * lpj - 1, mode) * qnum(lpj - lpp(j), mode))
    out = out / (inv_qexp_plus(lpj - p + j - 1, mode) * qnum(lpj, mode))
    for r in range(j + 1, p + 1):
        out = out * qnum(lpj + lpp(r), mode) * qnum(lpj - lpp(r), mode)
        out = out / (qnum(lpj + lp(r) - 1, mode) * qnum(lpj - lp(r), mode))
    return out
