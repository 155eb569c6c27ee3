"""Casimir eigenvalues, their images over the top-row variables, the
signed-permutation group actions, invariance verification, and the
constructive decomposition of invariants into the generating set.

Everything on the invariant-theory side works with Laurent polynomials
in the centered top-row variables (the variables shifted so the group
acts by plain inversions, sign flips and permutations).
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

from .coeffs import module_context
from .generic import GenericCalculus
from .halfint import HalfInt
from .multirat import FieldContext, LinForm, MultiRat
from .patterns import row_length
from .scalars import CLASSICAL, QUANTUM, RatScalar, qnum


def epsilon(n: int) -> Fraction:
    """Centering offset: 0 for even n, 1/2 for odd."""
    return Fraction(0) if n % 2 == 0 else Fraction(1, 2)


def center_offset(n: int, j: int) -> Fraction:
    """c_j with the centered variable = q^(c_j) * z_(n,j): c_j = k - j + eps."""
    return row_length(n) - j + epsilon(n)


def gen_fact_esym(d: int, ys, shifts):
    """Generalized factorial elementary symmetric polynomial
    e_d(y_1..y_k | a): sum over p_1<..<p_d of prod (y_{p_r} - a_{p_r-r+1}).

    Works over any ring with +, -, * (values, scalars, MultiRats)."""
    k = len(ys)
    if not 1 <= d <= k:
        raise ValueError(f"d must be between 1 and {k}")
    total = None
    for combo in itertools.combinations(range(k), d):
        prod = None
        for r, p in enumerate(combo):
            factor = ys[p] - shifts[p - r]
            prod = factor if prod is None else prod * factor
        total = prod if total is None else total + prod
    return total


def _shift_sequence(n: int, mode: str, k: int):
    """a_i = [eps + i - 1]^2 (their q->1 limits classically)."""
    eps = epsilon(n)
    out = []
    for i in range(k):
        v = qnum(HalfInt.of(eps + i), mode)
        out.append(v * v)
    return out


def casimir_eigenvalue(n: int, d: int, top_row, mode: str = QUANTUM) -> RatScalar:
    """Scalar by which the degree-2d central element acts, for a concrete
    top row: (-1)^d e_d([s_1]^2..[s_k]^2 | a), s_i = m_(n,i) + k - i + eps."""
    k = row_length(n)
    svals = [HalfInt.of(top_row[i]) + HalfInt.of(center_offset(n, i + 1)) for i in range(k)]
    ys = [qnum(s, mode) ** 2 for s in svals]
    val = gen_fact_esym(d, ys, _shift_sequence(n, mode, k))
    return -val if d % 2 else val


def casimir_half_eigenvalue(n: int, top_row, mode: str = QUANTUM) -> RatScalar:
    """Eigenvalue of the distinguished square root for even n:
    i^k * prod [s_r]."""
    if n % 2:
        raise ValueError("the square-root element exists for even n only")
    k = row_length(n)
    out = RatScalar.imag_unit(mode) ** k
    for i in range(k):
        out = out * qnum(HalfInt.of(top_row[i]) + HalfInt.of(center_offset(n, i + 1)), mode)
    return out


def centered_qnum(ctx: FieldContext, n: int, j: int) -> MultiRat:
    """(z'_j - z'_j^-1)/(q - q^-1) with z'_j the centered variable; the
    centered variable itself classically."""
    v = ctx.var_index[(n, j)]
    return ctx.qnum(LinForm.var(v, 1, center_offset(n, j)))


def casimir_eigenvalue_symbolic(n: int, d: int, mode: str = QUANTUM) -> MultiRat:
    """Eigenvalue with the top row symbolic, through the e_d machinery."""
    ctx = module_context(n, mode)
    k = row_length(n)
    ys = [centered_qnum(ctx, n, j) ** 2 for j in range(1, k + 1)]
    shifts = [s_as_multirat(ctx, n, i, mode) for i in range(k)]
    val = gen_fact_esym(d, ys, shifts)
    return -val if d % 2 else val


def s_as_multirat(ctx: FieldContext, n: int, i: int, mode: str) -> MultiRat:
    eps = epsilon(n)
    v = ctx.qnum(LinForm.constant(eps + i))
    return v * v


def phi_casimir(n: int, d: int, mode: str = QUANTUM) -> MultiRat:
    """Image of the degree-2d central element in the top-row variables:
    the printed sum-product over centered-variable q-numbers squared."""
    ctx = module_context(n, mode)
    k = row_length(n)
    if not 1 <= d <= k:
        raise ValueError(f"d must be between 1 and {k}")
    shifts = [s_as_multirat(ctx, n, i, mode) for i in range(k)]
    total = ctx.zero()
    for combo in itertools.combinations(range(k), d):
        prod = ctx.one()
        for r, p in enumerate(combo):
            y = centered_qnum(ctx, n, p + 1) ** 2
            prod = prod * (y - shifts[p - r])
        total = total + prod
    return -total if d % 2 else total


def phi_casimir_half(n: int, mode: str = QUANTUM) -> MultiRat:
    """Image of the square-root element (even n): i^k prod of centered q-numbers."""
    if n % 2:
        raise ValueError("even n only")
    ctx = module_context(n, mode)
    k = row_length(n)
    out = ctx.imag() ** k
    for j in range(1, k + 1):
        out = out * centered_qnum(ctx, n, j)
    return out


# -- group actions -------------------------------------------------------------


class WeylGroupElement:
    """Signed permutation datum acting on the row-n variables.

    Quantum signs are pairs (a_j, b_j): a inverts the centered variable,
    b negates it.  Classical signs are single bits negating it.  For even
    n the defining subgroup keeps the total number of flips even."""

    __slots__ = ("n", "mode", "signs", "perm")

    def __init__(self, n: int, mode: str, signs, perm=None):
        k = row_length(n)
        self.n = n
        self.mode = mode
        self.signs = tuple(tuple(s) if isinstance(s, (tuple, list)) else (s,) for s in signs)
        if len(self.signs) != k:
            raise ValueError("need one sign datum per column")
        width = 2 if mode == QUANTUM else 1
        if any(len(s) != width or any(b not in (0, 1) for b in s) for s in self.signs):
            raise ValueError("bad sign data")
        self.perm = tuple(perm) if perm is not None else tuple(range(k))
        if sorted(self.perm) != list(range(k)):
            raise ValueError("bad permutation")

    @property
    def parity(self) -> int:
        return sum(sum(s) for s in self.signs) % 2

    def in_defining_group(self) -> bool:
        return self.n % 2 == 1 or self.parity == 0

    @staticmethod
    def identity(n, mode):
        k = row_length(n)
        return WeylGroupElement(n, mode, [(0, 0) if mode == QUANTUM else (0,)] * k)

    @staticmethod
    def sigma(n, mode, j):
        w = WeylGroupElement.identity(n, mode)
        signs = list(w.signs)
        signs[j - 1] = (1, 0) if mode == QUANTUM else (1,)
        return WeylGroupElement(n, mode, signs)

    @staticmethod
    def tau(n, j):
        w = WeylGroupElement.identity(n, QUANTUM)
        signs = list(w.signs)
        signs[j - 1] = (0, 1)
        return WeylGroupElement(n, QUANTUM, signs)

    @staticmethod
    def transposition(n, mode, j):
        k = row_length(n)
        perm = list(range(k))
        perm[j - 1], perm[j] = perm[j], perm[j - 1]
        return WeylGroupElement(n, mode, WeylGroupElement.identity(n, mode).signs, perm)

    def compose(self, other: "WeylGroupElement") -> "WeylGroupElement":
        """Element acting as: first apply `other`, then self."""
        if (self.n, self.mode) != (other.n, other.mode):
            raise ValueError("group mismatch")
        k = row_length(self.n)
        perm = tuple(self.perm[other.perm[i]] for i in range(k))
        signs = []
        for i in range(k):
            mine = self.signs[other.perm[i]]
            theirs = other.signs[i]
            signs.append(tuple((a + b) % 2 for a, b in zip(mine, theirs)))
        return WeylGroupElement(self.n, self.mode, signs, perm)

    def __repr__(self):
        return f"WeylGroupElement(n={self.n}, signs={self.signs}, perm={self.perm})"


def weyl_act(w: WeylGroupElement, f: MultiRat) -> MultiRat:
    """Apply the signed-permutation action through the raw variables."""
    ctx = f.ctx
    n, mode = w.n, w.mode
    subs = {}
    for j0 in range(row_length(n)):
        j = j0 + 1
        tgt = w.perm[j0] + 1
        v = ctx.var_index[(n, j)]
        vt = ctx.var_index[(n, tgt)]
        cj = center_offset(n, j)
        ct = center_offset(n, tgt)
        if mode == QUANTUM:
            a, b = w.signs[j0]
            # z'_j -> (z'_tgt)^(+-1) with optional negation:
            # m_j -> +-(m_tgt + c_tgt) - c_j, and a sign on the variable for b
            scale = -1 if a else 1
            shiftv = scale * ct - cj
            sign = -1 if b else 1
            if (v, scale, Fraction(shiftv), sign) != (v, 1, Fraction(0), 1) or vt != v:
                subs[v] = (vt, scale, Fraction(shiftv), sign)
        else:
            (a,) = w.signs[j0]
            scale = -1 if a else 1
            shiftv = scale * ct - cj
            if (vt, scale, Fraction(shiftv)) != (v, 1, Fraction(0)):
                subs[v] = (vt, scale, Fraction(shiftv), 1)
    return f.transform(subs) if subs else f


def sign_pair_generators(n: int, mode: str):
    """Generators of the sign part of the defining group: single flips for
    odd n, all products of two flips for even n."""
    k = row_length(n)
    singles = []
    if mode == QUANTUM:
        for j in range(1, k + 1):
            singles.append((f"sigma[{j}]", WeylGroupElement.sigma(n, mode, j)))
            singles.append((f"tau[{j}]", WeylGroupElement.tau(n, j)))
    else:
        for j in range(1, k + 1):
            singles.append((f"sigma[{j}]", WeylGroupElement.sigma(n, mode, j)))
    if n % 2 == 1:
        return singles
    pairs = []
    for (namea, a), (nameb, b) in itertools.combinations_with_replacement(singles, 2):
        c = a.compose(b)
        if c.parity == 0 and any(any(s) for s in c.signs):
            pairs.append((f"{namea}*{nameb}", c))
    return pairs


def verify_invariance(n: int, mode: str, collect_timings: bool = True) -> dict:
    """Check every generator image is fixed by the defining group's
    generators, and that for even n a single flip negates the
    square-root element (so the parity constraint is sharp)."""
    checks = []
    ok = True
    k = row_length(n)
    gens = sign_pair_generators(n, mode)
    for j in range(1, k):
        gens.append((f"swap[{j},{j + 1}]", WeylGroupElement.transposition(n, mode, j)))
    images = [(f"deg{2 * d}", phi_casimir(n, d, mode)) for d in range(1, k + 1)]
    if n % 2 == 0:
        images[-1] = ("half", phi_casimir_half(n, mode))
    for (iname, img) in images:
        for (gname, g) in gens:
            t0 = time.time()
            same = weyl_act(g, img) == img
            ok = ok and same
            entry = {"check": f"invariance[{iname}:{gname}]",
                     "status": "pass" if same else "fail"}
            if collect_timings:
                entry["wall_time"] = time.time() - t0
            checks.append(entry)
    if n % 2 == 0 and k >= 1:
        flip = (WeylGroupElement.tau(n, 1) if mode == QUANTUM
                else WeylGroupElement.sigma(n, mode, 1))
        img = phi_casimir_half(n, mode)
        negated = weyl_act(flip, img) == -img
        ok = ok and negated
        checks.append({"check": "single-flip-negates-half", "status": "pass" if negated else "fail"})
    return {"suite": "invariance", "n": n, "mode": mode, "passed": ok, "checks": checks}


# -- Laurent-dict invariant calculus ------------------------------------------


def multirat_to_centered_laurent(n: int, f: MultiRat, mode: str) -> dict:
    """Convert a MultiRat over the row-n variables to a Laurent dictionary
    {exponent tuple over centered variables: RatScalar}.  The denominator
    must be scalar (coefficients may carry q - q^-1 powers)."""
    ctx = f.ctx
    k = row_length(n)
    gens = [ctx.gen_of_var(ctx.var_index[(n, j)]) for j in range(1, k + 1)]
    num, den = f.expanded()
    # a pure monomial in the z's may sit in the denominator (Laurent content)
    den_zexps = None
    for mon, _ in den.terms():
        cur = tuple(mon[g] for g in gens)
        if den_zexps is None:
            den_zexps = cur
        elif den_zexps != cur:
            raise ValueError("value is not a Laurent polynomial in the top-row variables")
    den_zexps = den_zexps or (0,) * k
    if any(den_zexps):
        strip = {(): None}
        newden = {}
        for mon, c in den.terms():
            key = list(mon)
            for g, e in zip(gens, den_zexps):
                key[g] -= e
            newden[tuple(key)] = c
        den = ctx.ring.from_dict(newden)
    den_scalar = _scalar_poly(ctx, den, gens)
    if den_scalar is None:
        raise ValueError("value is not a Laurent polynomial in the top-row variables")
    out = {}
    offs = [center_offset(n, j) for j in range(1, k + 1)]
    for mon, c in num.terms():
        exps = tuple(mon[g] - d for g, d in zip(gens, den_zexps))
        if mode == QUANTUM:
            rest = list(mon)
            for g in gens:
                rest[g] = 0
            tshift = Fraction(rest[0]) - 2 * sum(Fraction(e) * o for e, o in zip(exps, offs))
            if tshift.denominator != 1:
                raise ValueError("non-integral centered exponent")
            coeff = RatScalar(QUANTUM, _uni(ctx, {(int(0),): c}), _uni(ctx, {(0,): _one(ctx)}))
            coeff = coeff * RatScalar.t_power(int(tshift))
            if any(rest[1:]):
                raise ValueError("value involves non-top-row variables")
        else:
            if any(m for g2, m in enumerate(mon) if g2 not in gens and m):
                raise ValueError("value involves non-top-row variables")
            coeff = RatScalar(CLASSICAL, c)
        cur = out.get(exps)
        out[exps] = coeff if cur is None else cur + coeff
    den_inv = den_scalar
    return {e: v / den_inv for e, v in out.items() if not v.is_zero}


def _one(ctx):
    from sympy.polys.domains import QQ_I
    return QQ_I(1, 0)


def _uni(ctx, d):
    from .scalars import _TRING
    return _TRING.from_dict(d)


def _scalar_poly(ctx, poly, banned_gens):
    """Project to a RatScalar if the poly involves no pattern variables."""
    from .scalars import _TRING
    d = {}
    for mon, c in poly.terms():
        if ctx.mode == QUANTUM:
            if any(mon[1:]):
                return None
            d[(mon[0],)] = c
        else:
            if any(mon):
                return None
            d[(0,)] = c
    if ctx.mode == QUANTUM:
        return RatScalar(QUANTUM, _TRING.from_dict(d))
    from sympy.polys.domains import QQ_I
    return RatScalar(CLASSICAL, d.get((0,), QQ_I(0, 0)))


def centered_laurent_from_classical(n: int, f: MultiRat, mode: str) -> dict:
    """Classical counterpart: polynomial in x'_j = x_(n,j) + c_j, returned
    as {exponent tuple: RatScalar}.  Implemented by recentering first."""
    ctx = f.ctx
    k = row_length(n)
    subs = {}
    for j in range(1, k + 1):
        v = ctx.var_index[(n, j)]
        subs[v] = (v, 1, -center_offset(n, j), 1)
    g = f.transform(subs)  # now a polynomial in the centered variables
    num, den = g.expanded()
    gens = [ctx.gen_of_var(ctx.var_index[(n, j)]) for j in range(1, k + 1)]
    den_scalar = _scalar_poly(ctx, den, gens)
    if den_scalar is None:
        raise ValueError("value is not polynomial in the centered variables")
    out = {}
    for mon, c in num.terms():
        exps = tuple(mon[g] for g in gens)
        if any(m for g2, m in enumerate(mon) if m and g2 not in gens):
            raise ValueError("value involves non-top-row variables")
        coeff = RatScalar(CLASSICAL, c)
        cur = out.get(exps)
        out[exps] = coeff if cur is None else cur + coeff
    return {e: v / den_scalar for e, v in out.items() if not v.is_zero}


def to_centered_laurent(n: int, f: MultiRat, mode: str) -> dict:
    if mode == QUANTUM:
        return multirat_to_centered_laurent(n, f, mode)
    return centered_laurent_from_classical(n, f, mode)


def _ldict_mul(a: dict, b: dict) -> dict:
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            cur = out.get(key)
            val = c1 * c2
            out[key] = val if cur is None else cur + val
    return {k: v for k, v in out.items() if not v.is_zero}


def _ldict_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        cur = out.get(e)
        val = c if cur is None else cur + c
        if val.is_zero:
            out.pop(e, None)
        else:
            out[e] = val
    return out


def _ldict_scale(a: dict, s) -> dict:
    return {} if s.is_zero else {e: c * s for e, c in a.items()}


def _ldict_eq(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    for k in keys:
        va, vb = a.get(k), b.get(k)
        if va is None or vb is None:
            return False
        if not (va - vb).is_zero:
            return False
    return True


class InvariantWitness:
    """Decomposition of an invariant: a polynomial in the elementary
    symmetric functions of the squared building blocks, plus (even n)
    the alternating product times another such polynomial."""

    __slots__ = ("n", "mode", "even_part", "odd_part")

    def __init__(self, n, mode, even_part, odd_part=None):
        self.n = n
        self.mode = mode
        self.even_part = even_part  # {e-exponent tuple: RatScalar}
        self.odd_part = odd_part    # same, multiplied by the alternating product

    def expand(self) -> dict:
        """Re-expand to a centered Laurent dictionary."""
        k = row_length(self.n)
        mode = self.mode
        bvals = [_building_block(self.n, mode, j) for j in range(1, k + 1)]
        evals = [_esym(bvals, d) for d in range(1, k + 1)]
        out = _epoly_expand(self.even_part, evals, k, mode)
        if self.odd_part is not None:
            g = _alternating(self.n, mode)
            out = _ldict_add(out, _ldict_mul(g, _epoly_expand(self.odd_part, evals, k, mode)))
        return out


def _unit_ldict(k, mode):
    return {(0,) * k: RatScalar.one(mode)}


def _epoly_expand(epoly: dict, evals, k, mode) -> dict:
    out = {}
    for exps, coeff in epoly.items():
        term = _unit_ldict(k, mode)
        for d, e in enumerate(exps):
            for _ in range(e):
                term = _ldict_mul(term, evals[d])
        out = _ldict_add(out, _ldict_scale(term, coeff))
    return out


def _building_block(n, mode, j) -> dict:
    """b_j as a Laurent dict: z'^2 + z'^-2 (quantum) or x'^2 (classical)."""
    k = row_length(n)
    if mode == QUANTUM:
        up = [0] * k
        up[j - 1] = 2
        dn = [0] * k
        dn[j - 1] = -2
        return {tuple(up): RatScalar.one(mode), tuple(dn): RatScalar.one(mode)}
    up = [0] * k
    up[j - 1] = 2
    return {tuple(up): RatScalar.one(mode)}


def _alternating(n, mode) -> dict:
    """prod_j (z'_j - z'_j^-1) (quantum) or prod_j x'_j (classical)."""
    k = row_length(n)
    out = _unit_ldict(k, mode)
    for j in range(1, k + 1):
        if mode == QUANTUM:
            up = [0] * k
            up[j - 1] = 1
            dn = [0] * k
            dn[j - 1] = -1
            f = {tuple(up): RatScalar.one(mode),
                 tuple(dn): -RatScalar.one(mode)}
        else:
            up = [0] * k
            up[j - 1] = 1
            f = {tuple(up): RatScalar.one(mode)}
        out = _ldict_mul(out, f)
    return out


def _esym(values, d) -> dict:
    """Plain elementary symmetric polynomial of Laurent dicts."""
    k = len(values)
    out = None
    for combo in itertools.combinations(range(k), d):
        term = None
        for i in combo:
            term = values[i] if term is None else _ldict_mul(term, values[i])
        out = term if out is None else _ldict_add(out, term)
    return out


def _dickson(u: int, mode):
    """Coefficients of z^(2u) + z^(-2u) as a polynomial in b = z^2 + z^-2:
    D_0 = 2, D_1 = b, D_(u+1) = b D_u - D_(u-1).  Classically x^(2u) = (x^2)^u."""
    if mode == CLASSICAL:
        return {u: RatScalar.one(mode)}
    if u == 0:
        return {0: RatScalar.from_rational(mode, 2)}
    prev = {0: RatScalar.from_rational(mode, 2)}
    cur = {1: RatScalar.one(mode)}
    for _ in range(u - 1):
        nxt = {}
        for e, c in cur.items():
            nxt[e + 1] = nxt.get(e + 1, RatScalar.zero(mode)) + c
        for e, c in prev.items():
            nxt[e] = nxt.get(e, RatScalar.zero(mode)) - c
        prev, cur = cur, {e: c for e, c in nxt.items() if not c.is_zero}
    return cur


def _laurent_to_bpoly(f: dict, k: int, mode: str) -> dict:
    """Rewrite an inversion-symmetric, even-exponent Laurent dict as a
    polynomial {b-exponent tuple: RatScalar}.  Raises if impossible."""
    if not f:
        return {}
    cur = {(): v for v in ()}
    # peel one variable at a time
    levels = {(): f}
    for var in range(k):
        new_levels = {}
        for done, sub in levels.items():
            groups = {}
            for exps, c in sub.items():
                e = exps[0]
                rest = exps[1:]
                groups.setdefault(rest, {})[e] = c
            for rest, laurent in groups.items():
                for e, c in laurent.items():
                    if e % 2:
                        raise ValueError("odd exponent: not in the even subring")
                    if mode == QUANTUM and e > 0:
                        cm = laurent.get(-e)
                        if cm is None or not (cm - c).is_zero:
                            raise ValueError("not inversion-symmetric")
                bexp_poly = {}
                seen = set()
                for e, c in laurent.items():
                    u = abs(e) // 2
                    if u in seen:
                        continue
                    seen.add(u)
                    if mode == CLASSICAL and e < 0:
                        raise ValueError("negative exponent classically")
                    if u == 0:
                        # a lone constant term, not the u = 0 pair
                        expansion = {0: RatScalar.one(mode)}
                    else:
                        expansion = _dickson(u, mode)
                    for be, bc in expansion.items():
                        add = bc * c
                        cur0 = bexp_poly.get(be)
                        bexp_poly[be] = add if cur0 is None else cur0 + add
                for be, bc in bexp_poly.items():
                    if bc.is_zero:
                        continue
                    key = done + (be,)
                    tgt = new_levels.setdefault(key, {})
                    cur0 = tgt.get(rest)
                    tgt[rest] = bc if cur0 is None else cur0 + bc
        levels = {}
        for key, sub in new_levels.items():
            cleaned = {r: c for r, c in sub.items() if not c.is_zero}
            if cleaned:
                levels[key] = cleaned
    out = {}
    for key, sub in levels.items():
        (rest0, c), = sub.items()
        assert rest0 == ()
        out[key] = c
    return out


def _bpoly_to_epoly(bpoly: dict, k: int, mode: str) -> dict:
    """Gauss reduction of a symmetric polynomial in the b variables to a
    polynomial in their elementary symmetric functions."""
    work = dict(bpoly)
    out = {}
    bgens = [_bvar_dict(k, i, mode) for i in range(k)]
    evals = [_esym_b(k, d, mode) for d in range(1, k + 1)]
    guard = 0
    while work:
        guard += 1
        if guard > 10000:
            raise RuntimeError("reduction did not terminate")
        lead = max(work, key=lambda e: (sorted(e, reverse=True), e))
        lam = sorted(lead, reverse=True)
        if list(lead) != lam:
            raise ValueError("not symmetric: leading exponent not dominant")
        coeff = work[lead]
        eexp = [0] * k
        for i in range(k - 1):
            eexp[i] = lam[i] - lam[i + 1]
        eexp[k - 1] = lam[k - 1]
        key = tuple(eexp)
        out[key] = out.get(key, RatScalar.zero(mode)) + coeff
        # subtract coeff * prod e_d^{eexp_d} expanded in b monomials
        term = {(0,) * k: RatScalar.one(mode)}
        for d, e in enumerate(eexp):
            for _ in range(e):
                term = _bdict_mul(term, evals[d])
        for mon, c in term.items():
            cur = work.get(mon)
            val = (RatScalar.zero(mode) if cur is None else cur) - coeff * c
            if val.is_zero:
                work.pop(mon, None)
            else:
                work[mon] = val
    return {k2: v for k2, v in out.items() if not v.is_zero}


def _bvar_dict(k, i, mode):
    key = [0] * k
    key[i] = 1
    return {tuple(key): RatScalar.one(mode)}


def _esym_b(k, d, mode):
    out = {}
    for combo in itertools.combinations(range(k), d):
        key = [0] * k
        for i in combo:
            key[i] = 1
        out[tuple(key)] = RatScalar.one(mode)
    return out


def _bdict_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            val = c1 * c2
            cur = out.get(key)
            out[key] = val if cur is None else cur + val
    return {k: v for k, v in out.items() if not v.is_zero}


def invariant_decompose(n: int, f, mode: str = QUANTUM) -> InvariantWitness:
    """Express an invariant Laurent polynomial (MultiRat or centered
    Laurent dict) in the generating invariants; raises when the input is
    not invariant under the defining group."""
    k = row_length(n)
    if isinstance(f, MultiRat):
        if not _is_invariant_multirat(n, f, mode):
            raise ValueError("input is not invariant under the defining group")
        f = to_centered_laurent(n, f, mode)
    if n % 2 == 1:
        bpoly = _laurent_to_bpoly(f, k, mode)
        return InvariantWitness(n, mode, _bpoly_to_epoly(bpoly, k, mode))
    evens = {e: c for e, c in f.items() if all(x % 2 == 0 for x in e)}
    odds = {e: c for e, c in f.items() if all(x % 2 == 1 for x in e)}
    if len(evens) + len(odds) != len(f):
        raise ValueError("mixed-parity monomials: not invariant")
    even_part = _bpoly_to_epoly(_laurent_to_bpoly(evens, k, mode), k, mode)
    odd_part = None
    if odds:
        quotient = _divide_by_alternating(odds, k, mode)
        odd_part = _bpoly_to_epoly(_laurent_to_bpoly(quotient, k, mode), k, mode)
    return InvariantWitness(n, mode, even_part, odd_part)


def _is_invariant_multirat(n, f, mode) -> bool:
    gens = sign_pair_generators(n, mode)
    k = row_length(n)
    for j in range(1, k):
        gens.append((f"swap[{j},{j + 1}]", WeylGroupElement.transposition(n, mode, j)))
    return all(weyl_act(g, f) == f for _, g in gens)


def _divide_by_alternating(odds: dict, k: int, mode: str) -> dict:
    """Exact division of an all-odd-exponent Laurent dict by the
    alternating product, variable by variable."""
    cur = odds
    for var in range(k):
        if mode == QUANTUM:
            # divide by z_var - z_var^-1: multiply by z, divide by z^2 - 1
            shifted = {}
            for e, c in cur.items():
                key = list(e)
                key[var] += 1
                shifted[tuple(key)] = c
            cur = _divide_univariate(shifted, var, k, mode)
        else:
            nxt = {}
            for e, c in cur.items():
                if e[var] < 1:
                    raise ValueError("not divisible by the alternating product")
                key = list(e)
                key[var] -= 1
                nxt[tuple(key)] = c
            cur = nxt
    return cur


def _divide_univariate(f: dict, var: int, k: int, mode: str) -> dict:
    """Divide by (z_var^2 - 1), exactly."""
    groups = {}
    for e, c in f.items():
        rest = e[:var] + e[var + 1:]
        groups.setdefault(rest, {})[e[var]] = c
    out = {}
    for rest, laurent in groups.items():
        lo = min(laurent)
        hi = max(laurent)
        quot = {}
        carry = dict(laurent)
        for e in range(hi, lo + 1, -1):
            c = carry.get(e)
            if c is None or c.is_zero:
                continue
            quot[e - 2] = c
            carry.pop(e)
            prev = carry.get(e - 2)
            newv = c if prev is None else prev + c
            if newv.is_zero:
                carry.pop(e - 2, None)
            else:
                carry[e - 2] = newv
        if any(not v.is_zero for v in carry.values()):
            raise ValueError("not divisible by the alternating product")
        for e, c in quot.items():
            key = rest[:var] + (e,) + rest[var:]
            out[key] = c
    return out


def defining_group_elements(n: int, mode: str):
    """Every element of the defining signed-permutation group."""
    k = row_length(n)
    width = 2 if mode == QUANTUM else 1
    sign_opts = list(itertools.product((0, 1), repeat=width))
    for signs in itertools.product(sign_opts, repeat=k):
        w0 = WeylGroupElement(n, mode, signs)
        if not w0.in_defining_group():
            continue
        for perm in itertools.permutations(range(k)):
            yield WeylGroupElement(n, mode, signs, perm)


def ldict_weyl_apply(w: WeylGroupElement, f: dict) -> dict:
    """The group action on centered Laurent dictionaries (monomial action)."""
    k = row_length(w.n)
    out = {}
    for exps, c in f.items():
        new = [0] * k
        sign = 1
        for j in range(k):
            e = exps[j]
            tgt = w.perm[j]
            if w.mode == QUANTUM:
                a, b = w.signs[j]
                new[tgt] = -e if a else e
                if b and e % 2:
                    sign = -sign
            else:
                (a,) = w.signs[j]
                new[tgt] = e  # classical negation keeps the exponent
                if a and e % 2:
                    sign = -sign
        key = tuple(new)
        val = c if sign > 0 else -c
        cur = out.get(key)
        tot = val if cur is None else cur + val
        if tot.is_zero:
            out.pop(key, None)
        else:
            out[key] = tot
    return out


def random_invariant(n: int, mode: str, rng) -> dict | None:
    """A random invariant centered Laurent dictionary, by symmetrizing a
    random Laurent polynomial over the whole defining group."""
    k = row_length(n)
    raw = {}
    for _ in range(3):
        if mode == QUANTUM:
            exps = tuple(rng.randrange(-2, 3) for _ in range(k))
        else:
            exps = tuple(rng.randrange(0, 4) for _ in range(k))
        raw[exps] = RatScalar.from_rational(mode, rng.randrange(1, 5))
    total = {}
    for w in defining_group_elements(n, mode):
        total = _ldict_add(total, ldict_weyl_apply(w, raw))
    return total or None


# -- consistency with the generic modules --------------------------------------


def casimir_scalar_action_check(n: int, d: int, mode: str = QUANTUM) -> bool:
    """The image acts diagonally on the formal base vector with the
    symbolic eigenvalue: both facts checked through the shift-operator
    dictionary."""
    from .skew import SkewAlgebra

    alg = SkewAlgebra(n, mode)
    calc = GenericCalculus(n, mode)
    img = phi_casimir(n, d, mode)
    el = alg.from_coeff(img)
    out = el.apply_to_formal(calc.base_vector())
    if set(out.terms) != {(0,) * calc.N}:
        return False
    got = out.terms[(0,) * calc.N]
    if got.used_vars() - {calc.ctx.var_index[(n, j)] for j in range(1, row_length(n) + 1)}:
        return False
    return got == casimir_eigenvalue_symbolic(n, d, mode)
