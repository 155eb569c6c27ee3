"""Multivariate exact rational functions over shift variables.

Everything this library manipulates symbolically is built from q-numbers
of linear forms in pattern entries: with z_v = q^(m_v), a form
L = sum(e_v * m_v) + c turns into the two-term Laurent polynomial
q^L - q^(-L) (or q^L + q^(-L)).  A MultiRat keeps these building blocks
*factored*:

    value = scalar * X^unit * prod(num_atoms) * num_poly
            -----------------------------------------
                    prod(den_atoms) * den_poly

where X^unit is a Laurent monomial over the ring generators and every
atom is interned as a two-term polynomial (quantum) or a linear
polynomial (classical).  Products never expand; sums expand only the
factors the summands do not share.  The zero test is exact: a value is
zero iff its numerator polynomial is zero, and denominators stay
nonzero by construction, so no gcd computations are ever required for
correctness.

Quantum mode works over Q(i)(t, z_1, ..., z_N) with t = q^(1/2);
classical mode over Q(i)(x_1, ..., x_N).
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ_I
from sympy.polys.rings import ring

from .halfint import HalfInt
from .scalars import CLASSICAL, QUANTUM, RatScalar, gaussian

_ONE = QQ_I(1, 0)
_ZERO = QQ_I(0, 0)

MINUS = 0  # q^L - q^(-L)
PLUS = 1  # q^L + q^(-L)
LIN = 2  # the linear form itself (classical)


class DenominatorVanishes(ZeroDivisionError):
    """A substitution annihilated a denominator factor."""

    def __init__(self, factor: str):
        super().__init__(f"denominator factor vanishes: {factor}")
        self.factor = factor


KERNEL_STATS = {"max_poly_terms": 0, "division_calls": 0}


def reset_kernel_stats():
    KERNEL_STATS["max_poly_terms"] = 0
    KERNEL_STATS["division_calls"] = 0


def kernel_stats_snapshot() -> dict:
    return dict(KERNEL_STATS)


def _observe_poly(p):
    n = len(p)
    if n > KERNEL_STATS["max_poly_terms"]:
        KERNEL_STATS["max_poly_terms"] = n


class LinForm:
    """A linear form sum(e_v * m_v) + c with integer e_v and half-integer c."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs, const=0):
        cleaned = tuple(sorted((v, e) for v, e in dict(coeffs).items() if e))
        self.coeffs = cleaned
        self.const = const if isinstance(const, Fraction) else Fraction(const)

    @staticmethod
    def var(v, e=1, const=0) -> "LinForm":
        return LinForm({v: e}, const)

    @staticmethod
    def constant(c) -> "LinForm":
        return LinForm({}, c)

    def __add__(self, other):
        if isinstance(other, LinForm):
            d = dict(self.coeffs)
            for v, e in other.coeffs:
                d[v] = d.get(v, 0) + e
            return LinForm(d, self.const + other.const)
        return LinForm(dict(self.coeffs), self.const + Fraction(other))

    def __sub__(self, other):
        return self + (-other if isinstance(other, LinForm) else -Fraction(other))

    def __neg__(self):
        return LinForm({v: -e for v, e in self.coeffs}, -self.const)

    def __mul__(self, k: int):
        return LinForm({v: e * k for v, e in self.coeffs}, self.const * k)

    __rmul__ = __mul__

    def shifted(self, d) -> "LinForm":
        return LinForm(dict(self.coeffs), self.const + Fraction(d))

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def evaluate(self, values) -> Fraction:
        acc = self.const
        for v, e in self.coeffs:
            acc += e * Fraction(values[v])
        return acc

    def describe(self, ctx) -> str:
        parts = []
        for v, e in self.coeffs:
            name = ctx.var_name(v)
            if e == 1:
                parts.append(f"+{name}")
            elif e == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{e:+d}*{name}")
        if self.const or not parts:
            parts.append(f"{self.const:+}")
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def __eq__(self, other):
        return self.coeffs == other.coeffs and self.const == other.const

    def __hash__(self):
        return hash((self.coeffs, self.const))

    def __repr__(self):
        return f"LinForm({self.coeffs}, {self.const})"


class FieldContext:
    """Variable table plus the sympy polynomial ring backing one mode."""

    def __init__(self, mode: str, var_labels):
        if mode not in (QUANTUM, CLASSICAL):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.var_labels = tuple(var_labels)
        self.var_index = {lab: i for i, lab in enumerate(self.var_labels)}
        if len(self.var_index) != len(self.var_labels):
            raise ValueError("duplicate variable labels")
        prefix = "z" if mode == QUANTUM else "x"
        names = [_gen_name(prefix, lab) for lab in self.var_labels]
        if mode == QUANTUM:
            names = ["t"] + names
        self.ngens = len(names)
        self.ring = ring(",".join(names), QQ_I)[0] if names else None
        if self.ring is None:
            # classical context with no variables still needs a ring for polys
            self.ring = ring("x_dummy", QQ_I)[0]
            self.ngens = 1
            self._dummy = True
        else:
            self._dummy = False
        self._zero_unit = (0,) * self.ngens
        self._atom_cache = {}

    @property
    def nvars(self) -> int:
        return len(self.var_labels)

    def var_name(self, v: int) -> str:
        prefix = "z" if self.mode == QUANTUM else "x"
        return _gen_name(prefix, self.var_labels[v])

    def gen_of_var(self, v: int) -> int:
        return v + 1 if self.mode == QUANTUM else v

    # -- atoms ---------------------------------------------------------

    def _atom(self, kind: int, wvec: tuple):
        """Interned atom polynomial and its Laurent unit correction."""
        key = (kind, wvec)
        hit = self._atom_cache.get(key)
        if hit is not None:
            return hit
        R = self.ring
        if kind == LIN:
            d = {}
            const = Fraction(wvec[-1])
            for v, e in wvec[0]:
                mon = [0] * self.ngens
                mon[self.gen_of_var(v)] = 1
                d[tuple(mon)] = QQ_I.new(e, 0)
            if const:
                d[self._zero_unit] = gaussian(const)
            poly = R.from_dict(d)
            unit = self._zero_unit
        else:
            up = tuple(2 * w if w > 0 else 0 for w in wvec)
            dn = tuple(-2 * w if w < 0 else 0 for w in wvec)
            head = R.from_dict({up: _ONE})
            tail = R.from_dict({dn: _ONE})
            poly = head + tail if kind == PLUS else head - tail
            unit = tuple(-abs(w) for w in wvec)
        self._atom_cache[key] = (poly, unit)
        return poly, unit

    def atom_key(self, kind: int, form: LinForm):
        """Canonical (key, sign) for an atom; key None when degenerate.

        For a degenerate classical form the second slot carries its
        constant value instead of a sign.
        """
        if self.mode == CLASSICAL:
            if form.is_constant:
                return None, form.const  # degenerate: plain number
            sign = 1
            if form.coeffs[0][1] < 0:
                form = -form
                sign = -1
            return (LIN, (form.coeffs, form.const)), sign
        # exponent vector of q^form over (t, z...): t exponent 2c, z_v exponent e_v
        vec = [0] * self.ngens
        twoc = 2 * form.const
        if twoc.denominator != 1:
            raise ValueError(f"non half-integer constant in {form!r}")
        vec[0] = int(twoc)
        for v, e in form.coeffs:
            vec[v + 1] = e
        if not any(vec):
            return None, None  # [0]-type degeneracy, caller decides
        sign = 1
        for w in vec:
            if w:
                if w < 0:
                    vec = [-x for x in vec]
                    sign = -1
                break
        return (kind, tuple(vec)), sign

    def describe_atom(self, key) -> str:
        kind = key[0]
        if kind == LIN:
            coeffs, const = key[1]
            return LinForm(dict(coeffs), const).describe(self)
        vec = key[1]
        form = LinForm({v: e for v, e in enumerate(vec[1:]) if e}, Fraction(vec[0], 2))
        op = "-" if kind == MINUS else "+"
        d = form.describe(self)
        return f"q^({d}) {op} q^-({d})"

    # -- constructors ----------------------------------------------------

    def zero(self) -> "MultiRat":
        return MultiRat(self, _ZERO, self._zero_unit, {}, self.ring.one, {}, self.ring.one)

    def one(self) -> "MultiRat":
        return self.from_scalar(1)

    def from_scalar(self, x, im=0) -> "MultiRat":
        g = x if not isinstance(x, (int, Fraction)) else gaussian(Fraction(x), Fraction(im))
        return MultiRat(self, g, self._zero_unit, {}, self.ring.one, {}, self.ring.one)

    def imag(self) -> "MultiRat":
        return self.from_scalar(0, 1)

    def q_monomial(self, form: LinForm) -> "MultiRat":
        """q^form as a value: t^(2c) * prod z^e (quantum); classical forbidden."""
        if self.mode == CLASSICAL:
            raise ValueError("q_monomial has no classical meaning")
        unit = [0] * self.ngens
        twoc = 2 * form.const
        unit[0] = int(twoc)
        for v, e in form.coeffs:
            unit[v + 1] = e
        return MultiRat(self, _ONE, tuple(unit), {}, self.ring.one, {}, self.ring.one)

    def _half_atom(self, kind: int, form: LinForm):
        """(q^form -/+ q^-form) as a MultiRat, or a scalar when degenerate."""
        if self.mode == CLASSICAL:
            raise ValueError("internal: quantum only")
        key, sign = self.atom_key(kind, form)
        if key is None:
            return self.zero() if kind == MINUS else self.from_scalar(2)
        _, unit = self._atom(kind, key[1])
        scal = _ONE if (sign > 0 or kind == PLUS) else -_ONE
        return MultiRat(self, scal, unit, {key: 1}, self.ring.one, {}, self.ring.one)

    def qnum(self, form: LinForm) -> "MultiRat":
        """[form] = (q^form - q^-form)/(q - q^-1); form itself classically."""
        if self.mode == CLASSICAL:
            key, info = self.atom_key(LIN, form)
            if key is None:
                return self.from_scalar(info)  # degenerate: the constant value
            scal = _ONE if info > 0 else -_ONE
            return MultiRat(self, scal, self._zero_unit, {key: 1}, self.ring.one, {}, self.ring.one)
        num = self._half_atom(MINUS, form)
        den = self._half_atom(MINUS, LinForm.constant(1))
        return num / den

    def qnum_shifted(self, v: int, k) -> "MultiRat":
        """[m_v + k] as a function of the shift variable for pattern entry v."""
        return self.qnum(LinForm.var(v, 1, k))

    def inv_plus(self, form: LinForm) -> "MultiRat":
        """1/(q^form + q^-form)  (the combined value of [form]/[2*form]); 1/2 classically."""
        if self.mode == CLASSICAL:
            return self.from_scalar(Fraction(1, 2))
        return self.one() / self._half_atom(PLUS, form)

    def var_value(self, v: int) -> "MultiRat":
        """The variable itself: z_v (quantum) or x_v (classical)."""
        if self.mode == QUANTUM:
            return self.q_monomial(LinForm.var(v))
        key, sign = self.atom_key(LIN, LinForm.var(v))
        return MultiRat(self, _ONE, self._zero_unit, {key: 1}, self.ring.one, {}, self.ring.one)


def _gen_name(prefix: str, label) -> str:
    if isinstance(label, tuple):
        return prefix + "_".join(str(x) for x in label)
    return f"{prefix}{label}"


def _counter_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


def _counter_cancel(num: dict, den: dict):
    """Remove atoms present on both sides."""
    for k in list(num):
        if k in den:
            m = min(num[k], den[k])
            num[k] -= m
            den[k] -= m
            if not num[k]:
                del num[k]
            if not den[k]:
                del den[k]


class MultiRat:
    """Element of the rational function field; see module docstring."""

    __slots__ = ("ctx", "scalar", "unit", "num_atoms", "num_poly", "den_atoms", "den_poly")

    def __init__(self, ctx, scalar, unit, num_atoms, num_poly, den_atoms, den_poly):
        self.ctx = ctx
        if scalar == _ZERO or not num_poly:
            self.scalar = _ZERO
            self.unit = ctx._zero_unit
            self.num_atoms = {}
            self.num_poly = ctx.ring.one
            self.den_atoms = {}
            self.den_poly = ctx.ring.one
        else:
            self.scalar = scalar
            self.unit = unit
            self.num_atoms = num_atoms
            self.num_poly = num_poly
            self.den_atoms = den_atoms
            self.den_poly = den_poly

    # -- predicates ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.scalar == _ZERO

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.from_scalar(other)
        if not isinstance(other, MultiRat):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        raise TypeError("MultiRat is not hashable")

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiRat):
            if other.ctx is not self.ctx:
                raise ValueError("context mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_scalar(other)
        if isinstance(other, HalfInt):
            return self.ctx.from_scalar(other.as_fraction())
        return None

    def __neg__(self):
        return MultiRat(self.ctx, -self.scalar, self.unit, self.num_atoms,
                        self.num_poly, self.den_atoms, self.den_poly)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return self.ctx.zero()
        num = _counter_add(self.num_atoms, o.num_atoms)
        den = _counter_add(self.den_atoms, o.den_atoms)
        _counter_cancel(num, den)
        R = self.ctx.ring
        np_, dp = self.num_poly, self.den_poly
        onp, odp = o.num_poly, o.den_poly
        # cheap cross cancellations before multiplying polys
        if np_ == odp and len(np_) > 1:
            np_, odp = R.one, R.one
        if onp == dp and len(onp) > 1:
            onp, dp = R.one, R.one
        num_poly = onp if np_.is_one else np_ if onp.is_one else np_ * onp
        den_poly = odp if dp.is_one else dp if odp.is_one else dp * odp
        out = MultiRat(self.ctx, self.scalar * o.scalar,
                       tuple(u + v for u, v in zip(self.unit, o.unit)),
                       num, num_poly, den, den_poly)
        if len(out.num_poly) > 1 and (out.den_atoms or len(out.den_poly) > 1):
            out = out._cancel_poly()
        return out

    __rmul__ = __mul__

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        ctx = self.ctx
        R = ctx.ring
        # common denominator
        den = {}
        for k in set(self.den_atoms) | set(o.den_atoms):
            den[k] = max(self.den_atoms.get(k, 0), o.den_atoms.get(k, 0))
        same_dp = self.den_poly == o.den_poly
        den_poly = self.den_poly if same_dp else self.den_poly * o.den_poly
        # shared numerator factors stay unexpanded
        common = {}
        for k in set(self.num_atoms) & set(o.num_atoms):
            m = min(self.num_atoms[k], o.num_atoms[k])
            if m:
                common[k] = m
        unit = tuple(min(u, v) for u, v in zip(self.unit, o.unit))

        def side(x, cross_dp):
            p = x.num_poly
            for k, c in x.num_atoms.items():
                extra = c - common.get(k, 0)
                if extra:
                    ap = ctx._atom(k[0], k[1])[0]
                    for _ in range(extra):
                        p = p * ap
            for k, c in den.items():
                extra = c - x.den_atoms.get(k, 0)
                if extra:
                    ap = ctx._atom(k[0], k[1])[0]
                    for _ in range(extra):
                        p = p * ap
            if cross_dp is not None:
                p = p * cross_dp
            mono = tuple(u - v for u, v in zip(x.unit, unit))
            p = _mono_mul(p, R.from_dict({mono: _ONE}))
            return p.mul_ground(x.scalar)

        pa = side(self, None if same_dp else o.den_poly)
        pb = side(o, None if same_dp else self.den_poly)
        total = pa + pb
        out = MultiRat(ctx, _ONE, unit, common, total, den, den_poly)
        if out.is_zero:
            return ctx.zero()
        return out._cancel_poly()._normalize_unit()

    __radd__ = __add__

    @staticmethod
    def sum_values(ctx, values) -> "MultiRat":
        """Sum a list of values with a single common-factor extraction and
        one expansion per summand (much cheaper than folding +)."""
        vals = [v for v in values if not v.is_zero]
        if not vals:
            return ctx.zero()
        if len(vals) == 1:
            return vals[0]
        R = ctx.ring
        den = {}
        for x in vals:
            for k, c in x.den_atoms.items():
                if den.get(k, 0) < c:
                    den[k] = c
        den_polys = [x.den_poly for x in vals]
        first_dp = den_polys[0]
        same_dp = all(dp == first_dp for dp in den_polys)
        if not same_dp:
            out = vals[0]
            for x in vals[1:]:
                out = out + x
            return out
        common = dict(vals[0].num_atoms)
        for x in vals[1:]:
            for k in list(common):
                m = x.num_atoms.get(k, 0)
                if m < common[k]:
                    if m:
                        common[k] = m
                    else:
                        del common[k]
            if not common:
                break
        unit = list(vals[0].unit)
        for x in vals[1:]:
            for i, u in enumerate(x.unit):
                if u < unit[i]:
                    unit[i] = u
        unit = tuple(unit)
        total = R.zero
        for x in vals:
            p = x.num_poly
            for k, c in x.num_atoms.items():
                extra = c - common.get(k, 0)
                if extra:
                    ap = ctx._atom(k[0], k[1])[0]
                    for _ in range(extra):
                        p = p * ap
            for k, c in den.items():
                extra = c - x.den_atoms.get(k, 0)
                if extra:
                    ap = ctx._atom(k[0], k[1])[0]
                    for _ in range(extra):
                        p = p * ap
            mono = tuple(u - v for u, v in zip(x.unit, unit))
            if any(mono):
                p = p * R.from_dict({mono: _ONE})
            _observe_poly(p)
            total = total + p.mul_ground(x.scalar)
        out = MultiRat(ctx, _ONE, unit, common, total, den, first_dp)
        if out.is_zero:
            return ctx.zero()
        return out._cancel_poly()._normalize_unit()

    @staticmethod
    def sum_values_tree(ctx, values) -> "MultiRat":
        """Balanced summation for long, locally-similar term lists: adjacent
        entries (which share the most factors) merge first, so the common
        extraction in sum_values sees maximal sharing at every level."""
        vals = [v for v in values if not v.is_zero]
        while len(vals) > 1:
            nxt = []
            for i in range(0, len(vals) - 1, 2):
                nxt.append(MultiRat.sum_values(ctx, [vals[i], vals[i + 1]]))
            if len(vals) % 2:
                nxt.append(vals[-1])
            vals = [v for v in nxt if not v.is_zero]
        return vals[0] if vals else ctx.zero()

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def inverse(self) -> "MultiRat":
        if self.is_zero:
            raise ZeroDivisionError("inverting zero")
        return MultiRat(self.ctx, _ONE / self.scalar, tuple(-u for u in self.unit),
                        dict(self.den_atoms), self.den_poly,
                        dict(self.num_atoms), self.num_poly)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- normalization helpers ----------------------------------------------

    def _cancel_poly(self) -> "MultiRat":
        """Divide num_poly by denominator factors when evenly possible.

        Candidates are screened by degree bounds and by exact division of
        a modular univariate restriction, so failing candidates cost one
        linear pass over the numerator instead of a full division."""
        np_ = self.num_poly
        den = dict(self.den_atoms)
        changed = False
        screen = None
        for k in list(den):
            ap = self.ctx._atom(k[0], k[1])[0]
            while den.get(k, 0) > 0:
                if screen is None:
                    screen = _DivisionScreen(np_)
                if not screen.may_divide(ap):
                    break
                q = _exquo_sparse(np_, ap)
                if q is None:
                    break
                np_ = q
                screen = None
                den[k] -= 1
                changed = True
                if not den[k]:
                    del den[k]
        dp = self.den_poly
        if not dp.is_one:
            q = _exquo_sparse(np_, dp)
            if q is not None:
                np_ = q
                dp = self.ctx.ring.one
                changed = True
        if not changed:
            return self
        return MultiRat(self.ctx, self.scalar, self.unit, self.num_atoms, np_, den, dp)

    def _normalize_unit(self) -> "MultiRat":
        """Pull the monomial content of num_poly into the unit (quantum only)."""
        if self.ctx.mode == CLASSICAL:
            return self
        p = self.num_poly
        if len(p) == 0 or p.is_ground:
            return self
        monoms = list(p.monoms())
        mins = [min(m[i] for m in monoms) for i in range(self.ctx.ngens)]
        if not any(mins):
            return self
        R = self.ctx.ring
        shift = R.from_dict({tuple(mins): _ONE})
        p = p.exquo(shift)
        unit = tuple(u + m for u, m in zip(self.unit, mins))
        return MultiRat(self.ctx, self.scalar, unit, self.num_atoms, p, self.den_atoms, self.den_poly)

    # -- substitution ---------------------------------------------------------

    def transform(self, subs: dict) -> "MultiRat":
        """Apply m_v -> scale*m_target + shift (and an optional sign on z_v).

        subs maps a variable index to (target, scale, shift, sign) where
        target may be None (constant substitution), scale is an integer,
        shift a half-integer Fraction, and sign +-1 (quantum flip z -> -z).
        Variables absent from subs are untouched.
        """
        if self.is_zero:
            return self
        ctx = self.ctx
        unit, usign = _transform_monomial(ctx, self.unit, subs)
        scal = self.scalar if usign > 0 else -self.scalar
        out = MultiRat(ctx, scal, unit, {}, ctx.ring.one, {}, ctx.ring.one)

        # atom parts
        for source, target_is_num in ((self.num_atoms, True), (self.den_atoms, False)):
            for key, count in source.items():
                piece = self._transform_atom(key, subs)
                if piece.is_zero:
                    if target_is_num:
                        return ctx.zero()
                    raise DenominatorVanishes(ctx.describe_atom(key))
                piece = piece ** count
                out = out * (piece if target_is_num else piece.inverse())

        # general polynomial parts
        np_t = _transform_poly(ctx, self.num_poly, subs)
        dp_t = _transform_poly(ctx, self.den_poly, subs)
        if not dp_t.poly:
            raise DenominatorVanishes("polynomial denominator")
        if not np_t.poly:
            return ctx.zero()
        if not (np_t.poly == ctx.ring.one and not any(np_t.unit)):
            out = out * MultiRat(ctx, _ONE, np_t.unit, {}, np_t.poly, {}, ctx.ring.one)
        if not (dp_t.poly == ctx.ring.one and not any(dp_t.unit)):
            out = out * MultiRat(ctx, _ONE, dp_t.unit, {}, dp_t.poly, {}, ctx.ring.one).inverse()
        if out.is_zero:
            return ctx.zero()
        return out._normalize_unit()

    def _transform_atom(self, key, subs) -> "MultiRat":
        """Transform a stored atom polynomial (with its unit already folded out)."""
        ctx = self.ctx
        kind = key[0]
        if kind == LIN:
            coeffs, const = key[1]
            newform, s = _transform_form(LinForm(dict(coeffs), const), subs)
            res = ctx.qnum(newform)
            return res * s if s < 0 else res
        vec = key[1]
        form = LinForm({v: e for v, e in enumerate(vec[1:]) if e}, Fraction(vec[0], 2))
        newform, s_l = _transform_form(form, subs)
        # stored polynomial = (q^form -/+ q^-form) * X^{|w|}; transform both factors
        absw = tuple(abs(w) for w in vec)
        u_exps, s_u = _transform_monomial(ctx, absw, subs)
        res = ctx._half_atom(kind, newform)
        if res.is_zero:
            return res
        if any(u_exps):
            res = res * MultiRat(ctx, _ONE, u_exps, {}, ctx.ring.one, {}, ctx.ring.one)
        s = s_l * s_u
        return res * s if s < 0 else res

    def shift_vars(self, shifts: dict) -> "MultiRat":
        """m_v -> m_v + shifts[v]; the workhorse for twists and shifted bases."""
        subs = {v: (v, 1, Fraction(d), 1) for v, d in shifts.items() if d}
        if not subs:
            return self
        return self.transform(subs)

    def substitute_values(self, values: dict) -> "MultiRat":
        """Bind pattern entries m_v to exact half-integer/rational values."""
        subs = {v: (None, 0, Fraction(val.as_fraction() if isinstance(val, HalfInt) else val), 1)
                for v, val in values.items()}
        return self.transform(subs)

    def evaluate(self, values: dict) -> RatScalar:
        """Fully bind every variable this value involves; collapse to a scalar."""
        res = self.substitute_values(values)
        return res.as_scalar()

    def used_vars(self) -> set:
        """Indices of pattern variables the value actually depends on."""
        ctx = self.ctx
        used = set()
        if ctx.mode == QUANTUM:
            for v in range(ctx.nvars):
                if self.unit[v + 1]:
                    used.add(v)
        for atoms in (self.num_atoms, self.den_atoms):
            for key in atoms:
                if key[0] == LIN:
                    used.update(v for v, _ in key[1][0])
                else:
                    used.update(v for v, e in enumerate(key[1][1:]) if e)
        for poly in (self.num_poly, self.den_poly):
            for mon in poly.monoms():
                for v in range(ctx.nvars):
                    if mon[ctx.gen_of_var(v)]:
                        used.add(v)
        return used

    def as_scalar(self) -> RatScalar:
        """Convert a variable-free value to a RatScalar."""
        if self.used_vars():
            raise ValueError("value still depends on pattern variables")
        ctx = self.ctx
        if self.is_zero:
            return RatScalar.zero(ctx.mode)
        if ctx.mode == CLASSICAL:
            num = _ground_value(self.num_poly)
            den = _ground_value(self.den_poly)
            acc = RatScalar(CLASSICAL, self.scalar * num, den)
            return acc
        num, den = self.expanded()
        nuni = _to_univariate(num)
        duni = _to_univariate(den)
        return RatScalar(QUANTUM, nuni, duni)

    # -- expansion & display -----------------------------------------------

    def expanded(self):
        """(num, den) as honest expanded PolyElements (no negative powers)."""
        ctx = self.ctx
        R = ctx.ring
        num = self.num_poly.mul_ground(self.scalar)
        for k, c in self.num_atoms.items():
            ap = ctx._atom(k[0], k[1])[0]
            for _ in range(c):
                num = num * ap
        den = self.den_poly
        for k, c in self.den_atoms.items():
            ap = ctx._atom(k[0], k[1])[0]
            for _ in range(c):
                den = den * ap
        pos = tuple(max(u, 0) for u in self.unit)
        neg = tuple(max(-u, 0) for u in self.unit)
        if any(pos):
            num = _mono_mul(num, R.from_dict({pos: _ONE}))
        if any(neg):
            den = _mono_mul(den, R.from_dict({neg: _ONE}))
        return num, den

    def serialize(self) -> str:
        num, den = self.expanded()
        return f"({num})/({den})"

    def __repr__(self):
        if self.is_zero:
            return "MultiRat(0)"
        return f"MultiRat({self.serialize()})"


class _PolyWithUnit:
    """Transformed polynomial together with a Laurent monomial correction."""

    __slots__ = ("poly", "unit")

    def __init__(self, ctx, poly, unit):
        self.poly = poly
        self.unit = unit


def _transform_form(form: LinForm, subs) -> tuple:
    """Substituted linear form plus the sign picked up from z -> -z flips."""
    d = {}
    const = form.const
    sign = 1
    for v, e in form.coeffs:
        if v in subs:
            tgt, scale, shift, sgn = subs[v]
            if sgn < 0 and e % 2:
                sign = -sign
            const += e * Fraction(shift)
            if tgt is not None and scale:
                d[tgt] = d.get(tgt, 0) + e * scale
        else:
            d[v] = d.get(v, 0) + e
    return LinForm(d, const), sign


def _transform_monomial(ctx, exps, subs) -> tuple:
    """Transform a Laurent monomial given by exponents over the ring gens."""
    if ctx.mode == CLASSICAL:
        return tuple(exps), 1  # classical units never involve pattern variables
    out = [0] * ctx.ngens
    texp = Fraction(exps[0])
    sign = 1
    for v in range(ctx.nvars):
        e = exps[v + 1]
        if not e:
            continue
        if v in subs:
            tgt, scale, shift, sgn = subs[v]
            if sgn < 0 and e % 2:
                sign = -sign
            texp += 2 * Fraction(shift) * e
            if tgt is not None and scale:
                out[tgt + 1] += scale * e
        else:
            out[v + 1] += e
    if texp.denominator != 1:
        raise ValueError("substitution shift must be a half-integer")
    out[0] = int(texp)
    return tuple(out), sign


def _mono_mul(a, b):
    return a * b


def _max_degrees(poly):
    monoms = list(poly.monoms())
    if not monoms:
        return [0] * poly.ring.ngens
    return [max(m[i] for m in monoms) for i in range(poly.ring.ngens)]


_SCREEN_PRIME = 1000000009  # 1 mod 4, so a square root of -1 exists


def _find_imag_unit(p):
    for g in range(2, 100):
        if pow(g, (p - 1) // 2, p) == p - 1:
            return pow(g, (p - 1) // 4, p)
    raise RuntimeError("no quadratic nonresidue found")


_SCREEN_IMAG = _find_imag_unit(_SCREEN_PRIME)
assert (_SCREEN_IMAG * _SCREEN_IMAG + 1) % _SCREEN_PRIME == 0
_SCREEN_POINTS = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class _DivisionScreen:
    """Cheap necessary conditions for exact division of a fixed numerator.

    Keeps the numerator's degree bounds plus its restriction to the first
    ring variable with all other variables evaluated at fixed points mod a
    prime.  A candidate divisor passes only if the degree bounds fit and
    the restricted univariate division is exact (mod p), so failing
    candidates are rejected in O(divisor) after the one-time O(numerator)
    setup."""

    __slots__ = ("poly", "degs", "uni", "degenerate")

    def __init__(self, poly):
        self.poly = poly
        self.degs = _max_degrees(poly)
        self.uni = None
        self.degenerate = False
        try:
            self.uni = _restrict_mod(poly)
        except _ScreenDegenerate:
            self.degenerate = True

    def may_divide(self, ap) -> bool:
        if any(d > m for d, m in zip(_max_degrees(ap), self.degs)):
            return False
        if self.degenerate or self.uni is None:
            return True
        try:
            pap = _restrict_mod(ap)
        except _ScreenDegenerate:
            return True
        if len(pap) < 2:
            return True  # restriction collapsed; inconclusive
        return _uni_divides_mod(self.uni, pap)


class _ScreenDegenerate(Exception):
    pass


def _coeff_mod(c) -> int:
    # Gaussian rational -> Z/p via re + im * sqrt(-1)
    p = _SCREEN_PRIME
    xn, xd = c.x.numerator, c.x.denominator
    yn, yd = c.y.numerator, c.y.denominator
    if xd % p == 0 or yd % p == 0:
        raise _ScreenDegenerate
    val = xn * pow(xd, -1, p) + _SCREEN_IMAG * yn * pow(yd, -1, p)
    return val % p


def _restrict_mod(poly) -> dict:
    """{exponent of gen 0: coefficient mod p} after fixing the other gens."""
    p = _SCREEN_PRIME
    ngens = poly.ring.ngens
    pows = [{} for _ in range(ngens)]
    out = {}
    for mon, c in poly.terms():
        val = _coeff_mod(c)
        for g in range(1, ngens):
            e = mon[g]
            if e:
                cache = pows[g]
                pw = cache.get(e)
                if pw is None:
                    pw = pow(_SCREEN_POINTS[(g - 1) % len(_SCREEN_POINTS)], e, p)
                    cache[e] = pw
                val = val * pw % p
        k = mon[0]
        out[k] = (out.get(k, 0) + val) % p
    return {k: v for k, v in out.items() if v}


def _uni_divides_mod(f: dict, g: dict) -> bool:
    """Exact divisibility of univariate dicts over Z/p."""
    if not f:
        return True
    work = dict(f)
    exps = sorted(g, reverse=True)
    lead = exps[0]
    linv = pow(g[lead], -1, _SCREEN_PRIME)
    tail = [(e, g[e]) for e in exps[1:]]
    lo_g = exps[-1]
    while work:
        m = max(work)
        if m < lead:
            return False
        qc = work.pop(m) * linv % _SCREEN_PRIME
        for e, c in tail:
            kk = m - lead + e
            nv = (work.get(kk, 0) - qc * c) % _SCREEN_PRIME
            if nv:
                work[kk] = nv
            else:
                work.pop(kk, None)
    return True


def _exquo_sparse(f, p):
    """Exact division of a sparse polynomial by a short one, or None.

    Heap-driven long division: each reduction step removes the current
    leading monomial and inserts len(p)-1 lower ones, so the cost is
    O((|f| + |quotient|*|p|) log) instead of the quadratic leading-term
    rescans a generic division performs.
    """
    import heapq

    KERNEL_STATS["division_calls"] += 1
    if f is p:
        return f.ring.one
    if not f:
        return f.ring.zero
    terms = sorted(p.terms(), reverse=True)
    (lm, lc) = terms[0]
    tail = terms[1:]
    work = dict(f)
    heap = [tuple(-x for x in m) for m in work]
    heapq.heapify(heap)
    quo = {}
    cap = 4 * len(f) + 64  # give up on pathologically long quotients
    while heap:
        if len(quo) > cap:
            return None
        m = tuple(-x for x in heapq.heappop(heap))
        c = work.get(m)
        if not c:
            continue
        del work[m]
        qm = tuple(a - b for a, b in zip(m, lm))
        if any(x < 0 for x in qm):
            return None  # leading monomial not divisible: no exact quotient
        qc = c / lc
        quo[qm] = qc
        for (tm, tc) in tail:
            nm = tuple(a + b for a, b in zip(qm, tm))
            cur = work.get(nm)
            if cur is None:
                work[nm] = -qc * tc
                heapq.heappush(heap, tuple(-x for x in nm))
            else:
                cur = cur - qc * tc
                if cur:
                    work[nm] = cur
                else:
                    del work[nm]
    if work:
        return None
    return f.ring.from_dict(quo)


def _ground_value(poly):
    if not poly.is_ground:
        raise ValueError("not a ground polynomial")
    if not poly:
        return _ZERO
    return poly.coeff(1)


def _to_univariate(poly):
    """Project a t-only multivariate PolyElement onto the scalar t-ring."""
    from .scalars import _TRING
    d = {}
    for mon, c in poly.terms():
        if any(mon[1:]):
            raise ValueError("polynomial is not t-only")
        d[(mon[0],)] = c
    return _TRING.from_dict(d)


def _transform_poly(ctx, poly, subs) -> _PolyWithUnit:
    R = ctx.ring
    if poly.is_ground:
        return _PolyWithUnit(ctx, poly, ctx._zero_unit)
    if ctx.mode == QUANTUM:
        pure_shift = all(tgt == v and scale == 1 and sgn == 1
                         for v, (tgt, scale, shift, sgn) in subs.items())
        if pure_shift:
            # twists by plain shifts only move the t exponent: fast path
            d2 = {}
            for v, (_, _, shift, _) in subs.items():
                two_shift = 2 * Fraction(shift)
                if two_shift.denominator != 1:
                    raise ValueError("substitution shift must be a half-integer")
                d2[v + 1] = int(two_shift)
            items = sorted(d2.items())
            acc = {}
            tmin = 0
            for mon, c in poly.terms():
                dt = 0
                for g, w in items:
                    e = mon[g]
                    if e:
                        dt += w * e
                key = (mon[0] + dt,) + mon[1:]
                acc[key] = c
                if key[0] < tmin:
                    tmin = key[0]
            if tmin < 0:
                acc = {(k[0] - tmin,) + k[1:]: c for k, c in acc.items()}
            unit = (tmin,) + (0,) * (ctx.ngens - 1)
            return _PolyWithUnit(ctx, R.from_dict(acc), unit)
        acc = {}
        terms = []
        for mon, c in poly.terms():
            texp = Fraction(mon[0])
            out = [0] * ctx.ngens
            sign = 1
            for v in range(ctx.nvars):
                e = mon[v + 1]
                if not e:
                    continue
                if v in subs:
                    tgt, scale, shift, sgn = subs[v]
                    if sgn < 0 and e % 2:
                        sign = -sign
                    texp += 2 * Fraction(shift) * e
                    if tgt is not None and scale:
                        out[tgt + 1] += scale * e
                else:
                    out[v + 1] += e
            if texp.denominator != 1:
                raise ValueError("substitution shift must be a half-integer")
            out[0] = int(texp)
            terms.append((tuple(out), c if sign > 0 else -c))
        mins = [min(t[0][i] for t in terms) for i in range(ctx.ngens)]
        mins = [min(m, 0) for m in mins]
        for mon, c in terms:
            key = tuple(m - lo for m, lo in zip(mon, mins))
            acc[key] = acc.get(key, _ZERO) + c
        newpoly = R.from_dict({k: v for k, v in acc.items() if v != _ZERO})
        return _PolyWithUnit(ctx, newpoly, tuple(mins))
    # classical: simultaneous substitution, expanding term by term
    repls = {}
    pow_cache = {}
    for v, (tgt, scale, shift, sign) in subs.items():
        repl = R.zero
        if tgt is not None and scale:
            repl = R.from_dict({tuple(1 if i == ctx.gen_of_var(tgt) else 0
                                      for i in range(ctx.ngens)): QQ_I.new(scale, 0)})
        if shift:
            repl = repl + R.from_dict({ctx._zero_unit: gaussian(Fraction(shift))})
        repls[ctx.gen_of_var(v)] = repl
        pow_cache[ctx.gen_of_var(v)] = {0: R.one, 1: repl}

    def repl_pow(g, k):
        cache = pow_cache[g]
        if k not in cache:
            cache[k] = cache[k - 1] * cache[1]
        return cache[k]

    acc = R.zero
    for mon, c in poly.terms():
        rest = tuple(0 if g in repls else m for g, m in enumerate(mon))
        term = R.from_dict({rest: c})
        for g, k in enumerate(mon):
            if k and g in repls:
                term = term * repl_pow(g, k)
        acc = acc + term
    return _PolyWithUnit(ctx, acc, ctx._zero_unit)
