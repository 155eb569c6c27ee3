"""Exact coefficient scalars.

Two modes share one interface:

* quantum  -- elements of Q(i)(t) where t = q^(1/2), kept as reduced
              fractions of polynomials in t (t is the only radical-free
              way to write q^b for half-integer b: q^b = t^(2b)).
* classical -- Gaussian rationals (the q -> 1 limit, where the q-number
              [b] degenerates to b).

Canonical form: numerator and denominator coprime, denominator monic,
so equality of values is equality of representations.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.rings import ring

from .halfint import HalfInt

QUANTUM = "quantum"
CLASSICAL = "classical"

_TRING, _T = ring("t", QQ_I)

I_UNIT = QQ_I(0, 1)


def gaussian(re, im=0) -> "QQ_I.dtype":
    """Gaussian rational a + b*i from ints/Fractions."""
    re = Fraction(re)
    im = Fraction(im)
    return QQ_I.new(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def _tpow(k: int):
    """t**k for k >= 0 as a polynomial."""
    return _TRING.from_dict({(k,): QQ_I(1, 0)})


class RatScalar:
    """Reduced fraction over Q(i)[t] (quantum) or a Gaussian rational (classical)."""

    __slots__ = ("mode", "num", "den")

    def __init__(self, mode, num, den=None, _normalized=False):
        self.mode = mode
        if mode == CLASSICAL:
            self.num = num  # QQ_I element
            self.den = den if den is not None else QQ_I(1, 0)
            if self.den == QQ_I(0, 0):
                raise ZeroDivisionError("zero denominator")
            if not _normalized:
                self.num = self.num / self.den
                self.den = QQ_I(1, 0)
        else:
            self.num = num  # PolyElement in t
            self.den = den if den is not None else _TRING.one
            if not self.den:
                raise ZeroDivisionError("zero denominator")
            if not _normalized:
                self._reduce()

    def _reduce(self):
        if not self.num:
            self.num = _TRING.zero
            self.den = _TRING.one
            return
        g = self.num.gcd(self.den)
        if g != _TRING.one:
            self.num = self.num.exquo(g)
            self.den = self.den.exquo(g)
        lc = self.den.LC
        if lc != QQ_I(1, 0):
            self.num = self.num.quo_ground(lc)
            self.den = self.den.quo_ground(lc)

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(mode) -> "RatScalar":
        if mode == CLASSICAL:
            return RatScalar(CLASSICAL, QQ_I(0, 0), _normalized=True)
        return RatScalar(QUANTUM, _TRING.zero, _normalized=True)

    @staticmethod
    def one(mode) -> "RatScalar":
        return RatScalar.from_rational(mode, 1)

    @staticmethod
    def from_rational(mode, x, im=0) -> "RatScalar":
        g = gaussian(Fraction(x), Fraction(im))
        if mode == CLASSICAL:
            return RatScalar(CLASSICAL, g, _normalized=True)
        return RatScalar(QUANTUM, _TRING.from_dict({(0,): g}), _normalized=True)

    @staticmethod
    def imag_unit(mode) -> "RatScalar":
        return RatScalar.from_rational(mode, 0, 1)

    @staticmethod
    def t_power(k: int) -> "RatScalar":
        """t**k (quantum only), k any integer."""
        if k >= 0:
            return RatScalar(QUANTUM, _tpow(k), _TRING.one, _normalized=True)
        return RatScalar(QUANTUM, _TRING.one, _tpow(-k), _normalized=True)

    @staticmethod
    def q_power(b) -> "RatScalar":
        """q**b = t**(2b) for half-integer b (quantum)."""
        return RatScalar.t_power(HalfInt.of(b).twice)

    # -- ring/field ops ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatScalar):
            if other.mode != self.mode:
                raise ValueError("mode mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return RatScalar.from_rational(self.mode, other)
        if isinstance(other, HalfInt):
            return RatScalar.from_rational(self.mode, other.as_fraction())
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.mode == CLASSICAL:
            return RatScalar(CLASSICAL, self.num + o.num, _normalized=True)
        return RatScalar(QUANTUM, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        if self.mode == CLASSICAL:
            return RatScalar(CLASSICAL, -self.num, _normalized=True)
        return RatScalar(QUANTUM, -self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.mode == CLASSICAL:
            return RatScalar(CLASSICAL, self.num * o.num, _normalized=True)
        return RatScalar(QUANTUM, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by zero scalar")
        if self.mode == CLASSICAL:
            return RatScalar(CLASSICAL, self.num / o.num, _normalized=True)
        return RatScalar(QUANTUM, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return RatScalar.one(self.mode) / (self ** (-k))
        out = RatScalar.one(self.mode)
        for _ in range(k):
            out = out * self
        return out

    @property
    def is_zero(self) -> bool:
        if self.mode == CLASSICAL:
            return self.num == QQ_I(0, 0)
        return not self.num

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.mode == CLASSICAL:
            return hash((self.mode, self.num))
        return hash((self.mode, tuple(self.num.terms()), tuple(self.den.terms())))

    # -- inspection ---------------------------------------------------

    def as_t_monomial(self):
        """If the value is c*t**k, return (c, k), else None. Classical: (value, 0)."""
        if self.mode == CLASSICAL:
            return (self.num, 0)
        if len(self.num.terms()) != 1 or len(self.den.terms()) != 1:
            return None
        (mn, cn), = self.num.terms()
        (md, cd), = self.den.terms()
        return (cn / cd, mn[0] - md[0])

    def to_complex(self, q: float) -> complex:
        """Evaluate at t = sqrt(q) (quantum) or return the value (classical)."""
        if self.mode == CLASSICAL:
            return complex(float(Fraction(self.num.x.numerator, self.num.x.denominator)),
                           float(Fraction(self.num.y.numerator, self.num.y.denominator)))
        tval = q ** 0.5

        def ev(poly):
            acc = 0j
            for (k,), c in poly.terms():
                acc += complex(float(Fraction(c.x.numerator, c.x.denominator)),
                               float(Fraction(c.y.numerator, c.y.denominator))) * tval ** k
            return acc

        return ev(self.num) / ev(self.den)

    def serialize(self) -> str:
        """Canonical string 'num/den' with num, den polynomials in t."""
        if self.mode == CLASSICAL:
            return _gauss_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"RatScalar[{self.mode}]({self.serialize()})"


def _gauss_str(g) -> str:
    re = Fraction(g.x.numerator, g.x.denominator)
    im = Fraction(g.y.numerator, g.y.denominator)
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im}*i"
    sign = "+" if im > 0 else "-"
    return f"{re}{sign}{abs(im)}*i"


def _poly_str(poly) -> str:
    if not poly:
        return "0"
    parts = []
    for (k,), c in sorted(poly.terms(), reverse=True):
        cs = _gauss_str(c)
        if k == 0:
            parts.append(cs)
        else:
            base = "t" if k == 1 else f"t^{k}"
            parts.append(base if cs == "1" else f"-{base}" if cs == "-1" else f"{cs}*{base}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# -- q-numbers -------------------------------------------------------


def qnum(b, mode=QUANTUM) -> RatScalar:
    """The q-number [b] = (q^b - q^-b)/(q - q^-1); b as q -> 1."""
    b = HalfInt.of(b)
    if mode == CLASSICAL:
        return RatScalar.from_rational(CLASSICAL, b.as_fraction())
    # (t^{2b} - t^{-2b}) / (t^2 - t^{-2}) cleared of negative powers:
    # with k = 2b, this is (t^{2k} - 1) t^2 / ((t^4 - 1) t^k)
    k = abs(b.twice)
    if k == 0:
        return RatScalar.zero(QUANTUM)
    num = (_tpow(2 * k) - _TRING.one) * _tpow(2)
    den = (_tpow(4) - _TRING.one) * _tpow(k)
    out = RatScalar(QUANTUM, num, den)
    return -out if b.twice < 0 else out


def inv_qexp_plus(b, mode=QUANTUM) -> RatScalar:
    """1/(q^b + q^-b), the value of [b]/[2b]; 1/2 as q -> 1."""
    if mode == CLASSICAL:
        return RatScalar.from_rational(CLASSICAL, Fraction(1, 2))
    k = abs(HalfInt.of(b).twice)
    return RatScalar(QUANTUM, _tpow(k), _tpow(2 * k) + _TRING.one)


def qnum_scaled(x: Fraction, scale: int, mode=QUANTUM) -> RatScalar:
    """[x] for rational x, written over the finer root s = q^(1/(2*scale)).

    The returned value lives in Q(s); scale must clear x's denominator
    (2*scale*x integral).  Classical mode ignores the scale.
    """
    x = Fraction(x)
    if mode == CLASSICAL:
        return RatScalar.from_rational(CLASSICAL, x)
    k2 = 2 * scale * x
    if k2.denominator != 1:
        raise ValueError(f"scale {scale} does not clear denominator of {x}")
    k = abs(int(k2))
    if k == 0:
        return RatScalar.zero(QUANTUM)
    num = (_tpow(2 * k) - _TRING.one) * _tpow(2 * scale)
    den = (_tpow(4 * scale) - _TRING.one) * _tpow(k)
    out = RatScalar(QUANTUM, num, den)
    return -out if x < 0 else out


def inv_qexp_plus_scaled(x: Fraction, scale: int, mode=QUANTUM) -> RatScalar:
    """1/(q^x + q^-x) over s = q^(1/(2*scale)); 1/2 classically."""
    if mode == CLASSICAL:
        return RatScalar.from_rational(CLASSICAL, Fraction(1, 2))
    k2 = 2 * scale * Fraction(x)
    if k2.denominator != 1:
        raise ValueError(f"scale {scale} does not clear denominator of {x}")
    k = abs(int(k2))
    return RatScalar(QUANTUM, _tpow(k), _tpow(2 * k) + _TRING.one)


def qnum_float(b: float, q: float) -> float:
    """Numeric [b] at a real q > 0, q != 1."""
    return (q ** b - q ** (-b)) / (q - 1.0 / q)
