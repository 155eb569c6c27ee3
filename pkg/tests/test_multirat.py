"""Multivariate exact rational functions: arithmetic, substitution, twists."""

import random
from fractions import Fraction

import pytest

from gtso.halfint import HalfInt
from gtso.multirat import DenominatorVanishes, FieldContext, LinForm, MultiRat
from gtso.scalars import CLASSICAL, QUANTUM, RatScalar, qnum


@pytest.fixture(scope="module")
def ctx():
    return FieldContext(QUANTUM, [("m", 1), ("m", 2)])


@pytest.fixture(scope="module")
def cctx():
    return FieldContext(CLASSICAL, [("m", 1), ("m", 2)])


def test_qnum_shifted_substitution_oracle(ctx):
    # substituting z := q^m into [m_z + k] recovers the plain q-number [m + k]
    rng = random.Random(11)
    for _ in range(20):
        m = HalfInt(rng.randrange(-8, 9))
        k = rng.randrange(-4, 5)
        got = ctx.qnum_shifted(0, k).evaluate({0: m.as_fraction()})
        assert got == qnum(m + k)


def test_qnum_shifted_classical(cctx):
    f = cctx.qnum_shifted(0, 3)
    assert f.evaluate({0: Fraction(1, 2)}) == RatScalar.from_rational(CLASSICAL, Fraction(7, 2))


def test_substitute_simple(ctx):
    z = ctx.var_value(0)
    f = z + z.inverse()
    # z := t^2 (exponent 1, i.e. the entry value m = 1)
    assert f.evaluate({0: 1}) == RatScalar.t_power(2) + RatScalar.t_power(-2)


def test_substitute_denominator_vanishes(ctx):
    z = ctx.var_value(0)
    f = ctx.one() / (z - 1)
    with pytest.raises(DenominatorVanishes):
        f.evaluate({0: 0, 1: 0})


def test_substitution_commutes_with_arithmetic(ctx):
    rng = random.Random(5)
    for _ in range(15):
        f = ctx.qnum_shifted(0, rng.randrange(-2, 3)) + ctx.qnum_shifted(1, 1)
        g = ctx.qnum_shifted(0, 1) * ctx.qnum_shifted(1, rng.randrange(-2, 3)) + 2
        vals = {0: HalfInt(rng.randrange(-6, 7)).as_fraction(),
                1: HalfInt(rng.randrange(-6, 7)).as_fraction()}
        assert (f * g).evaluate(vals) == f.evaluate(vals) * g.evaluate(vals)
        assert (f + g).evaluate(vals) == f.evaluate(vals) + g.evaluate(vals)


def test_zero_test_soundness(ctx):
    z1, z2 = ctx.var_value(0), ctx.var_value(1)
    f = (z1 + z2) * (z1 - z2) - (z1 * z1 - z2 * z2)
    assert f.is_zero
    g = ctx.qnum_shifted(0, 1) * ctx.qnum_shifted(0, -1) - ctx.qnum_shifted(0, 0) ** 2
    # [m+1][m-1] != [m]^2
    assert not g.is_zero


def test_field_ops_random(ctx):
    rng = random.Random(7)

    def rnd():
        out = ctx.from_scalar(rng.randrange(-3, 4) or 2)
        for _ in range(rng.randrange(1, 4)):
            f = ctx.qnum(LinForm({0: rng.randrange(-2, 3), 1: rng.randrange(-2, 3)},
                                 Fraction(rng.randrange(-2, 3))))
            if f.is_zero:
                continue
            out = out + f if rng.random() < 0.5 else out * f
        return out

    for _ in range(15):
        a, b, c = rnd(), rnd(), rnd()
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        if not a.is_zero:
            assert a * a.inverse() == ctx.one()


def test_sum_values_matches_pairwise(ctx):
    rng = random.Random(2)
    for _ in range(30):
        vals = []
        for _ in range(rng.randrange(2, 6)):
            f = ctx.qnum_shifted(rng.randrange(2), rng.randrange(-2, 3))
            g = ctx.qnum_shifted(rng.randrange(2), rng.randrange(-1, 2))
            vals.append(f * g.inverse() + rng.randrange(-2, 3))
        total = MultiRat.sum_values(ctx, list(vals))
        folded = ctx.zero()
        for v in vals:
            folded = folded + v
        assert total == folded


def test_twist_is_field_automorphism(ctx):
    rng = random.Random(9)
    for _ in range(10):
        f = ctx.qnum_shifted(0, rng.randrange(-2, 3)) + ctx.var_value(1)
        g = ctx.qnum_shifted(1, rng.randrange(-2, 3)) * ctx.qnum_shifted(0, 1)
        s1 = {0: Fraction(rng.randrange(-2, 3)), 1: Fraction(rng.randrange(-2, 3))}
        s2 = {0: Fraction(rng.randrange(-2, 3)), 1: Fraction(rng.randrange(-2, 3))}
        # group action: composing shifts adds them
        lhs = f.shift_vars(s1).shift_vars(s2)
        rhs = f.shift_vars({v: s1[v] + s2[v] for v in s1})
        assert lhs == rhs
        # automorphism: multiplicative on products
        assert (f * g).shift_vars(s1) == f.shift_vars(s1) * g.shift_vars(s1)
        assert (f + g).shift_vars(s1) == f.shift_vars(s1) + g.shift_vars(s1)


def test_sign_and_inversion_transforms(ctx):
    z = ctx.var_value(0)
    tau = {0: (0, 1, Fraction(0), -1)}
    assert (z + z.inverse()).transform(tau) == -(z + z.inverse())
    # m -> -m - 1 sends [m] to -[m+1]
    sigma = {0: (0, -1, Fraction(-1), 1)}
    assert ctx.qnum_shifted(0, 0).transform(sigma) == -ctx.qnum_shifted(0, 1)


def test_classical_polynomial_transform_is_simultaneous(cctx):
    x1, x2 = cctx.var_value(0), cctx.var_value(1)
    f = x1 * x1 + x2
    swap = {0: (1, 1, Fraction(0), 1), 1: (0, 1, Fraction(0), 1)}
    assert f.transform(swap) == x2 * x2 + x1


def test_serialize_roundtrippable_form(ctx):
    f = ctx.qnum_shifted(0, 1)
    text = f.serialize()
    assert "/" in text and "z" in text
