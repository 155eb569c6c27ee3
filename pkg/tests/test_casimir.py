"""Central elements: eigenvalues, image invariance, decomposition."""

import random

import pytest

from gtso.casimir import (WeylGroupElement, casimir_eigenvalue,
                          casimir_eigenvalue_symbolic, casimir_half_eigenvalue,
                          casimir_scalar_action_check,
                          gen_fact_esym, invariant_decompose, ldict_weyl_apply,
                          phi_casimir, phi_casimir_half, random_invariant,
                          sign_pair_generators, to_centered_laurent,
                          verify_invariance, weyl_act, _ldict_eq)
from gtso.coeffs import module_context
from gtso.halfint import HalfInt
from gtso.patterns import row_length
from gtso.scalars import CLASSICAL, QUANTUM, RatScalar, qnum
from gtso.skew import phi_generator


def test_gen_fact_esym_small():
    assert gen_fact_esym(1, [5], [2]) == 3
    assert gen_fact_esym(2, [5, 7], [2, 9]) == (5 - 2) * (7 - 2)
    # the printed index rule a_(p_r - r + 1): singletons pick a_(p)
    assert gen_fact_esym(1, [5, 7], [2, 3]) == (5 - 2) + (7 - 3)
    with pytest.raises(ValueError):
        gen_fact_esym(3, [1, 2], [0, 0])


def test_n2_square_root_consistency():
    m = HalfInt(5)
    chi = casimir_eigenvalue(2, 1, [m])
    assert chi == -(qnum(m) ** 2)
    half = casimir_half_eigenvalue(2, [m])
    assert half * half == chi
    assert casimir_eigenvalue(2, 1, [3], CLASSICAL) == RatScalar.from_rational(CLASSICAL, -9)


def test_n3_eigenvalue():
    m = HalfInt(4)  # top row (2)
    chi = casimir_eigenvalue(3, 1, [m])
    want = -(qnum(m + HalfInt(1)) ** 2 - qnum(HalfInt(1)) ** 2)
    assert chi == want


def test_half_image_equals_generator_image():
    img = phi_casimir_half(2, QUANTUM)
    gen = phi_generator(2, 2, QUANTUM)
    assert gen.terms[(0,) * gen.alg.N] == img
    imgc = phi_casimir_half(2, CLASSICAL)
    genc = phi_generator(2, 2, CLASSICAL)
    assert genc.terms[(0,) * genc.alg.N] == imgc


def test_phi_casimir_n4_classical_half():
    # i^2 x'_1 x'_2 = -(x+1) * x2
    img = phi_casimir_half(4, CLASSICAL)
    ctx = module_context(4, CLASSICAL)
    x1 = ctx.var_value(ctx.var_index[(4, 1)])
    x2 = ctx.var_value(ctx.var_index[(4, 2)])
    assert img == -(x1 + 1) * x2


def test_weyl_action_examples():
    ctx = module_context(4, QUANTUM)
    f = phi_casimir(4, 1, QUANTUM)
    s1 = WeylGroupElement.sigma(4, QUANTUM, 1)
    t1 = WeylGroupElement.tau(4, 1)
    assert weyl_act(s1, f) == f
    g = phi_casimir_half(4, QUANTUM)
    assert weyl_act(t1, g) == -g
    assert weyl_act(s1, g) == -g
    assert weyl_act(s1.compose(t1), g) == g
    assert not WeylGroupElement.tau(4, 1).in_defining_group()
    assert WeylGroupElement.sigma(5, QUANTUM, 1).in_defining_group()


def test_group_law_on_actions():
    rng = random.Random(3)
    probe = (phi_casimir(5, 2, QUANTUM)
             + phi_casimir(5, 1, QUANTUM) * module_context(5, QUANTUM).var_value(0))

    def rand_w():
        k = 2
        signs = [tuple(rng.randrange(2) for _ in range(2)) for _ in range(k)]
        perm = list(range(k))
        rng.shuffle(perm)
        return WeylGroupElement(5, QUANTUM, signs, perm)

    for _ in range(12):
        w1, w2 = rand_w(), rand_w()
        assert weyl_act(w1.compose(w2), probe) == weyl_act(w1, weyl_act(w2, probe))


def test_parity_constraint_even_n():
    gens = sign_pair_generators(4, QUANTUM)
    assert all(w.parity == 0 for _, w in gens)
    assert all(w.in_defining_group() for _, w in gens)


def test_verify_invariance_all_small():
    for n in (3, 4, 5):
        for mode in (QUANTUM, CLASSICAL):
            rep = verify_invariance(n, mode)
            assert rep["passed"], (n, mode, [c for c in rep["checks"] if c["status"] != "pass"])
    names = [c["check"] for c in verify_invariance(4, QUANTUM)["checks"]]
    assert "single-flip-negates-half" in names


def test_decompose_images_roundtrip():
    for n, mode, d in [(4, QUANTUM, 1), (4, QUANTUM, 2), (5, QUANTUM, 2),
                       (4, CLASSICAL, 2), (5, CLASSICAL, 1)]:
        f = phi_casimir(n, d, mode)
        w = invariant_decompose(n, f, mode)
        assert _ldict_eq(w.expand(), to_centered_laurent(n, f, mode))
    for mode in (QUANTUM, CLASSICAL):
        g = phi_casimir_half(4, mode)
        w = invariant_decompose(4, g, mode)
        assert w.odd_part is not None
        assert _ldict_eq(w.expand(), to_centered_laurent(4, g, mode))


def test_decompose_trivial_cases():
    # b_1 + b_2 is e_1 of the building blocks
    from gtso.casimir import _building_block, _ldict_add
    f = _ldict_add(_building_block(4, QUANTUM, 1), _building_block(4, QUANTUM, 2))
    w = invariant_decompose(4, f, QUANTUM)
    assert list(w.even_part) == [(1, 0)]
    assert w.odd_part is None
    # the alternating product decomposes as itself times 1
    from gtso.casimir import _alternating
    g = _alternating(4, QUANTUM)
    w = invariant_decompose(4, g, QUANTUM)
    assert not w.even_part and list(w.odd_part) == [(0, 0)]


def test_decompose_rejects_non_invariant():
    ctx = module_context(4, QUANTUM)
    z = ctx.var_value(ctx.var_index[(4, 1)])
    with pytest.raises(ValueError):
        invariant_decompose(4, z, QUANTUM)


def test_decompose_random_invariants():
    rng = random.Random(9)
    done = 0
    for _ in range(30):
        n = rng.choice([4, 5])
        mode = rng.choice([QUANTUM, CLASSICAL])
        f = random_invariant(n, mode, rng)
        if f is None:
            continue
        for _, g in sign_pair_generators(n, mode):
            assert _ldict_eq(ldict_weyl_apply(g, f), f)
        w = invariant_decompose(n, f, mode)
        assert _ldict_eq(w.expand(), f)
        done += 1
    assert done >= 20


def test_scalar_action_small():
    assert casimir_scalar_action_check(3, 1, QUANTUM)
    assert casimir_scalar_action_check(3, 1, CLASSICAL)
    assert casimir_scalar_action_check(4, 1, QUANTUM)
    assert casimir_scalar_action_check(4, 2, CLASSICAL)


def test_eigenvalue_symmetric_under_group():
    # the symbolic eigenvalue is invariant under the defining group action
    # on the top-row variables
    for n, mode in [(4, QUANTUM), (5, CLASSICAL)]:
        for d in range(1, row_length(n) + 1):
            f = casimir_eigenvalue_symbolic(n, d, mode)
            gens = sign_pair_generators(n, mode)
            for j in range(1, row_length(n)):
                gens.append((f"swap{j}", WeylGroupElement.transposition(n, mode, j)))
            for _, g in gens:
                assert weyl_act(g, f) == f
