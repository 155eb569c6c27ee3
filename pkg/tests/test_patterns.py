"""Pattern validation, enumeration against a brute-force oracle, coordinates."""

import itertools
from fractions import Fraction

import pytest

from gtso.halfint import HalfInt
from gtso.patterns import (GTPattern, check_top_row, enumerate_basis, l_coords,
                           l_offset, pattern_from_json, pattern_to_json,
                           row_length, shift, validate)


def brute_force_count(n, top_row):
    """Independent oracle: filter a bounding grid through the validator."""
    top = [HalfInt.of(x) for x in top_row]
    hi = max(x.twice for x in top)
    cols = []
    for i in range(n - 1, 1, -1):
        for j in range(1, row_length(i) + 1):
            cap = top[j - 1].twice if j - 1 < len(top) else hi
            cols.append([HalfInt(w) for w in range(-hi, cap + 1, 2)])
    count = 0
    for combo in itertools.product(*cols):
        rows = [list(top)]
        idx = 0
        for i in range(n - 1, 1, -1):
            ln = row_length(i)
            rows.append(list(combo[idx:idx + ln]))
            idx += ln
        if validate(GTPattern(n, rows)).valid:
            count += 1
    return count


def test_validate_examples():
    assert validate(GTPattern(3, [[1], [1]])).valid
    bad = validate(GTPattern(3, [[1], [2]]))
    assert not bad.valid and any("m[3,1] >= m[2,1]" in v for v in bad.violations)
    assert validate(GTPattern(4, [[1, 0], [1], [1]])).valid
    mixed = validate(GTPattern(3, [[1], [Fraction(1, 2)]]))
    assert not mixed.valid and any("mixes" in v for v in mixed.violations)


def test_shape_errors():
    with pytest.raises(ValueError):
        GTPattern(3, [[1, 1], [0]])
    with pytest.raises(ValueError):
        GTPattern(4, [[1, 0], [1]])


def test_enumerate_examples():
    assert len(enumerate_basis(3, [1])) == 3
    assert [b.entry(2, 1) for b in enumerate_basis(3, [1])] == [HalfInt.of(-1), HalfInt.of(0), HalfInt.of(1)]
    assert len(enumerate_basis(4, [1, 0])) == 4
    assert len(enumerate_basis(5, [1, 0])) == 5
    assert len(enumerate_basis(3, [Fraction(1, 2)])) == 2
    with pytest.raises(ValueError):
        enumerate_basis(3, [-1])


def test_enumerate_matches_brute_force():
    cases = [(3, (1,)), (3, (2,)), (3, (Fraction(3, 2),)),
             (4, (1, 0)), (4, (1, -1)), (4, (Fraction(3, 2), Fraction(1, 2))),
             (5, (1, 1)), (5, (2, 1))]
    for n, top in cases:
        assert len(enumerate_basis(n, top)) == brute_force_count(n, top)


def test_enumerated_patterns_all_validate_and_sorted():
    basis = enumerate_basis(5, [2, 1])
    assert all(validate(p).valid for p in basis)
    keys = [p.sort_key() for p in basis]
    assert keys == sorted(keys)


def test_l_coords():
    p = GTPattern(3, [[1], [0]])
    lc = l_coords(p)
    assert lc[0][0] == HalfInt.of(2)  # top row entry 1 at (3,1): 1 + 1 - 1 + 1
    assert lc[1][0] == HalfInt.of(0)  # (2,1): 0 + 1 - 1
    assert l_offset(2, 1) == 0
    assert l_offset(5, 2) == 1  # odd row 5 = 2p+1 with p=2: p - j + 1


def test_l_coords_strictly_decrease_along_rows():
    for n, top in [(5, (2, 1)), (6, (2, 1, 0)), (4, (Fraction(3, 2), Fraction(1, 2)))]:
        for p in enumerate_basis(n, top):
            for row in l_coords(p):
                assert all(row[i] > row[i + 1] for i in range(len(row) - 1))


def test_shift_behavior():
    p = GTPattern(3, [[1], [0]])
    q = shift(p, 2, 1, +1)
    assert q.entry(2, 1) == HalfInt.of(1)
    # shifting out of validity is allowed; the caller filters
    r = shift(GTPattern(3, [[1], [1]]), 2, 1, +1)
    assert not validate(r).valid
    with pytest.raises(ValueError):
        shift(p, 3, 1, +1)


def test_fixed_top_row_set_is_finite_in_every_direction():
    # repeatedly shifting any interior entry must leave the valid set
    for p in enumerate_basis(4, (1, 0)):
        for i in range(2, 4):
            for j in range(1, row_length(i) + 1):
                for d in (+1, -1):
                    cur, steps = p, 0
                    while validate(cur).valid and steps < 50:
                        cur = shift(cur, i, j, d)
                        steps += 1
                    assert steps < 50


def test_json_roundtrip():
    p = GTPattern(4, [[Fraction(3, 2), Fraction(1, 2)], [Fraction(1, 2)], [Fraction(-1, 2)]])
    data = pattern_to_json(p)
    assert data[0][0] == "3/2" and data[2][0] == "-1/2"
    assert pattern_from_json(4, data) == p
    q = GTPattern(3, [[2], [-1]])
    assert pattern_to_json(q) == [[2], [-1]]
    assert pattern_from_json(3, pattern_to_json(q)) == q


def test_top_row_check():
    assert check_top_row(3, [0]) == []
    assert check_top_row(3, [-1])
    assert check_top_row(4, [1, -1]) == []  # even n allows a negative last entry
    assert check_top_row(4, [0, 1])
