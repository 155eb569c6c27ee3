"""Gelfand-Tsetlin patterns for the orthogonal chain: validation,
basis enumeration, l-coordinates and single-entry shifts.

A pattern for size n has rows n, n-1, ..., 2 (stored top-down); row i
holds floor(i/2) entries, all integers or all half-odd-integers.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .halfint import HalfInt


def row_length(i: int) -> int:
    return i // 2


class GTPattern:
    """Triangular array of half-integers, rows n down to 2."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows):
        if n < 2:
            raise ValueError("pattern size must be >= 2")
        rows = tuple(tuple(HalfInt.of(x) for x in r) for r in rows)
        if len(rows) != n - 1:
            raise ValueError(f"expected {n - 1} rows for n={n}, got {len(rows)}")
        for idx, r in enumerate(rows):
            i = n - idx
            if len(r) != row_length(i):
                raise ValueError(f"row {i} must have {row_length(i)} entries, got {len(r)}")
        self.n = n
        self.rows = rows

    def row(self, i: int):
        """Row by algebra index i (n down to 2)."""
        if not 2 <= i <= self.n:
            raise ValueError(f"no row {i} in a size-{self.n} pattern")
        return self.rows[self.n - i]

    def entry(self, i: int, j: int) -> HalfInt:
        return self.row(i)[j - 1]

    @property
    def top_row(self):
        return self.rows[0]

    def flat(self):
        return tuple(x for r in self.rows for x in r)

    def sort_key(self):
        return tuple(x.twice for x in self.flat())

    def replace(self, i: int, j: int, value: HalfInt) -> "GTPattern":
        rows = [list(r) for r in self.rows]
        rows[self.n - i][j - 1] = HalfInt.of(value)
        return GTPattern(self.n, rows)

    def __eq__(self, other):
        return isinstance(other, GTPattern) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        body = ",".join("(" + ",".join(str(x) for x in r) + ")" for r in self.rows)
        return f"GTPattern[{self.n}]({body})"


class ValidationResult:
    __slots__ = ("valid", "violations")

    def __init__(self, violations):
        self.violations = list(violations)
        self.valid = not self.violations

    def __bool__(self):
        return self.valid

    def __repr__(self):
        return f"ValidationResult(valid={self.valid}, violations={self.violations})"


def _check_homogeneous(entries) -> bool:
    kinds = {e.is_integer for e in entries}
    return len(kinds) <= 1


def check_top_row(n: int, top) -> list:
    """Violations of the dominance conditions on a candidate top row."""
    top = tuple(HalfInt.of(x) for x in top)
    k = row_length(n)
    if len(top) != k:
        raise ValueError(f"top row for n={n} needs {k} entries")
    out = []
    if not _check_homogeneous(top):
        out.append("top row mixes integers and half-integers")
    for j in range(k - 1):
        if not top[j] >= top[j + 1]:
            out.append(f"m[{n},{j + 1}] >= m[{n},{j + 2}] fails")
    if k >= 1:
        if n % 2 == 1:
            if not top[k - 1] >= 0:
                out.append(f"m[{n},{k}] >= 0 fails (odd n)")
        elif k >= 2:
            if not top[k - 2] >= abs(top[k - 1]):
                out.append(f"m[{n},{k - 1}] >= |m[{n},{k}]| fails (even n)")
    return out


def _interlace_violations(i_upper: int, upper, lower) -> list:
    """Interlacing between adjacent rows; i_upper is the upper row's index."""
    out = []
    if i_upper % 2 == 1:  # odd row 2p+1 above even row 2p
        p = i_upper // 2
        for j in range(1, p + 1):
            if not upper[j - 1] >= lower[j - 1]:
                out.append(f"m[{i_upper},{j}] >= m[{i_upper - 1},{j}] fails")
        for j in range(1, p):
            if not lower[j - 1] >= upper[j]:
                out.append(f"m[{i_upper - 1},{j}] >= m[{i_upper},{j + 1}] fails")
        if not lower[p - 1] >= -upper[p - 1]:
            out.append(f"m[{i_upper - 1},{p}] >= -m[{i_upper},{p}] fails")
    else:  # even row 2p above odd row 2p-1
        p = i_upper // 2
        for j in range(1, p):
            if not upper[j - 1] >= lower[j - 1]:
                out.append(f"m[{i_upper},{j}] >= m[{i_upper - 1},{j}] fails")
        for j in range(1, p - 1):
            if not lower[j - 1] >= upper[j]:
                out.append(f"m[{i_upper - 1},{j}] >= m[{i_upper},{j + 1}] fails")
        if p >= 2:
            if not lower[p - 2] >= abs(upper[p - 1]):
                out.append(f"m[{i_upper - 1},{p - 1}] >= |m[{i_upper},{p}]| fails")
    return out


def validate(pattern: GTPattern) -> ValidationResult:
    """Check dominance of the top row and interlacing of every adjacent pair."""
    out = []
    if not _check_homogeneous(pattern.flat()):
        out.append("pattern mixes integers and half-integers")
    out.extend(check_top_row(pattern.n, pattern.top_row))
    for i in range(pattern.n, 2, -1):
        out.extend(_interlace_violations(i, pattern.row(i), pattern.row(i - 1)))
    return ValidationResult(out)


def _half_range(lo: HalfInt, hi: HalfInt):
    """All half-integers lo, lo+1, ..., hi (same parity as the bounds)."""
    cur = lo.twice
    while cur <= hi.twice:
        yield HalfInt(cur)
        cur += 2


def _row_choices(i_upper: int, upper):
    """Candidate lower rows below a fixed upper row, per the interlacing bounds."""
    if i_upper % 2 == 1:  # filling even row 2p below odd row 2p+1
        p = i_upper // 2
        ranges = []
        for j in range(1, p + 1):
            hi = upper[j - 1]
            lo = upper[j] if j < p else -upper[p - 1]
            ranges.append(list(_half_range(lo, hi)))
    else:  # filling odd row 2p-1 below even row 2p
        p = i_upper // 2
        ranges = []
        for j in range(1, p):
            hi = upper[j - 1]
            lo = upper[j] if j < p - 1 else abs(upper[p - 1])
            ranges.append(list(_half_range(lo, hi)))
    return itertools.product(*ranges)


def enumerate_basis(n: int, top_row) -> list:
    """All valid patterns with the given top row, in lexicographic order."""
    top = tuple(HalfInt.of(x) for x in top_row)
    bad = check_top_row(n, top)
    if bad:
        raise ValueError("invalid top row: " + "; ".join(bad))

    def rec(i_upper, upper):
        if i_upper == 2:
            yield []
            return
        for lower in _row_choices(i_upper, upper):
            for rest in rec(i_upper - 1, lower):
                yield [list(lower)] + rest

    out = [GTPattern(n, [list(top)] + tail) for tail in rec(n, top)]
    out.sort(key=GTPattern.sort_key)
    return out


def l_offset(i: int, j: int) -> int:
    """l_(i,j) = m_(i,j) + offset: offset p-j for row 2p, p-j+1 for row 2p+1."""
    if i % 2 == 0:
        return i // 2 - j
    return i // 2 - j + 1


def l_coords(pattern: GTPattern):
    """Same shape as the pattern, entries m + offset."""
    return tuple(
        tuple(pattern.entry(i, j) + l_offset(i, j) for j in range(1, row_length(i) + 1))
        for i in range(pattern.n, 1, -1)
    )


def shift(pattern: GTPattern, i: int, j: int, direction: int) -> GTPattern:
    """Pattern with m_(i,j) moved by +-1; the result is not validity-checked."""
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if i == pattern.n:
        raise ValueError("top-row entries cannot be shifted")
    if not 2 <= i < pattern.n:
        raise ValueError(f"row {i} out of range")
    if not 1 <= j <= row_length(i):
        raise ValueError(f"column {j} out of range for row {i}")
    return pattern.replace(i, j, pattern.entry(i, j) + direction)


# -- JSON literals -----------------------------------------------------------


def _entry_to_json(x: HalfInt):
    return x.twice // 2 if x.is_integer else f"{x.twice}/2"


def pattern_to_json(pattern: GTPattern) -> list:
    return [[_entry_to_json(x) for x in r] for r in pattern.rows]


def pattern_from_json(n: int, data) -> GTPattern:
    if isinstance(data, str):
        data = json.loads(data)
    rows = []
    for r in data:
        row = []
        for x in r:
            if isinstance(x, str):
                row.append(HalfInt.of(Fraction(x)))
            elif isinstance(x, int):
                row.append(HalfInt.of(x))
            else:
                raise ValueError(f"pattern entries must be ints or fraction strings, got {x!r}")
        rows.append(row)
    return GTPattern(n, rows)
