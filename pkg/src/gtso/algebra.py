"""Defining relations of the generator algebra, as reusable words.

Generators are indexed by i = 2..n (generator i couples rows i and i-1).
The three relation families:

* commuting:  [I_i, I_j] = 0 for |i - j| > 1
* braid-up:   I_{i+1}^2 I_i - [2] I_{i+1} I_i I_{i+1} + I_i I_{i+1}^2 + I_i = 0
* braid-down: I_i^2 I_{i+1} - [2] I_i I_{i+1} I_i + I_{i+1} I_i^2 + I_{i+1} = 0

Each instance is a list of (coefficient-kind, word) pairs, where the
coefficient-kind is 1, -1, or "two" (the caller supplies [2] in its own
scalar type) and the word is a tuple of generator indices applied left
to right as operators (rightmost acts first).
"""

from __future__ import annotations


def relation_instances(n: int):
    """All relation instances for size n: (name, [(kind, word), ...])."""
    out = []
    for i in range(2, n):
        a, b = i + 1, i
        out.append((f"braid-up[{a},{b}]", [
            (1, (a, a, b)), ("minus_two", (a, b, a)), (1, (b, a, a)), (1, (b,)),
        ]))
        out.append((f"braid-down[{b},{a}]", [
            (1, (b, b, a)), ("minus_two", (b, a, b)), (1, (a, b, b)), (1, (a,)),
        ]))
    for i in range(2, n + 1):
        for j in range(i + 2, n + 1):
            out.append((f"commute[{i},{j}]", [
                (1, (i, j)), (-1, (j, i)),
            ]))
    return out
