"""Exact rational helpers shared by the discrete modules."""
from fractions import Fraction
from numbers import Rational


def to_fraction(value):
    """Coerce ``value`` to a :class:`~fractions.Fraction` without rounding.

    Accepts ints, Fractions and strings such as ``"1/3"``. Floats are
    refused so that discrete computations stay bit-exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def fmt_fraction(q):
    """Format as ``"p/q"``; integers keep the ``/1`` suffix."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def perm_sign(perm):
    """Sign of a permutation given as a sequence of distinct sortable values.

    The sign is taken relative to the sorted arrangement, so ``(1, 3, 2)``
    and ``("a", "c", "b")`` are both odd.
    """
    order = {v: i for i, v in enumerate(sorted(perm))}
    if len(order) != len(perm):
        raise ValueError("not a permutation: repeated entries")
    p = [order[v] for v in perm]
    seen = [False] * len(p)
    sign = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det(rows):
    """Determinant by Gaussian elimination over the rationals.

    Works for any exact field elements (ints and Fractions); the input is
    not modified.
    """
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col]
            if f == 0:
                continue
            f /= p
            row_r, row_c = a[r], a[col]
            for c in range(col + 1, n):
                row_r[c] -= f * row_c[c]
    return result
