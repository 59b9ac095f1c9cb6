"""Small exact linear algebra over the rationals.

Vectors are tuples, matrices are tuples of row tuples.  Everything stays in
``int`` or ``Fraction`` so no rounding ever happens.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = tuple
Mat = tuple


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def matvec(m: Mat, v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in m)


def matmul(a: Mat, b: Mat) -> Mat:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, c) for c in cols) for row in a)


def covec_mat(f: Sequence, m: Mat) -> Vec:
    """The covector ``f ∘ m``."""
    return tuple(dot(f, c) for c in zip(*m))


def identity(d: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def vadd(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> Vec:
    return tuple(c * x for x in a)


def normalize(v: Sequence) -> Vec:
    """Turn integral fractions into ints so equal vectors hash equally."""
    out = []
    for x in v:
        if isinstance(x, Fraction) and x.denominator == 1:
            x = x.numerator
        out.append(x)
    return tuple(out)


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    r = 0
    ncols = len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def det(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            out = -out
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return out


def solve_dual(forms: Sequence[Sequence]) -> list[Vec]:
    """Vectors h_j with ``forms[i](h_j) = δ_ij`` (forms assumed independent).

    Solved in the row space of the forms, so the answer is the minimal-norm
    one; any solution would do for our purposes.
    """
    n = len(forms)
    f = [[Fraction(x) for x in r] for r in forms]
    gram = [[dot(f[i], f[j]) for j in range(n)] for i in range(n)]
    inv = _inverse(gram)
    d = len(forms[0])
    out = []
    for j in range(n):
        coeffs = [inv[i][j] for i in range(n)]
        out.append(normalize(tuple(sum(coeffs[i] * f[i][k] for i in range(n)) for k in range(d))))
    return out


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]
