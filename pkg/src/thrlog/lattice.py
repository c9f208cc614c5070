"""Exact integer lattice helpers.

Vectors are tuples of Python ints; matrices are lists of row lists.
Everything here works over Z with arbitrary precision, so intermediate
growth never overflows.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]
Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def apply(m: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    """Matrix times column vector."""
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def neg(u: Sequence[int]) -> Vector:
    return tuple(-x for x in u)


def scale(c: int, u: Sequence[int]) -> Vector:
    return tuple(c * x for x in u)


def zero(d: int) -> Vector:
    return (0,) * d


def hnf(rows: Iterable[Sequence[int]], ncols: int) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form with transform.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``. The nonzero
    rows of ``H`` come first, are in echelon form with positive pivots, and
    entries above each pivot are reduced into ``[0, pivot)``.
    """
    a = [list(r) for r in rows]
    m = len(a)
    u = identity(m)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        # gcd-combine column c into row r
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            if a[r][c] == 0:
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
                continue
            x, y = a[r][c], a[i][c]
            g, p, q = _xgcd(x, y)
            xs, ys = x // g, y // g
            ar, ai = a[r], a[i]
            a[r] = [p * s + q * t for s, t in zip(ar, ai)]
            a[i] = [-ys * s + xs * t for s, t in zip(ar, ai)]
            ur, ui = u[r], u[i]
            u[r] = [p * s + q * t for s, t in zip(ur, ui)]
            u[i] = [-ys * s + xs * t for s, t in zip(ur, ui)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [s - f * t for s, t in zip(a[i], a[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return a, u


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lattice_basis(vectors: Iterable[Sequence[int]], d: int) -> Matrix:
    """HNF basis (rows) of the subgroup of Z^d spanned by ``vectors``."""
    h, _ = hnf(vectors, d)
    return [row for row in h if any(row)]


def rank(vectors: Iterable[Sequence[int]], d: int) -> int:
    return len(lattice_basis(vectors, d))


def solve_in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Vector | None:
    """Integer coefficients ``c`` with ``c @ basis == v``, or None.

    ``basis`` must be in row echelon form (as returned by ``lattice_basis``).
    """
    rest = list(v)
    coeffs = []
    for row in basis:
        c = next(j for j, x in enumerate(row) if x)
        q, r = divmod(rest[c], row[c])
        if r:
            return None
        coeffs.append(q)
        if q:
            rest = [s - q * t for s, t in zip(rest, row)]
    if any(rest):
        return None
    return tuple(coeffs)


def in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    return solve_in_lattice(basis, v) is not None


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Integer basis of ``{c : c @ rows == 0}``."""
    h, u = hnf(rows, ncols)
    return [u[i] for i, row in enumerate(h) if not any(row)]


def right_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Integer basis of ``{x : rows @ x == 0}``; always saturated in Z^ncols."""
    if not rows:
        return identity(ncols)
    return left_kernel(transpose(rows), len(rows))


def annihilator(vectors: Sequence[Sequence[int]], d: int) -> Matrix:
    """Rows ``y`` spanning ``{y in Z^d : y . v == 0 for all v}``."""
    vs = [list(v) for v in vectors if any(v)]
    if not vs:
        return identity(d)
    return right_kernel(vs, d)


def saturation(vectors: Sequence[Sequence[int]], d: int) -> Matrix:
    """Basis of ``QL cap Z^d`` for the lattice ``L`` spanned by ``vectors``."""
    return lattice_basis(annihilator(annihilator(vectors, d), d), d)


def is_saturated_in(sub: Sequence[Sequence[int]], ambient: Sequence[Sequence[int]], d: int) -> bool:
    """Whether the span of ``sub`` equals ``Q(sub) cap span(ambient)``.

    Both arguments are spanning sets of lattices in Z^d with ``sub`` inside
    ``ambient``.
    """
    sub_b = lattice_basis(sub, d)
    amb_b = lattice_basis(ambient, d)
    ann = annihilator(sub_b, d)
    # ambient vectors killed by ann are exactly Q(sub) cap ambient
    if ann and amb_b:
        coords = left_kernel(matmul(amb_b, transpose(ann)), len(ann))
    else:
        coords = identity(len(amb_b))
    for c in coords:
        v = [sum(ci * row[j] for ci, row in zip(c, amb_b)) for j in range(d)]
        if not in_lattice(sub_b, v):
            return False
    return True


def box(d: int, radius: int) -> Iterable[Vector]:
    return product(range(-radius, radius + 1), repeat=d)


def l1_ball(d: int, radius: int) -> Iterable[Vector]:
    """Integer points of Z^d with l1 norm at most ``radius``, in a fixed order."""
    if d == 0:
        yield ()
        return
    for first in range(-radius, radius + 1):
        for rest in l1_ball(d - 1, radius - abs(first)):
            yield (first,) + rest


def rational_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Solve the square nonsingular system ``x @ a == b`` over Q."""
    n = len(a)
    m = [[Fraction(a[j][i]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] for i in range(n)]


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x) if x else out
    return out
